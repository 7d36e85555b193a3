//! Collocation point templates on `[-1, 1]` and their placement in each
//! subinterval of a mesh.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bspline::Breakpoints;
use crate::error::{Error, Result};

/// Largest number of Gaussian points per subinterval that is supported.
pub const MAX_POINTS: usize = 24;

/// Which interior collocation points are used in every subinterval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternKind {
    /// Zeros of the Legendre polynomial of degree `r`.
    Gaussian,
    /// `r` equally spaced points that exclude the subinterval ends.
    Equispaced,
    /// Gaussian points on a mesh whose breakpoints are moved by
    /// equidistribution; the template itself is the Gaussian one.
    Redistributed,
}

impl PatternKind {
    pub const ALL: [PatternKind; 3] = [
        PatternKind::Gaussian,
        PatternKind::Equispaced,
        PatternKind::Redistributed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PatternKind::Gaussian => "gaussian",
            PatternKind::Equispaced => "equispaced",
            PatternKind::Redistributed => "redistributed",
        }
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PatternKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gaussian" | "gauss" => Ok(PatternKind::Gaussian),
            "equispaced" | "equal" | "uniform" => Ok(PatternKind::Equispaced),
            "redistributed" | "newnot" => Ok(PatternKind::Redistributed),
            other => Err(Error::InvalidConfig(format!("unknown point pattern '{other}'"))),
        }
    }
}

/// A pattern kind together with the number `r` of points per subinterval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointPattern {
    pub kind: PatternKind,
    pub per_interval: usize,
}

impl PointPattern {
    pub fn new(kind: PatternKind, per_interval: usize) -> Result<Self> {
        if per_interval == 0 {
            return Err(Error::UnsupportedPointCount(0));
        }
        Ok(Self { kind, per_interval })
    }

    /// Template points in `(-1, 1)`, ascending.
    pub fn template(&self) -> Result<Vec<f64>> {
        match self.kind {
            PatternKind::Gaussian | PatternKind::Redistributed => legendre_roots(self.per_interval),
            PatternKind::Equispaced => Ok(equispaced_template(self.per_interval)),
        }
    }
}

/// Value and derivative of the Legendre polynomial `P_r` at `x`, from the
/// three-term recurrence `m P_m = (2m-1) x P_{m-1} - (m-1) P_{m-2}`.
pub fn legendre(r: usize, x: f64) -> (f64, f64) {
    if r == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for m in 2..=r {
        let m = m as f64;
        let p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
    }
    // derivative from (1 - x^2) P_r' = r (P_{r-1} - x P_r)
    let dp = r as f64 * (p0 - x * p1) / (1.0 - x * x);
    (p1, dp)
}

/// The `r` zeros of `P_r`, ascending and exactly antisymmetric.
///
/// Each nonnegative root is found by Newton's method from a Chebyshev-type
/// starting value; should an iterate leave the bracket between neighbouring
/// Chebyshev nodes the root is refined by bisection instead.
pub fn legendre_roots(r: usize) -> Result<Vec<f64>> {
    if r == 0 || r > MAX_POINTS {
        return Err(Error::UnsupportedPointCount(r));
    }
    let half = r / 2;
    let mut positive = Vec::with_capacity(half);
    for i in 1..=half {
        // the i-th largest root has angle in [(i - 1/2) pi, i pi] / (r + 1/2)
        let angle = |s: f64| (std::f64::consts::PI * s / (r as f64 + 0.5)).cos();
        let guess = angle(i as f64 - 0.25);
        let (lo, hi) = (angle(i as f64), angle(i as f64 - 0.5));
        positive.push(newton_root(r, guess, lo, hi));
    }
    let mut roots: Vec<f64> = positive.iter().map(|&x| -x).collect();
    if r % 2 == 1 {
        roots.push(0.0);
    }
    roots.extend(positive.iter().rev());
    Ok(roots)
}

fn newton_root(r: usize, guess: f64, lo: f64, hi: f64) -> f64 {
    let mut x = guess;
    for _ in 0..100 {
        let (p, dp) = legendre(r, x);
        let step = p / dp;
        let next = x - step;
        if !(next > lo && next < hi) || !next.is_finite() {
            return bisect_root(r, lo, hi);
        }
        x = next;
        if step.abs() <= 4.0 * f64::EPSILON * x.abs().max(1e-300) {
            break;
        }
    }
    // one more step once converged to settle the last bit
    let (p, dp) = legendre(r, x);
    x - p / dp
}

fn bisect_root(r: usize, mut lo: f64, mut hi: f64) -> f64 {
    let mut plo = legendre(r, lo).0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let pm = legendre(r, mid).0;
        if (pm < 0.0) == (plo < 0.0) {
            lo = mid;
            plo = pm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `rho_j = (2j - r - 1) / (r + 1)` for `j = 1..=r`.
pub fn equispaced_template(r: usize) -> Vec<f64> {
    let d = (r + 1) as f64;
    (1..=r).map(|j| (2.0 * j as f64 - r as f64 - 1.0) / d).collect()
}

/// Maps `template` affinely into every subinterval of `breaks`, giving
/// `l * r` interior sites in ascending order.
pub fn map_to_subintervals(template: &[f64], breaks: &Breakpoints) -> Result<Vec<f64>> {
    let mut prev = -1.0;
    for &rho in template {
        if !(rho > prev && rho < 1.0) {
            return Err(Error::InvalidTemplate(rho));
        }
        prev = rho;
    }
    let xi = breaks.as_slice();
    let mut sites = Vec::with_capacity(breaks.pieces() * template.len());
    for w in xi.windows(2) {
        for &rho in template {
            sites.push(0.5 * (1.0 - rho) * w[0] + 0.5 * (1.0 + rho) * w[1]);
        }
    }
    Ok(sites)
}
