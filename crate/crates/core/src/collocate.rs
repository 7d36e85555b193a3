//! Collocation for second-order two-point boundary value problems.
//!
//! A problem is written in the coefficient form
//!
//! ```text
//! v1(x) z + v2(x) z' + v3(x) z'' = v4(x)    on (a, b)
//! alpha_a z(a) + beta_a z'(a) = gamma_a
//! alpha_b z(b) + beta_b z'(b) = gamma_b
//! ```
//!
//! and approximated by a spline of order `k = r + 2` with `l` pieces that is
//! `C^1` at every interior breakpoint. The `n = k l - 2(l - 1)` coefficients
//! are fixed by the two side conditions plus the equation at `r` points in
//! each subinterval. Quasilinear problems supply their coefficients as a
//! function of the current approximant and are solved by repeated
//! linearization (Newton's method).

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::banded::{BandedMatrix, RowSegment, WritePolicy};
use crate::bspline::{make_knots, BForm, Breakpoints, ContinuityCounts, KnotVector, PPForm};
use crate::error::{Error, Result};
use crate::points::{map_to_subintervals, PatternKind, PointPattern};

/// Default stopping tolerance on the change of the iterate at the sites.
pub const DEFAULT_NEWTON_TOL: f64 = 1e-6;
pub const DEFAULT_NEWTON_MAX_ITER: usize = 50;
pub const DEFAULT_NEWNOT_PASSES: usize = 2;

/// Density floor relative to the mean density used when redistributing.
const DENSITY_FLOOR: f64 = 1e-3;
/// Jumps below this multiple of the piece scale count as no information.
const JUMP_NOISE: f64 = 1e-10;

/// The four coefficient values at one site.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Coefficients {
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
    pub v4: f64,
}

impl Coefficients {
    pub fn new(v1: f64, v2: f64, v3: f64, v4: f64) -> Self {
        Self { v1, v2, v3, v4 }
    }

    /// `v1 z + v2 z' + v3 z'' - v4`.
    pub fn residual(&self, jet: Jet) -> f64 {
        self.v1 * jet.value + self.v2 * jet.slope + self.v3 * jet.curvature - self.v4
    }
}

/// Value, first and second derivative of a function at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub value: f64,
    pub slope: f64,
    pub curvature: f64,
}

impl Jet {
    pub fn new(value: f64, slope: f64, curvature: f64) -> Self {
        Self {
            value,
            slope,
            curvature,
        }
    }

    pub fn of(f: &BForm, x: f64) -> Result<Self> {
        let d = f.eval_all(x, 2.min(f.order() - 1))?;
        Ok(Self {
            value: d[0],
            slope: d.get(1).copied().unwrap_or(0.0),
            curvature: d.get(2).copied().unwrap_or(0.0),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    Left,
    Right,
}

/// `alpha z + beta z' = gamma` at one end of the box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideCondition {
    pub at: Endpoint,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl SideCondition {
    pub fn new(at: Endpoint, alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if alpha == 0.0 && beta == 0.0 {
            return Err(Error::InvalidSideCondition("alpha and beta cannot both vanish".into()));
        }
        Ok(Self { at, alpha, beta, gamma })
    }

    pub fn value(at: Endpoint, gamma: f64) -> Self {
        Self {
            at,
            alpha: 1.0,
            beta: 0.0,
            gamma,
        }
    }

    pub fn slope(at: Endpoint, gamma: f64) -> Self {
        Self {
            at,
            alpha: 0.0,
            beta: 1.0,
            gamma,
        }
    }
}

pub type CoefficientFn = Arc<dyn Fn(f64) -> Result<Coefficients> + Send + Sync>;
pub type RelinearizeFn = Arc<dyn Fn(f64, Jet) -> Result<Coefficients> + Send + Sync>;
pub type ExactFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// How the coefficients at an interior site are obtained.
#[derive(Clone)]
pub enum Equation {
    /// Fixed coefficients.
    Linear(CoefficientFn),
    /// Coefficients of the equation linearized about the current approximant.
    Quasilinear(RelinearizeFn),
}

impl fmt::Debug for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Equation::Linear(_) => f.write_str("Linear(..)"),
            Equation::Quasilinear(_) => f.write_str("Quasilinear(..)"),
        }
    }
}

/// A second-order two-point boundary value problem on `[a, b]`.
#[derive(Clone)]
pub struct BvpProblem {
    a: f64,
    b: f64,
    equation: Equation,
    left: SideCondition,
    right: SideCondition,
    exact: Option<ExactFn>,
}

impl fmt::Debug for BvpProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BvpProblem")
            .field("a", &self.a)
            .field("b", &self.b)
            .field("equation", &self.equation)
            .field("left", &self.left)
            .field("right", &self.right)
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

impl BvpProblem {
    pub fn new(a: f64, b: f64, equation: Equation, left: SideCondition, right: SideCondition) -> Result<Self> {
        if !(a < b) {
            return Err(Error::InvalidConfig(format!("empty box [{a}, {b}]")));
        }
        if left.at != Endpoint::Left || right.at != Endpoint::Right {
            return Err(Error::InvalidSideCondition(
                "need one condition at each end, left first".into(),
            ));
        }
        Ok(Self {
            a,
            b,
            equation,
            left,
            right,
            exact: None,
        })
    }

    pub fn linear<F>(a: f64, b: f64, coeff: F, left: SideCondition, right: SideCondition) -> Result<Self>
    where
        F: Fn(f64) -> Result<Coefficients> + Send + Sync + 'static,
    {
        Self::new(a, b, Equation::Linear(Arc::new(coeff)), left, right)
    }

    pub fn quasilinear<F>(a: f64, b: f64, relinearize: F, left: SideCondition, right: SideCondition) -> Result<Self>
    where
        F: Fn(f64, Jet) -> Result<Coefficients> + Send + Sync + 'static,
    {
        Self::new(a, b, Equation::Quasilinear(Arc::new(relinearize)), left, right)
    }

    /// Attaches the closed-form solution used to measure errors.
    pub fn with_exact<F>(mut self, exact: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.exact = Some(Arc::new(exact));
        self
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn equation(&self) -> &Equation {
        &self.equation
    }

    pub fn is_linear(&self) -> bool {
        matches!(self.equation, Equation::Linear(_))
    }

    pub fn side_conditions(&self) -> (SideCondition, SideCondition) {
        (self.left, self.right)
    }

    pub fn exact(&self) -> Option<&ExactFn> {
        self.exact.as_ref()
    }

    /// Coefficients at the interior site `x`. Quasilinear problems need the
    /// jet of the approximant they are linearized about.
    pub fn coefficients(&self, x: f64, about: Option<Jet>) -> Result<Coefficients> {
        match (&self.equation, about) {
            (Equation::Linear(f), _) => f(x),
            (Equation::Quasilinear(f), Some(jet)) => f(x, jet),
            (Equation::Quasilinear(_), None) => Err(Error::InvalidConfig(
                "a quasilinear problem needs a current approximant".into(),
            )),
        }
    }
}

/// Starting approximant for Newton's method.
#[derive(Debug, Clone, Default)]
pub enum InitialGuess {
    /// The zero function. The first iterate then solves the equation
    /// linearized about zero, which satisfies both side conditions.
    #[default]
    Zero,
    /// The straight line satisfying both side conditions, or zero when no
    /// line does.
    Line,
    /// A previously computed spline, possibly on another mesh.
    Spline(BForm),
}

/// Mesh, point pattern and iteration controls for one solve.
#[derive(Debug, Clone)]
pub struct CollocationConfig {
    /// Number of subintervals `l`.
    pub intervals: usize,
    /// Collocation points per subinterval `r`; the spline order is `r + 2`.
    pub points_per_interval: usize,
    pub pattern: PatternKind,
    pub newnot_passes: usize,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    pub initial: InitialGuess,
}

impl CollocationConfig {
    pub fn new(intervals: usize, points_per_interval: usize, pattern: PatternKind) -> Self {
        Self {
            intervals,
            points_per_interval,
            pattern,
            newnot_passes: DEFAULT_NEWNOT_PASSES,
            newton_tol: DEFAULT_NEWTON_TOL,
            newton_max_iter: DEFAULT_NEWTON_MAX_ITER,
            initial: InitialGuess::Zero,
        }
    }

    /// Spline order `k = r + 2`.
    pub fn order(&self) -> usize {
        self.points_per_interval + 2
    }

    /// Basis dimension `n = k l - 2(l - 1)`, equal to the number of sites.
    pub fn dimension(&self) -> usize {
        self.order() * self.intervals - 2 * (self.intervals - 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.intervals == 0 {
            return Err(Error::InvalidConfig("need at least one subinterval".into()));
        }
        if self.points_per_interval == 0 {
            return Err(Error::UnsupportedPointCount(0));
        }
        if !(self.newton_tol > 0.0) {
            return Err(Error::InvalidConfig("Newton tolerance must be positive".into()));
        }
        if self.newton_max_iter == 0 {
            return Err(Error::InvalidConfig("Newton iteration cap must be positive".into()));
        }
        Ok(())
    }
}

/// Result of a collocation solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub bform: BForm,
    pub ppform: PPForm,
    /// Mesh of the final solve, after any redistribution.
    pub breaks_used: Breakpoints,
    /// All `n` sites, the two box ends included.
    pub sites: Vec<f64>,
    /// Linear solves performed; one for a linear problem.
    pub iterations: usize,
    pub converged: bool,
    /// Largest change at the sites in the last Newton step.
    pub last_change: f64,
}

impl Solution {
    pub fn eval(&self, x: f64, deriv: usize) -> Result<f64> {
        self.bform.eval(x, deriv)
    }

    /// Equation residual at every interior site. Quasilinear problems are
    /// linearized about the solution itself, which yields the residual of the
    /// underlying nonlinear equation.
    pub fn residuals(&self, problem: &BvpProblem) -> Result<Vec<f64>> {
        let n = self.sites.len();
        self.sites[1..n - 1]
            .iter()
            .map(|&x| {
                let jet = Jet::of(&self.bform, x)?;
                Ok(problem.coefficients(x, Some(jet))?.residual(jet))
            })
            .collect()
    }
}

/// `l + 1` uniform breakpoints on `[a, b]`.
pub fn build_breaks(a: f64, b: f64, l: usize) -> Result<Breakpoints> {
    if !(a < b) {
        return Err(Error::InvalidConfig(format!("empty box [{a}, {b}]")));
    }
    Breakpoints::uniform(a, b, l)
}

/// Knot vector of order `k` on `breaks` with `C^1` continuity inside.
pub fn collocation_knots(breaks: &Breakpoints, k: usize) -> Result<KnotVector> {
    if k < 3 {
        return Err(Error::InvalidConfig(format!(
            "second-order collocation needs order at least 3, got {k}"
        )));
    }
    make_knots(breaks, k, &ContinuityCounts::uniform(2, breaks.pieces()))
}

/// Box ends plus `template` mapped into every subinterval.
pub fn collocation_sites(breaks: &Breakpoints, template: &[f64]) -> Result<Vec<f64>> {
    let interior = map_to_subintervals(template, breaks)?;
    let mut sites = Vec::with_capacity(interior.len() + 2);
    sites.push(breaks.left());
    sites.extend(interior);
    sites.push(breaks.right());
    Ok(sites)
}

/// Collocation matrix and right-hand side. Row `0` and row `n - 1` hold the
/// side conditions; row `i` in between holds
/// `v1 B_j + v2 DB_j + v3 D^2 B_j` at `sites[i]` for the `k` B-splines
/// supported there. `about` is required for quasilinear problems.
pub fn assemble_system(
    problem: &BvpProblem,
    knots: &KnotVector,
    sites: &[f64],
    about: Option<&BForm>,
) -> Result<(BandedMatrix, Vec<f64>)> {
    let n = knots.dim();
    if sites.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: sites.len(),
        });
    }
    let k = knots.order();
    let mut rows = Vec::with_capacity(n);
    let mut rhs = Vec::with_capacity(n);
    let (left, right) = problem.side_conditions();
    for (i, &x) in sites.iter().enumerate() {
        let basis = knots.eval_basis(x, 2.min(k - 1))?;
        let d = &basis.values;
        let (values, value_rhs) = if i == 0 || i == n - 1 {
            let side = if i == 0 { left } else { right };
            let row = (0..k).map(|j| side.alpha * d[0][j] + side.beta * d[1][j]).collect();
            (row, side.gamma)
        } else {
            let jet = about.map(|z| Jet::of(z, x)).transpose()?;
            let c = problem.coefficients(x, jet)?;
            let row = (0..k)
                .map(|j| c.v1 * d[0][j] + c.v2 * d[1][j] + c.v3 * d[2][j])
                .collect();
            (row, c.v4)
        };
        rows.push(RowSegment::new(i, basis.first, values));
        rhs.push(value_rhs);
    }
    let lower = rows
        .iter()
        .map(|s| s.row.saturating_sub(s.first_col))
        .max()
        .unwrap_or(0);
    let upper = rows
        .iter()
        .map(|s| (s.first_col + k - 1).saturating_sub(s.row))
        .max()
        .unwrap_or(0);
    let matrix = BandedMatrix::assemble(n, lower, upper, &rows, WritePolicy::Strict)?;
    Ok((matrix, rhs))
}

/// Solves a linear problem on a uniform mesh with the configured pattern.
/// A `Redistributed` pattern is delegated to [`solve_with_redistribution`].
pub fn solve_linear(problem: &BvpProblem, cfg: &CollocationConfig) -> Result<Solution> {
    if !problem.is_linear() {
        return Err(Error::InvalidConfig("problem is quasilinear; use solve_newton".into()));
    }
    solve(problem, cfg)
}

/// Solves a quasilinear problem by Newton iteration on a uniform mesh.
/// Reaching the iteration cap is not an error: the last iterate is returned
/// with `converged == false`.
pub fn solve_newton(problem: &BvpProblem, cfg: &CollocationConfig) -> Result<Solution> {
    if problem.is_linear() {
        return Err(Error::InvalidConfig("problem is linear; use solve_linear".into()));
    }
    solve(problem, cfg)
}

/// Dispatches on the problem kind and point pattern.
pub fn solve(problem: &BvpProblem, cfg: &CollocationConfig) -> Result<Solution> {
    cfg.validate()?;
    if cfg.pattern == PatternKind::Redistributed {
        return solve_with_redistribution(problem, cfg);
    }
    let (a, b) = problem.interval();
    let breaks = build_breaks(a, b, cfg.intervals)?;
    let pattern = PointPattern::new(cfg.pattern, cfg.points_per_interval)?;
    solve_on_mesh(problem, cfg, &breaks, &pattern.template()?, &cfg.initial)
}

/// Solves on the given mesh with an explicit template.
pub fn solve_on_mesh(
    problem: &BvpProblem,
    cfg: &CollocationConfig,
    breaks: &Breakpoints,
    template: &[f64],
    initial: &InitialGuess,
) -> Result<Solution> {
    let (a, b) = problem.interval();
    if breaks.left() != a || breaks.right() != b {
        return Err(Error::InvalidConfig(format!(
            "mesh [{}, {}] does not span the box [{a}, {b}]",
            breaks.left(),
            breaks.right()
        )));
    }
    let k = template.len() + 2;
    let knots = collocation_knots(breaks, k)?;
    let sites = collocation_sites(breaks, template)?;

    if problem.is_linear() {
        let (matrix, rhs) = assemble_system(problem, &knots, &sites, None)?;
        let coeffs = matrix.factor_solve(&rhs)?;
        return finish(BForm::new(knots, coeffs)?, breaks, sites, 1, true, 0.0);
    }

    let mut current = match initial {
        InitialGuess::Line => line_guess(problem, &knots)?,
        InitialGuess::Zero => BForm::new(knots.clone(), vec![0.0; knots.dim()])?,
        InitialGuess::Spline(f) => f.clone(),
    };
    let values_at = |z: &BForm| -> Result<Vec<f64>> { sites.iter().map(|&x| z.eval(x, 0)).collect() };
    let mut current_values = values_at(&current)?;
    let mut change = f64::INFINITY;
    for iteration in 1..=cfg.newton_max_iter {
        let (matrix, rhs) = assemble_system(problem, &knots, &sites, Some(&current))?;
        let coeffs = matrix.factor_solve(&rhs)?;
        let next = BForm::new(knots.clone(), coeffs)?;
        let next_values = values_at(&next)?;
        change = next_values
            .iter()
            .zip(&current_values)
            .map(|(u, v)| (u - v).abs())
            .fold(0.0, f64::max);
        if change < cfg.newton_tol {
            return finish(next, breaks, sites, iteration, true, change);
        }
        if !change.is_finite() {
            break;
        }
        current = next;
        current_values = next_values;
    }
    let iterations = cfg.newton_max_iter;
    finish(current, breaks, sites, iterations, false, change)
}

fn finish(
    bform: BForm,
    breaks: &Breakpoints,
    sites: Vec<f64>,
    iterations: usize,
    converged: bool,
    last_change: f64,
) -> Result<Solution> {
    let ppform = bform.to_ppform();
    Ok(Solution {
        bform,
        ppform,
        breaks_used: breaks.clone(),
        sites,
        iterations,
        converged,
        last_change,
    })
}

/// B-form of the line `c0 + c1 x` satisfying both side conditions, or the
/// zero spline if they do not determine a unique line.
pub fn line_guess(problem: &BvpProblem, knots: &KnotVector) -> Result<BForm> {
    let (a, b) = problem.interval();
    let (l, r) = problem.side_conditions();
    // [l.alpha, l.alpha a + l.beta; r.alpha, r.alpha b + r.beta] (c0, c1) = (gl, gr)
    let (m00, m01) = (l.alpha, l.alpha * a + l.beta);
    let (m10, m11) = (r.alpha, r.alpha * b + r.beta);
    let det = m00 * m11 - m01 * m10;
    let scale = m00.abs().max(m01.abs()).max(m10.abs()).max(m11.abs());
    let (c0, c1) = if det.abs() > 1e-12 * scale * scale {
        (
            (l.gamma * m11 - m01 * r.gamma) / det,
            (m00 * r.gamma - m10 * l.gamma) / det,
        )
    } else {
        (0.0, 0.0)
    };
    let coeffs = knots.greville().into_iter().map(|g| c0 + c1 * g).collect();
    BForm::new(knots.clone(), coeffs)
}

/// New mesh with `l` pieces that equidistributes an estimate of
/// `|D^k z|^(1/k)` for the current approximant `z` of order `k`.
///
/// The estimate on each piece averages the jumps of `D^{k-1} z` at its two
/// ends, each divided by the width of the two pieces it separates; end pieces
/// use their single interior jump twice. The density is floored at a small
/// fraction of its mean so no piece is left empty. If every jump is at
/// rounding level the mesh is returned unchanged (or made uniform when the
/// piece count changes).
pub fn newnot_redistribute(pp: &PPForm, l: usize) -> Result<Breakpoints> {
    let k = pp.order();
    if k < 2 {
        return Err(Error::InvalidConfig("redistribution needs order at least 2".into()));
    }
    if l == 0 {
        return Err(Error::InvalidConfig("need at least one subinterval".into()));
    }
    let breaks = pp.breaks();
    let xi = breaks.as_slice();
    let pieces = breaks.pieces();
    let unchanged = || {
        if l == pieces {
            Ok(breaks.clone())
        } else {
            Breakpoints::uniform(breaks.left(), breaks.right(), l)
        }
    };
    if pieces == 1 {
        return unchanged();
    }

    // piece scale for deciding whether jumps carry information
    let scale = (0..pieces)
        .flat_map(|i| {
            let h = xi[i + 1] - xi[i];
            pp.piece(i)
                .iter()
                .enumerate()
                .map(move |(j, c)| c.abs() * h.powi(j as i32))
        })
        .fold(0.0, f64::max);
    let top = |i: usize| pp.piece(i)[k - 1];
    let mut significant = false;
    // jump[i] for interior breakpoint i = 1..pieces-1
    let mut jump = vec![0.0; pieces + 1];
    for i in 1..pieces {
        let raw = (top(i) - top(i - 1)).abs();
        let h = (xi[i + 1] - xi[i]).max(xi[i] - xi[i - 1]);
        if raw * h.powi(k as i32 - 1) > JUMP_NOISE * scale {
            significant = true;
        }
        jump[i] = raw / (xi[i + 1] - xi[i - 1]);
    }
    if !significant {
        return unchanged();
    }

    let inv_k = 1.0 / k as f64;
    let mut density: Vec<f64> = (0..pieces)
        .map(|m| {
            let sum = match m {
                0 => 2.0 * jump[1],
                m if m == pieces - 1 => 2.0 * jump[pieces - 1],
                m => jump[m] + jump[m + 1],
            };
            sum.powf(inv_k)
        })
        .collect();
    let total: f64 = density.iter().enumerate().map(|(m, d)| d * (xi[m + 1] - xi[m])).sum();
    let mean = total / (breaks.right() - breaks.left());
    for d in density.iter_mut() {
        *d = d.max(DENSITY_FLOOR * mean);
    }
    equidistribute(breaks, &density, l)
}

/// Breakpoints `a = y_0 < ... < y_l = b` splitting the integral of the
/// piecewise constant `density` (one value per piece of `breaks`) into `l`
/// equal parts.
pub fn equidistribute(breaks: &Breakpoints, density: &[f64], l: usize) -> Result<Breakpoints> {
    let xi = breaks.as_slice();
    let pieces = breaks.pieces();
    if density.len() != pieces {
        return Err(Error::DimensionMismatch {
            expected: pieces,
            found: density.len(),
        });
    }
    if l == 0 || density.iter().any(|d| !(*d >= 0.0) || !d.is_finite()) {
        return Err(Error::InvalidConfig("density must be finite and nonnegative".into()));
    }
    let mut cum = Vec::with_capacity(pieces + 1);
    cum.push(0.0);
    for m in 0..pieces {
        cum.push(cum[m] + density[m] * (xi[m + 1] - xi[m]));
    }
    let total = cum[pieces];
    if !(total > 0.0) {
        return Breakpoints::uniform(breaks.left(), breaks.right(), l);
    }
    let step = total / l as f64;
    let mut out = Vec::with_capacity(l + 1);
    out.push(breaks.left());
    let mut j = 0;
    for i in 1..l {
        let target = i as f64 * step;
        while j < pieces - 1 && target > cum[j + 1] {
            j += 1;
        }
        out.push(xi[j] + (target - cum[j]) / density[j]);
    }
    out.push(breaks.right());
    Breakpoints::new(out)
}

// A spline guess on the same interval already tells where the work is.
fn guess_mesh(f: &BForm, a: f64, b: f64, l: usize) -> Result<Breakpoints> {
    let pp = f.to_ppform();
    if (pp.breaks().left(), pp.breaks().right()) == (a, b) {
        newnot_redistribute(&pp, l)
    } else {
        build_breaks(a, b, l)
    }
}

/// Solves with Gaussian points on a uniform mesh, or on a mesh fitted to a
/// spline initial guess, then `cfg.newnot_passes`
/// times moves the breakpoints with [`newnot_redistribute`] and solves again.
/// Quasilinear problems restart Newton from the previous solution.
pub fn solve_with_redistribution(problem: &BvpProblem, cfg: &CollocationConfig) -> Result<Solution> {
    cfg.validate()?;
    if cfg.newnot_passes == 0 {
        return Err(Error::InvalidConfig("redistribution needs at least one pass".into()));
    }
    let (a, b) = problem.interval();
    let template = PointPattern::new(PatternKind::Gaussian, cfg.points_per_interval)?.template()?;
    let first = match &cfg.initial {
        InitialGuess::Spline(f) => guess_mesh(f, a, b, cfg.intervals)?,
        _ => build_breaks(a, b, cfg.intervals)?,
    };
    let mut sol = solve_on_mesh(problem, cfg, &first, &template, &cfg.initial)?;
    let mut iterations = sol.iterations;
    for _ in 0..cfg.newnot_passes {
        let breaks = newnot_redistribute(&sol.ppform, cfg.intervals)?;
        let initial = InitialGuess::Spline(sol.bform.clone());
        sol = solve_on_mesh(problem, cfg, &breaks, &template, &initial)?;
        iterations += sol.iterations;
    }
    sol.iterations = iterations;
    Ok(sol)
}
