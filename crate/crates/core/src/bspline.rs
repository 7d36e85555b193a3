//! B-spline bases, the B-form and ppform spline representations, and the
//! conversion between them.
//!
//! Indices are zero-based throughout. For a knot vector `t` of order `k` the
//! basis has `n = t.len() - k` members and the *basic interval* is
//! `[t[k-1], t[n]]`. Piecewise polynomials are right-continuous at interior
//! breakpoints; anything outside the basic interval is evaluated by extending
//! the nearest end piece.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strictly increasing breakpoint sequence `xi[0] < xi[1] < ... < xi[l]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Breakpoints(Vec<f64>);

impl Breakpoints {
    pub fn new(xi: Vec<f64>) -> Result<Self> {
        if xi.len() < 2 {
            return Err(Error::InvalidBreakpoints(format!(
                "need at least two breakpoints, got {}",
                xi.len()
            )));
        }
        if let Some(bad) = xi.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidBreakpoints(format!("breakpoint {bad} is not finite")));
        }
        if let Some(i) = xi.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::InvalidBreakpoints(format!(
                "not strictly increasing at index {i}: {} >= {}",
                xi[i],
                xi[i + 1]
            )));
        }
        Ok(Self(xi))
    }

    /// `l + 1` equally spaced breakpoints on `[a, b]`. The end values are exact.
    pub fn uniform(a: f64, b: f64, l: usize) -> Result<Self> {
        if l == 0 {
            return Err(Error::InvalidBreakpoints("need at least one subinterval".into()));
        }
        if !(a < b) {
            return Err(Error::InvalidBreakpoints(format!("empty interval [{a}, {b}]")));
        }
        let h = (b - a) / l as f64;
        let mut xi: Vec<f64> = (0..=l).map(|i| a + i as f64 * h).collect();
        xi[l] = b;
        Self::new(xi)
    }

    /// Number of subintervals `l`.
    pub fn pieces(&self) -> usize {
        self.0.len() - 1
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn left(&self) -> f64 {
        self.0[0]
    }

    pub fn right(&self) -> f64 {
        self.0[self.0.len() - 1]
    }

    /// Midpoints of the `l` subintervals.
    pub fn midpoints(&self) -> Vec<f64> {
        self.0.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Index `i` of the piece `[xi[i], xi[i+1])` containing `x`, clamped to
    /// the first and last piece.
    pub fn locate(&self, x: f64) -> usize {
        let l = self.pieces();
        let i = self.0.partition_point(|&v| v <= x);
        i.saturating_sub(1).min(l - 1)
    }
}

impl TryFrom<Vec<f64>> for Breakpoints {
    type Error = Error;

    fn try_from(xi: Vec<f64>) -> Result<Self> {
        Self::new(xi)
    }
}

impl From<Breakpoints> for Vec<f64> {
    fn from(b: Breakpoints) -> Self {
        b.0
    }
}

/// Number of continuity conditions imposed at each interior breakpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuityCounts(Vec<usize>);

impl ContinuityCounts {
    pub fn new(nu: Vec<usize>) -> Self {
        Self(nu)
    }

    /// The same count at each of the `l - 1` interior breakpoints.
    pub fn uniform(value: usize, l: usize) -> Self {
        Self(vec![value; l.saturating_sub(1)])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Dimension `k*l - sum(nu)` of the spline space these counts describe.
    pub fn dimension(&self, k: usize, l: usize) -> Option<usize> {
        let total: usize = self.0.iter().sum();
        (k * l).checked_sub(total).filter(|&n| n > 0)
    }
}

/// Nondecreasing knot sequence together with the spline order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnotVector {
    t: Vec<f64>,
    k: usize,
}

impl KnotVector {
    pub fn new(t: Vec<f64>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidKnots("order must be positive".into()));
        }
        if t.len() < 2 * k {
            return Err(Error::InvalidKnots(format!(
                "order {k} needs at least {} knots, got {}",
                2 * k,
                t.len()
            )));
        }
        if t.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidKnots("knots must be finite".into()));
        }
        if let Some(j) = t.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::InvalidKnots(format!("decreasing at index {j}")));
        }
        if let Some(j) = (0..t.len() - k).find(|&j| t[j] >= t[j + k]) {
            return Err(Error::InvalidKnots(format!(
                "knot {} at index {j} has multiplicity above {k}",
                t[j]
            )));
        }
        Ok(Self { t, k })
    }

    pub fn order(&self) -> usize {
        self.k
    }

    /// Basis dimension `n = t.len() - k`.
    pub fn dim(&self) -> usize {
        self.t.len() - self.k
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.t
    }

    /// End points of the basic interval `[t[k-1], t[n]]`.
    pub fn basic_interval(&self) -> (f64, f64) {
        (self.t[self.k - 1], self.t[self.dim()])
    }

    /// Largest `j` in `k-1..n` with `t[j] <= x < t[j+1]`, so that a knot is
    /// assigned to the interval on its right. Sites left of the basic interval
    /// map to its first nontrivial interval and sites at or beyond its right
    /// end map to the last one.
    pub fn find_interval(&self, x: f64) -> usize {
        let (k, n, t) = (self.k, self.dim(), &self.t);
        if x < t[k - 1] {
            return (k - 1..n).find(|&j| t[j] < t[j + 1]).unwrap_or(k - 1);
        }
        if x >= t[n] {
            return (k - 1..n).rev().find(|&j| t[j] < t[j + 1]).unwrap_or(n - 1);
        }
        t.partition_point(|&v| v <= x) - 1
    }

    /// Greville abscissae: averages of `k - 1` consecutive interior knots.
    /// A linear function has these values as its B-spline coefficients.
    pub fn greville(&self) -> Vec<f64> {
        let k = self.k;
        if k == 1 {
            return (0..self.dim()).map(|i| 0.5 * (self.t[i] + self.t[i + 1])).collect();
        }
        (0..self.dim())
            .map(|i| self.t[i + 1..i + k].iter().sum::<f64>() / (k - 1) as f64)
            .collect()
    }

    /// Values and derivatives of the `k` B-splines that can be nonzero at `x`.
    pub fn eval_basis(&self, x: f64, nderiv: usize) -> Result<BasisValues> {
        if nderiv >= self.k {
            return Err(Error::DerivativeTooHigh {
                deriv: nderiv,
                order: self.k,
            });
        }
        let span = self.find_interval(x);
        Ok(BasisValues {
            span,
            first: span + 1 - self.k,
            values: basis_derivatives(&self.t, self.k, span, x, nderiv),
        })
    }

    /// Value at `x` of the single B-spline `B_j` of order `k` computed with
    /// the two-term recurrence, starting from the right-continuous indicator
    /// functions of order one. Terms with a vanishing knot difference are
    /// dropped.
    pub fn bspline_by_recurrence(&self, j: usize, x: f64) -> f64 {
        recurrence(&self.t, j, self.k, x)
    }
}

fn recurrence(t: &[f64], j: usize, k: usize, x: f64) -> f64 {
    if k == 1 {
        return if t[j] <= x && x < t[j + 1] { 1.0 } else { 0.0 };
    }
    let mut v = 0.0;
    let d1 = t[j + k - 1] - t[j];
    if d1 > 0.0 {
        v += (x - t[j]) / d1 * recurrence(t, j, k - 1, x);
    }
    let d2 = t[j + k] - t[j + 1];
    if d2 > 0.0 {
        v += (t[j + k] - x) / d2 * recurrence(t, j + 1, k - 1, x);
    }
    v
}

/// Output of [`KnotVector::eval_basis`].
#[derive(Debug, Clone, PartialEq)]
pub struct BasisValues {
    /// Knot interval index `j` with `t[j] <= x < t[j+1]`.
    pub span: usize,
    /// Index of the first of the `k` locally supported B-splines, `j + 1 - k`.
    pub first: usize,
    /// `values[d][i]` is the `d`-th derivative of `B_{first + i}` at `x`.
    pub values: Vec<Vec<f64>>,
}

// Triangular table of the nonzero B-splines of increasing order over the span,
// followed by repeated differencing for derivatives. Every denominator is a knot
// difference covering the nontrivial interval [t[span], t[span+1]].
fn basis_derivatives(t: &[f64], k: usize, span: usize, x: f64, nderiv: usize) -> Vec<Vec<f64>> {
    let p = k - 1;
    let mut ndu = vec![vec![0.0; k]; k];
    let mut left = vec![0.0; k];
    let mut right = vec![0.0; k];
    ndu[0][0] = 1.0;
    for j in 1..=p {
        left[j] = x - t[span + 1 - j];
        right[j] = t[span + j] - x;
        let mut saved = 0.0;
        for r in 0..j {
            ndu[j][r] = right[r + 1] + left[j - r];
            let temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }

    let mut ders = vec![vec![0.0; k]; nderiv + 1];
    for j in 0..=p {
        ders[0][j] = ndu[j][p];
    }
    let mut a = [vec![0.0; k], vec![0.0; k]];
    for r in 0..=p {
        let (mut s1, mut s2) = (0usize, 1usize);
        a[0][0] = 1.0;
        for d in 1..=nderiv {
            let mut acc = 0.0;
            let rk = r as isize - d as isize;
            let pk = p - d;
            if rk >= 0 {
                let rk = rk as usize;
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                acc = a[s2][0] * ndu[rk][pk];
            }
            let j1 = if rk >= -1 { 1 } else { (-rk) as usize };
            let j2 = if r as isize - 1 <= pk as isize { d - 1 } else { p - r };
            for j in j1..=j2 {
                let idx = (rk + j as isize) as usize;
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][idx];
                acc += a[s2][j] * ndu[idx][pk];
            }
            if r <= pk {
                a[s2][d] = -a[s1][d - 1] / ndu[pk + 1][r];
                acc += a[s2][d] * ndu[r][pk];
            }
            ders[d][r] = acc;
            std::mem::swap(&mut s1, &mut s2);
        }
    }
    let mut factor = p as f64;
    for (d, row) in ders.iter_mut().enumerate().skip(1) {
        for v in row.iter_mut() {
            *v *= factor;
        }
        factor *= (p - d) as f64;
    }
    ders
}

/// Knot vector for the spline space of order `k` on `breaks` with `nu[i]`
/// continuity conditions at interior breakpoint `i + 1`.
///
/// Each end breakpoint appears `k` times and interior breakpoint `xi[i]`
/// appears `k - nu[i-1]` times, giving `n + k` knots with `n = k*l - sum(nu)`.
pub fn make_knots(breaks: &Breakpoints, k: usize, nu: &ContinuityCounts) -> Result<KnotVector> {
    if k == 0 {
        return Err(Error::InvalidKnots("order must be positive".into()));
    }
    let l = breaks.pieces();
    if nu.as_slice().len() != l - 1 {
        return Err(Error::DimensionMismatch {
            expected: l - 1,
            found: nu.as_slice().len(),
        });
    }
    if let Some((index, &value)) = nu.as_slice().iter().enumerate().find(|(_, &v)| v > k) {
        return Err(Error::ContinuityTooHigh {
            index: index + 1,
            value,
            order: k,
        });
    }
    let xi = breaks.as_slice();
    let mut t = Vec::with_capacity(k * (l + 1));
    t.extend(std::iter::repeat_n(xi[0], k));
    for (i, &v) in nu.as_slice().iter().enumerate() {
        t.extend(std::iter::repeat_n(xi[i + 1], k - v));
    }
    t.extend(std::iter::repeat_n(xi[l], k));
    KnotVector::new(t, k)
}

/// Spline in B-form: coefficients over the B-spline basis of `knots`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BForm {
    knots: KnotVector,
    coeffs: Vec<f64>,
}

impl BForm {
    pub fn new(knots: KnotVector, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != knots.dim() {
            return Err(Error::DimensionMismatch {
                expected: knots.dim(),
                found: coeffs.len(),
            });
        }
        Ok(Self { knots, coeffs })
    }

    pub fn knots(&self) -> &KnotVector {
        &self.knots
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.knots.order()
    }

    /// `deriv`-th derivative at `x`, using only the `k` locally nonzero
    /// basis functions.
    pub fn eval(&self, x: f64, deriv: usize) -> Result<f64> {
        let basis = self.knots.eval_basis(x, deriv)?;
        Ok(basis.values[deriv]
            .iter()
            .zip(&self.coeffs[basis.first..])
            .map(|(b, c)| b * c)
            .sum())
    }

    /// Value and first `nderiv` derivatives at `x` from one basis evaluation.
    pub fn eval_all(&self, x: f64, nderiv: usize) -> Result<Vec<f64>> {
        let basis = self.knots.eval_basis(x, nderiv)?;
        Ok(basis
            .values
            .iter()
            .map(|row| row.iter().zip(&self.coeffs[basis.first..]).map(|(b, c)| b * c).sum())
            .collect())
    }

    /// Distinct knots inside the basic interval.
    pub fn breakpoints(&self) -> Breakpoints {
        let (a, b) = self.knots.basic_interval();
        let mut xi: Vec<f64> = Vec::new();
        for &v in self.knots.as_slice() {
            if v >= a && v <= b && xi.last() != Some(&v) {
                xi.push(v);
            }
        }
        Breakpoints(xi)
    }

    /// Converts to ppform: piece `i` holds `D^j f(xi_i+) / j!` for `j < k`.
    pub fn to_ppform(&self) -> PPForm {
        let breaks = self.breakpoints();
        let k = self.order();
        let mut coeffs = Vec::with_capacity(breaks.pieces() * k);
        for &x in &breaks.as_slice()[..breaks.pieces()] {
            let ders = self.eval_all(x, k - 1).expect("k - 1 derivatives are always available");
            let mut fact = 1.0;
            for (j, d) in ders.into_iter().enumerate() {
                if j > 0 {
                    fact *= j as f64;
                }
                coeffs.push(d / fact);
            }
        }
        PPForm { breaks, k, coeffs }
    }
}

/// Piecewise polynomial in local Taylor form.
///
/// On `[xi_i, xi_{i+1})` the function is `sum_j c[i][j] (x - xi_i)^j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PPForm {
    breaks: Breakpoints,
    k: usize,
    coeffs: Vec<f64>,
}

impl PPForm {
    /// `coeffs` is row-major with one row of `k` Taylor coefficients per piece.
    pub fn new(breaks: Breakpoints, k: usize, coeffs: Vec<f64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidConfig("ppform order must be positive".into()));
        }
        let expected = breaks.pieces() * k;
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: coeffs.len(),
            });
        }
        Ok(Self { breaks, k, coeffs })
    }

    pub fn breaks(&self) -> &Breakpoints {
        &self.breaks
    }

    pub fn order(&self) -> usize {
        self.k
    }

    /// Taylor coefficients of piece `i`.
    pub fn piece(&self, i: usize) -> &[f64] {
        &self.coeffs[i * self.k..(i + 1) * self.k]
    }

    /// `deriv`-th derivative at `x`, evaluated by nested multiplication.
    pub fn eval(&self, x: f64, deriv: usize) -> Result<f64> {
        if deriv >= self.k {
            return Err(Error::DerivativeTooHigh { deriv, order: self.k });
        }
        let i = self.breaks.locate(x);
        let h = x - self.breaks.as_slice()[i];
        let c = self.piece(i);
        let mut acc = 0.0;
        for j in (deriv..self.k).rev() {
            // j! / (j - deriv)!
            let scale: f64 = ((j - deriv + 1)..=j).map(|m| m as f64).product();
            acc = acc * h + c[j] * scale;
        }
        Ok(acc)
    }

    /// Jumps of the highest derivative `D^{k-1}` across the interior
    /// breakpoints, right limit minus left limit.
    pub fn top_derivative_jumps(&self) -> Vec<f64> {
        let k = self.k;
        let fact: f64 = (1..k).map(|m| m as f64).product();
        (1..self.breaks.pieces())
            .map(|i| (self.piece(i)[k - 1] - self.piece(i - 1)[k - 1]) * fact)
            .collect()
    }
}
