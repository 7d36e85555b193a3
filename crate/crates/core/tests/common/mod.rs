//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::ops::{Add, Mul};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use splinecol::bspline::{make_knots, Breakpoints, ContinuityCounts, KnotVector};
use splinecol::problems::ProblemId;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Strictly increasing sequence of `len` values with gaps in `[0.5, 1.5)`.
pub fn simple_knots(rng: &mut StdRng, len: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(len);
    let mut x: f64 = rng.random_range(-2.0..2.0);
    for _ in 0..len {
        t.push(x);
        x += rng.random_range(0.5..1.5);
    }
    t
}

/// Random breakpoints on `[a, b]` with `l` pieces, no piece shorter than a
/// quarter of the uniform width.
pub fn random_breaks(rng: &mut StdRng, a: f64, b: f64, l: usize) -> Breakpoints {
    let gaps: Vec<f64> = (0..l).map(|_| rng.random_range(0.25..1.75)).collect();
    let total: f64 = gaps.iter().sum();
    let mut xi = vec![a];
    let mut acc = 0.0;
    for g in &gaps[..l - 1] {
        acc += g;
        xi.push(a + (b - a) * acc / total);
    }
    xi.push(b);
    Breakpoints::new(xi).unwrap()
}

/// Knot vector of order `k` with random breakpoints and random interior
/// continuity in `0..k`, so interior knots repeat up to `k` times.
pub fn random_knot_vector(rng: &mut StdRng, k: usize) -> KnotVector {
    let l = rng.random_range(1..8);
    let (a, b) = (rng.random_range(-1.0..0.0), rng.random_range(1.0..3.0));
    let breaks = random_breaks(rng, a, b, l);
    let nu = (0..l - 1).map(|_| rng.random_range(0..k)).collect();
    make_knots(&breaks, k, &ContinuityCounts::new(nu)).unwrap()
}

/// `(t - x)_+^{m}` with the right-continuous convention at `m = 0`.
fn truncated_power(t: f64, x: f64, m: usize) -> f64 {
    if t > x {
        (t - x).powi(m as i32)
    } else {
        0.0
    }
}

/// `B_{j,k}(x) = (t_{j+k} - t_j) [t_j, ..., t_{j+k}] (. - x)_+^{k-1}` for
/// simple knots, with the divided difference in its explicit sum form.
pub fn bspline_by_divided_difference(t: &[f64], j: usize, k: usize, x: f64) -> f64 {
    let sites = &t[j..=j + k];
    let mut dd = 0.0;
    for (i, &ti) in sites.iter().enumerate() {
        let denom: f64 = sites
            .iter()
            .enumerate()
            .filter(|&(m, _)| m != i)
            .map(|(_, &tm)| ti - tm)
            .product();
        dd += truncated_power(ti, x, k - 1) / denom;
    }
    (sites[k] - sites[0]) * dd
}

/// Dense Gaussian elimination with partial pivoting.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, p);
        b.swap(c, p);
        let pivot_row = a[c].clone();
        for r in c + 1..n {
            let f = a[r][c] / pivot_row[c];
            for (x, y) in a[r][c..].iter_mut().zip(&pivot_row[c..]) {
                *x -= f * y;
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|m| a[r][m] * x[m]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

/// `n` points drawn uniformly from the open interval `(a, b)`.
pub fn interior_points(rng: &mut StdRng, a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let u: f64 = rng.random_range(1e-6..1.0 - 1e-6);
            a + (b - a) * u
        })
        .collect()
}

/// Value with first and second derivative, propagated through arithmetic.
#[derive(Clone, Copy)]
pub struct D2(pub f64, pub f64, pub f64);

impl D2 {
    pub fn var(x: f64) -> Self {
        D2(x, 1.0, 0.0)
    }
    pub fn c(v: f64) -> Self {
        D2(v, 0.0, 0.0)
    }
    pub fn exp(self) -> Self {
        let e = self.0.exp();
        D2(e, e * self.1, e * (self.2 + self.1 * self.1))
    }
    pub fn recip(self) -> Self {
        let v = self.0;
        D2(
            1.0 / v,
            -self.1 / (v * v),
            (2.0 * self.1 * self.1 - v * self.2) / (v * v * v),
        )
    }
}

impl Add for D2 {
    type Output = D2;
    fn add(self, o: D2) -> D2 {
        D2(self.0 + o.0, self.1 + o.1, self.2 + o.2)
    }
}

impl Mul for D2 {
    type Output = D2;
    fn mul(self, o: D2) -> D2 {
        D2(
            self.0 * o.0,
            self.1 * o.0 + self.0 * o.1,
            self.2 * o.0 + 2.0 * self.1 * o.1 + self.0 * o.2,
        )
    }
}

/// Closed form in the solved variable, written out independently.
pub fn solved_oracle(id: ProblemId, s: f64) -> D2 {
    let x = D2::var(s);
    let c = D2::c;
    let poly = |cs: &[f64]| cs.iter().rev().fold(c(0.0), |acc, &a| acc * x + c(a));
    let decay = |rate: f64| (c(-rate) * x).exp();
    match id {
        ProblemId::Hydrogen { n: 1, l: 0 } => c(2.0) * x * decay(1.0),
        ProblemId::Hydrogen { n: 2, l: 0 } => c(1.0 / (2.0 * 2f64.sqrt())) * x * poly(&[2.0, -1.0]) * decay(0.5),
        ProblemId::Hydrogen { n: 3, l: 0 } => {
            c(2.0 / (81.0 * 3f64.sqrt())) * x * poly(&[27.0, -18.0, 2.0]) * decay(1.0 / 3.0)
        }
        ProblemId::Hydrogen { n: 2, l: 1 } => c(2.0 / 6f64.sqrt()) * x * decay(1.0),
        ProblemId::Hydrogen { n: 3, l: 1 } => c(4.0 / (3.0 * 6f64.sqrt())) * poly(&[2.0, -1.0]) * decay(1.0),
        ProblemId::Hydrogen { n: 3, l: 2 } => c(4.0 / (3.0 * 30f64.sqrt())) * x * decay(1.0),
        ProblemId::CubicNls { epsilon } => {
            let u = c(1.0 / epsilon) * x;
            // 2 e^-u / (1 + e^-2u), safe for large u >= 0
            c(2.0) * (c(-1.0) * u).exp() * (c(1.0) + (c(-2.0) * u).exp()).recip()
        }
        _ => unreachable!(),
    }
}
