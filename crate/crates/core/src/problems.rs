//! Catalog of test problems with closed-form solutions.
//!
//! * Hydrogen radial equations without angular momentum (`l = 0`,
//!   `n = 1, 2, 3`), solved directly for `F(x)` on `[0, box_right]`.
//! * Hydrogen radial equations with angular momentum (`(n, l)` in
//!   `(2, 1), (3, 1), (3, 2)`). The direct form only admits the trivial
//!   collocation solution, so the problem is solved for
//!   `G(y) = F(s y) / y^p` and mapped back with [`untransform`].
//! * The cubic nonlinear equation `eps^2/2 psi'' - psi/2 + psi^3 = 0` on
//!   `[0, 1]`, `psi(0) = 1`, `psi(1) = 0`, whose exact solution on the
//!   half line is `sech(x / eps)`.
//!
//! Problems are named by strings such as `hydrogen:n=2,l=1` or
//! `nls:eps=0.01`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::collocate::{BvpProblem, Coefficients, Endpoint, Jet, SideCondition};
use crate::error::{Error, Result};

/// Which closed form a problem belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    HydrogenL0,
    HydrogenLm,
    CubicNls,
}

/// A catalog entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ProblemId {
    /// Principal quantum number `n` and orbital quantum number `l`.
    Hydrogen {
        n: u32,
        l: u32,
    },
    CubicNls {
        epsilon: f64,
    },
}

impl ProblemId {
    pub fn hydrogen(n: u32, l: u32) -> Result<Self> {
        let id = ProblemId::Hydrogen { n, l };
        id.family()?;
        Ok(id)
    }

    pub fn nls(epsilon: f64) -> Result<Self> {
        let id = ProblemId::CubicNls { epsilon };
        id.family()?;
        Ok(id)
    }

    /// The supported catalog, in listing order.
    pub fn catalog() -> Vec<ProblemId> {
        let mut out: Vec<_> = [(1, 0), (2, 0), (3, 0), (2, 1), (3, 1), (3, 2)]
            .into_iter()
            .map(|(n, l)| ProblemId::Hydrogen { n, l })
            .collect();
        out.extend([0.1, 0.01, 0.005, 0.001].map(|epsilon| ProblemId::CubicNls { epsilon }));
        out
    }

    pub fn family(&self) -> Result<Family> {
        match *self {
            ProblemId::Hydrogen { n: 1..=3, l: 0 } => Ok(Family::HydrogenL0),
            ProblemId::Hydrogen { n: 2, l: 1 } | ProblemId::Hydrogen { n: 3, l: 1 | 2 } => Ok(Family::HydrogenLm),
            ProblemId::Hydrogen { n, l } => Err(Error::UnsupportedProblem(format!(
                "hydrogen state n={n}, l={l} is not in the catalog"
            ))),
            ProblemId::CubicNls { epsilon } if epsilon > 0.0 && epsilon.is_finite() => Ok(Family::CubicNls),
            ProblemId::CubicNls { epsilon } => Err(Error::UnsupportedProblem(format!(
                "perturbation parameter must be positive, got {epsilon}"
            ))),
        }
    }

    /// Change of variable applied before solving.
    pub fn transform(&self) -> Result<TransformInfo> {
        Ok(match (self.family()?, *self) {
            (Family::HydrogenLm, ProblemId::Hydrogen { n: 2, .. }) => TransformInfo::new(2.0, 1),
            (Family::HydrogenLm, _) => TransformInfo::new(3.0, 2),
            _ => TransformInfo::identity(),
        })
    }

    /// Smallest right end, in the solved variable, for which the zero
    /// condition at the right end is a good stand-in for decay at infinity.
    pub fn recommended_box(&self) -> Result<f64> {
        Ok(match (self.family()?, *self) {
            (Family::CubicNls, _) => 1.0,
            (_, ProblemId::Hydrogen { n, .. }) => {
                let x_box = [10.0, 30.0, 50.0][n as usize - 1];
                x_box / self.transform()?.scale
            }
            _ => unreachable!(),
        })
    }

    /// Natural right end used when none is given.
    pub fn default_box(&self) -> Result<f64> {
        self.recommended_box()
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemId::Hydrogen { n, l } => write!(f, "hydrogen:n={n},l={l}"),
            ProblemId::CubicNls { epsilon } => write!(f, "nls:eps={epsilon}"),
        }
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnsupportedProblem(format!("cannot parse problem id '{s}'"));
        let (family, params) = s.trim().split_once(':').ok_or_else(bad)?;
        let mut n = None;
        let mut l = None;
        let mut eps = None;
        for kv in params.split(',') {
            let (key, value) = kv.split_once('=').ok_or_else(bad)?;
            match key.trim() {
                "n" => n = Some(value.trim().parse::<u32>().map_err(|_| bad())?),
                "l" => l = Some(value.trim().parse::<u32>().map_err(|_| bad())?),
                "eps" | "epsilon" => eps = Some(value.trim().parse::<f64>().map_err(|_| bad())?),
                _ => return Err(bad()),
            }
        }
        match (family.trim(), n, l, eps) {
            ("hydrogen", Some(n), l, None) => ProblemId::hydrogen(n, l.unwrap_or(0)),
            ("nls", None, None, Some(e)) => ProblemId::nls(e),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for ProblemId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ProblemId> for String {
    fn from(id: ProblemId) -> Self {
        id.to_string()
    }
}

/// `y = x / scale` and `F(x) = y^power G(y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformInfo {
    pub scale: f64,
    pub power: i32,
}

impl TransformInfo {
    pub fn new(scale: f64, power: i32) -> Self {
        Self { scale, power }
    }

    pub fn identity() -> Self {
        Self::new(1.0, 0)
    }

    pub fn is_identity(&self) -> bool {
        self.scale == 1.0 && self.power == 0
    }

    /// Solved variable for an original abscissa.
    pub fn to_solved(&self, x: f64) -> f64 {
        x / self.scale
    }

    pub fn to_original(&self, y: f64) -> f64 {
        y * self.scale
    }
}

/// `x -> (x/s)^p g(x/s)`.
pub fn untransform<G>(g: G, info: TransformInfo) -> impl Fn(f64) -> f64
where
    G: Fn(f64) -> f64,
{
    move |x| {
        let y = info.to_solved(x);
        y.powi(info.power) * g(y)
    }
}

/// `-1 / (2 n^2)`, the energy after the radial equation is rescaled.
pub fn rescaled_energy(n: u32) -> f64 {
    -0.5 / f64::from(n * n)
}

/// A problem ready to solve, with how its solution maps back to `x`.
#[derive(Debug, Clone)]
pub struct ProblemSetup {
    pub id: ProblemId,
    pub problem: BvpProblem,
    pub transform: TransformInfo,
    /// Set when the box is shorter than recommended.
    pub warning: Option<String>,
}

/// Builds the coefficient-form problem that is actually solved on
/// `[0, box_right]`. For angular-momentum states `box_right` is measured in
/// the transformed variable `y`.
pub fn make_problem(id: ProblemId, box_right: f64) -> Result<ProblemSetup> {
    let family = id.family()?;
    if !(box_right > 0.0 && box_right.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "box right end {box_right} must be positive"
        )));
    }
    let recommended = id.recommended_box()?;
    let warning = (box_right < recommended)
        .then(|| format!("{id}: box right end {box_right} is below the recommended {recommended}"));
    let right = SideCondition::value(Endpoint::Right, 0.0);
    let problem = match (family, id) {
        (Family::HydrogenL0, ProblemId::Hydrogen { n, .. }) => {
            let energy = rescaled_energy(n);
            let slope = left_slope(id)?;
            BvpProblem::linear(
                0.0,
                box_right,
                move |x| {
                    guard(x)?;
                    Ok(Coefficients::new(1.0 / x + energy, 0.0, 0.5, 0.0))
                },
                SideCondition::slope(Endpoint::Left, slope),
                right,
            )?
        }
        (Family::HydrogenLm, ProblemId::Hydrogen { n, l }) => {
            let slope = left_slope(id)?;
            BvpProblem::linear(
                0.0,
                box_right,
                move |y| {
                    guard(y)?;
                    Ok(match (n, l) {
                        (2, 1) => Coefficients::new(0.5 - y / 8.0 - 0.25 / y, 0.25, y / 8.0, 0.0),
                        (3, 1) => Coefficients::new(1.0 / 3.0 - y / 18.0, 2.0 / 9.0, y / 18.0, 0.0),
                        _ => Coefficients::new(1.0 / 3.0 - y / 18.0 - 2.0 / (9.0 * y), 2.0 / 9.0, y / 18.0, 0.0),
                    })
                },
                SideCondition::slope(Endpoint::Left, slope),
                right,
            )?
        }
        (Family::CubicNls, ProblemId::CubicNls { epsilon }) => {
            let half_eps2 = 0.5 * epsilon * epsilon;
            BvpProblem::quasilinear(
                0.0,
                box_right,
                move |_, z: Jet| {
                    let z0 = z.value;
                    Ok(Coefficients::new(
                        3.0 * z0 * z0 - 0.5,
                        0.0,
                        half_eps2,
                        2.0 * z0 * z0 * z0,
                    ))
                },
                SideCondition::value(Endpoint::Left, 1.0),
                right,
            )?
        }
        _ => unreachable!("family matches id"),
    };
    let transform = id.transform()?;
    let problem = problem.with_exact(move |y| exact_in_solved_variable(id, y).expect("catalog ids have closed forms"));
    Ok(ProblemSetup {
        id,
        problem,
        transform,
        warning,
    })
}

fn guard(x: f64) -> Result<()> {
    if x == 0.0 {
        Err(Error::SingularCoefficient(x))
    } else {
        Ok(())
    }
}

/// Prescribed `z'(0)` of the solved variable.
pub fn left_slope(id: ProblemId) -> Result<f64> {
    let s3 = 3f64.sqrt();
    let s6 = 6f64.sqrt();
    Ok(match (id.family()?, id) {
        (Family::HydrogenL0, ProblemId::Hydrogen { n: 1, .. }) => 2.0,
        (Family::HydrogenL0, ProblemId::Hydrogen { n: 2, .. }) => 1.0 / 2f64.sqrt(),
        (Family::HydrogenL0, _) => 2.0 / (3.0 * s3),
        (Family::HydrogenLm, ProblemId::Hydrogen { n: 2, .. }) => 2.0 / s6,
        (Family::HydrogenLm, ProblemId::Hydrogen { l: 1, .. }) => -4.0 / s6,
        (Family::HydrogenLm, _) => 4.0 / (3.0 * 30f64.sqrt()),
        (Family::CubicNls, _) => {
            return Err(Error::UnsupportedProblem(
                "the nonlinear problem has a value condition at the left end".into(),
            ))
        }
    })
}

/// `P(x) exp(-x / c)` with `P` given by ascending coefficients.
struct PolyExp {
    poly: &'static [f64],
    norm: f64,
    decay: f64,
}

impl PolyExp {
    fn jet(&self, x: f64) -> Jet {
        let (mut p, mut dp, mut ddp) = (0.0, 0.0, 0.0);
        for &c in self.poly.iter().rev() {
            ddp = ddp * x + 2.0 * dp;
            dp = dp * x + p;
            p = p * x + c;
        }
        let e = self.norm * (-x / self.decay).exp();
        let c = 1.0 / self.decay;
        Jet::new(p * e, (dp - c * p) * e, (ddp - 2.0 * c * dp + c * c * p) * e)
    }
}

fn hydrogen_form(n: u32, l: u32) -> PolyExp {
    let s3 = 3f64.sqrt();
    let s6 = 6f64.sqrt();
    match (n, l) {
        (1, 0) => PolyExp {
            poly: &[0.0, 2.0],
            norm: 1.0,
            decay: 1.0,
        },
        (2, 0) => PolyExp {
            poly: &[0.0, 2.0, -1.0],
            norm: 1.0 / (2.0 * 2f64.sqrt()),
            decay: 2.0,
        },
        (3, 0) => PolyExp {
            poly: &[0.0, 27.0, -18.0, 2.0],
            norm: 2.0 / (81.0 * s3),
            decay: 3.0,
        },
        (2, 1) => PolyExp {
            poly: &[0.0, 0.0, 1.0],
            norm: 1.0 / (2.0 * s6),
            decay: 2.0,
        },
        (3, 1) => PolyExp {
            poly: &[0.0, 0.0, 6.0, -1.0],
            norm: 4.0 / (81.0 * s6),
            decay: 3.0,
        },
        _ => PolyExp {
            poly: &[0.0, 0.0, 0.0, 1.0],
            norm: 4.0 / (81.0 * 30f64.sqrt()),
            decay: 3.0,
        },
    }
}

fn transformed_form(n: u32, l: u32) -> PolyExp {
    match (n, l) {
        (2, 1) => PolyExp {
            poly: &[0.0, 1.0],
            norm: 2.0 / 6f64.sqrt(),
            decay: 1.0,
        },
        (3, 1) => PolyExp {
            poly: &[2.0, -1.0],
            norm: 4.0 / (3.0 * 6f64.sqrt()),
            decay: 1.0,
        },
        _ => PolyExp {
            poly: &[0.0, 1.0],
            norm: 4.0 / (3.0 * 30f64.sqrt()),
            decay: 1.0,
        },
    }
}

fn sech_jet(epsilon: f64, x: f64) -> Jet {
    let s = 1.0 / (x / epsilon).cosh();
    let t = (x / epsilon).tanh();
    Jet::new(s, -s * t / epsilon, s * (1.0 - 2.0 * s * s) / (epsilon * epsilon))
}

/// Closed-form solution in the original variable `x`.
pub fn exact_solution(id: ProblemId, x: f64) -> Result<f64> {
    Ok(exact_jet(id, x)?.value)
}

/// Value and first two derivatives of the closed form in `x`.
pub fn exact_jet(id: ProblemId, x: f64) -> Result<Jet> {
    id.family()?;
    Ok(match id {
        ProblemId::Hydrogen { n, l } => hydrogen_form(n, l).jet(x),
        ProblemId::CubicNls { epsilon } => sech_jet(epsilon, x),
    })
}

/// `G(y)` for angular-momentum states.
pub fn exact_transformed(id: ProblemId, y: f64) -> Result<f64> {
    Ok(exact_transformed_jet(id, y)?.value)
}

pub fn exact_transformed_jet(id: ProblemId, y: f64) -> Result<Jet> {
    match (id.family()?, id) {
        (Family::HydrogenLm, ProblemId::Hydrogen { n, l }) => Ok(transformed_form(n, l).jet(y)),
        _ => Err(Error::UnsupportedProblem(format!(
            "{id} is solved without a change of variable"
        ))),
    }
}

/// Jet of the exact solution of the problem as solved, i.e. `G` for
/// angular-momentum states and `F` otherwise.
pub fn exact_solved_jet(id: ProblemId, y: f64) -> Result<Jet> {
    match id.family()? {
        Family::HydrogenLm => exact_transformed_jet(id, y),
        _ => exact_jet(id, y),
    }
}

fn exact_in_solved_variable(id: ProblemId, y: f64) -> Result<f64> {
    Ok(exact_solved_jet(id, y)?.value)
}
