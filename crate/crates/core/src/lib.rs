//! Spline collocation for two-point boundary value problems.
//!
//! A solution is sought as a B-spline of order `r + 2` with continuous first
//! derivative. It satisfies the equation at `r` points in each subinterval,
//! chosen as Gaussian points, equispaced points, or Gaussian points on a mesh
//! redistributed to follow the solution. Nonlinear equations are solved by
//! Newton's method.
//!
//! - [`bspline`]: knots, B-spline evaluation, B-form and pp-form.
//! - [`banded`]: banded storage and elimination without pivoting.
//! - [`points`]: collocation templates.
//! - [`collocate`]: problem description, assembly, Newton and redistribution.
//! - [`problems`]: hydrogen radial states and the cubic Schrödinger equation.
//! - [`harness`]: error reports, convergence studies, CSV and JSON output.
//!
//! ```
//! use splinecol::harness::{run_experiment, ExperimentConfig};
//! use splinecol::problems::ProblemId;
//!
//! let cfg = ExperimentConfig::new(ProblemId::hydrogen(1, 0)?, 10.0, 10, 2);
//! let report = run_experiment(&cfg)?;
//! assert_eq!(report.runs.len(), 3);
//! # Ok::<(), splinecol::error::Error>(())
//! ```

// Negated comparisons are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod banded;
pub mod bspline;
pub mod collocate;
pub mod error;
pub mod harness;
pub mod points;
pub mod problems;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/bsplines.md")]
    mod bsplines {}
    #[doc = include_str!("../../../book/src/banded.md")]
    mod banded {}
    #[doc = include_str!("../../../book/src/points.md")]
    mod points {}
    #[doc = include_str!("../../../book/src/collocation.md")]
    mod collocation {}
    #[doc = include_str!("../../../book/src/redistribution.md")]
    mod redistribution {}
    #[doc = include_str!("../../../book/src/problems.md")]
    mod problems {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/limits.md")]
    mod limits {}
}
