mod common;

use approx::assert_abs_diff_eq;

use splinecol::bspline::{Breakpoints, PPForm};
use splinecol::collocate::{
    assemble_system, build_breaks, collocation_knots, collocation_sites, equidistribute, newnot_redistribute, solve,
    solve_linear, solve_newton, BvpProblem, Coefficients, CollocationConfig, Endpoint, InitialGuess, Jet,
    SideCondition, Solution,
};
use splinecol::harness::{fit_order, Order};
use splinecol::points::{legendre_roots, PatternKind};
use splinecol::problems::{make_problem, ProblemId};

fn value(at: Endpoint, g: f64) -> SideCondition {
    SideCondition::value(at, g)
}

fn constant_rhs(rhs: f64, left: f64, right: f64) -> BvpProblem {
    BvpProblem::linear(
        0.0,
        1.0,
        move |_| Ok(Coefficients::new(0.0, 0.0, 1.0, rhs)),
        value(Endpoint::Left, left),
        value(Endpoint::Right, right),
    )
    .unwrap()
}

fn max_error(sol: &Solution, xs: &[f64], exact: impl Fn(f64) -> f64) -> f64 {
    xs.iter()
        .map(|&x| (sol.eval(x, 0).unwrap() - exact(x)).abs())
        .fold(0.0, f64::max)
}

fn dense_grid(a: f64, b: f64, m: usize) -> Vec<f64> {
    (0..=m).map(|i| a + (b - a) * i as f64 / m as f64).collect()
}

#[test]
fn uniform_meshes() {
    let b = build_breaks(0.0, 10.0, 10).unwrap();
    assert_eq!(b.as_slice(), &(0..=10).map(f64::from).collect::<Vec<_>>()[..]);
    let b = build_breaks(0.0, 1.0, 20).unwrap();
    for w in b.as_slice().windows(2) {
        assert_abs_diff_eq!(w[1] - w[0], 0.05, epsilon = 1e-15);
    }
    assert_eq!(build_breaks(0.0, 1.0, 1).unwrap().as_slice(), &[0.0, 1.0]);
}

#[test]
fn dimension_and_sites() {
    for (l, r) in [(1, 1), (5, 2), (10, 4), (7, 6)] {
        let cfg = CollocationConfig::new(l, r, PatternKind::Gaussian);
        assert_eq!(cfg.order(), r + 2);
        assert_eq!(cfg.dimension(), (r + 2) * l - 2 * (l - 1));
        let breaks = build_breaks(0.0, 2.0, l).unwrap();
        let knots = collocation_knots(&breaks, r + 2).unwrap();
        assert_eq!(knots.dim(), cfg.dimension());
        let sites = collocation_sites(&breaks, &legendre_roots(r).unwrap()).unwrap();
        assert_eq!(sites.len(), cfg.dimension());
        assert_eq!((sites[0], sites[sites.len() - 1]), (0.0, 2.0));
        let interior = &sites[1..sites.len() - 1];
        assert_eq!(interior.len(), l * r);
        // r sites strictly inside each piece
        for (i, chunk) in interior.chunks(r).enumerate() {
            let (lo, hi) = (breaks.as_slice()[i], breaks.as_slice()[i + 1]);
            assert!(chunk.iter().all(|&s| lo < s && s < hi));
        }
        // uniform mesh: each piece's sites are the previous shifted by h
        let h = 2.0 / l as f64;
        for i in 1..l {
            for j in 0..r {
                assert_abs_diff_eq!(interior[i * r + j] - interior[(i - 1) * r + j], h, epsilon = 1e-14);
            }
        }
    }
}

#[test]
fn gaussian_pair_orthogonal_to_lines() {
    // integral over [-1, 1] of q(u) (u - p)(u + p) with p^2 = 1/3, q = 1 and q = u
    let p = legendre_roots(2).unwrap()[1];
    let moment = |m: i32| if m % 2 == 1 { 0.0 } else { 2.0 / (m + 1) as f64 };
    let with_one = moment(2) - p * p * moment(0);
    let with_u = moment(3) - p * p * moment(1);
    assert_abs_diff_eq!(with_one, 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(with_u, 0.0, epsilon = 1e-15);
}

#[test]
fn six_gaussian_points_match_table() {
    let table = [0.2386191860831969, 0.6612093864662645, 0.932_469_514_203_152];
    let roots = legendre_roots(6).unwrap();
    for (i, t) in table.iter().enumerate() {
        assert_abs_diff_eq!(roots[3 + i], *t, epsilon = 1e-15);
        assert_abs_diff_eq!(roots[2 - i], -*t, epsilon = 1e-15);
    }
}

#[test]
fn straight_line_is_exact() {
    let p = constant_rhs(0.0, 0.0, 1.0);
    for (l, r) in [(1, 1), (3, 2), (8, 3), (5, 6)] {
        for pattern in [PatternKind::Gaussian, PatternKind::Equispaced] {
            let sol = solve_linear(&p, &CollocationConfig::new(l, r, pattern)).unwrap();
            assert!(max_error(&sol, &dense_grid(0.0, 1.0, 50), |x| x) <= 1e-13);
        }
    }
}

#[test]
fn parabola_is_exact() {
    let p = constant_rhs(2.0, 0.0, 1.0);
    let sol = solve_linear(&p, &CollocationConfig::new(4, 2, PatternKind::Gaussian)).unwrap();
    assert!(max_error(&sol, &dense_grid(0.0, 1.0, 50), |x| x * x) <= 1e-13);
    assert!(sol.residuals(&p).unwrap().iter().all(|r| r.abs() <= 1e-12));
}

#[test]
fn homogeneous_problem_gives_zero() {
    let p = constant_rhs(0.0, 0.0, 0.0);
    let sol = solve_linear(&p, &CollocationConfig::new(10, 4, PatternKind::Gaussian)).unwrap();
    assert!(sol.bform.coeffs().iter().all(|c| c.abs() <= 1e-13));
}

#[test]
fn collocation_residuals_vanish_at_sites() {
    // z'' + x z' - z = cos x with mixed side conditions
    let p = BvpProblem::linear(
        0.0,
        2.0,
        |x| Ok(Coefficients::new(-1.0, x, 1.0, x.cos())),
        SideCondition::new(Endpoint::Left, 1.0, 1.0, 0.5).unwrap(),
        value(Endpoint::Right, -1.0),
    )
    .unwrap();
    for pattern in [PatternKind::Gaussian, PatternKind::Equispaced] {
        let sol = solve_linear(&p, &CollocationConfig::new(6, 3, pattern)).unwrap();
        assert!(sol.residuals(&p).unwrap().iter().all(|r| r.abs() <= 1e-10));
        let (l, r) = (Jet::of(&sol.bform, 0.0).unwrap(), Jet::of(&sol.bform, 2.0).unwrap());
        assert_abs_diff_eq!(l.value + l.slope, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(r.value, -1.0, epsilon = 1e-12);
    }
}

#[test]
fn band_follows_local_support() {
    let setup = make_problem(ProblemId::hydrogen(1, 0).unwrap(), 10.0).unwrap();
    for r in [1, 2, 4, 6] {
        let k = r + 2;
        let breaks = build_breaks(0.0, 10.0, 7).unwrap();
        let knots = collocation_knots(&breaks, k).unwrap();
        let sites = collocation_sites(&breaks, &legendre_roots(r).unwrap()).unwrap();
        let (m, rhs) = assemble_system(&setup.problem, &knots, &sites, None).unwrap();
        assert!(m.lower_bandwidth() < k && m.upper_bandwidth() < k);
        assert_eq!(rhs.len(), knots.dim());
    }
}

#[test]
fn ground_state_boundary_row() {
    let setup = make_problem(ProblemId::hydrogen(1, 0).unwrap(), 10.0).unwrap();
    let (left, right) = setup.problem.side_conditions();
    assert_eq!((left.alpha, left.beta, left.gamma), (0.0, 1.0, 2.0));
    assert_eq!((right.alpha, right.beta, right.gamma), (1.0, 0.0, 0.0));
}

#[test]
fn ground_state_with_box_ten() {
    // box truncation dominates: the exact solution is 2e-4 * 10 * e^0 ~ 9.1e-4 at x = 10
    let setup = make_problem(ProblemId::hydrogen(1, 0).unwrap(), 10.0).unwrap();
    let exact = |x: f64| 2.0 * x * (-x).exp();
    // x = 10 is prescribed, so every pattern has the same error there
    let breaks = &dense_grid(0.0, 10.0, 10)[..10];
    let g = solve(&setup.problem, &CollocationConfig::new(10, 4, PatternKind::Gaussian)).unwrap();
    let e = solve(&setup.problem, &CollocationConfig::new(10, 4, PatternKind::Equispaced)).unwrap();
    let (eg, ee) = (max_error(&g, breaks, exact), max_error(&e, breaks, exact));
    assert!(eg <= 1e-3, "gaussian {eg}");
    assert!(ee > eg, "equispaced {ee} gaussian {eg}");
}

#[test]
fn ground_state_with_exact_far_value() {
    // prescribing the true F(10) removes truncation and leaves the discretization error
    let f = |x: f64| 2.0 * x * (-x).exp();
    let p = BvpProblem::linear(
        0.0,
        10.0,
        |x| Ok(Coefficients::new(1.0 / x - 0.5, 0.0, 0.5, 0.0)),
        SideCondition::slope(Endpoint::Left, 2.0),
        value(Endpoint::Right, f(10.0)),
    )
    .unwrap();
    // pinned from the first run, which gave 1.12e-5
    let coarse = solve(&p, &CollocationConfig::new(10, 4, PatternKind::Gaussian)).unwrap();
    let e = max_error(&coarse, &dense_grid(0.0, 10.0, 10), f);
    assert!(e < 1.5e-5, "{e:e}");
    let fine = solve(&p, &CollocationConfig::new(20, 4, PatternKind::Gaussian)).unwrap();
    let e = max_error(&fine, &dense_grid(0.0, 10.0, 20), f);
    assert!(e < 1e-6, "{e:e}");
}

#[test]
fn breakpoint_superconvergence_for_sine() {
    // z'' = -sin x, z(0) = 0, z(1) = sin 1
    let p = BvpProblem::linear(
        0.0,
        1.0,
        |x| Ok(Coefficients::new(0.0, 0.0, 1.0, -x.sin())),
        value(Endpoint::Left, 0.0),
        value(Endpoint::Right, 1f64.sin()),
    )
    .unwrap();
    let ls = [4usize, 8, 16];
    let widths: Vec<f64> = ls.iter().map(|&l| 1.0 / l as f64).collect();
    let errors = |pattern| -> Vec<f64> {
        ls.iter()
            .map(|&l| {
                let sol = solve(&p, &CollocationConfig::new(l, 2, pattern)).unwrap();
                let interior = &dense_grid(0.0, 1.0, l)[1..l];
                max_error(&sol, interior, f64::sin)
            })
            .collect()
    };
    let Order::Slope(gauss) = fit_order(&widths, &errors(PatternKind::Gaussian)) else {
        panic!("gaussian errors at rounding level");
    };
    let Order::Slope(equi) = fit_order(&widths, &errors(PatternKind::Equispaced)) else {
        panic!("equispaced errors at rounding level");
    };
    assert!((gauss - 4.0).abs() <= 0.5, "gaussian slope {gauss}");
    assert!((equi - 2.0).abs() <= 0.5, "equispaced slope {equi}");
}

#[test]
fn solution_forms_agree_at_breakpoints() {
    let setup = make_problem(ProblemId::hydrogen(2, 0).unwrap(), 30.0).unwrap();
    let sol = solve(&setup.problem, &CollocationConfig::new(15, 3, PatternKind::Gaussian)).unwrap();
    for &x in sol.breaks_used.as_slice() {
        assert!((sol.ppform.eval(x, 0).unwrap() - sol.bform.eval(x, 0).unwrap()).abs() <= 1e-12);
    }
}

fn wrapped(linear: &BvpProblem) -> BvpProblem {
    let (left, right) = linear.side_conditions();
    let (a, b) = linear.interval();
    let inner = linear.clone();
    BvpProblem::quasilinear(a, b, move |x, _| inner.coefficients(x, None), left, right).unwrap()
}

#[test]
fn linear_problem_wrapped_as_quasilinear() {
    let setup = make_problem(ProblemId::hydrogen(1, 0).unwrap(), 10.0).unwrap();
    let cfg = CollocationConfig::new(10, 3, PatternKind::Gaussian);
    let direct = solve_linear(&setup.problem, &cfg).unwrap();
    let newton = solve_newton(&wrapped(&setup.problem), &cfg).unwrap();
    assert!(newton.converged);
    assert!(newton.iterations <= 2, "{} iterations", newton.iterations);
    for (a, b) in newton.bform.coeffs().iter().zip(direct.bform.coeffs()) {
        assert_abs_diff_eq!(*a, *b, epsilon = 1e-12);
    }
}

#[test]
fn solver_kind_must_match_equation() {
    let setup = make_problem(ProblemId::hydrogen(1, 0).unwrap(), 10.0).unwrap();
    let nls = make_problem(ProblemId::nls(0.1).unwrap(), 1.0).unwrap();
    let cfg = CollocationConfig::new(4, 2, PatternKind::Gaussian);
    assert!(solve_newton(&setup.problem, &cfg).is_err());
    assert!(solve_linear(&nls.problem, &cfg).is_err());
}

#[test]
fn iteration_cap_reports_nonconvergence() {
    let nls = make_problem(ProblemId::nls(0.1).unwrap(), 1.0).unwrap();
    let mut cfg = CollocationConfig::new(20, 6, PatternKind::Gaussian);
    cfg.newton_max_iter = 2;
    let sol = solve(&nls.problem, &cfg).unwrap();
    assert!(!sol.converged);
    assert_eq!(sol.iterations, 2);
    assert!(sol.last_change > cfg.newton_tol);
}

#[test]
fn newton_stops_on_small_change() {
    let nls = make_problem(ProblemId::nls(0.1).unwrap(), 1.0).unwrap();
    let sol = solve(&nls.problem, &CollocationConfig::new(20, 6, PatternKind::Gaussian)).unwrap();
    assert!(sol.converged);
    assert!(sol.last_change < 1e-6);
    assert!(sol.residuals(&nls.problem).unwrap().iter().all(|r| r.abs() <= 1e-4));
}

#[test]
fn thin_layer_defeats_uniform_gaussian_mesh() {
    let nls = make_problem(ProblemId::nls(0.001).unwrap(), 1.0).unwrap();
    let sol = solve(&nls.problem, &CollocationConfig::new(20, 6, PatternKind::Gaussian)).unwrap();
    let exact = nls.problem.exact().unwrap();
    assert!(max_error(&sol, &dense_grid(0.0, 1.0, 2000), |x| exact(x)) > 0.1);
}

#[test]
fn polynomial_keeps_mesh() {
    let breaks = Breakpoints::new(vec![0.0, 0.3, 0.5, 0.9, 1.0]).unwrap();
    // one cubic on every piece, in local Taylor form
    let coeffs = breaks.as_slice()[..4]
        .iter()
        .flat_map(|&x| [1.0 + x - x * x * x, 1.0 - 3.0 * x * x, -3.0 * x, -1.0])
        .collect();
    let pp = PPForm::new(breaks.clone(), 4, coeffs).unwrap();
    assert_eq!(newnot_redistribute(&pp, 4).unwrap(), breaks);
}

#[test]
fn layer_pulls_breakpoints_to_origin() {
    let eps = 0.01;
    let nls = make_problem(ProblemId::nls(eps).unwrap(), 1.0).unwrap();
    let sol = solve(&nls.problem, &CollocationConfig::new(20, 4, PatternKind::Gaussian)).unwrap();
    let moved = newnot_redistribute(&sol.ppform, 20).unwrap();
    let xi = moved.as_slice();
    assert_eq!((xi[0], xi[20]), (0.0, 1.0));
    let near = xi.iter().filter(|&&x| x < 10.0 * eps).count();
    assert!(near > 3, "only {near} breakpoints within 10 eps: {xi:?}");
}

#[test]
fn step_density_fills_first_piece() {
    let breaks = Breakpoints::uniform(0.0, 1.0, 4).unwrap();
    let moved = equidistribute(&breaks, &[1.0, 0.0, 0.0, 0.0], 5).unwrap();
    let xi = moved.as_slice();
    assert_eq!((xi[0], xi[5]), (0.0, 1.0));
    for (i, &x) in xi[1..5].iter().enumerate() {
        assert_abs_diff_eq!(x, 0.25 * (i + 1) as f64 / 5.0, epsilon = 1e-15);
    }
}

#[test]
fn redistribution_is_harmless_on_smooth_problem() {
    let setup = make_problem(ProblemId::hydrogen(1, 0).unwrap(), 10.0).unwrap();
    let exact = |x: f64| 2.0 * x * (-x).exp();
    let grid = dense_grid(0.0, 10.0, 200);
    let g = solve(&setup.problem, &CollocationConfig::new(20, 4, PatternKind::Gaussian)).unwrap();
    let r = solve(
        &setup.problem,
        &CollocationConfig::new(20, 4, PatternKind::Redistributed),
    )
    .unwrap();
    assert!(max_error(&r, &grid, exact) <= 10.0 * max_error(&g, &grid, exact));
    assert_eq!(r.breaks_used.pieces(), 20);
    assert_eq!((r.breaks_used.left(), r.breaks_used.right()), (0.0, 10.0));
}

#[test]
fn spline_initial_guess_from_other_mesh() {
    let nls = make_problem(ProblemId::nls(0.1).unwrap(), 1.0).unwrap();
    let coarse = solve(&nls.problem, &CollocationConfig::new(10, 4, PatternKind::Gaussian)).unwrap();
    let mut cfg = CollocationConfig::new(20, 6, PatternKind::Gaussian);
    cfg.initial = InitialGuess::Spline(coarse.bform);
    let warm = solve(&nls.problem, &cfg).unwrap();
    let cold = solve(&nls.problem, &CollocationConfig::new(20, 6, PatternKind::Gaussian)).unwrap();
    assert!(warm.converged);
    assert!(warm.iterations < cold.iterations);
}
