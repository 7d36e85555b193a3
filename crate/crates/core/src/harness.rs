//! Experiment driver: solve one catalog problem with several point patterns,
//! measure errors against the closed form, estimate convergence orders and
//! write the results as CSV or JSON.
//!
//! Errors are always signed `approx - exact` in the original variable `x`,
//! after undoing any change of variable.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bspline::Breakpoints;
use crate::collocate::{
    build_breaks, solve, CollocationConfig, InitialGuess, Solution, DEFAULT_NEWNOT_PASSES, DEFAULT_NEWTON_MAX_ITER,
    DEFAULT_NEWTON_TOL,
};
use crate::error::{Error, Result};
use crate::points::PatternKind;
use crate::problems::{exact_solution, make_problem, ProblemId, ProblemSetup};

/// All max errors at or below this level count as exact reproduction in a
/// convergence study.
pub const EXACT_LEVEL: f64 = 1e-12;

const DEFAULT_PROBES: &str = "breakpoints+midpoints";

/// Where errors are measured. Serialized as the string
/// `"breakpoints+midpoints"` or as a list of abscissae.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum ProbeSpec {
    /// Breakpoints and subinterval midpoints of the uniform mesh, skipping a
    /// box end whose value is prescribed by a side condition.
    #[default]
    BreakpointsAndMidpoints,
    /// Explicit abscissae in the original variable.
    Explicit(Vec<f64>),
}

impl Serialize for ProbeSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ProbeSpec::BreakpointsAndMidpoints => s.serialize_str(DEFAULT_PROBES),
            ProbeSpec::Explicit(xs) => xs.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for ProbeSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Name(String),
            List(Vec<f64>),
        }
        match Raw::deserialize(d)? {
            Raw::List(xs) => Ok(ProbeSpec::Explicit(xs)),
            Raw::Name(n) => n.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl FromStr for ProbeSpec {
    type Err = Error;

    /// `breakpoints+midpoints` or a comma-separated list of abscissae.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == DEFAULT_PROBES || s == "default" {
            return Ok(ProbeSpec::BreakpointsAndMidpoints);
        }
        if s.is_empty() {
            return Ok(ProbeSpec::Explicit(Vec::new()));
        }
        s.split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidConfig(format!("bad probe abscissa '{v}'")))
            })
            .collect::<Result<Vec<_>>>()
            .map(ProbeSpec::Explicit)
    }
}

/// Newton starting guess as named in configuration files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialKind {
    #[default]
    Zero,
    Line,
}

impl FromStr for InitialKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "zero" => Ok(InitialKind::Zero),
            "line" => Ok(InitialKind::Line),
            other => Err(Error::InvalidConfig(format!("unknown initial guess '{other}'"))),
        }
    }
}

impl From<InitialKind> for InitialGuess {
    fn from(k: InitialKind) -> Self {
        match k {
            InitialKind::Zero => InitialGuess::Zero,
            InitialKind::Line => InitialGuess::Line,
        }
    }
}

/// One experiment: a problem, a box, a mesh and the patterns to compare.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub problem: ProblemId,
    /// Right end of the box in the solved variable.
    pub box_right: f64,
    pub intervals: usize,
    pub points_per_interval: usize,
    pub patterns: Vec<PatternKind>,
    pub probes: ProbeSpec,
    pub newnot_passes: usize,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    pub initial: InitialKind,
    /// Perturbation parameters solved in turn before the target one, each
    /// starting from the previous solution. Only for the nonlinear problem.
    pub continuation: Vec<f64>,
}

impl ExperimentConfig {
    /// All three patterns, default probes and solver settings.
    pub fn new(problem: ProblemId, box_right: f64, intervals: usize, points_per_interval: usize) -> Self {
        Self {
            problem,
            box_right,
            intervals,
            points_per_interval,
            patterns: PatternKind::ALL.to_vec(),
            probes: ProbeSpec::default(),
            newnot_passes: DEFAULT_NEWNOT_PASSES,
            newton_tol: DEFAULT_NEWTON_TOL,
            newton_max_iter: DEFAULT_NEWTON_MAX_ITER,
            initial: InitialKind::default(),
            continuation: Vec::new(),
        }
    }

    pub fn with_patterns(mut self, patterns: &[PatternKind]) -> Self {
        self.patterns = patterns.to_vec();
        self
    }

    pub fn with_probes(mut self, probes: ProbeSpec) -> Self {
        self.probes = probes;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.problem.family()?;
        if self.patterns.is_empty() {
            return Err(Error::InvalidConfig("at least one pattern is required".into()));
        }
        if !(self.box_right > 0.0 && self.box_right.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "box right end {} must be positive",
                self.box_right
            )));
        }
        if let ProbeSpec::Explicit(xs) = &self.probes {
            let right = self.problem.transform()?.to_original(self.box_right);
            if let Some(x) = xs.iter().find(|x| !(**x >= 0.0 && **x <= right)) {
                return Err(Error::InvalidConfig(format!("probe {x} lies outside [0, {right}]")));
            }
        }
        if !self.continuation.is_empty() && !matches!(self.problem, ProblemId::CubicNls { .. }) {
            return Err(Error::InvalidConfig(
                "continuation applies only to the nonlinear problem".into(),
            ));
        }
        self.collocation(PatternKind::Gaussian).validate()
    }

    fn collocation(&self, pattern: PatternKind) -> CollocationConfig {
        let mut c = CollocationConfig::new(self.intervals, self.points_per_interval, pattern);
        c.newnot_passes = self.newnot_passes;
        c.newton_tol = self.newton_tol;
        c.newton_max_iter = self.newton_max_iter;
        c.initial = self.initial.into();
        c
    }
}

/// Outcome of one pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RunStatus {
    Converged,
    /// Newton reached its cap; the errors describe the last iterate.
    NotConverged,
    Failed {
        message: String,
    },
}

/// Errors of one pattern at every probe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternRun {
    pub pattern: PatternKind,
    #[serde(flatten)]
    pub status: RunStatus,
    pub probes: Vec<f64>,
    /// Signed `approx - exact`, one per probe.
    pub errors: Vec<f64>,
    pub max_abs: f64,
    pub rms: f64,
    /// Linear solves, summed over redistribution passes and continuation.
    pub iterations: usize,
    /// Final mesh in the solved variable.
    pub breakpoints: Vec<f64>,
}

impl PatternRun {
    pub fn failed(&self) -> bool {
        matches!(self.status, RunStatus::Failed { .. })
    }

    fn failure(pattern: PatternKind, err: Error) -> Self {
        Self {
            pattern,
            status: RunStatus::Failed {
                message: err.to_string(),
            },
            probes: Vec::new(),
            errors: Vec::new(),
            max_abs: 0.0,
            rms: 0.0,
            iterations: 0,
            breakpoints: Vec::new(),
        }
    }
}

/// Results of one experiment, patterns in canonical order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub config: ExperimentConfig,
    pub warnings: Vec<String>,
    pub runs: Vec<PatternRun>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence: Option<ConvergenceReport>,
}

impl ErrorReport {
    pub fn run(&self, pattern: PatternKind) -> Option<&PatternRun> {
        self.runs.iter().find(|r| r.pattern == pattern)
    }

    pub fn any_failed(&self) -> bool {
        self.runs.iter().any(PatternRun::failed)
    }
}

/// Default probe abscissae in `x`: breakpoints and midpoints of the uniform
/// mesh, without box ends where the value is prescribed.
pub fn default_probes(setup: &ProblemSetup, intervals: usize) -> Result<Vec<f64>> {
    let (a, b) = setup.problem.interval();
    let breaks = build_breaks(a, b, intervals)?;
    let mut ys: Vec<f64> = breaks.as_slice().to_vec();
    ys.extend(breaks.midpoints());
    ys.sort_by(f64::total_cmp);
    Ok(without_prescribed_ends(setup, ys)
        .into_iter()
        .map(|y| setup.transform.to_original(y))
        .collect())
}

fn without_prescribed_ends(setup: &ProblemSetup, ys: Vec<f64>) -> Vec<f64> {
    let (a, b) = setup.problem.interval();
    let (left, right) = setup.problem.side_conditions();
    ys.into_iter()
        .filter(|&y| !(y == a && left.beta == 0.0) && !(y == b && right.beta == 0.0))
        .collect()
}

fn probes_for(cfg: &ExperimentConfig, setup: &ProblemSetup) -> Result<Vec<f64>> {
    let mut xs = match &cfg.probes {
        ProbeSpec::BreakpointsAndMidpoints => default_probes(setup, cfg.intervals)?,
        ProbeSpec::Explicit(xs) => xs.clone(),
    };
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    Ok(xs)
}

/// Signed errors of a solution at abscissae `xs` in the original variable.
pub fn errors_at(setup: &ProblemSetup, sol: &Solution, xs: &[f64]) -> Result<Vec<f64>> {
    let info = setup.transform;
    xs.iter()
        .map(|&x| {
            let y = info.to_solved(x);
            let approx = y.powi(info.power) * sol.eval(y, 0)?;
            Ok(approx - exact_solution(setup.id, x)?)
        })
        .collect()
}

fn max_abs(errors: &[f64]) -> f64 {
    errors.iter().fold(0.0, |m, e| m.max(e.abs()))
}

fn rms(errors: &[f64]) -> f64 {
    if errors.is_empty() {
        return 0.0;
    }
    (errors.iter().map(|e| e * e).sum::<f64>() / errors.len() as f64).sqrt()
}

/// Solves with one pattern, running any continuation stages first.
pub fn solve_pattern(cfg: &ExperimentConfig, pattern: PatternKind) -> Result<(ProblemSetup, Solution, usize)> {
    let mut col = cfg.collocation(pattern);
    let mut spent = 0;
    for &eps in &cfg.continuation {
        let stage = make_problem(ProblemId::nls(eps)?, cfg.box_right)?;
        let sol = solve(&stage.problem, &col)?;
        spent += sol.iterations;
        col.initial = InitialGuess::Spline(sol.bform);
    }
    let setup = make_problem(cfg.problem, cfg.box_right)?;
    let sol = solve(&setup.problem, &col)?;
    spent += sol.iterations;
    Ok((setup, sol, spent))
}

/// Runs every pattern of `cfg`. Solver failures are recorded per pattern
/// and do not stop the others; only an invalid configuration is an error.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ErrorReport> {
    cfg.validate()?;
    let setup = make_problem(cfg.problem, cfg.box_right)?;
    let probes = probes_for(cfg, &setup)?;
    let mut patterns = cfg.patterns.clone();
    patterns.sort();
    patterns.dedup();
    let runs = patterns
        .par_iter()
        .map(|&pattern| run_pattern(cfg, pattern, &probes))
        .collect();
    Ok(ErrorReport {
        config: cfg.clone(),
        warnings: setup.warning.into_iter().collect(),
        runs,
        convergence: None,
    })
}

fn run_pattern(cfg: &ExperimentConfig, pattern: PatternKind, probes: &[f64]) -> PatternRun {
    let attempt = || -> Result<PatternRun> {
        let (setup, sol, iterations) = solve_pattern(cfg, pattern)?;
        let errors = errors_at(&setup, &sol, probes)?;
        if let Some(e) = errors.iter().find(|e| !e.is_finite()) {
            return Err(Error::InvalidConfig(format!("non-finite error {e}")));
        }
        Ok(PatternRun {
            pattern,
            status: if sol.converged {
                RunStatus::Converged
            } else {
                RunStatus::NotConverged
            },
            probes: probes.to_vec(),
            max_abs: max_abs(&errors),
            rms: rms(&errors),
            errors,
            iterations,
            breakpoints: sol.breaks_used.as_slice().to_vec(),
        })
    };
    attempt().unwrap_or_else(|e| PatternRun::failure(pattern, e))
}

/// Empirical order, or a marker that the solution was reproduced exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    Slope(f64),
    Exact,
}

impl Order {
    pub fn slope(&self) -> Option<f64> {
        match self {
            Order::Slope(s) => Some(*s),
            Order::Exact => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Slope(s) => write!(f, "{s:.3}"),
            Order::Exact => f.write_str("exact"),
        }
    }
}

/// Max errors on a sequence of meshes for one pattern, with fitted orders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub pattern: PatternKind,
    pub breakpoint_errors: Vec<f64>,
    pub midpoint_errors: Vec<f64>,
    pub breakpoint_order: Order,
    pub midpoint_order: Order,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub intervals: Vec<usize>,
    /// Mesh widths in the solved variable.
    pub widths: Vec<f64>,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    pub fn row(&self, pattern: PatternKind) -> Option<&ConvergenceRow> {
        self.rows.iter().find(|r| r.pattern == pattern)
    }
}

/// Least-squares slope of `ln e` against `ln h`.
pub fn fit_order(widths: &[f64], errors: &[f64]) -> Order {
    if errors.iter().all(|&e| e <= EXACT_LEVEL) {
        return Order::Exact;
    }
    let xs: Vec<f64> = widths.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.max(f64::MIN_POSITIVE).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Order::Slope(sxy / sxx)
}

/// Solves on uniform meshes with each count in `intervals` and fits the
/// order of the max error separately at breakpoints and at midpoints.
/// Explicit probes in `cfg` are ignored.
pub fn convergence_study(cfg: &ExperimentConfig, intervals: &[usize]) -> Result<ConvergenceReport> {
    cfg.validate()?;
    if intervals.len() < 3 || intervals.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidConfig(
            "need at least three strictly increasing interval counts".into(),
        ));
    }
    let mut patterns = cfg.patterns.clone();
    patterns.sort();
    patterns.dedup();
    let widths: Vec<f64> = intervals.iter().map(|&l| cfg.box_right / l as f64).collect();
    let rows = patterns
        .par_iter()
        .map(|&pattern| -> Result<ConvergenceRow> {
            let mut bp = Vec::new();
            let mut mid = Vec::new();
            for &l in intervals {
                let mut c = cfg.clone();
                c.intervals = l;
                let (setup, sol, _) = solve_pattern(&c, pattern)?;
                let (a, b) = setup.problem.interval();
                let breaks = build_breaks(a, b, l)?;
                let to_x =
                    |ys: Vec<f64>| -> Vec<f64> { ys.into_iter().map(|y| setup.transform.to_original(y)).collect() };
                let at_breaks = to_x(without_prescribed_ends(&setup, breaks.as_slice().to_vec()));
                let at_mids = to_x(breaks.midpoints());
                bp.push(max_abs(&errors_at(&setup, &sol, &at_breaks)?));
                mid.push(max_abs(&errors_at(&setup, &sol, &at_mids)?));
            }
            Ok(ConvergenceRow {
                pattern,
                breakpoint_order: fit_order(&widths, &bp),
                midpoint_order: fit_order(&widths, &mid),
                breakpoint_errors: bp,
                midpoint_errors: mid,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport {
        intervals: intervals.to_vec(),
        widths,
        rows,
    })
}

/// Runs `base` for every combination of box, interval count and points per
/// interval, in that nesting order.
pub fn sweep(
    base: &ExperimentConfig,
    boxes: &[f64],
    intervals: &[usize],
    points: &[usize],
) -> Result<Vec<ErrorReport>> {
    let mut out = Vec::new();
    for &box_right in boxes {
        for &l in intervals {
            for &r in points {
                let mut cfg = base.clone();
                cfg.box_right = box_right;
                cfg.intervals = l;
                cfg.points_per_interval = r;
                out.push(run_experiment(&cfg)?);
            }
        }
    }
    Ok(out)
}

/// `(x, exact, approx)` samples of one pattern for plotting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotSeries {
    pub pattern: PatternKind,
    pub x: Vec<f64>,
    pub exact: Vec<f64>,
    pub approx: Vec<f64>,
}

/// Samples exact and approximate solutions at `samples + 1` equally spaced
/// abscissae spanning the box in `x`. Failed patterns are skipped.
pub fn plot_data(cfg: &ExperimentConfig, samples: usize) -> Result<Vec<PlotSeries>> {
    cfg.validate()?;
    let samples = samples.max(1);
    let right = cfg.problem.transform()?.to_original(cfg.box_right);
    let xs: Vec<f64> = (0..=samples).map(|i| right * i as f64 / samples as f64).collect();
    let mut patterns = cfg.patterns.clone();
    patterns.sort();
    patterns.dedup();
    let mut out = Vec::new();
    for pattern in patterns {
        let Ok((setup, sol, _)) = solve_pattern(cfg, pattern) else {
            continue;
        };
        let exact = xs
            .iter()
            .map(|&x| exact_solution(setup.id, x))
            .collect::<Result<Vec<_>>>()?;
        let errors = errors_at(&setup, &sol, &xs)?;
        let approx = errors.iter().zip(&exact).map(|(e, f)| e + f).collect();
        out.push(PlotSeries {
            pattern,
            x: xs.clone(),
            exact,
            approx,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidConfig(format!("unknown format '{other}'"))),
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> Error + '_ {
    move |e| match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => Error::Serialization(format!("{other:?}")),
    }
}

/// 17 significant digits, enough to recover every `f64` exactly.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes the error table (`pattern,probe_x,error,abs_error`) to `w`.
/// Failed patterns contribute no rows.
pub fn write_csv<W: Write>(rep: &ErrorReport, w: W) -> std::result::Result<(), csv::Error> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["pattern", "probe_x", "error", "abs_error"])?;
    let mut runs: Vec<&PatternRun> = rep.runs.iter().collect();
    runs.sort_by_key(|r| r.pattern);
    for run in runs {
        let mut rows: Vec<(f64, f64)> = run.probes.iter().copied().zip(run.errors.iter().copied()).collect();
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (x, e) in rows {
            out.write_record([
                run.pattern.as_str(),
                &format_float(x),
                &format_float(e),
                &format_float(e.abs()),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Writes `rep` to `path` as CSV or as JSON mirroring the whole report.
pub fn emit_report(rep: &ErrorReport, format: Format, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    match format {
        Format::Csv => write_csv(rep, &mut w).map_err(csv_err(path))?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, rep).map_err(|e| Error::Serialization(e.to_string()))?;
            writeln!(w).map_err(io_err(path))?;
        }
    }
    w.flush().map_err(io_err(path))
}

/// One summary row per pattern and experiment.
pub fn write_sweep_csv<W: Write>(reps: &[ErrorReport], w: W) -> std::result::Result<(), csv::Error> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "problem",
        "box_right",
        "intervals",
        "points_per_interval",
        "pattern",
        "status",
        "max_abs",
        "rms",
        "iterations",
    ])?;
    for rep in reps {
        for run in &rep.runs {
            let status = match &run.status {
                RunStatus::Converged => "converged",
                RunStatus::NotConverged => "not_converged",
                RunStatus::Failed { .. } => "failed",
            };
            out.write_record([
                rep.config.problem.to_string(),
                rep.config.box_right.to_string(),
                rep.config.intervals.to_string(),
                rep.config.points_per_interval.to_string(),
                run.pattern.to_string(),
                status.to_string(),
                format_float(run.max_abs),
                format_float(run.rms),
                run.iterations.to_string(),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn emit_sweep(reps: &[ErrorReport], format: Format, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    match format {
        Format::Csv => write_sweep_csv(reps, &mut w).map_err(csv_err(path))?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, reps).map_err(|e| Error::Serialization(e.to_string()))?;
            writeln!(w).map_err(io_err(path))?;
        }
    }
    w.flush().map_err(io_err(path))
}

/// `pattern,intervals,width,breakpoint_error,midpoint_error` rows.
pub fn write_convergence_csv<W: Write>(rep: &ConvergenceReport, w: W) -> std::result::Result<(), csv::Error> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["pattern", "intervals", "width", "breakpoint_error", "midpoint_error"])?;
    for row in &rep.rows {
        for (i, &l) in rep.intervals.iter().enumerate() {
            out.write_record([
                row.pattern.as_str(),
                &l.to_string(),
                &format_float(rep.widths[i]),
                &format_float(row.breakpoint_errors[i]),
                &format_float(row.midpoint_errors[i]),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Writes `pattern,x,exact,approx` rows.
pub fn emit_plot_data(series: &[PlotSeries], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let write = || -> std::result::Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(BufWriter::new(&file));
        out.write_record(["pattern", "x", "exact", "approx"])?;
        for s in series {
            for ((x, f), z) in s.x.iter().zip(&s.exact).zip(&s.approx) {
                out.write_record([
                    s.pattern.as_str(),
                    &format_float(*x),
                    &format_float(*f),
                    &format_float(*z),
                ])?;
            }
        }
        out.flush()?;
        Ok(())
    };
    write().map_err(csv_err(path))
}

/// Parses a report previously written as JSON.
pub fn read_report_json(path: &Path) -> Result<ErrorReport> {
    let file = File::open(path).map_err(io_err(path))?;
    serde_json::from_reader(std::io::BufReader::new(file)).map_err(|e| Error::Serialization(e.to_string()))
}

/// Mesh of a pattern run as breakpoints, if the run succeeded.
pub fn final_mesh(run: &PatternRun) -> Option<Breakpoints> {
    Breakpoints::new(run.breakpoints.clone()).ok()
}
