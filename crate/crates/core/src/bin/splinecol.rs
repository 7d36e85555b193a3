use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use splinecol::error::{Error, Result};
use splinecol::harness::{
    self, ConvergenceReport, ErrorReport, ExperimentConfig, Format, InitialKind, ProbeSpec, RunStatus,
};
use splinecol::points::PatternKind;
use splinecol::problems::ProblemId;

/// Collocation experiments on the built-in problem catalog.
#[derive(Parser)]
#[command(name = "splinecol", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem with each requested pattern and report errors.
    Run {
        #[command(flatten)]
        common: Common,
        /// Also write `pattern,x,exact,approx` samples to this CSV file.
        #[arg(long)]
        plot: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        plot_samples: usize,
    },
    /// Run every combination of the listed boxes, meshes and point counts.
    Sweep {
        #[command(flatten)]
        common: Common,
    },
    /// Estimate convergence orders at breakpoints and midpoints.
    Converge {
        #[command(flatten)]
        common: Common,
        /// Interval counts to solve with, e.g. 10,20,40.
        #[arg(long, value_delimiter = ',')]
        sequence: Vec<usize>,
    },
    /// List the problem catalog.
    List,
}

#[derive(Args, Default)]
struct Common {
    /// TOML file with the same keys as the flags (underscores for dashes).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Problem id, e.g. hydrogen:n=2,l=1 or nls:eps=0.01.
    #[arg(long)]
    problem: Option<String>,
    /// Right end of the box in the solved variable; lists allowed for sweep.
    #[arg(long, value_delimiter = ',')]
    box_right: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    intervals: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    points_per_interval: Vec<usize>,
    /// gaussian, equispaced or redistributed; repeatable.
    #[arg(long = "pattern", value_delimiter = ',')]
    patterns: Vec<String>,
    #[arg(long)]
    newnot_passes: Option<usize>,
    #[arg(long)]
    newton_tol: Option<f64>,
    #[arg(long)]
    newton_max_iter: Option<usize>,
    /// breakpoints+midpoints or a comma-separated list of x values.
    #[arg(long)]
    probes: Option<String>,
    /// Newton starting guess: zero or line.
    #[arg(long)]
    initial: Option<String>,
    /// Perturbation parameters to solve first, largest first.
    #[arg(long, value_delimiter = ',')]
    continuation: Vec<f64>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json; inferred from the output extension when omitted.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    problem: Option<String>,
    box_right: Option<OneOrMany<f64>>,
    intervals: Option<OneOrMany<usize>>,
    points_per_interval: Option<OneOrMany<usize>>,
    #[serde(alias = "pattern")]
    patterns: Option<OneOrMany<String>>,
    newnot_passes: Option<usize>,
    newton_tol: Option<f64>,
    newton_max_iter: Option<usize>,
    probes: Option<ProbeSpec>,
    initial: Option<String>,
    continuation: Option<Vec<f64>>,
    sequence: Option<Vec<usize>>,
    out: Option<PathBuf>,
    format: Option<String>,
}

struct Resolved {
    base: ExperimentConfig,
    boxes: Vec<f64>,
    intervals: Vec<usize>,
    points: Vec<usize>,
    sequence: Vec<usize>,
    out: Option<PathBuf>,
    format: Format,
}

fn read_config(path: &Path) -> Result<FileConfig> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    toml::from_str(&text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
}

fn pick<T>(flag: Vec<T>, file: Option<OneOrMany<T>>) -> Vec<T> {
    if flag.is_empty() {
        file.map(OneOrMany::into_vec).unwrap_or_default()
    } else {
        flag
    }
}

fn resolve(common: Common, sequence: Vec<usize>) -> Result<Resolved> {
    let file = match &common.config {
        Some(path) => read_config(path)?,
        None => FileConfig::default(),
    };
    let problem: ProblemId = common
        .problem
        .or(file.problem)
        .ok_or_else(|| Error::InvalidConfig("--problem is required".into()))?
        .parse()?;
    let mut boxes = pick(common.box_right, file.box_right);
    if boxes.is_empty() {
        boxes.push(problem.default_box()?);
    }
    let mut intervals = pick(common.intervals, file.intervals);
    if intervals.is_empty() {
        intervals.push(10);
    }
    let mut points = pick(common.points_per_interval, file.points_per_interval);
    if points.is_empty() {
        points.push(2);
    }
    let patterns = pick(common.patterns, file.patterns);
    let patterns = if patterns.is_empty() {
        PatternKind::ALL.to_vec()
    } else {
        patterns.iter().map(|p| p.parse()).collect::<Result<Vec<_>>>()?
    };

    let mut base = ExperimentConfig::new(problem, boxes[0], intervals[0], points[0]).with_patterns(&patterns);
    if let Some(v) = common.newnot_passes.or(file.newnot_passes) {
        base.newnot_passes = v;
    }
    if let Some(v) = common.newton_tol.or(file.newton_tol) {
        base.newton_tol = v;
    }
    if let Some(v) = common.newton_max_iter.or(file.newton_max_iter) {
        base.newton_max_iter = v;
    }
    base.probes = match common.probes {
        Some(s) => s.parse()?,
        None => file.probes.unwrap_or_default(),
    };
    if let Some(s) = common.initial.or(file.initial) {
        base.initial = s.parse::<InitialKind>()?;
    }
    base.continuation = if common.continuation.is_empty() {
        file.continuation.unwrap_or_default()
    } else {
        common.continuation
    };

    let out = common.out.or(file.out);
    let format = match common.format.or(file.format) {
        Some(f) => f.parse()?,
        None => match out.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some("json") => Format::Json,
            _ => Format::Csv,
        },
    };
    let sequence = if sequence.is_empty() {
        file.sequence.unwrap_or_default()
    } else {
        sequence
    };
    Ok(Resolved {
        base,
        boxes,
        intervals,
        points,
        sequence,
        out,
        format,
    })
}

fn single(r: &Resolved) -> Result<()> {
    if r.boxes.len() > 1 || r.intervals.len() > 1 || r.points.len() > 1 {
        return Err(Error::InvalidConfig(
            "lists of boxes, intervals or points need the sweep command".into(),
        ));
    }
    Ok(())
}

fn summarize(rep: &ErrorReport) {
    let c = &rep.config;
    eprintln!(
        "{} box {} intervals {} points {}",
        c.problem, c.box_right, c.intervals, c.points_per_interval
    );
    for w in &rep.warnings {
        eprintln!("  warning: {w}");
    }
    for run in &rep.runs {
        match &run.status {
            RunStatus::Failed { message } => eprintln!("  {:<14} failed: {message}", run.pattern.as_str()),
            status => eprintln!(
                "  {:<14} {:<14} max {:.3e}  rms {:.3e}  iterations {}",
                run.pattern.as_str(),
                if matches!(status, RunStatus::Converged) {
                    "converged"
                } else {
                    "not converged"
                },
                run.max_abs,
                run.rms,
                run.iterations
            ),
        }
    }
}

fn summarize_convergence(rep: &ConvergenceReport) {
    eprintln!("  orders over intervals {:?}", rep.intervals);
    for row in &rep.rows {
        eprintln!(
            "  {:<14} breakpoints {:<8} midpoints {}",
            row.pattern.as_str(),
            row.breakpoint_order.to_string(),
            row.midpoint_order
        );
    }
}

fn to_stdout<F>(write: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> std::result::Result<(), String>,
{
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    write(&mut lock).map_err(Error::Serialization)
}

fn emit(rep: &ErrorReport, r: &Resolved) -> Result<()> {
    match (&r.out, r.format) {
        (Some(path), format) => harness::emit_report(rep, format, path),
        (None, Format::Csv) => to_stdout(|w| harness::write_csv(rep, w).map_err(|e| e.to_string())),
        (None, Format::Json) => to_stdout(|w| {
            serde_json::to_writer_pretty(&mut *w, rep).map_err(|e| e.to_string())?;
            writeln!(w).map_err(|e| e.to_string())
        }),
    }
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::List => {
            for id in ProblemId::catalog() {
                let t = id.transform()?;
                let note = if t.is_identity() {
                    String::new()
                } else {
                    format!("  (solved for G(y), y = x/{}, F = y^{} G)", t.scale, t.power)
                };
                println!("{:<20} recommended box {}{note}", id.to_string(), id.recommended_box()?);
            }
            println!("nls:eps=<value> accepts any positive perturbation parameter");
            Ok(true)
        }
        Command::Run {
            common,
            plot,
            plot_samples,
        } => {
            let r = resolve(common, Vec::new())?;
            single(&r)?;
            let rep = harness::run_experiment(&r.base)?;
            summarize(&rep);
            emit(&rep, &r)?;
            if let Some(path) = plot {
                harness::emit_plot_data(&harness::plot_data(&r.base, plot_samples)?, &path)?;
            }
            Ok(!rep.any_failed())
        }
        Command::Sweep { common } => {
            let r = resolve(common, Vec::new())?;
            let reps = harness::sweep(&r.base, &r.boxes, &r.intervals, &r.points)?;
            reps.iter().for_each(summarize);
            match &r.out {
                Some(path) => harness::emit_sweep(&reps, r.format, path)?,
                None => match r.format {
                    Format::Csv => to_stdout(|w| harness::write_sweep_csv(&reps, w).map_err(|e| e.to_string()))?,
                    Format::Json => to_stdout(|w| {
                        serde_json::to_writer_pretty(&mut *w, &reps).map_err(|e| e.to_string())?;
                        writeln!(w).map_err(|e| e.to_string())
                    })?,
                },
            }
            Ok(!reps.iter().any(ErrorReport::any_failed))
        }
        Command::Converge { common, sequence } => {
            let mut r = resolve(common, sequence)?;
            if r.sequence.is_empty() {
                r.sequence = if r.intervals.len() >= 3 {
                    r.intervals.clone()
                } else {
                    let l = r.intervals[0];
                    vec![l, 2 * l, 4 * l]
                };
            }
            let conv = harness::convergence_study(&r.base, &r.sequence)?;
            let mut finest = r.base.clone();
            finest.intervals = *r.sequence.last().expect("validated length");
            let mut rep = harness::run_experiment(&finest)?;
            summarize(&rep);
            summarize_convergence(&conv);
            rep.convergence = Some(conv.clone());
            match (&r.out, r.format) {
                (_, Format::Json) => emit(&rep, &r)?,
                (Some(path), Format::Csv) => {
                    let file = fs::File::create(path).map_err(|source| Error::Io {
                        path: path.clone(),
                        source,
                    })?;
                    harness::write_convergence_csv(&conv, file).map_err(|e| Error::Serialization(e.to_string()))?
                }
                (None, Format::Csv) => {
                    to_stdout(|w| harness::write_convergence_csv(&conv, w).map_err(|e| e.to_string()))?
                }
            }
            Ok(!rep.any_failed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
