//! `ordstat` command-line front end.
//!
//! Each subcommand parses its flags, calls one library entry point and hands
//! the result to [`report::Report`] for CSV or JSON rendering. Exit codes:
//! 0 on success, 2 for usage or domain errors, 3 for I/O failures.

pub mod grid;
pub mod report;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;

use ordstat_core::joint_dist::evaluate_grid;
use ordstat_core::mc_oracle::{mc_event_prob, mc_inspection_pmf, Draw};
use ordstat_core::mrl::residual_report;
use ordstat_core::{
    expected_inspections, inspection_pmf, Error, Law, LifetimeModel, QuadratureSpec, Rational, RngSeed,
    SystemConfig, Window,
};

use grid::GridSpec;
use report::{Cell, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Upper probability of the default x-grid.
const DEFAULT_GRID_QUANTILE: f64 = 0.999;
const DEFAULT_GRID_STEPS: usize = 100;

#[derive(Debug, Parser)]
#[command(name = "ordstat", version, about = "Order-statistic laws and inspection counts for k-out-of-n systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct SystemArgs {
    /// Number of components.
    #[arg(long)]
    n: usize,
    /// The system fails at the r-th component failure.
    #[arg(long)]
    r: usize,
}

impl SystemArgs {
    fn config(&self) -> Result<SystemConfig, Error> {
        SystemConfig::new(self.n, self.r)
    }

    fn record(&self, report: &mut Report) {
        report.input("n", self.n).input("r", self.r);
    }
}

#[derive(Debug, Args)]
struct ModelArg {
    /// Lifetime law: exp:RATE, weibull:SHAPE,SCALE, uniform:LO,HI or empirical:@FILE.
    #[arg(long)]
    model: String,
}

impl ModelArg {
    fn load(&self) -> Result<LifetimeModel, Error> {
        LifetimeModel::parse_spec(&self.model)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// P{X_1 <= x, X_(r:n) <= t} over an x-grid, for one t or a t-grid.
    JointCdf {
        #[command(flatten)]
        sys: SystemArgs,
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, conflicts_with = "t_grid", required_unless_present = "t_grid")]
        t: Option<f64>,
        #[arg(long)]
        t_grid: Option<GridSpec>,
        /// start:stop:step; defaults to 100 steps over [0, 0.999 quantile].
        #[arg(long)]
        x_grid: Option<GridSpec>,
    },
    /// Conditional CDF of X_1 given X_(r:n) <= t, t1 <= X_(r:n) <= t2, or X_(r:n) = t.
    CondCdf {
        #[command(flatten)]
        sys: SystemArgs,
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        event: Conditioning,
        #[arg(long)]
        x_grid: Option<GridSpec>,
    },
    /// Exact pmf of the number of inspections needed to find k failed components.
    Inspections {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        k: usize,
        /// Emit only the expected number of inspections.
        #[arg(long)]
        expected: bool,
    },
    /// Signed mean residual life and mean past given t1 <= X_(r:n) <= t2.
    Mrl {
        #[command(flatten)]
        sys: SystemArgs,
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        t1: f64,
        #[arg(long)]
        t2: f64,
        /// Tail mass 1 - F(U) beyond the integration cutoff U.
        #[arg(long, default_value_t = 1e-12)]
        tail_mass: f64,
    },
    /// Monte-Carlo estimates of the joint event or the inspection pmf.
    Simulate {
        #[arg(long, value_enum)]
        target: Target,
        #[command(flatten)]
        sys: SystemArgs,
        #[command(flatten)]
        model: ModelArg,
        /// Detection target; required for --target inspections.
        #[arg(long, required_if_eq("target", "inspections"))]
        k: Option<usize>,
        /// Event threshold on X_1; required for --target event.
        #[arg(long, required_if_eq("target", "event"))]
        x: Option<f64>,
        /// Event threshold on X_(r:n); required for --target event.
        #[arg(long, required_if_eq("target", "event"))]
        t: Option<f64>,
        #[arg(long, default_value_t = 100_000)]
        reps: u64,
        #[arg(long, env = "ORDSTAT_SEED", default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = true)]
struct Conditioning {
    /// Condition on X_(r:n) <= t.
    #[arg(long, conflicts_with_all = ["t1", "t2", "at"])]
    t: Option<f64>,
    /// Condition on t1 <= X_(r:n) <= t2.
    #[arg(long, requires = "t2", conflicts_with = "at")]
    t1: Option<f64>,
    #[arg(long, requires = "t1", conflicts_with = "at")]
    t2: Option<f64>,
    /// Condition on X_(r:n) = t.
    #[arg(long)]
    at: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    /// P{X_1 <= x, X_(r:n) <= t}
    Event,
    /// pmf of the inspection count
    Inspections,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => Failure::Io(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

/// Parses `argv` (including the program name), runs the command and writes the
/// report to `out` or to `--output`. Diagnostics go to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = execute(&cli.command).and_then(|report| emit(&report, cli.format, cli.output.as_deref(), out));
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_IO
        }
    }
}

fn emit(report: &Report, format: Format, path: Option<&std::path::Path>, out: &mut dyn Write) -> Result<(), Failure> {
    let text = match format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    let io_err = |e: io::Error| Failure::Io(e.to_string());
    match path {
        Some(p) => {
            let mut f = File::create(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
            f.write_all(text.as_bytes()).map_err(io_err)?;
            f.flush().map_err(io_err)
        }
        None => {
            out.write_all(text.as_bytes()).map_err(io_err)?;
            out.flush().map_err(io_err)
        }
    }
}

fn execute(cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::JointCdf { sys, model, t, t_grid, x_grid } => joint_cdf(sys, model, *t, t_grid.as_ref(), x_grid.as_ref()),
        Command::CondCdf { sys, model, event, x_grid } => cond_cdf(sys, model, event, x_grid.as_ref()),
        Command::Inspections { sys, k, expected } => inspections(sys, *k, *expected),
        Command::Mrl { sys, model, t1, t2, tail_mass } => mrl(sys, model, *t1, *t2, *tail_mass),
        Command::Simulate { target, sys, model, k, x, t, reps, seed } => match target {
            Target::Event => simulate_event(sys, model, x.unwrap_or_default(), t.unwrap_or_default(), *reps, *seed),
            Target::Inspections => simulate_inspections(sys, model, k.unwrap_or_default(), *reps, *seed),
        },
    }
}

fn x_points(model: &LifetimeModel, grid: Option<&GridSpec>) -> Result<(GridSpec, Vec<f64>), Failure> {
    let spec = match grid {
        Some(g) => g.clone(),
        None => GridSpec::spanning(0.0, model.quantile(DEFAULT_GRID_QUANTILE)?, DEFAULT_GRID_STEPS),
    };
    let points = spec.points();
    Ok((spec, points))
}

fn joint_cdf(
    sys: &SystemArgs,
    model: &ModelArg,
    t: Option<f64>,
    t_grid: Option<&GridSpec>,
    x_grid: Option<&GridSpec>,
) -> Result<Report, Failure> {
    let cfg = sys.config()?;
    let m = model.load()?;
    let (xs_spec, xs) = x_points(&m, x_grid)?;
    let ts = match (t, t_grid) {
        (Some(t), _) => vec![t],
        (None, Some(g)) => g.points(),
        (None, None) => unreachable!("clap requires --t or --t-grid"),
    };
    let mut report = Report::new("joint-cdf", vec!["t", "x", "value"]);
    sys.record(&mut report);
    report.input("model", m.to_string()).input("x_grid", xs_spec.to_string());
    match t_grid {
        Some(g) if t.is_none() => report.input("t_grid", g.to_string()),
        _ => report.input("t", t.unwrap_or_default()),
    };
    for t in ts {
        let grid = evaluate_grid(&cfg, &m, &Law::Joint { t }, &xs)?;
        for (x, v) in grid.iter() {
            report.push(vec![Cell::Dec(t), Cell::Dec(x), Cell::Dec(v)]);
        }
    }
    Ok(report)
}

fn cond_cdf(sys: &SystemArgs, model: &ModelArg, event: &Conditioning, x_grid: Option<&GridSpec>) -> Result<Report, Failure> {
    let cfg = sys.config()?;
    let m = model.load()?;
    let (xs_spec, xs) = x_points(&m, x_grid)?;
    let mut report = Report::new("cond-cdf", vec!["x", "value"]);
    sys.record(&mut report);
    report.input("model", m.to_string()).input("x_grid", xs_spec.to_string());
    let law = match (event.t, event.t1, event.t2, event.at) {
        (Some(t), None, None, None) => {
            report.input("event", "leq").input("t", t);
            Law::GivenLeq { t }
        }
        (None, Some(t1), Some(t2), None) => {
            report.input("event", "between").input("t1", t1).input("t2", t2);
            Law::Between(Window::new(t1, t2)?)
        }
        (None, None, None, Some(t)) => {
            report.input("event", "eq").input("t", t);
            Law::GivenEq { t }
        }
        _ => return Err(Failure::Usage("give exactly one of --t, --t1 with --t2, or --at".into())),
    };
    for (x, v) in evaluate_grid(&cfg, &m, &law, &xs)?.iter() {
        report.push(vec![Cell::Dec(x), Cell::Dec(v)]);
    }
    Ok(report)
}

fn fraction_cells(p: &Rational) -> [Cell; 3] {
    [
        Cell::Text(p.numer().to_string()),
        Cell::Text(p.denom().to_string()),
        Cell::Dec(p.to_f64().unwrap_or(f64::NAN)),
    ]
}

fn inspections(sys: &SystemArgs, k: usize, expected: bool) -> Result<Report, Failure> {
    let cfg = sys.config()?;
    let pmf = inspection_pmf(&cfg, k)?;
    let mut report = if expected {
        Report::new("inspections", vec!["expected", "expected_decimal"])
    } else {
        Report::new("inspections", vec!["m", "numerator", "denominator", "probability"])
    };
    sys.record(&mut report);
    report.input("k", k).input("expected", expected);
    if expected {
        let e = expected_inspections(&pmf);
        report.push(vec![Cell::Text(e.to_string()), Cell::Dec(e.to_f64().unwrap_or(f64::NAN))]);
    } else {
        for (m, p) in pmf.iter() {
            let [num, den, dec] = fraction_cells(p);
            report.push(vec![Cell::Int(m as u64), num, den, dec]);
        }
    }
    Ok(report)
}

fn mrl(sys: &SystemArgs, model: &ModelArg, t1: f64, t2: f64, tail_mass: f64) -> Result<Report, Failure> {
    let cfg = sys.config()?;
    let m = model.load()?;
    let w = Window::new(t1, t2)?;
    let quad = QuadratureSpec { tail_mass, ..QuadratureSpec::default() };
    let rep = residual_report(&cfg, &m, &w, &quad)?;
    let mut report = Report::new("mrl", vec!["t1", "t2", "phi", "psi", "truncation_bound"]);
    sys.record(&mut report);
    report.input("model", m.to_string()).input("tail_mass", tail_mass);
    report.push(vec![Cell::Dec(t1), Cell::Dec(t2), Cell::Dec(rep.phi), Cell::Dec(rep.psi), Cell::Sci(rep.truncation_bound)]);
    Ok(report)
}

fn simulate_event(sys: &SystemArgs, model: &ModelArg, x: f64, t: f64, reps: u64, seed: u64) -> Result<Report, Failure> {
    let cfg = sys.config()?;
    let m = model.load()?;
    let r = cfg.r();
    let est = mc_event_prob(&cfg, &m, |d: &Draw<'_>| d.component(1) <= x && d.order_stat(r) <= t, reps, RngSeed(seed))?;
    let mut report = Report::new("simulate", vec!["estimate", "std_error", "replications"]);
    sys.record(&mut report);
    report.input("model", m.to_string()).input("target", "event").input("x", x).input("t", t).input("reps", reps);
    report.seed = Some(seed);
    report.push(vec![Cell::Dec(est.estimate), Cell::Dec(est.std_error), Cell::Int(est.replications)]);
    Ok(report)
}

fn simulate_inspections(sys: &SystemArgs, model: &ModelArg, k: usize, reps: u64, seed: u64) -> Result<Report, Failure> {
    let cfg = sys.config()?;
    let m = model.load()?;
    let est = mc_inspection_pmf(&cfg, &m, k, reps, RngSeed(seed))?;
    let mut report = Report::new("simulate", vec!["m", "estimate", "std_error", "replications"]);
    sys.record(&mut report);
    report.input("model", m.to_string()).input("target", "inspections").input("k", k).input("reps", reps);
    report.seed = Some(seed);
    for (m, e) in est {
        report.push(vec![Cell::Int(m as u64), Cell::Dec(e.estimate), Cell::Dec(e.std_error), Cell::Int(e.replications)]);
    }
    Ok(report)
}
