//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a check suite failed, 2 usage, 3 I/O,
//! 4 validation.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::parser::ValueSource;
use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use septenary_core::engine::{chsh_scan, ChshScan, CorrelationSource, DEFAULT_BIN_WIDTH_DEG};
use septenary_core::oracle::{chsh_analytic, epr_expectation, ghz_expectation};
use septenary_core::{EngineError, Experiment, TrialConfig};
use serde_json::json;
use thiserror::Error;

use crate::checks::{run_checks, CheckConfig};
use crate::io::{render_svg, write_records, SeedSource, SummaryReport};
use crate::parallel::{run_parallel, ParallelError};

/// Environment variable read when `--seed` is absent.
pub const SEED_ENV: &str = "SEPTENARY_SEED";

#[derive(Debug, Parser)]
#[command(name = "septenary", version, about = "Event-by-event correlation simulator on the 7-sphere algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Two-particle simulation binned by the angle between a and b.
    Epr(SimArgs),
    /// Four-particle simulation binned by phi_a + phi_b - phi_c - phi_d.
    ///
    /// Fixed angles are recorded angles: the detectors sit at
    /// (-a, b, c, 180 - d) degrees.
    Ghz(SimArgs),
    /// Algebraic verification suites with a JSON report.
    Check(CheckArgs),
    /// Closed-form predictions.
    Analytic {
        #[command(subcommand)]
        which: AnalyticCommand,
    },
    /// Grid scan of the CHSH string.
    Chsh(ChshArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Debug)]
struct AngleList(Vec<f64>);

fn parse_angles(s: &str) -> Result<AngleList, String> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            match t.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(format!("`{t}` is not a finite angle")),
            }
        })
        .collect::<Result<Vec<_>, _>>()
        .map(AngleList)
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

fn parse_tolerance(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 0.0 => Ok(v),
        _ => Err(format!("`{s}` is not a non-negative number")),
    }
}

fn parse_degrees(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a finite angle")),
    }
}

#[derive(Debug, Args)]
struct SimArgs {
    /// Number of trials.
    #[arg(long, default_value_t = 200_000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// RNG seed.
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    /// Histogram bin width in degrees.
    #[arg(long = "bin-deg", default_value_t = DEFAULT_BIN_WIDTH_DEG, allow_negative_numbers = true)]
    bin_deg: f64,
    /// Same settings every trial, comma separated degrees.
    #[arg(long = "fixed-angles", value_parser = parse_angles, allow_hyphen_values = true, conflicts_with = "random")]
    fixed_angles: Option<AngleList>,
    /// Fresh random planar settings every trial (the default).
    #[arg(long)]
    random: bool,
    /// Per-trial CSV output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary JSON output.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// SVG chart output.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    /// What to print on stdout.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Random samples per floating-point suite.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    /// Error tolerance.
    #[arg(long, default_value_t = 1e-10, value_parser = parse_tolerance)]
    tol: f64,
    /// Seed for random samples.
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    /// Also write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum AnalyticCommand {
    /// `-cos theta`.
    Epr {
        /// Angle between the settings, degrees.
        #[arg(long, value_parser = parse_degrees, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Four-particle expectation.
    Ghz {
        /// Four polar angles, degrees.
        #[arg(long, value_parser = parse_angles, allow_hyphen_values = true)]
        thetas: AngleList,
        /// Four azimuths, degrees.
        #[arg(long, value_parser = parse_angles, allow_hyphen_values = true)]
        phis: AngleList,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// CHSH string of the two-particle prediction at planar x, x', y, y'.
    Chsh {
        /// Four azimuths, degrees.
        #[arg(long, value_parser = parse_angles, allow_hyphen_values = true)]
        angles: AngleList,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Args)]
struct ChshArgs {
    /// Grid spacing in degrees.
    #[arg(long = "grid-deg", default_value_t = 5.0, value_parser = parse_positive)]
    grid_deg: f64,
    /// Use simulated correlations instead of `-cos`.
    #[arg(long)]
    simulated: bool,
    /// Trials per grid pair when simulated.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Seed when simulated.
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    /// Write the `x,y,E` table as CSV.
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Validation(String),
    #[error("one or more check suites failed")]
    ChecksFailed,
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::ChecksFailed => 1,
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Validation(_) => 4,
        }
    }

    fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }

    fn stdout(source: io::Error) -> Self {
        CliError::Io { path: "<stdout>".into(), source }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<ParallelError> for CliError {
    fn from(e: ParallelError) -> Self {
        CliError::Validation(e.to_string())
    }
}

fn seed_source(m: &ArgMatches) -> SeedSource {
    match m.value_source("seed") {
        Some(ValueSource::CommandLine) => SeedSource::Flag,
        Some(ValueSource::EnvVariable) => SeedSource::Env,
        _ => SeedSource::Default,
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

fn write_file(path: &Path, body: &[u8]) -> Result<(), CliError> {
    let mut f = create(path)?;
    f.write_all(body).and_then(|()| f.flush()).map_err(|e| CliError::io(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => CliError::io(path, e),
        other => CliError::io(path, io::Error::other(format!("{other:?}"))),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap_or_else(|e| format!("{{\"error\":\"{e}\"}}"));
    s.push('\n');
    s
}

fn simulate(experiment: Experiment, args: &SimArgs, source: SeedSource, out: &mut dyn Write) -> Result<(), CliError> {
    let mut cfg = TrialConfig::new(experiment, args.trials, args.seed).with_bin_width(args.bin_deg);
    if let Some(AngleList(a)) = &args.fixed_angles {
        cfg = cfg.with_fixed_angles(a.clone());
    }
    let threads = args.threads.map(|t| usize::try_from(t).unwrap_or(usize::MAX));
    let run = run_parallel(&cfg, threads)?;
    let report = SummaryReport { summary: run.summary, seed_source: source };

    if let Some(p) = &args.out {
        let f = create(p)?;
        write_records(f, experiment, &run.records).map_err(|e| csv_error(p, e))?;
    }
    if let Some(p) = &args.summary {
        write_file(p, to_json(&report).as_bytes())?;
    }
    if let Some(p) = &args.plot {
        write_file(p, render_svg(&report.summary).as_bytes())?;
    }

    match args.format {
        Format::Json => out.write_all(to_json(&report).as_bytes()).map_err(CliError::stdout),
        Format::Csv => write_records(out, experiment, &run.records).map_err(|e| csv_error(Path::new("<stdout>"), e)),
        Format::Text => {
            let s = &report.summary;
            let mut t = String::new();
            t += &format!("trials {}\nseed {} ({:?})\nmean corr {}\n", s.trials, s.seed, source, s.mean_corr);
            for (k, v) in &s.ave_outcomes {
                t += &format!("ave {k} {v}\n");
            }
            t += "angle_deg mean_corr mean_prediction count\n";
            for b in &s.bins {
                t += &format!("{} {} {} {}\n", b.angle_deg, b.mean_corr, b.mean_prediction, b.count);
            }
            out.write_all(t.as_bytes()).map_err(CliError::stdout)
        }
    }
}

fn check(args: &CheckArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let samples = usize::try_from(args.samples).map_err(|_| CliError::Usage("too many samples".into()))?;
    let report = run_checks(&CheckConfig { samples, tol: args.tol, seed: args.seed });
    let body = to_json(&report);
    if let Some(p) = &args.report {
        write_file(p, body.as_bytes())?;
    }
    out.write_all(body.as_bytes()).map_err(CliError::stdout)?;
    if report.all_passed {
        Ok(())
    } else {
        Err(CliError::ChecksFailed)
    }
}

fn four(list: &AngleList, what: &str) -> Result<[f64; 4], CliError> {
    <[f64; 4]>::try_from(list.0.as_slice())
        .map(|a| a.map(f64::to_radians))
        .map_err(|_| CliError::Usage(format!("--{what} needs exactly four angles, got {}", list.0.len())))
}

fn print_value(out: &mut dyn Write, format: Format, name: &str, v: f64) -> Result<(), CliError> {
    let body = match format {
        Format::Json => to_json(&json!({ name: v })),
        Format::Csv => format!("{name}\n{v}\n"),
        Format::Text => format!("{v}\n"),
    };
    out.write_all(body.as_bytes()).map_err(CliError::stdout)
}

fn analytic(which: &AnalyticCommand, out: &mut dyn Write) -> Result<(), CliError> {
    match which {
        AnalyticCommand::Epr { theta, format } => {
            print_value(out, *format, "expectation", epr_expectation(theta.to_radians()))
        }
        AnalyticCommand::Ghz { thetas, phis, format } => {
            let v = ghz_expectation(four(thetas, "thetas")?, four(phis, "phis")?);
            print_value(out, *format, "expectation", v)
        }
        AnalyticCommand::Chsh { angles, format } => {
            print_value(out, *format, "s", chsh_analytic(four(angles, "angles")?))
        }
    }
}

fn write_table(path: &Path, scan: &ChshScan) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(create(path)?);
    let mut rows = || -> csv::Result<()> {
        w.write_record(["x", "y", "E"])?;
        for (i, x) in scan.angles_deg.iter().enumerate() {
            for (j, y) in scan.angles_deg.iter().enumerate() {
                w.write_record([x.to_string(), y.to_string(), scan.correlation(i, j).to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    };
    rows().map_err(|e| csv_error(path, e))
}

fn chsh(args: &ChshArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let source = if args.simulated {
        CorrelationSource::Simulated { trials: args.trials, seed: args.seed }
    } else {
        CorrelationSource::Analytic
    };
    let scan = chsh_scan(args.grid_deg, source)?;
    if let Some(p) = &args.table {
        write_table(p, &scan)?;
    }
    let [x, xp, y, yp] = scan.argmax_deg;
    let body = match args.format {
        Format::Json => to_json(&json!({
            "grid_step_deg": scan.grid_step_deg,
            "source": source,
            "points": scan.points,
            "max_abs_s": scan.max_abs_s,
            "s_at_argmax": scan.s_at_argmax,
            "argmax_deg": scan.argmax_deg,
        })),
        Format::Csv => format!(
            "grid_step_deg,max_abs_s,s,x,x_prime,y,y_prime\n{},{},{},{x},{xp},{y},{yp}\n",
            scan.grid_step_deg, scan.max_abs_s, scan.s_at_argmax
        ),
        Format::Text => format!(
            "max |S| {}\nS {}\nat x={x} x'={xp} y={y} y'={yp}\npoints {}\n",
            scan.max_abs_s, scan.s_at_argmax, scan.points
        ),
    };
    out.write_all(body.as_bytes()).map_err(CliError::stdout)
}

fn dispatch(cli: &Cli, matches: &ArgMatches, out: &mut dyn Write) -> Result<(), CliError> {
    let sub = matches.subcommand().map(|(_, m)| m);
    match &cli.command {
        Command::Epr(a) => simulate(Experiment::Epr, a, sub.map_or(SeedSource::Default, seed_source), out),
        Command::Ghz(a) => simulate(Experiment::Ghz, a, sub.map_or(SeedSource::Default, seed_source), out),
        Command::Check(a) => check(a, out),
        Command::Analytic { which } => analytic(which, out),
        Command::Chsh(a) => chsh(a, out),
    }
}

/// Parses `args` (program name first), runs the command writing to `out`,
/// and returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match Cli::command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = Cli::from_arg_matches(&matches)
        .map_err(|e| CliError::Usage(e.to_string()))
        .and_then(|cli| dispatch(&cli, &matches, out));
    match result {
        Ok(()) => 0,
        Err(e) => {
            if !matches!(e, CliError::ChecksFailed) {
                eprintln!("error: {e}");
            }
            e.code()
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    let code = run_with(std::env::args_os(), &mut lock);
    let _ = lock.flush();
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let code = run_with(std::iter::once("septenary").chain(args.iter().copied()), &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn command_line_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn analytic_values() {
        let (code, out) = run(&["analytic", "epr", "--theta", "60"]);
        assert_eq!(code, 0);
        assert!((out.trim().parse::<f64>().unwrap() + 0.5).abs() < 1e-15);
        let (code, out) = run(&["analytic", "ghz", "--thetas", "90,90,90,90", "--phis", "0,0,0,0"]);
        assert_eq!(code, 0);
        assert!((out.trim().parse::<f64>().unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn angle_lists_parse() {
        assert_eq!(parse_angles("30, -45.5").unwrap().0, vec![30.0, -45.5]);
        assert!(parse_angles("30,x").is_err());
        assert!(parse_angles("inf").is_err());
    }

    #[test]
    fn zero_trials_is_a_usage_error() {
        assert_eq!(run(&["epr", "--trials", "0"]).0, 2);
    }

    #[test]
    fn wrong_angle_count_is_a_validation_error() {
        assert_eq!(run(&["ghz", "--trials", "5", "--fixed-angles", "1,2"]).0, 4);
        assert_eq!(run(&["analytic", "ghz", "--thetas", "1,2", "--phis", "0,0,0,0"]).0, 2);
    }

    #[test]
    fn bad_bin_width_is_a_validation_error() {
        assert_eq!(run(&["epr", "--trials", "5", "--bin-deg", "-1"]).0, 4);
    }
}
