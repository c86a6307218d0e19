//! Command-line front end. Exit status: 0 on success or PASS, 2 on a FAIL
//! verdict, 1 on usage and runtime errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::harness::{build_counterexample, run_kadec_klee, run_suite, AmplitudeRule, Verdict};
use crate::io::{
    format_float, parse_operator, parse_phi, record_header, record_rows, write_records, write_table_to, RunConfig,
};
use crate::norm::{amemiya_norm, luxemburg_norm, p_norm, NormMethod, NormReport, DEFAULT_TOL};
use crate::operator::{singular_value_profile, BlockOperator};
use crate::orlicz::{conjugate_value, delta2_probe, ConjugateGrid, Delta2Grid};

const DELTA2_THRESHOLD: f64 = 1e6;

#[derive(Debug, Parser)]
#[command(name = "nc-orlicz", version, about = "Orlicz norms on finite block-matrix algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the singular value step profile as CSV (level,width).
    Svf { op_file: PathBuf },
    /// Print a norm report as JSON.
    Norm {
        op_file: PathBuf,
        #[arg(long)]
        phi: String,
        /// luxemburg, amemiya or p:<p>
        #[arg(long, default_value = "luxemburg")]
        method: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Tabulate the complementary function on a log grid as CSV (u,psi).
    Conjugate {
        #[arg(long)]
        phi: String,
        /// u_min:u_max:count
        #[arg(long, default_value = "1e-3:1e3:61")]
        grid: String,
    },
    /// Probe the doubling condition and print the report as JSON.
    Delta2 {
        #[arg(long)]
        phi: String,
    },
    /// Run a Kadec-Klee experiment from a TOML config.
    KkRun {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the non-doubling counterexample and print it as JSON.
    Counterexample {
        #[arg(long)]
        phi: String,
        #[arg(short = 'K', default_value_t = 12)]
        k: usize,
    },
    /// Run the full battery and write CSV files to a directory.
    Suite {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = "suite-out")]
        out: PathBuf,
    },
}

type CliResult = Result<i32, String>;

/// Parses `argv` (program name first), runs the subcommand and returns the exit status.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            1
        }
    }
}

fn read_operator(path: &Path) -> Result<BlockOperator, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_operator(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn print_json<T: serde::Serialize>(value: &T) -> CliResult {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    emit(&text)?;
    Ok(0)
}

/// Writes a line to stdout; a closed pipe (`… | head`) is not an error.
fn emit(line: &str) -> Result<(), String> {
    match writeln!(std::io::stdout().lock(), "{line}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.to_string()),
        _ => Ok(()),
    }
}

fn parse_grid(text: &str) -> Result<ConjugateGrid, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, c] = parts[..] else {
        return Err(format!("grid {text:?} is not u_min:u_max:count"));
    };
    let bad = |e: &dyn std::fmt::Display| format!("grid {text:?}: {e}");
    let u_min: f64 = a.parse().map_err(|e| bad(&e))?;
    let u_max: f64 = b.parse().map_err(|e| bad(&e))?;
    let count: usize = c.parse().map_err(|e| bad(&e))?;
    ConjugateGrid::new(u_min, u_max, count).map_err(|e| bad(&e))
}

fn stdout_table(header: &[String], rows: &[Vec<String>]) -> Result<(), String> {
    match write_table_to(std::io::stdout().lock(), header, rows) {
        Err(crate::io::IoError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(crate::io::IoError::Csv(e)) if matches!(e.kind(), csv::ErrorKind::Io(io) if io.kind() == std::io::ErrorKind::BrokenPipe) => Ok(()),
        other => other.map_err(|e| e.to_string()),
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Svf { op_file } => {
            let x = read_operator(&op_file)?;
            let profile = singular_value_profile(&x).map_err(|e| e.to_string())?;
            let rows: Vec<Vec<String>> =
                profile.steps().iter().map(|s| vec![format_float(s.level), format_float(s.width)]).collect();
            stdout_table(&["level".into(), "width".into()], &rows)?;
            Ok(0)
        }
        Command::Norm { op_file, phi, method, tol } => {
            let x = read_operator(&op_file)?;
            let report = match method.as_str() {
                "luxemburg" => luxemburg_norm(&parse_phi(&phi).map_err(|e| e.to_string())?, &x, tol),
                "amemiya" => amemiya_norm(&parse_phi(&phi).map_err(|e| e.to_string())?, &x, tol),
                m => {
                    let p: f64 = m
                        .strip_prefix("p:")
                        .and_then(|p| p.parse().ok())
                        .ok_or_else(|| format!("unknown method {m:?}; expected luxemburg, amemiya or p:<p>"))?;
                    p_norm(&x, p).map(|value| NormReport {
                        value,
                        method: NormMethod::PNorm,
                        bracket: (value, value),
                        iterations: 0,
                        residual: 0.0,
                        minimizer_k: None,
                    })
                }
            }
            .map_err(|e| e.to_string())?;
            print_json(&report)
        }
        Command::Conjugate { phi, grid } => {
            let phi = parse_phi(&phi).map_err(|e| e.to_string())?;
            let grid = parse_grid(&grid)?;
            let points = grid.points().map_err(|e| e.to_string())?;
            let rows = points
                .iter()
                .map(|&u| conjugate_value(&phi, u).map(|v| vec![format_float(u), format_float(v)]))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?;
            stdout_table(&["u".into(), "psi".into()], &rows)?;
            Ok(0)
        }
        Command::Delta2 { phi } => {
            let phi = parse_phi(&phi).map_err(|e| e.to_string())?;
            let report = delta2_probe(&phi, Delta2Grid::default(), DELTA2_THRESHOLD).map_err(|e| e.to_string())?;
            print_json(&report)
        }
        Command::KkRun { config, out } => {
            let cfg = RunConfig::load(&config).map_err(|e| e.to_string())?;
            let phi = cfg.orlicz().map_err(|e| e.to_string())?;
            let family = cfg.sequence_family().map_err(|e| e.to_string())?;
            let outcome = run_kadec_klee(&phi, &family, &cfg.eps, cfg.tol).map_err(|e| e.to_string())?;
            let verdict_line = format!("verdict: {}", outcome.verdict);
            match out.or(cfg.output) {
                Some(path) => {
                    write_records(&outcome.records, cfg.eps.len(), &path).map_err(|e| e.to_string())?;
                    emit(&verdict_line)?;
                }
                None => {
                    let rows = record_rows(&outcome.records, cfg.eps.len()).map_err(|e| e.to_string())?;
                    stdout_table(&record_header(cfg.eps.len()), &rows)?;
                    // keep stdout pure CSV
                    eprintln!("{verdict_line}");
                }
            }
            Ok(if outcome.verdict == Verdict::Fail { 2 } else { 0 })
        }
        Command::Counterexample { phi, k } => {
            let phi = parse_phi(&phi).map_err(|e| e.to_string())?;
            let inst = build_counterexample(&phi, k, &AmplitudeRule::Squares).map_err(|e| e.to_string())?;
            print_json(&inst)
        }
        Command::Suite { seed, out } => {
            let summary = run_suite(seed, &out).map_err(|e| e.to_string())?;
            for e in &summary.entries {
                let status = if e.verdict == e.expected { "ok" } else { "UNEXPECTED" };
                emit(&format!("{:<32} expected {:<16} got {:<16} {status}", e.name, e.expected.as_str(), e.verdict.as_str()))?;
            }
            Ok(if summary.all_as_expected() { 0 } else { 2 })
        }
    }
}
