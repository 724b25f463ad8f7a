//! Command-line surface: parameter sweeps, claim verification, and state
//! inspection for the helicity-entangled state family.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use heliq::discord::{
    GridSpec, discord_bruteforce, geometric_discord_1norm, geometric_discord_2norm, global_discord,
};
use heliq::entanglement::{log_negativity_blocked, pi_tangle_blocked, trace_norm_negativity_blocked};
use heliq::states::{bipartite_werner, tripartite_werner, unruh_bipartite};
use heliq::{AccelerationParam, MixingProbability, TruncationPolicy, UnruhWeights};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Parser)]
#[command(
    name = "heliq",
    about = "Quantum correlations of helicity-entangled states in accelerated frames",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a correlation measure over (omega, p, qr2) and write CSV/JSON
    Sweep(SweepArgs),
    /// Run the verification suite and emit its JSON report
    Verify(VerifyArgs),
    /// Print the effective helicity matrix of one state
    State(StateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Measure {
    Negativity,
    LogNegativity,
    PiTangle,
    Discord,
    GlobalDiscord,
    Geo2,
    Geo1,
}

impl Measure {
    fn name(self) -> &'static str {
        match self {
            Measure::Negativity => "negativity",
            Measure::LogNegativity => "log_negativity",
            Measure::PiTangle => "pi_tangle",
            Measure::Discord => "discord",
            Measure::GlobalDiscord => "global_discord",
            Measure::Geo2 => "geo2",
            Measure::Geo1 => "geo1",
        }
    }

    /// Tripartite measures live on the single-mode three-party state.
    fn tripartite(self) -> bool {
        matches!(self, Measure::PiTangle | Measure::GlobalDiscord)
    }
}

#[derive(Args)]
struct SweepArgs {
    /// Correlation measure to sweep
    #[arg(long, value_enum)]
    measure: Measure,
    /// Acceleration parameter: a single value or start:stop:step
    #[arg(long, default_value = "0.5")]
    omega: String,
    /// Mixing probability: a single value or start:stop:step
    #[arg(long, default_value = "1.0")]
    p: String,
    /// Squared right-Unruh weight: a single value or start:stop:step
    #[arg(long, default_value = "1.0")]
    qr2: String,
    /// Truncation tail mass
    #[arg(long, default_value_t = 1e-12)]
    epsilon: f64,
    /// Theta steps of the measurement grid
    #[arg(long = "grid-theta", default_value_t = 61)]
    grid_theta: usize,
    /// Phi steps of the measurement grid
    #[arg(long = "grid-phi", default_value_t = 61)]
    grid_phi: usize,
    /// Refinement rounds of the measurement grid
    #[arg(long = "refine", default_value_t = 3)]
    refine: usize,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct VerifyArgs {
    /// Write the JSON report here as well as stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Bipartite,
    Tripartite,
    Unruh,
}

#[derive(Args)]
struct StateArgs {
    /// State family
    #[arg(value_enum)]
    family: Family,
    /// Acceleration parameter (used for both accelerated observers in the
    /// tripartite family)
    #[arg(long, default_value_t = 0.5)]
    omega: f64,
    /// Mixing probability
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// Squared right-Unruh weight (unruh family)
    #[arg(long, default_value_t = 1.0)]
    qr2: f64,
    /// Truncation tail mass
    #[arg(long, default_value_t = 1e-12)]
    epsilon: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Sweep(args) => match run_sweep(&args) {
            Ok(clean) => {
                if clean {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Err(err) => err.exit_code(),
        },
        Command::Verify(args) => match run_verify(&args) {
            Ok(all_pass) => {
                if all_pass {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Err(err) => err.exit_code(),
        },
        Command::State(args) => match run_state(&args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(err) => err.exit_code(),
        },
    }
}

enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    fn exit_code(self) -> ExitCode {
        match self {
            CliError::Usage(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
            CliError::Failure(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(1)
            }
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses "x" or "start:stop:step" into the inclusive value list.
fn parse_range(spec: &str, name: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let parse = |s: &str| -> Result<f64, CliError> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| usage(format!("invalid number `{s}` in --{name}")))
    };
    match parts.as_slice() {
        [single] => Ok(vec![parse(single)?]),
        [start, stop, step] => {
            let (start, stop, step) = (parse(start)?, parse(stop)?, parse(step)?);
            if step <= 0.0 {
                return Err(usage(format!("--{name}: step must be positive")));
            }
            let mut values = Vec::new();
            let mut k = 0usize;
            loop {
                let v = start + step * k as f64;
                if v > stop + 1e-9 {
                    break;
                }
                values.push(v);
                k += 1;
            }
            if values.is_empty() {
                return Err(usage(format!("--{name}: empty range {spec}")));
            }
            Ok(values)
        }
        _ => Err(usage(format!(
            "--{name}: expected a value or start:stop:step, got `{spec}`"
        ))),
    }
}

struct Row {
    omega: f64,
    p: f64,
    qr2: f64,
    value: Result<f64, String>,
}

fn grid_spec(args: &SweepArgs) -> Result<GridSpec, CliError> {
    GridSpec::new(args.grid_theta, args.grid_phi, args.refine, 0.25)
        .map_err(|e| usage(e.to_string()))
}

fn sweep_value(
    measure: Measure,
    omega: f64,
    p: f64,
    qr2: f64,
    policy: &TruncationPolicy,
    grid: &GridSpec,
) -> Result<f64, String> {
    let fail = |e: heliq::Error| e.to_string();
    let omega = AccelerationParam::new(omega).map_err(fail)?;
    let p = MixingProbability::new(p).map_err(fail)?;
    if measure.tripartite() {
        let state = tripartite_werner(omega, omega, p, policy).map_err(fail)?;
        return match measure {
            Measure::PiTangle => Ok(pi_tangle_blocked(&state).map_err(fail)?.pi),
            Measure::GlobalDiscord => {
                let eff = state.effective_matrix().map_err(fail)?;
                Ok(global_discord(&eff, grid).map_err(fail)?.value)
            }
            _ => unreachable!(),
        };
    }
    let unruh = UnruhWeights::from_qr_sq(qr2).map_err(fail)?;
    let state = unruh_bipartite(omega, unruh, p, policy).map_err(fail)?;
    match measure {
        Measure::Negativity => Ok(trace_norm_negativity_blocked(&state, "A")
            .map_err(fail)?
            .value),
        Measure::LogNegativity => log_negativity_blocked(&state, "A").map_err(fail),
        Measure::Discord => {
            let eff = state.effective_matrix().map_err(fail)?;
            Ok(discord_bruteforce(&eff, "B", grid).map_err(fail)?.discord)
        }
        Measure::Geo2 => {
            let eff = state.effective_matrix().map_err(fail)?;
            geometric_discord_2norm(&eff, "A", grid).map_err(fail)
        }
        Measure::Geo1 => {
            let eff = state.effective_matrix().map_err(fail)?;
            geometric_discord_1norm(&eff, "A", grid).map_err(fail)
        }
        _ => unreachable!(),
    }
}

fn fmt9(v: f64) -> String {
    format!("{v:.9}")
}

fn run_sweep(args: &SweepArgs) -> Result<bool, CliError> {
    let omegas = parse_range(&args.omega, "omega")?;
    let ps = parse_range(&args.p, "p")?;
    let qr2s = parse_range(&args.qr2, "qr2")?;
    let grid = grid_spec(args)?;
    let policy =
        TruncationPolicy::new(args.epsilon, 512).map_err(|e| usage(e.to_string()))?;
    if args.measure.tripartite() && (qr2s.len() != 1 || qr2s[0] != 1.0) {
        return Err(usage(format!(
            "measure {} is defined on the single-mode tripartite family; use --qr2 1",
            args.measure.name()
        )));
    }

    // row order: omega outer, p middle, qr2 inner
    let mut points = Vec::with_capacity(omegas.len() * ps.len() * qr2s.len());
    for &o in &omegas {
        for &p in &ps {
            for &q in &qr2s {
                points.push((o, p, q));
            }
        }
    }

    let compute = |&(omega, p, qr2): &(f64, f64, f64)| Row {
        omega,
        p,
        qr2,
        value: sweep_value(args.measure, omega, p, qr2, &policy, &grid),
    };
    #[cfg(feature = "parallel")]
    let rows: Vec<Row> = points.par_iter().map(compute).collect();
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Row> = points.iter().map(compute).collect();

    let clean = rows.iter().all(|r| r.value.is_ok());
    let output = match args.format {
        Format::Csv => {
            let mut out = String::from("omega,p,qr2,measure,value\n");
            for row in &rows {
                let _ = match &row.value {
                    Ok(v) => writeln!(
                        out,
                        "{},{},{},{},{}",
                        fmt9(row.omega),
                        fmt9(row.p),
                        fmt9(row.qr2),
                        args.measure.name(),
                        fmt9(*v)
                    ),
                    Err(e) => writeln!(
                        out,
                        "{},{},{},{},,{}",
                        fmt9(row.omega),
                        fmt9(row.p),
                        fmt9(row.qr2),
                        args.measure.name(),
                        e.replace(',', ";")
                    ),
                };
            }
            out
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| match &row.value {
                    Ok(v) => serde_json::json!({
                        "omega": row.omega,
                        "p": row.p,
                        "qr2": row.qr2,
                        "measure": args.measure.name(),
                        "value": v,
                    }),
                    Err(e) => serde_json::json!({
                        "omega": row.omega,
                        "p": row.p,
                        "qr2": row.qr2,
                        "measure": args.measure.name(),
                        "value": serde_json::Value::Null,
                        "error": e,
                    }),
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&rows).expect("serializable rows");
            s.push('\n');
            s
        }
    };

    match &args.out {
        Some(path) => fs::write(path, output)
            .map_err(|e| CliError::Failure(format!("writing {}: {e}", path.display())))?,
        None => print!("{output}"),
    }
    if !clean {
        eprintln!("error: some rows failed; see the error column");
    }
    Ok(clean)
}

fn run_verify(args: &VerifyArgs) -> Result<bool, CliError> {
    let checks = heliq::checks::run_all().map_err(|e| CliError::Failure(e.to_string()))?;
    for check in &checks {
        eprintln!(
            "{} {:<32} expected {:+.9e}  observed {:+.9e}  tol {:.1e}",
            if check.pass { "PASS" } else { "FAIL" },
            check.id,
            check.expected,
            check.observed,
            check.tolerance
        );
    }
    let report: Vec<serde_json::Value> = checks
        .iter()
        .map(|c| {
            serde_json::json!({
                "id": c.id,
                "expected": c.expected,
                "observed": c.observed,
                "tolerance": c.tolerance,
                "pass": c.pass,
            })
        })
        .collect();
    let mut json = serde_json::to_string_pretty(&report).expect("serializable report");
    json.push('\n');
    if let Some(path) = &args.out {
        fs::write(path, &json)
            .map_err(|e| CliError::Failure(format!("writing {}: {e}", path.display())))?;
    }
    print!("{json}");
    Ok(checks.iter().all(|c| c.pass))
}

fn run_state(args: &StateArgs) -> Result<(), CliError> {
    let fail = |e: heliq::Error| usage(e.to_string());
    let omega = AccelerationParam::new(args.omega).map_err(fail)?;
    let p = MixingProbability::new(args.p).map_err(fail)?;
    let policy = TruncationPolicy::new(args.epsilon, 512).map_err(fail)?;
    let state = match args.family {
        Family::Bipartite => bipartite_werner(omega, p, &policy).map_err(fail)?,
        Family::Tripartite => tripartite_werner(omega, omega, p, &policy).map_err(fail)?,
        Family::Unruh => {
            let unruh = UnruhWeights::from_qr_sq(args.qr2).map_err(fail)?;
            unruh_bipartite(omega, unruh, p, &policy).map_err(fail)?
        }
    };
    let effective = state
        .effective_matrix()
        .map_err(|e| CliError::Failure(e.to_string()))?;

    println!(
        "effective helicity matrix: {:?} family, omega={}, p={}, qr2={}, epsilon={:e}",
        args.family, args.omega, args.p, args.qr2, args.epsilon
    );
    let labels = state.helicity_basis_labels();
    println!("basis: {}", labels.join(" | "));
    let m = effective.matrix();
    for i in 0..effective.dim() {
        let mut line = String::from("[");
        for j in 0..effective.dim() {
            let z = m[(i, j)];
            if z.im.abs() < 1e-12 {
                let _ = write!(line, " {:9.6}", z.re);
            } else {
                let _ = write!(line, " {:.6}{:+.6}i", z.re, z.im);
            }
        }
        line.push_str(" ]");
        println!("{line}");
    }
    let spectrum = effective.spectrum();
    println!("trace          = {:.6}", effective.trace());
    println!("min eigenvalue = {:9.6}", spectrum.min());
    println!("blocks kept    = {}", state.block_count());
    println!("tail bound     = {:.3e}", state.tail_bound());
    Ok(())
}
