//! Command-line front end: parse polynomial-system files, dispatch to the
//! library, and print JSON (or text) reports.
//!
//! Exit codes: 0 success, 2 parse error, 3 assumption failure
//! (NotZeroDim / NotLazardShape), 4 verification failure.

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use regchain::poly::BigRat;
use regchain::report::{self, AppError, PrimeChoice};
use regchain::sysfile;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "regchain",
    version,
    about = "Triangular sets, regular chains and coefficient bit-size bounds for parametric polynomial systems"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for all randomized choices.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the monic triangular set over Q(Y).
    Triangularize { file: PathBuf },
    /// Compute the regular chain (D_l, N_l).
    Chain { file: PathBuf },
    /// Print the per-level delta profile (max deg(num) + deg(den)).
    Delta { file: PathBuf },
    /// Monic and primitive Chow forms of the solved system, with a_n.
    Chow { file: PathBuf },
    /// Evaluate every closed-form bound for the given input data.
    Bounds {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: String,
        #[arg(long)]
        h: String,
        /// Restrict the per-level bounds to one level.
        #[arg(long)]
        level: Option<u64>,
    },
    /// The prime-size recipe: H_A and the range [6 H_A, 12 H_A].
    PrimeRange {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: String,
        #[arg(long)]
        h: String,
    },
    /// Degree profiles modulo a prime (given, or sampled from the recipe).
    ModularDelta {
        file: PathBuf,
        /// Run at this prime.
        #[arg(long, conflicts_with = "auto")]
        prime: Option<String>,
        /// Sample primes from the recommended range.
        #[arg(long)]
        auto: bool,
        /// Number of sampled primes under --auto.
        #[arg(long, default_value_t = 1)]
        trials: usize,
    },
    /// Run the integrality and height-bound checks; exit 4 on failure.
    Verify { file: PathBuf },
}

fn parse_bigint(s: &str) -> Result<BigInt, AppError> {
    BigInt::from_str(s).map_err(|_| AppError::Other(format!("bad integer: {s}")))
}

fn parse_rat(s: &str) -> Result<BigRat, AppError> {
    let bad = || AppError::Other(format!("bad rational: {s}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a = BigInt::from_str(a.trim()).map_err(|_| bad())?;
            let b = BigInt::from_str(b.trim()).map_err(|_| bad())?;
            if b == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRat::new(a, b))
        }
        None => Ok(BigRat::from_integer(
            BigInt::from_str(s.trim()).map_err(|_| bad())?,
        )),
    }
}

fn load_system(path: &PathBuf) -> Result<regchain::solve::SystemInput, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Other(format!("{}: {e}", path.display())))?;
    Ok(sysfile::parse_system(&text)?)
}

fn run(cli: &Cli) -> Result<serde_json::Value, AppError> {
    match &cli.cmd {
        Cmd::Triangularize { file } => report::triangularize_report(&load_system(file)?),
        Cmd::Chain { file } => report::chain_report(&load_system(file)?),
        Cmd::Delta { file } => report::delta_report(&load_system(file)?),
        Cmd::Chow { file } => report::chow_report(&load_system(file)?),
        Cmd::Bounds { m, n, d, h, level } => Ok(report::bounds_report(
            *m,
            *n,
            &parse_bigint(d)?,
            &parse_rat(h)?,
            *level,
        )),
        Cmd::PrimeRange { m, n, d, h } => Ok(report::prime_range_report(
            *m,
            *n,
            &parse_bigint(d)?,
            &parse_rat(h)?,
        )),
        Cmd::ModularDelta {
            file,
            prime,
            auto,
            trials,
        } => {
            let sys = load_system(file)?;
            let choice = match (prime, auto) {
                (Some(p), _) => PrimeChoice::Fixed(parse_bigint(p)?),
                (None, true) => PrimeChoice::Auto {
                    seed: cli.seed,
                    trials: *trials,
                },
                (None, false) => {
                    return Err(AppError::Other(
                        "one of --prime or --auto is required".to_string(),
                    ))
                }
            };
            report::modular_delta_report(&sys, &choice)
        }
        Cmd::Verify { file } => report::verify_report(&load_system(file)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(value) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string(&value).unwrap()),
                Format::Text => print!("{}", report::to_text(&value)),
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            if let AppError::Verification(report) = &err {
                match cli.format {
                    Format::Json => println!("{}", serde_json::to_string(report).unwrap()),
                    Format::Text => print!("{}", report::to_text(report)),
                }
            } else {
                eprintln!("error: {err}");
            }
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
