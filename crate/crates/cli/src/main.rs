use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ech_calculus::scalar::Backend;
use ech_cli::suites::run_suite;
use ech_cli::{exit, parse_complex_list, solve, to_json, CliError, NRange, Suite, SuiteConfig};

#[derive(Parser)]
#[command(name = "echcalc", version, about = "Index calculus, gluing models and chain-level checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite.
    Verify {
        /// indices, deficit, writhe, gluing, degree, appendix-a, appendix-b or chain
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        /// Inclusive range such as `4..8`.
        #[arg(long)]
        n: Option<NRange>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = Backend::Exact)]
        backend: Backend,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        fixture: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count solutions of a restriction problem mod 2.
    Degree {
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated restriction values; random when absent.
        #[arg(long)]
        c: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long = "T", default_value_t = 2.0)]
        t: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve for punctures, restriction roots or auxiliary zeros.
    Solve {
        #[command(subcommand)]
        kind: SolveKind,
    },
    /// Evaluate the order-m model of a JSON configuration.
    Model {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long)]
        backend: Option<Backend>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SolveKind {
    Z1 {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Restriction {
        #[arg(long)]
        c: String,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long = "T", default_value_t = 2.0)]
        t: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Aux {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn list(s: &Option<String>) -> Result<Option<Vec<ech_calculus::GaussRat>>, CliError> {
    s.as_deref().map(parse_complex_list).transpose()
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Verify { suite, seed, trials, n, m, backend, tol, fixture, out } => {
            let cfg = SuiteConfig { suite: suite.parse::<Suite>()?, seed, trials, n, m, backend, tol, fixture };
            let report = run_suite(&cfg)?;
            for r in report.records.iter().filter(|r| !r.pass) {
                eprintln!("FAIL trial {}: {} -> {}", r.trial, r.inputs, r.result);
            }
            emit(&to_json(&report), &out)?;
            Ok(report.exit_code())
        }
        Command::Degree { n, c, alpha, p, t, seed, tol, out } => {
            let c = match (list(&c)?, n) {
                (Some(c), Some(n)) if c.len() + 2 != n => {
                    return Err(CliError::Usage(format!("--n {n} needs {} restriction values", n.saturating_sub(2))))
                }
                (Some(c), _) => c,
                (None, Some(n)) if n >= 3 => sample_c(seed, n),
                (None, _) => return Err(CliError::Usage("give --c or --n >= 3".into())),
            };
            let problem = solve::restriction_problem(c, list(&alpha)?, list(&p)?, t, seed)?;
            let (value, code) = solve::degree(&problem, tol)?;
            emit(&to_json(&value), &out)?;
            Ok(code)
        }
        Command::Solve { kind } => {
            let (value, out) = match kind {
                SolveKind::Z1 { alpha, p, out } => (solve::z1(&parse_complex_list(&alpha)?, &parse_complex_list(&p)?)?, out),
                SolveKind::Aux { alpha, out } => (solve::aux(&parse_complex_list(&alpha)?)?, out),
                SolveKind::Restriction { c, alpha, p, t, seed, out } => {
                    let problem = solve::restriction_problem(parse_complex_list(&c)?, list(&alpha)?, list(&p)?, t, seed)?;
                    (solve::restriction(&problem)?, out)
                }
            };
            emit(&to_json(&value), &out)?;
            Ok(exit::OK)
        }
        Command::Model { config, m, backend, tol, out } => {
            let text = std::fs::read_to_string(&config).map_err(|e| CliError::Usage(format!("{}: {e}", config.display())))?;
            emit(&to_json(&solve::model(&text, m, backend, tol)?), &out)?;
            Ok(exit::OK)
        }
    }
}

fn sample_c(seed: u64, n: usize) -> Vec<ech_calculus::GaussRat> {
    let mut rng = ech_calculus::sample::seeded(seed);
    ech_calculus::sample::distinct(&mut rng, n - 2, &[ech_calculus::GaussRat::from_ints(0, 0)])
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("echcalc: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
