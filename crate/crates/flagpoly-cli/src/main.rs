//! Poincare polynomials of partial flag manifolds and their genus-zero
//! stable-map moduli spaces, by torus-fixed-point enumeration cross-checked
//! against closed q-multinomial formulas.
//!
//! Exit codes: 0 success, 2 usage or domain error, 3 two-route mismatch
//! (suppressed by `--allow-mismatch`) or verification failure.

mod record;
mod suites;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use flagpoly::fixedmaps::DegreeVector;
use flagpoly::poincare::{compare, Agreement};
use flagpoly::FlagShape;

use record::{render, Format, Variable};

#[derive(Parser)]
#[command(
    name = "flagpoly",
    version,
    about = "Poincare polynomials of flag manifolds and stable-map moduli spaces",
    after_help = "Supported degree vectors: one entry 1, one entry 2, two entries 1 at \
                  distance >= 2, or two adjacent entries 1.\n\
                  Output is byte-deterministic for a fixed request unless --timing is given."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format
    #[arg(long, global = true, value_enum, default_value = "plain")]
    format: Format,

    /// Polynomial variable: t (Betti convention) or q (doubled exponents)
    #[arg(long, global = true, value_enum, default_value = "t")]
    variable: Variable,

    /// Write the report here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Worker threads for the verification suites (default: all cores);
    /// results are independent of the thread count
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// Append elapsed wall time to the report (off by default so that
    /// repeated runs are byte-identical)
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Poincare polynomial of the flag manifold Fl(r1,...,r_{l+1}; k)
    Flag {
        /// Comma-separated part sizes, e.g. 1,2,1
        shape: String,
    },
    /// Poincare polynomial of the genus-zero stable-map moduli space, by
    /// fixed-point enumeration and by closed form
    Moduli {
        /// Comma-separated part sizes, e.g. 1,2,1
        shape: String,
        /// Comma-separated degree vector with l entries, e.g. 1,0,1
        #[arg(long, value_name = "D1,...,DL")]
        degree: String,
        /// Exit 0 even when the two routes disagree
        #[arg(long)]
        allow_mismatch: bool,
    },
    /// Run a verification suite and emit a JSON-lines report
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Size ceiling: ambient dimension k for flags and moduli, the
        /// largest binomial index for identities
        #[arg(long, default_value_t = 6, value_name = "K")]
        max_k: u32,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Identities,
    Flags,
    Moduli,
}

fn parse_csv_u32(text: &str, what: &str) -> Result<Vec<u32>, String> {
    text.split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|_| format!("malformed {what} {text:?}: expected comma-separated nonnegative integers")))
        .collect()
}

fn parse_shape(text: &str) -> Result<FlagShape, String> {
    FlagShape::new(parse_csv_u32(text, "shape")?).map_err(|e| e.to_string())
}

fn emit(out: &Option<PathBuf>, payload: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{payload}");
            std::io::stdout().flush().map_err(|e| e.to_string())
        }
    }
}

/// The ceilings keep the sweeps inside desk-scale exact arithmetic.
fn max_k_ceiling(suite: Suite) -> u32 {
    match suite {
        Suite::Identities => 16,
        Suite::Flags => 8,
        Suite::Moduli => 6,
    }
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err("--jobs must be at least 1".to_string());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    match &cli.command {
        Command::Flag { shape } => {
            let shape = parse_shape(shape)?;
            let degree = DegreeVector::new(vec![0; shape.l()]);
            let start = Instant::now();
            let report = compare(&shape, &degree).map_err(|e| e.to_string())?;
            let timing = cli.timing.then(|| start.elapsed().as_millis());
            emit(&cli.out, &render(&report, "flag", cli.format, cli.variable, timing))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Moduli { shape, degree, allow_mismatch } => {
            let shape = parse_shape(shape)?;
            let degree = DegreeVector::new(parse_csv_u32(degree, "degree")?);
            let start = Instant::now();
            let report = compare(&shape, &degree).map_err(|e| e.to_string())?;
            let timing = cli.timing.then(|| start.elapsed().as_millis());
            emit(&cli.out, &render(&report, "moduli", cli.format, cli.variable, timing))?;
            let mismatch = matches!(report.agreement, Agreement::Mismatch { .. });
            if mismatch && !allow_mismatch {
                eprintln!("two routes disagree; pass --allow-mismatch to exit 0");
                return Ok(ExitCode::from(3));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, max_k } => {
            let ceiling = max_k_ceiling(*suite);
            if *max_k > ceiling {
                return Err(format!("--max-k {max_k} exceeds the ceiling {ceiling} for this suite"));
            }
            let outcome = match suite {
                Suite::Identities => suites::run_identities(*max_k),
                Suite::Flags => suites::run_flags(*max_k),
                Suite::Moduli => suites::run_moduli(*max_k),
            };
            let mut payload = outcome.lines.join("\n");
            payload.push('\n');
            emit(&cli.out, &payload)?;
            eprintln!("{}", outcome.summary);
            if outcome.all_passed {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(3))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
