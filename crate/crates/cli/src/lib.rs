//! The `orthoscheme` command line.
//!
//! Exit codes: 0 on success, 1 when a reported check fails, 2 for bad
//! arguments, 3 for numerical failures.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use orthoscheme::sy::{DEFAULT_IMAG_THRESHOLD, DEFAULT_SLACK};
use orthoscheme::{Error, Method};

pub mod format;
pub mod parse;
pub mod reports;
pub mod verify;

use format::Format;
use parse::{DimList, Rays};
use reports::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

pub const THREADS_ENV: &str = "ORTHOSCHEME_THREADS";

#[derive(Debug, Parser)]
#[command(name = "orthoscheme", version, about = "Intrinsic volumes of the order simplex")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads [default: $ORTHOSCHEME_THREADS, else the machine's parallelism].
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Enum,
    Dp,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Enum => Method::Enumerate,
            MethodArg::Dp => Method::Dp,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact intrinsic volumes V_0..V_n, or V_k alone.
    Iv {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = MethodArg::Dp)]
        method: MethodArg,
    },
    /// Monte Carlo normal-cone measures of every face, and the volumes they assemble.
    Gauss {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Solid angle of the cone spanned by three rays in R^3.
    Euler {
        /// Nine numbers: a1,a2,a3,b1,b2,b3,c1,c2,c3.
        #[arg(long, allow_hyphen_values = true)]
        rays: Rays,
    },
    /// Root bracket check of the quermassintegral polynomial.
    Sy {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_IMAG_THRESHOLD)]
        imag_threshold: f64,
        #[arg(long, default_value_t = DEFAULT_SLACK)]
        slack: f64,
    },
    /// n^{-k/2} S_k(n) against omega_k.
    Limit {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n_list: DimList,
    },
    /// Intrinsic volumes of the Brownian motion body and the m_k sequence.
    Mk {
        #[arg(long)]
        k_max: usize,
    },
    /// Run the full reproduction suite.
    Verify,
}

/// `--threads`, else the environment, else 0 (rayon's default).
fn thread_count(flag: Option<u32>) -> Result<usize, String> {
    if let Some(t) = flag {
        return Ok(t as usize);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(t),
            _ => Err(format!("{THREADS_ENV} must be a positive integer, got {v:?}")),
        },
        Err(_) => Ok(0),
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_USAGE
    }
}

fn execute(command: &Command, stderr: &mut (dyn Write + Send)) -> Result<Box<dyn Report + Send>, Error> {
    Ok(match command {
        Command::Iv { n, k, method } => Box::new(reports::iv(*n, *k, (*method).into())?),
        Command::Gauss { n, samples, seed } => Box::new(reports::gauss(*n, *samples, *seed)?),
        Command::Euler { rays } => Box::new(reports::euler(rays.0)?),
        Command::Sy {
            n,
            imag_threshold,
            slack,
        } => {
            if !(*imag_threshold >= 0.0 && *slack >= 0.0) {
                return Err(Error::OutOfRange(
                    "thresholds must be nonnegative".into(),
                ));
            }
            Box::new(reports::sy(*n, *imag_threshold, *slack)?)
        }
        Command::Limit { k, n_list } => Box::new(reports::limit(*k, &n_list.0)?),
        Command::Mk { k_max } => Box::new(reports::mk(*k_max)?),
        Command::Verify => Box::new(verify::verify_all(|r| {
            let _ = writeln!(stderr, "{}", r.line());
        })),
    })
}

/// Parses `argv` (program name first) without running anything.
pub fn parse_args<I, T>(argv: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(argv)
}

/// Parses `argv` (program name first), runs the command and writes its report.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match parse_args(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{e}");
                EXIT_OK
            };
        }
    };

    let threads = match thread_count(cli.threads) {
        Ok(t) => t,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot start worker threads: {e}");
            return EXIT_NUMERICAL;
        }
    };

    let report = match pool.install(|| execute(&cli.command, stderr)) {
        Ok(report) => report,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };

    let body = report.render(cli.format);
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &body).map_err(|e| format!("{}: {e}", path.display())),
        None => stdout.write_all(&body).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        let _ = writeln!(stderr, "error: cannot write report: {msg}");
        return EXIT_USAGE;
    }

    if report.passed() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}
