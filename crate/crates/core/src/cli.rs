//! The `ratsos` command line.
//!
//! Exit codes: 0 success or accept, 1 verification reject, 2 parse or format
//! error (including unreadable files), 3 mathematical precondition failure,
//! 4 usage error. Results go to `stdout`, diagnostics to `stderr`.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::descent::{descend, reconstruct_target, verify, DescentError, DescentOptions, Verdict};
use crate::exactla::{format_matrix, ldl_decompose, positivity_check, Positivity};
use crate::foursquare::{rational_square_sum, FourSquareError};
use crate::textio::{self, ParseErrorKind};
use crate::{Rational, SosProblem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECT: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "ratsos", version, about = "Exact rational sums of squares from sums of squares over totally real fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Turn a problem into a rational certificate.
    Descend {
        problem: PathBuf,
        /// Emit pure squares instead of weighted terms.
        #[arg(long)]
        expand: bool,
        /// Skip merging input squares with equal traces.
        #[arg(long)]
        no_compress: bool,
        /// Write the certificate here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Worker threads (output does not depend on this).
        #[arg(long, short, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
        jobs: u16,
    },
    /// Check a certificate against a problem.
    Verify { problem: PathBuf, certificate: PathBuf },
    /// Print the trace matrix of the problem's field and its LDL^T factors.
    Gram { problem: PathBuf },
    /// Write a nonnegative rational as a sum of the fewest rational squares.
    Foursquare {
        #[arg(allow_hyphen_values = true)]
        value: String,
    },
}

/// A failure already rendered for the user.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(shown.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(shown.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let outcome = match cli.command {
        Command::Descend { problem, expand, no_compress, output, jobs } => {
            let opts = DescentOptions { compress: !no_compress, expand, parallel: jobs > 1 };
            run_descend(&problem, opts, output.as_deref(), jobs as usize, stdout, stderr)
        }
        Command::Verify { problem, certificate } => run_verify(&problem, &certificate, stdout),
        Command::Gram { problem } => run_gram(&problem, stdout),
        Command::Foursquare { value } => run_foursquare(&value, stdout),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn parse_failure(path: &Path, e: textio::ParseError) -> Failure {
    let code = match e.kind {
        ParseErrorKind::Field(crate::FieldError::NotSquarefree { .. }) => EXIT_PRECONDITION,
        _ => EXIT_PARSE,
    };
    Failure::new(code, format!("{}: {e}", path.display()))
}

fn load_problem(path: &Path) -> Result<SosProblem, Failure> {
    textio::parse_problem_bytes(&read(path)?).map_err(|e| parse_failure(path, e))
}

fn descent_failure(e: DescentError) -> Failure {
    let code = if e.is_precondition() { EXIT_PRECONDITION } else { EXIT_PARSE };
    Failure::new(code, e.to_string())
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::new(EXIT_PARSE, format!("write failed: {e}"))
}

fn run_descend(
    path: &Path,
    opts: DescentOptions,
    output: Option<&Path>,
    jobs: usize,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Outcome {
    let problem = load_problem(path)?;
    let cert = if opts.parallel {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
        pool.install(|| descend(&problem, opts))
    } else {
        descend(&problem, opts)
    }
    .map_err(descent_failure)?;
    let text = textio::print_certificate(&cert);
    match output {
        Some(out) => std::fs::write(out, &text)
            .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", out.display())))?,
        None => stdout.write_all(text.as_bytes()).map_err(io_failure)?,
    }
    let summary = match cert.expanded_count() {
        Some(n) => format!("{n} squares (bound {})", cert.bound()),
        None => format!("{} terms (bound {})", cert.weighted_count(), cert.bound()),
    };
    writeln!(stderr, "{summary}").map_err(io_failure)?;
    Ok(EXIT_OK)
}

fn run_verify(problem: &Path, certificate: &Path, stdout: &mut dyn Write) -> Outcome {
    let problem = load_problem(problem)?;
    let cert = textio::parse_certificate_bytes(&read(certificate)?).map_err(|e| parse_failure(certificate, e))?;
    let target = reconstruct_target(&problem).map_err(descent_failure)?;
    match verify(&target, &cert) {
        Verdict::Accept => {
            writeln!(stdout, "accept").map_err(io_failure)?;
            Ok(EXIT_OK)
        }
        Verdict::Reject(why) => {
            writeln!(stdout, "reject: {why}").map_err(io_failure)?;
            Ok(EXIT_REJECT)
        }
    }
}

fn run_gram(path: &Path, stdout: &mut dyn Write) -> Outcome {
    let problem = load_problem(path)?;
    let g = problem.field().trace_matrix();
    let mut text = format!("G = {}\n", format_matrix(&g.matrix().rows()));
    let ldl = ldl_decompose(g.matrix()).map_err(|e| {
        Failure::new(EXIT_PRECONDITION, format!("field is not totally real: {e}"))
    });
    let ldl = match ldl {
        Ok(ldl) => ldl,
        Err(f) => {
            stdout.write_all(text.as_bytes()).map_err(io_failure)?;
            return Err(f);
        }
    };
    let pivots: Vec<String> = ldl.pivots().iter().map(Rational::to_string).collect();
    text.push_str(&format!("D = ({})\n", pivots.join(", ")));
    text.push_str(&format!("U = {}\n", format_matrix(ldl.u())));
    let signs: Vec<&str> = ldl
        .pivots()
        .iter()
        .map(|d| if num_traits::Signed::is_positive(d) { "+" } else { "-" })
        .collect();
    text.push_str(&format!("pivot signs: {}\n", signs.join(" ")));
    stdout.write_all(text.as_bytes()).map_err(io_failure)?;
    match positivity_check(&ldl) {
        Positivity::Positive => Ok(EXIT_OK),
        Positivity::NotPositive { index, pivot } => Err(Failure::new(
            EXIT_PRECONDITION,
            format!("field is not totally real: pivot {index} is {pivot} <= 0"),
        )),
    }
}

fn run_foursquare(value: &str, stdout: &mut dyn Write) -> Outcome {
    let parsed = textio::parse_rational(value).map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
    let parts = rational_square_sum(&parsed).map_err(|e| match e {
        FourSquareError::NonPositive(_) => Failure::new(EXIT_PRECONDITION, e.to_string()),
        FourSquareError::TooLarge(_) => Failure::new(EXIT_PARSE, e.to_string()),
    })?;
    writeln!(stdout, "{parts}").map_err(io_failure)?;
    Ok(EXIT_OK)
}
