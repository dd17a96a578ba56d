use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kstab::cli;

/// Exact K-stability checks and positivity certificates for ample classes
/// on the blowup of P^2 x P^2 along the diagonal.
#[derive(Parser)]
#[command(name = "kstab", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recompute every closed-form identity and inequality chain behind the
    /// criterion and print one PASS/FAIL line per check
    VerifyPaper,
    /// Classify the integer bundle D(a,b,c) = -aE + b*diamond + c*heart
    Check {
        a: i64,
        b: i64,
        c: i64,
        /// Also print a decimal approximation (non-authoritative)
        #[arg(long)]
        approx: bool,
    },
    /// Evaluate C exactly on the grid {(i/2n, j/2n) : 0 < i < j <= n} and
    /// emit CSV
    Scan {
        /// Grid resolution, at least 2
        n: u32,
        /// Write the CSV here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
        /// Add a decimal column (non-authoritative)
        #[arg(long)]
        approx: bool,
    },
    /// Produce positivity certificates for C and C/(b-a) on delta-shrunken
    /// triangles
    Certify {
        /// Margin, a fraction like 1/10; must satisfy 0 < delta <= 1/4
        #[arg(long)]
        delta: String,
        /// Subdivision depth limit
        #[arg(long, default_value_t = 12)]
        max_depth: u32,
        /// Write the certificate JSON here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the expanded criterion polynomial C(a,b), one exact term per
    /// line
    Expand {
        /// Write the expansion here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
        /// Add a decimal column (non-authoritative)
        #[arg(long)]
        approx: bool,
    },
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();

    let result = match &args.command {
        Command::VerifyPaper => cli::cmd_verify_paper(&mut out),
        Command::Check { a, b, c, approx } => cli::cmd_check(*a, *b, *c, *approx, &mut out),
        Command::Scan { n, out: path, approx } => {
            cli::cmd_scan(*n, path.as_ref(), *approx, &mut out, &mut err)
        }
        Command::Certify { delta, max_depth, out: path } => {
            cli::cmd_certify(delta, *max_depth, path.as_ref(), &mut out, &mut err)
        }
        Command::Expand { out: path, approx } => {
            cli::cmd_expand(path.as_ref(), *approx, &mut out, &mut err)
        }
    };

    let code = match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "io error: {e}");
            cli::EXIT_USAGE
        }
    };
    let _ = out.flush();
    let _ = err.flush();
    ExitCode::from(code as u8)
}
