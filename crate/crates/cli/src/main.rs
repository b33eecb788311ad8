use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use isospec_cli::job::{Format, Options};
use isospec_cli::{execute, CliError};

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

/// Spectral computations for periodic discrete Schrödinger operators.
///
/// Reads a JSON job document from --input or standard input and writes the
/// report to standard output.
#[derive(Parser)]
#[command(name = "isospec", version)]
struct Args {
    /// Job document; standard input when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Root-finding tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Newton residual tolerance, relative to max(1, |target|).
    #[arg(long)]
    newton_tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Geometric grid "a:b:n" for the convergence study.
    #[arg(long)]
    t_grid: Option<String>,
}

fn read_input(path: Option<&PathBuf>) -> Result<String, CliError> {
    let mut text = String::new();
    let res = match path {
        Some(p) => std::fs::File::open(p).and_then(|mut f| f.read_to_string(&mut text)),
        None => std::io::stdin().read_to_string(&mut text),
    };
    res.map_err(|e| CliError::Malformed(format!("cannot read job: {e}")))?;
    Ok(text)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let flags = Options {
        tol: args.tol,
        newton_tol: args.newton_tol,
        max_iter: args.max_iter,
        t_grid: args.t_grid,
        format: args.format.map(|f| match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }),
    };
    let result = read_input(args.input.as_ref()).and_then(|text| execute(&text, flags));
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("isospec: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
