use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};

use matnet::cli::{
    self, corpus, CliError, Mode, Options, Report, EXIT_OK, EXIT_REGRESSION, EXIT_VALIDATION,
};
use matnet::linalg::BackendKind;
use matnet::system::UnionAFactor;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    Laplacian,
    Ep,
    Ctrb,
    Obsv,
    Corpus,
}

/// Controllability and observability of matrix-weighted signed networks.
///
/// Writes a JSON report to stdout and a one-line summary to stderr.
/// Exit codes: 0 success, 2 invalid input, 3 corpus regression.
#[derive(Debug, Parser)]
#[command(name = "matnet", version)]
struct Args {
    command: Command,
    /// Network spec (JSON). For `corpus`, an optional corpus file replacing the built-in one.
    spec: Option<String>,
    #[arg(long, default_value = "fixed")]
    mode: Mode,
    /// Cells with 1-based ids, e.g. "1|2,3|4".
    #[arg(long)]
    partition: Option<String>,
    #[arg(long, env = cli::BACKEND_ENV)]
    backend: Option<BackendKind>,
    /// Write the quotient graph in Graphviz format (ep only).
    #[arg(long)]
    dot: Option<String>,
    #[arg(long, default_value = "t")]
    union_a_factor: UnionAFactor,
}

fn run(args: &Args) -> Result<Report, CliError> {
    if let Command::Corpus = args.command {
        let entries = match &args.spec {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                corpus::parse_corpus(&text)?
            }
            None => corpus::builtin(),
        };
        return cli::cmd_corpus(&entries, args.backend, args.spec.as_deref());
    }
    let path = args
        .spec
        .as_deref()
        .ok_or_else(|| CliError::Usage("a spec file is required".into()))?;
    let spec = cli::load_spec(path)?;
    let opts = Options {
        mode: args.mode,
        partition: args.partition.clone(),
        backend: args.backend,
        union_a_factor: args.union_a_factor,
        spec_path: Some(path.to_string()),
    };
    match args.command {
        Command::Laplacian => cli::cmd_laplacian(&spec, &opts),
        Command::Ep => cli::cmd_ep(&spec, &opts),
        Command::Ctrb => cli::cmd_ctrb(&spec, &opts),
        Command::Obsv => cli::cmd_obsv(&spec, &opts),
        Command::Corpus => unreachable!(),
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(EXIT_VALIDATION as u8);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let started = Instant::now();
    match run(&args) {
        Ok(report) => {
            if let (Some(path), Some(dot)) = (&args.dot, &report.dot) {
                if let Err(e) = std::fs::write(path, dot) {
                    eprintln!("matnet: cannot write {path}: {e}");
                    return ExitCode::from(EXIT_VALIDATION as u8);
                }
            }
            print!("{}", report.to_json_string());
            eprintln!(
                "{} [{:.1} ms]",
                report.summary,
                started.elapsed().as_secs_f64() * 1e3
            );
            ExitCode::from(if report.regression {
                EXIT_REGRESSION
            } else {
                EXIT_OK
            } as u8)
        }
        Err(e) => {
            eprintln!("matnet: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
