use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use magspec_cli::{export_plotdata, run_with_threads, CliError, Command, RunConfig};

/// Semiclassical magnetic-Bloch spectra toolkit.
#[derive(Debug, Parser)]
#[command(name = "magspec", version)]
struct Args {
    command: Command,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; without it the envelope is printed to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; overrides the `threads` config field.
    #[arg(long)]
    threads: Option<usize>,
}

fn execute(args: &Args) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::runtime(format!("{}: {e}", args.config.display())))?;
    let cfg = RunConfig::from_json(&text)?;
    let threads = args
        .threads
        .or(cfg.threads)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    let envelope = run_with_threads(args.command, &cfg, threads)?;
    match &args.out {
        Some(dir) => {
            export_plotdata(&envelope, dir)?;
        }
        None => print!("{}", envelope.to_json()?),
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
