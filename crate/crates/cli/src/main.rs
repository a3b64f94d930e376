use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use mipt_qfi_cli::{execute, thread_count, CliError, Experiment};

/// Quantum Fisher information experiments for the monitored transverse-field Ising chain.
#[derive(Parser, Debug)]
#[command(name = "mipt-qfi", version)]
struct Args {
    #[arg(value_enum)]
    experiment: Experiment,
    /// JSON config; the experiment's defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config's output_path).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; MIPT_QFI_THREADS takes precedence.
    #[arg(long)]
    threads: Option<usize>,
}

fn run(args: &Args) -> Result<(), CliError> {
    let threads = thread_count(args.threads)?;
    let (outcome, written) = execute(args.experiment, args.config.as_deref(), args.out.as_deref(), threads)?;
    for f in &outcome.results.fits {
        println!("fit {}: {} (residual {:.3e})", f.name, f.fit.exponent_or_rate, f.fit.residual);
    }
    let failed = outcome.results.failed();
    println!(
        "{} checks, {} failed; wrote {} and {}",
        outcome.results.checks.len(),
        failed,
        written.csv.display(),
        written.summary.display()
    );
    for c in outcome.results.checks.iter().filter(|c| !c.passed) {
        eprintln!("FAILED {}: {} ({:?})", c.name, c.value, c.bound);
    }
    if failed > 0 {
        return Err(CliError::Checks(failed));
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
