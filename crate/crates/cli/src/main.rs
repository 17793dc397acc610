use casimir_cli::config::RunConfig;
use casimir_cli::output::write_outputs;
use casimir_cli::run::run;
use casimir_cli::{CliError, Scenario};
use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;

/// Thermal Casimir and Casimir-Polder calculations from a JSON config.
#[derive(Debug, Parser)]
#[command(name = "casimir", version)]
struct Args {
    scenario: Scenario,
    #[arg(long)]
    config: PathBuf,
    /// Output CSV; a JSON sidecar is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = "CASIMIR_THREADS")]
    threads: Option<usize>,
    /// Matsubara tail tolerance; quadrature runs ten times tighter.
    #[arg(long)]
    tolerance: Option<f64>,
}

fn execute(args: &Args) -> Result<PathBuf, CliError> {
    let mut config = RunConfig::from_path(&args.config)?;
    if let Some(tol) = args.tolerance {
        config.accuracy = config.accuracy.with_tolerance(tol);
    }
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::Config(vec!["--threads must be >= 1".into()]));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(vec![e.to_string()]))?;
    }
    let out = args
        .out
        .clone()
        .or_else(|| config.output.clone())
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", args.scenario.name())));
    let result = run(&config, args.scenario)?;
    write_outputs(&out, &config, args.scenario, &result)?;
    Ok(out)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(out) => {
            eprintln!("wrote {}", out.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
