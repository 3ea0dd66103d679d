use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use dimspec_cli::{emit, run, CliError, Format, RunConfig};

/// Certified Hausdorff dimension enclosures driven by a JSON config.
#[derive(Debug, Parser)]
#[command(name = "dimspec", version)]
struct Args {
    /// Run configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output file; overrides `output.path` in the config.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output format; overrides `output.format` in the config.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    match execute(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("dimspec: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(args: &Args) -> Result<i32, CliError> {
    configure_threads()?;
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.config.display())))?;
    let config = RunConfig::from_json(&text)?;
    let format = args.format.unwrap_or(config.output.format);
    let path = args.output.clone().or_else(|| config.output.path.clone());

    let start = Instant::now();
    let outcome = run(&config);
    log::info!(
        "task {} finished in {:.3}s",
        config.task.name(),
        start.elapsed().as_secs_f64()
    );
    if let Some(e) = &outcome.error {
        if outcome.records.is_empty() && e.exit_code() != 3 {
            return Err(e.clone());
        }
        eprintln!("dimspec: {e}");
    }
    let task = config.task.name();
    match path {
        Some(p) => {
            let file = File::create(&p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            emit(&outcome.records, task, format, BufWriter::new(file))?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            emit(&outcome.records, task, format, &mut lock)?;
            lock.flush().map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(outcome.exit_code())
}

/// Caps the global rayon pool at `DIMSPEC_THREADS` when set.
fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("DIMSPEC_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Validation(format!("DIMSPEC_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Failure(e.to_string()))
}
