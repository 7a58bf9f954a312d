use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use localinv_cli::args::Cli;
use localinv_cli::{run, CliError};

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("LOCALINV_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "LOCALINV_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|_| run(&cli.command));
    match result {
        Ok(out) => {
            let body = if cli.format.text {
                out.text
            } else {
                serde_json::to_string_pretty(&out.json).expect("serializable") + "\n"
            };
            // A closed pipe downstream is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(out.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
