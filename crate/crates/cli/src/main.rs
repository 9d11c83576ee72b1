use std::process::ExitCode;

use clap::Parser;
use hyperzeta_cli::cli::Cli;
use hyperzeta_cli::jobs::{run, Outcome};
use hyperzeta_cli::CliError;

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("HYPERZETA_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("HYPERZETA_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Config(e.to_string()))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = init_threads().and_then(|_| cli.into_config()).and_then(|cfg| run(&cfg));
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::VerifyFailed) => {
            eprintln!("hyperzeta: one or more identities failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("hyperzeta: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
