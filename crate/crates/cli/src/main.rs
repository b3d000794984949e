use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use entdist::{io::write_atomic, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("{w}");
            }
            let written = match &cli.out {
                Some(path) => write_atomic(path, &outcome.text),
                None => std::io::stdout().write_all(outcome.text.as_bytes()).map_err(Into::into),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(e.exit_code() as u8);
            }
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
