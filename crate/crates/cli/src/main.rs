use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qhmod_cli::{run, Cli, EXIT_INPUT};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    eprint!("{}", outcome.stderr);
    let written = match &cli.config.output {
        Some(path) => {
            std::fs::write(path, &outcome.stdout).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => std::io::stdout()
            .write_all(outcome.stdout.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_INPUT as u8);
    }
    ExitCode::from(outcome.code as u8)
}
