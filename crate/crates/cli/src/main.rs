mod args;
mod commands;
mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Format};

/// Bad arguments or input data; exit code 2.
pub struct InputError(String);

impl From<ramicalc::Error> for InputError {
    fn from(e: ramicalc::Error) -> Self {
        InputError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match commands::run(&cli.command) {
        Ok(outcome) => outcome,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let text = match (cli.format, outcome.json_only) {
        (Format::Json, _) | (Format::Table, true) => outcome.output.json_text(),
        (Format::Table, false) => outcome.output.table(cli.decimal),
    };
    if cli.format == Format::Table && outcome.json_only {
        eprint!("{}", outcome.output.table(cli.decimal));
    }
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    if outcome.failed {
        eprintln!("verification failed");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
