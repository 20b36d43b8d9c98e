use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use parshin_cli::{render, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let (text, code) = render(&report, cli.json);
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("parshin: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
