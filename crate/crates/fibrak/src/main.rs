use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use fibrak::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, code)) => {
            let _ = std::io::stdout().write_all(out.as_bytes());
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("fibrak: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
