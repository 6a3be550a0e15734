use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = etbench::cli::Cli::parse();
    match etbench::run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
