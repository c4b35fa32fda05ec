use std::process::ExitCode;

use clap::Parser;
use klyachko::cli::{exit_code, run, Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_path = match &cli.command {
        Command::Validate(c)
        | Command::H0Table(c)
        | Command::EulerTable(c)
        | Command::HilbertTable(c)
        | Command::Bounds(c)
        | Command::HilbertPoly(c) => c.out.clone(),
        Command::CohomologyTable { common, .. } | Command::MonomialSigma { common, .. } => common.out.clone(),
    };
    match run(&cli) {
        Ok(outcome) => {
            match out_path {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &outcome.text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => print!("{}", outcome.text),
            }
            ExitCode::from(outcome.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
