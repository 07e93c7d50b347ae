mod cli;
mod commands;
mod error;
mod io;
mod manifest;

use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Command};
use manifest::{write_json, Run};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut run = Run::start(match &cli.command {
        Command::Avn(_) => "avn",
        Command::Fgi(_) => "fgi",
        Command::Mc(_) => "mc",
    });
    let result = match &cli.command {
        Command::Avn(args) => commands::avn::run(args, &mut run),
        Command::Fgi(cmd) => commands::fgi::run(cmd, &mut run),
        Command::Mc(args) => commands::mc::run(args, &mut run),
    };
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    let target = cli
        .manifest
        .clone()
        .or_else(|| run.home.as_ref().map(|d| d.join("manifest.json")));
    let manifest = run.finish(code);
    match target {
        Some(path) => {
            if let Err(e) = write_json(&path, &manifest) {
                eprintln!("error: {e}");
            }
        }
        None => eprintln!(
            "manifest: {}",
            serde_json::to_string(&manifest).expect("manifest serialises")
        ),
    }
    ExitCode::from(code)
}
