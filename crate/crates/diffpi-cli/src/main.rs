//! `diffpi`: batch front end for the diffpi engine.
//!
//! Exit status is 0 when every requested check passes, 1 when a check fails and 2 on bad
//! input or an infeasible computation; in both failure cases a JSON object is written to
//! standard error.

mod args;
mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use anyhow::Result;
use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use args::{Cli, Command, OutputArgs, ZooCommand};

fn emit(text: &str, output: &OutputArgs) -> Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let (name, report, output) = match &cli.command {
        Command::Codim(a) => ("codim", commands::codim(a)?, &a.output),
        Command::Cochar(a) => ("cochar", commands::cochar(a)?, &a.output),
        Command::Verify(a) => ("verify", commands::verify(a)?, &a.run.output),
        Command::Derspace(a) => ("derspace", commands::derspace(a)?, &a.output),
        Command::GrassmannScan(a) => ("grassmann-scan", commands::scan(a)?, &a.output),
        Command::Zoo { command: ZooCommand::List { n, output } } => ("zoo list", commands::zoo_list(*n)?, output),
        Command::Zoo { command: ZooCommand::Export { model, n, out } } => {
            let text = commands::zoo_export(model, *n)?;
            let output = OutputArgs { format: args::Format::Json, out: out.clone() };
            emit(&text, &output)?;
            return Ok(ExitCode::SUCCESS);
        }
    };
    emit(&report.render(output.format)?, output)?;
    if report.failures.is_empty() {
        return Ok(ExitCode::SUCCESS);
    }
    let failure = json!({"status": "failed", "command": name, "failures": report.failures});
    eprintln!("{failure}");
    Ok(ExitCode::from(1))
}

fn error_exit(message: String) -> ExitCode {
    eprintln!("{}", json!({"status": "error", "message": message}));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => e.exit(),
        Err(e) => return error_exit(e.render().to_string().trim_end().to_string()),
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => error_exit(format!("{e:#}")),
    }
}
