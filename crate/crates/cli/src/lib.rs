//! Command-line front end for `volstat`: argument grammar, command
//! dispatch and provenance-stamped CSV/JSON output.

pub mod args;
pub mod commands;
pub mod error;
pub mod inputs;
pub mod output;
pub mod reports;

use std::io::Write;

use serde_json::json;

pub use args::{Cli, Command, Format};
pub use error::{CliError, Result};
pub use output::{Document, Table};

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Rv(_) => "rv",
        Command::Ratio(_) => "ratio",
        Command::Compare(_) => "compare",
        Command::Vix(_) => "vix",
        Command::Simulate(_) => "simulate",
        Command::Varrv(_) => "varrv",
        Command::Estimate(_) => "estimate",
        Command::Report(_) => "report",
    }
}

/// Runs one command and returns its document.
pub fn run(cli: &Cli) -> Result<Document> {
    let config = json!({
        "format": cli.format,
        "args": serde_json::to_value(&cli.command).unwrap_or_default(),
    });
    let mut doc = Document::new(command_name(&cli.command), config);
    log::info!("running {}", doc.command);
    match &cli.command {
        Command::Rv(a) => commands::rv(&mut doc, a)?,
        Command::Ratio(a) => commands::ratio(&mut doc, a)?,
        Command::Compare(a) => commands::compare(&mut doc, a)?,
        Command::Vix(a) => commands::vix(&mut doc, a)?,
        Command::Simulate(a) => commands::simulate(&mut doc, a)?,
        Command::Varrv(a) => commands::varrv(&mut doc, a)?,
        Command::Estimate(a) => commands::estimate(&mut doc, a)?,
        Command::Report(a) => reports::run(&mut doc, a)?,
    }
    Ok(doc)
}

/// Runs a command and writes its document to `--out` or stdout.
pub fn execute(cli: &Cli) -> Result<()> {
    let doc = run(cli)?;
    let mut buf = Vec::new();
    match cli.format {
        Format::Csv => doc.write_csv(&mut buf)?,
        Format::Json => doc.write_json(&mut buf)?,
    }
    let io = |e: std::io::Error| CliError::Input(format!("cannot write output: {e}"));
    match &cli.out {
        Some(path) => std::fs::write(path, &buf)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => std::io::stdout().lock().write_all(&buf).map_err(io),
    }
}
