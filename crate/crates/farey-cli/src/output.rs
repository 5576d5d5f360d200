//! Artifact emission: one writer, ordered rows, stdout or a file.

use std::io::Write;
use std::path::Path;

use clap::ValueEnum;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Writes the artifact to `out` or stdout.
pub fn write_artifact(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            f.write_all(content.as_bytes())?;
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Emits either the CSV artifact or the JSON document.
pub fn emit(
    format: Format,
    out: Option<&Path>,
    csv: &str,
    jsonv: &serde_json::Value,
) -> Result<(), CliError> {
    match format {
        Format::Csv => write_artifact(out, csv),
        Format::Json => write_artifact(
            out,
            &format!("{}\n", serde_json::to_string_pretty(jsonv).unwrap()),
        ),
    }
}
