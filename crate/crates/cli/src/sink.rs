//! Where table output goes: stdout, or files under `--out`.

use std::fs;
use std::path::Path;

use anyhow::{bail, Result};

use dwm_core::scenarios::OutputFormat;

fn extension(format: OutputFormat) -> &'static str {
    match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    }
}

/// Render `stem` in each requested format. Without an output directory a
/// single format is printed to stdout; `fallback` applies when none was
/// requested.
pub fn emit(
    out: Option<&Path>,
    formats: &[OutputFormat],
    fallback: OutputFormat,
    stem: &str,
    render: impl Fn(OutputFormat) -> Result<String>,
) -> Result<()> {
    let mut formats = formats.to_vec();
    formats.dedup();
    if formats.is_empty() {
        formats.push(fallback);
    }
    match out {
        None => {
            if formats.len() > 1 {
                bail!("printing to stdout takes a single --format; pass --out to write several");
            }
            print!("{}", render(formats[0])?);
        }
        Some(dir) => {
            fs::create_dir_all(dir)?;
            for f in formats {
                let path = dir.join(format!("{stem}.{}", extension(f)));
                fs::write(&path, render(f)?)?;
                eprintln!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn json(value: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}
