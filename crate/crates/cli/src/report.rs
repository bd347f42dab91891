use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;

pub const TOOL: &str = "spar";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Every report carries the tool version and the resolved configuration.
#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a C,
    result: &'a R,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_s: Option<f64>,
}

pub struct Output {
    pub format: Format,
    pub path: Option<PathBuf>,
    pub started: Option<Instant>,
}

impl Output {
    fn write(&self, text: &str) -> Result<()> {
        match &self.path {
            Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())?;
                Ok(())
            }
        }
    }

    fn elapsed(&self) -> Option<f64> {
        self.started.map(|t| t.elapsed().as_secs_f64())
    }

    /// Emits `result` as JSON, or as CSV when requested and `csv` is given.
    pub fn emit<C: Serialize, R: Serialize>(
        &self,
        command: &str,
        config: &C,
        result: &R,
        csv: Option<String>,
    ) -> Result<()> {
        match (self.format, csv) {
            (Format::Csv, Some(body)) => {
                let mut text = format!("# {TOOL} {VERSION} {command} config={}\n", serde_json::to_string(config)?);
                if let Some(t) = self.elapsed() {
                    text.push_str(&format!("# wall_time_s={t}\n"));
                }
                text.push_str(&body);
                self.write(&text)
            }
            (Format::Csv, None) => anyhow::bail!("`{command}` has no CSV form; use --format json"),
            (Format::Json, _) => {
                let env = Envelope {
                    tool: TOOL,
                    version: VERSION,
                    command,
                    config,
                    result,
                    wall_time_s: self.elapsed(),
                };
                let mut text = serde_json::to_string_pretty(&env)?;
                text.push('\n');
                self.write(&text)
            }
        }
    }
}

/// JSON document for side artifacts (metadata files next to binary outputs).
pub fn artifact_json<C: Serialize, R: Serialize>(command: &str, config: &C, result: &R) -> Result<String> {
    let env = Envelope {
        tool: TOOL,
        version: VERSION,
        command,
        config,
        result,
        wall_time_s: None,
    };
    Ok(serde_json::to_string_pretty(&env)? + "\n")
}
