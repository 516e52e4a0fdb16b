use std::fmt;
use std::path::Path;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    JsonLines,
}

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Parse(String),
    Precondition(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "{m}"),
            CliError::Parse(m) => write!(f, "parse: {m}"),
            CliError::Precondition(m) => write!(f, "precondition: {m}"),
        }
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// A verdict rendered once as text lines and once as JSON records.
#[derive(Debug, Default)]
pub struct Report {
    text: Vec<String>,
    json: Vec<Value>,
    pub code: u8,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn line(&mut self, s: impl Into<String>) -> &mut Report {
        self.text.push(s.into());
        self
    }

    pub fn lines(&mut self, block: &str) -> &mut Report {
        self.text.extend(block.lines().map(String::from));
        self
    }

    pub fn record(&mut self, v: Value) -> &mut Report {
        self.json.push(v);
        self
    }

    pub fn fail(&mut self) -> &mut Report {
        self.code = 1;
        self
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Text => self.text.iter().for_each(|l| {
                out.push_str(l);
                out.push('\n');
            }),
            Format::JsonLines => self.json.iter().for_each(|v| {
                out.push_str(&v.to_string());
                out.push('\n');
            }),
        }
        out
    }
}
