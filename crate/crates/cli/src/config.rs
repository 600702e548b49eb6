//! Experiment specifications and the flat `key = value` configuration format.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Float(f64),
    Text(String),
}

impl ParamValue {
    /// Integer, then float, then text.
    pub fn parse(s: &str) -> Self {
        let s = s.trim();
        if let Ok(i) = s.parse::<i64>() {
            return ParamValue::Int(i);
        }
        match s.parse::<f64>() {
            Ok(x) if x.is_finite() => ParamValue::Float(x),
            _ => ParamValue::Text(s.to_string()),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            ParamValue::Int(i) => Some(*i as f64),
            ParamValue::Float(x) => Some(*x),
            ParamValue::Text(_) => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            ParamValue::Int(i) => Some(*i),
            ParamValue::Float(x) if x.fract() == 0.0 && x.abs() < 9e15 => Some(*x as i64),
            _ => None,
        }
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(i) => write!(f, "{i}"),
            ParamValue::Float(x) => write!(f, "{x}"),
            ParamValue::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    /// `.csv` means CSV; anything else JSON.
    pub fn for_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => OutputFormat::Csv,
            _ => OutputFormat::Json,
        }
    }
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(CliError::InvalidParam(format!(
                "unknown output format {other:?} (expected csv or json)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub path: PathBuf,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub params: BTreeMap<String, ParamValue>,
    pub seed: u64,
    /// Empty means the experiment's defaults.
    #[serde(default)]
    pub checkpoints: Vec<usize>,
    #[serde(default)]
    pub output: Option<OutputSpec>,
}

pub const DEFAULT_SEED: u64 = 20240601;

impl ExperimentSpec {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            params: BTreeMap::new(),
            seed: DEFAULT_SEED,
            checkpoints: Vec::new(),
            output: None,
        }
    }

    pub fn with_param(mut self, key: &str, value: &str) -> Self {
        self.params.insert(key.to_string(), ParamValue::parse(value));
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_checkpoints(mut self, checkpoints: Vec<usize>) -> Self {
        self.checkpoints = checkpoints;
        self
    }

    /// Applies one `key = value` pair. `name`, `seed`, `checkpoints`, `out` and
    /// `format` are spec fields; every other key is a parameter.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let (key, value) = (key.trim(), value.trim());
        match key {
            "name" | "experiment" => self.name = value.to_string(),
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| CliError::InvalidParam(format!("seed must be a 64-bit integer, got {value:?}")))?
            }
            "checkpoints" => self.checkpoints = parse_list(value)?,
            "out" => {
                let path = PathBuf::from(value);
                let format = self
                    .output
                    .as_ref()
                    .map(|o| o.format)
                    .unwrap_or_else(|| OutputFormat::for_path(&path));
                self.output = Some(OutputSpec { path, format });
            }
            "format" => {
                let format: OutputFormat = value.parse()?;
                match &mut self.output {
                    Some(o) => o.format = format,
                    None => {
                        return Err(CliError::InvalidParam("format given without an output path".into()));
                    }
                }
            }
            "" => return Err(CliError::InvalidParam("empty key".into())),
            _ => {
                self.params.insert(key.to_string(), ParamValue::parse(value));
            }
        }
        Ok(())
    }

    /// Merges a flat configuration text: one `key = value` per line, `#` comments.
    pub fn merge_config(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::InvalidParam(format!("line {}: expected key = value, got {line:?}", i + 1))
            })?;
            self.set(k, v)?;
        }
        Ok(())
    }

    /// The flat text form read by [`merge_config`](Self::merge_config).
    pub fn to_config_text(&self) -> String {
        let mut out = format!("name = {}\nseed = {}\n", self.name, self.seed);
        if !self.checkpoints.is_empty() {
            let cps: Vec<String> = self.checkpoints.iter().map(|c| c.to_string()).collect();
            out += &format!("checkpoints = {}\n", cps.join(","));
        }
        for (k, v) in &self.params {
            out += &format!("{k} = {v}\n");
        }
        if let Some(o) = &self.output {
            out += &format!("out = {}\nformat = {}\n", o.path.display(), match o.format {
                OutputFormat::Csv => "csv",
                OutputFormat::Json => "json",
            });
        }
        out
    }
}

pub(crate) fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>> {
    s.split([',', ';'])
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| CliError::InvalidParam(format!("cannot parse list entry {t:?} in {s:?}")))
        })
        .collect()
}
