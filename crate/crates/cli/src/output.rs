//! JSON and CSV writers for run manifests.
//!
//! CSV layout: `#`-prefixed metadata lines, then rows `kind,name,index,x,y`
//! where `kind` is `scalar`, `series`, `text` or `pass`.

use std::collections::BTreeMap;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::config::{OutputFormat, OutputSpec};
use crate::error::{CliError, Result};
use crate::manifest::{NamedResult, ResultValue, RunManifest};

fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn metadata_lines(m: &RunManifest) -> Result<Vec<String>> {
    let spec = &m.experiment;
    Ok(vec![
        format!("artifact_version: {}", m.artifact_version),
        format!("experiment: {}", spec.name),
        format!("seed: {}", spec.seed),
        format!("params: {}", serde_json::to_string(&spec.params)?),
        format!("checkpoints: {}", serde_json::to_string(&spec.checkpoints)?),
        format!("started: {}", m.started),
        format!("finished: {}", m.finished),
    ])
}

pub fn write_csv<W: Write>(m: &RunManifest, mut out: W) -> Result<()> {
    for line in metadata_lines(m)? {
        writeln!(out, "# {line}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["kind", "name", "index", "x", "y"])?;
    for r in &m.results {
        let name = r.name.as_str();
        match &r.value {
            ResultValue::Scalar { value } => w.write_record(["scalar", name, "0", "", &num(*value)])?,
            ResultValue::Series { x, y } => {
                if x.is_empty() {
                    w.write_record(["series", name, "", "", ""])?;
                }
                for (i, (a, b)) in x.iter().zip(y).enumerate() {
                    w.write_record(["series", name, &i.to_string(), &num(*a), &num(*b)])?;
                }
            }
            ResultValue::Text { value } => w.write_record(["text", name, "0", "", value])?,
        }
    }
    for (name, ok) in &m.pass_flags {
        w.write_record(["pass", name, "0", "", if *ok { "true" } else { "false" }])?;
    }
    w.flush()?;
    Ok(())
}

/// Results and pass flags back from [`write_csv`] output.
pub fn read_csv<R: Read>(input: R) -> Result<(Vec<NamedResult>, BTreeMap<String, bool>)> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let mut results: Vec<NamedResult> = Vec::new();
    let mut flags = BTreeMap::new();
    let bad = |what: &str| CliError::InvalidParam(format!("malformed manifest CSV: {what}"));
    let parse = |s: &str| s.parse::<f64>().map_err(|_| bad(&format!("number {s:?}")));
    for row in reader.records() {
        let row = row?;
        if row.len() != 5 {
            return Err(bad("expected 5 columns"));
        }
        let (kind, name) = (&row[0], row[1].to_string());
        match kind {
            "scalar" => results.push(NamedResult {
                name,
                value: ResultValue::Scalar { value: parse(&row[4])? },
            }),
            "text" => results.push(NamedResult {
                name,
                value: ResultValue::Text { value: row[4].to_string() },
            }),
            "series" => {
                let open = matches!(results.last(), Some(r) if r.name == name && matches!(r.value, ResultValue::Series { .. }));
                if !open || row[2].is_empty() || &row[2] == "0" {
                    results.push(NamedResult {
                        name,
                        value: ResultValue::Series { x: Vec::new(), y: Vec::new() },
                    });
                }
                if !row[2].is_empty() {
                    if let Some(NamedResult { value: ResultValue::Series { x, y }, .. }) = results.last_mut() {
                        x.push(parse(&row[3])?);
                        y.push(parse(&row[4])?);
                    }
                }
            }
            "pass" => {
                let ok = match &row[4] {
                    "true" => true,
                    "false" => false,
                    other => return Err(bad(&format!("flag value {other:?}"))),
                };
                flags.insert(name, ok);
            }
            other => return Err(bad(&format!("row kind {other:?}"))),
        }
    }
    Ok((results, flags))
}

pub fn to_json(m: &RunManifest) -> Result<String> {
    Ok(serde_json::to_string_pretty(m)?)
}

pub fn render(m: &RunManifest, format: OutputFormat) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Json => Ok(to_json(m)?.into_bytes()),
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            write_csv(m, &mut buf)?;
            Ok(buf)
        }
    }
}

/// Writes to a temporary sibling file, then renames over the target.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let file_name = path
        .file_name()
        .ok_or_else(|| CliError::InvalidParam(format!("output path {} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.{}.tmp", file_name.to_string_lossy(), std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn write_manifest(m: &RunManifest, out: &OutputSpec) -> Result<()> {
    write_atomic(&out.path, &render(m, out.format)?)
}
