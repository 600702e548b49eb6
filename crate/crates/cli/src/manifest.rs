use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::ExperimentSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResultValue {
    Scalar { value: f64 },
    Series { x: Vec<f64>, y: Vec<f64> },
    Text { value: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedResult {
    pub name: String,
    #[serde(flatten)]
    pub value: ResultValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub artifact_version: String,
    pub experiment: ExperimentSpec,
    pub started: String,
    pub finished: String,
    pub results: Vec<NamedResult>,
    pub pass_flags: BTreeMap<String, bool>,
}

impl RunManifest {
    pub fn result(&self, name: &str) -> Option<&ResultValue> {
        self.results.iter().find(|r| r.name == name).map(|r| &r.value)
    }

    pub fn scalar(&self, name: &str) -> Option<f64> {
        match self.result(name)? {
            ResultValue::Scalar { value } => Some(*value),
            _ => None,
        }
    }

    pub fn series(&self, name: &str) -> Option<(&[f64], &[f64])> {
        match self.result(name)? {
            ResultValue::Series { x, y } => Some((x, y)),
            _ => None,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.pass_flags.values().all(|&b| b)
    }

    /// Largest difference between two manifests' results, or `None` when
    /// they differ in shape, names, text or pass flags.
    pub fn max_result_difference(&self, other: &RunManifest) -> Option<f64> {
        if self.results.len() != other.results.len() || self.pass_flags != other.pass_flags {
            return None;
        }
        let mut worst: f64 = 0.0;
        for (a, b) in self.results.iter().zip(&other.results) {
            if a.name != b.name {
                return None;
            }
            match (&a.value, &b.value) {
                (ResultValue::Scalar { value: u }, ResultValue::Scalar { value: v }) => {
                    worst = worst.max(diff(*u, *v));
                }
                (ResultValue::Series { x: x1, y: y1 }, ResultValue::Series { x: x2, y: y2 }) => {
                    if x1.len() != x2.len() || y1.len() != y2.len() {
                        return None;
                    }
                    for (u, v) in x1.iter().zip(x2).chain(y1.iter().zip(y2)) {
                        worst = worst.max(diff(*u, *v));
                    }
                }
                (ResultValue::Text { value: s }, ResultValue::Text { value: t }) if s == t => {}
                _ => return None,
            }
        }
        Some(worst)
    }
}

fn diff(a: f64, b: f64) -> f64 {
    if a == b || (a.is_nan() && b.is_nan()) {
        0.0
    } else {
        (a - b).abs()
    }
}

/// Collects results and pass flags while an experiment runs.
#[derive(Debug, Default)]
pub struct Outcome {
    pub results: Vec<NamedResult>,
    pub pass_flags: BTreeMap<String, bool>,
}

impl Outcome {
    pub fn scalar(&mut self, name: &str, value: f64) {
        self.push(name, ResultValue::Scalar { value });
    }

    pub fn series(&mut self, name: &str, x: Vec<f64>, y: Vec<f64>) {
        self.push(name, ResultValue::Series { x, y });
    }

    pub fn text(&mut self, name: &str, value: impl Into<String>) {
        self.push(name, ResultValue::Text { value: value.into() });
    }

    pub fn flag(&mut self, name: &str, ok: bool) {
        self.pass_flags.insert(name.to_string(), ok);
    }

    fn push(&mut self, name: &str, value: ResultValue) {
        self.results.push(NamedResult {
            name: name.to_string(),
            value,
        });
    }
}
