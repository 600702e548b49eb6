use std::io::{BufRead, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed above the declared modulus bound.
pub const BOUND_SLACK: f64 = 1e-12;

/// A finite complex sequence `c_n`, `n = origin .. origin + len`, with a
/// declared uniform bound `|c_n| ≤ bound`.
///
/// This is the common carrier for weights, dynamical samples `f(Tⁿx)` and
/// nilsequence samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSequence {
    origin: i64,
    bound: f64,
    values: Vec<Complex64>,
}

impl PhaseSequence {
    pub fn new(values: Vec<Complex64>, bound: f64, origin: i64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("a phase sequence needs at least one term".into()));
        }
        if !(bound >= 0.0) {
            return Err(Error::Domain(format!("bound must be non-negative, got {bound}")));
        }
        if let Some((i, z)) = values
            .iter()
            .enumerate()
            .find(|(_, z)| !(z.norm() <= bound + BOUND_SLACK))
        {
            return Err(Error::Domain(format!(
                "term {} has modulus {} above the declared bound {bound}",
                origin + i as i64,
                z.norm()
            )));
        }
        Ok(Self {
            origin,
            bound,
            values,
        })
    }

    /// Sequence of modulus-one values.
    pub fn unimodular(values: Vec<Complex64>, origin: i64) -> Result<Self> {
        Self::new(values, 1.0, origin)
    }

    pub fn from_real(values: impl IntoIterator<Item = f64>, bound: f64, origin: i64) -> Result<Self> {
        Self::new(
            values.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
            bound,
            origin,
        )
    }

    pub fn constant(value: Complex64, len: usize, origin: i64) -> Result<Self> {
        Self::new(vec![value; len], value.norm(), origin)
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Last index covered.
    pub fn last_index(&self) -> i64 {
        self.origin + self.values.len() as i64 - 1
    }

    /// Term with absolute index `n`.
    pub fn get(&self, n: i64) -> Option<Complex64> {
        let i = n.checked_sub(self.origin)?;
        usize::try_from(i).ok().and_then(|i| self.values.get(i)).copied()
    }

    pub fn covers(&self, n: i64) -> bool {
        n >= self.origin && n <= self.last_index()
    }

    /// Terms `start ..= start + len - 1`, re-based so that `start` is the new origin.
    pub fn window(&self, start: i64, len: usize) -> Result<Self> {
        if len == 0 || !self.covers(start) || !self.covers(start + len as i64 - 1) {
            return Err(Error::Length(format!(
                "window [{start}, {}] outside [{}, {}]",
                start + len as i64 - 1,
                self.origin,
                self.last_index()
            )));
        }
        let i = (start - self.origin) as usize;
        Ok(Self {
            origin: start,
            bound: self.bound,
            values: self.values[i..i + len].to_vec(),
        })
    }

    /// Same values, relabelled so the first term carries index `origin`.
    pub fn with_origin(mut self, origin: i64) -> Self {
        self.origin = origin;
        self
    }

    pub fn conj(&self) -> Self {
        Self {
            origin: self.origin,
            bound: self.bound,
            values: self.values.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &PhaseSequence) -> Result<Self> {
        if self.origin != other.origin || self.len() != other.len() {
            return Err(Error::Length(format!(
                "cannot multiply [{}, {}] by [{}, {}]",
                self.origin,
                self.last_index(),
                other.origin,
                other.last_index()
            )));
        }
        Ok(Self {
            origin: self.origin,
            bound: self.bound * other.bound,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, mut out: W, header: &[String]) -> Result<()> {
        for line in header {
            writeln!(out, "# {line}")?;
        }
        writeln!(out, "# origin={} bound={}", self.origin, self.bound)?;
        writeln!(out, "index,re,im")?;
        for (i, z) in self.values.iter().enumerate() {
            writeln!(out, "{},{:e},{:e}", self.origin + i as i64, z.re, z.im)?;
        }
        Ok(())
    }

    /// Reads the format produced by [`write_csv`](Self::write_csv).
    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut bound = None;
        let mut origin = None;
        let mut values = Vec::new();
        for line in input.lines() {
            let line = line?;
            let line = line.trim();
            if let Some(meta) = line.strip_prefix('#') {
                for kv in meta.split_whitespace() {
                    if let Some(v) = kv.strip_prefix("bound=") {
                        bound = v.parse::<f64>().ok();
                    } else if let Some(v) = kv.strip_prefix("origin=") {
                        origin = v.parse::<i64>().ok();
                    }
                }
                continue;
            }
            if line.is_empty() || line.starts_with("index") {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Config(format!("bad CSV number {s:?}: {e}")))
            };
            if fields.len() != 3 {
                return Err(Error::Config(format!("expected index,re,im but got {line:?}")));
            }
            let index: i64 = fields[0]
                .trim()
                .parse()
                .map_err(|e| Error::Config(format!("bad index {:?}: {e}", fields[0])))?;
            if origin.is_none() {
                origin = Some(index);
            }
            values.push(Complex64::new(parse(fields[1])?, parse(fields[2])?));
        }
        let bound = bound.unwrap_or_else(|| values.iter().map(|z| z.norm()).fold(0.0, f64::max));
        Self::new(values, bound, origin.unwrap_or(0))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: PhaseSequence = serde_json::from_str(s)?;
        Self::new(raw.values, raw.bound, raw.origin)
    }
}
