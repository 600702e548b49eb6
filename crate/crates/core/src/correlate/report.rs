use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    Polynomial,
    Beta,
    Theta,
}

/// Enough to rebuild the grid a supremum was taken over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDescriptor {
    pub kind: GridKind,
    pub degree: u32,
    pub q_cap: u32,
    pub random_draws: u32,
    pub seed: u64,
    pub extra: usize,
    pub size: usize,
}

/// Best value of a grid search. Always a lower bound for the true supremum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupReport {
    pub sup_value: f64,
    pub argmax_params: Vec<f64>,
    /// Human-readable name of the maximizer, e.g. `rational:1/3;0/1`.
    pub argmax_label: String,
    pub grid: GridDescriptor,
    #[serde(rename = "N")]
    pub n: usize,
    pub is_lower_bound: bool,
}

impl SupReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// Columns `N, sup_value, argmax, grid_Q, grid_R, seed`; argmax coefficients joined by `;`.
pub fn write_sup_csv<W: Write>(reports: &[SupReport], mut out: W, header: &[String]) -> Result<()> {
    for line in header {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "N,sup_value,argmax,grid_Q,grid_R,seed")?;
    for r in reports {
        let argmax: Vec<String> = r.argmax_params.iter().map(|v| format!("{v:e}")).collect();
        writeln!(
            out,
            "{},{:e},{},{},{},{}",
            r.n,
            r.sup_value,
            argmax.join(";"),
            r.grid.q_cap,
            r.grid.random_draws,
            r.grid.seed
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomoReport {
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "H")]
    pub h: u64,
    pub value: f64,
    pub ell: i64,
}
