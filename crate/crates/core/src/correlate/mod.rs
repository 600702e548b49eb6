//! Averaging estimates: Cesàro correlations, polynomial-grid suprema,
//! short-interval and block averages, Weyl-type suprema, Rauzy independence,
//! `L¹` distances and the exploratory expansive-map search.

mod averages;
mod beta;
mod grid;
mod report;
mod weyl;

pub use averages::{
    block_average, cesaro_correlation, l1_distance, moment_check, momo_average, rauzy_independence,
};
pub use beta::{
    beta_integral_check, expansive_search, BetaIntegral, BetaIntegralConfig, ExpansiveResult,
    DEFAULT_BETA_CONSTANT, MAX_EXPANSIVE_DIGITS, MAX_EXPANSIVE_N, MIN_QUAD_POINTS,
};
pub use grid::{grid_sup, PolyGrid};
pub use report::{write_sup_csv, GridDescriptor, GridKind, MomoReport, SupReport};
pub use weyl::{huang_sup, weyl_sup_mobius, Weights};

use crate::error::{Error, Result};
use crate::sequence::PhaseSequence;

/// Grid supremum of `|(1/N) Σ cₙ e^{2πiP(n)}|` over polynomials of degree ≤ k,
/// at each checkpoint. The grid is used at degree `k`.
pub fn oscillation_order_test(
    c: &PhaseSequence,
    k: u32,
    grid: &PolyGrid,
    checkpoints: &[usize],
) -> Result<Vec<(usize, SupReport)>> {
    if k == 0 {
        return Err(Error::Domain("oscillation order must be at least 1".into()));
    }
    if checkpoints.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::Domain("checkpoints must increase".into()));
    }
    let grid = grid.with_degree(k);
    checkpoints
        .iter()
        .map(|&n| Ok((n, grid_sup(c, &grid, n)?)))
        .collect()
}
