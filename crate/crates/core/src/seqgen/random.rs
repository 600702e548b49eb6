//! Independent mean-zero weights.
//!
//! Draws come from ChaCha20 seeded with `seed`; the output is cut into blocks of
//! [`BLOCK_LEN`] terms and block `b` uses stream `b`, so the sequence does not
//! depend on how many threads generate it.

use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::PhaseSequence;
use crate::turn::Turn;

/// Recorded in run metadata next to the seed.
pub const RNG_ALGORITHM: &str = "chacha20/seed_from_u64/stream=block/block=65536";

pub const BLOCK_LEN: usize = 1 << 16;

/// Symmetric truncation point of the Gaussian weights.
pub const GAUSSIAN_TRUNCATION: f64 = 3.0;

pub const MAX_RANDOM_LEN: u64 = 1 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    /// ±1 with probability 1/2 each.
    Rademacher,
    /// Uniform on the unit circle.
    UniformComplex,
    /// Standard normal conditioned on `|x| ≤ 3`.
    GaussianTruncated,
}

impl WeightKind {
    pub fn bound(self) -> f64 {
        match self {
            WeightKind::Rademacher | WeightKind::UniformComplex => 1.0,
            WeightKind::GaussianTruncated => GAUSSIAN_TRUNCATION,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            WeightKind::Rademacher => "rademacher",
            WeightKind::UniformComplex => "uniform_complex",
            WeightKind::GaussianTruncated => "gaussian_truncated",
        }
    }
}

impl FromStr for WeightKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "rademacher" => Ok(WeightKind::Rademacher),
            "uniform_complex" => Ok(WeightKind::UniformComplex),
            "gaussian_truncated" => Ok(WeightKind::GaussianTruncated),
            other => Err(Error::Config(format!(
                "unknown weight distribution {other:?} (expected rademacher, uniform_complex or gaussian_truncated)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightDistribution {
    pub kind: WeightKind,
    pub seed: u64,
    /// Exponent of the uniform `L^p` moment bound; informational only.
    pub p_bound: f64,
}

impl WeightDistribution {
    pub fn new(kind: WeightKind, seed: u64) -> Self {
        Self {
            kind,
            seed,
            p_bound: f64::INFINITY,
        }
    }

    pub fn rademacher(seed: u64) -> Self {
        Self::new(WeightKind::Rademacher, seed)
    }
}

/// `n_max` independent draws `X_1, …, X_{n_max}` (origin 1).
pub fn random_weights(n_max: u64, dist: &WeightDistribution) -> Result<PhaseSequence> {
    if n_max == 0 || n_max > MAX_RANDOM_LEN {
        return Err(Error::capacity(
            format!("random sequence length {n_max}"),
            format!("1..={MAX_RANDOM_LEN}"),
        ));
    }
    let mut values = vec![Complex64::new(0.0, 0.0); n_max as usize];
    values
        .par_chunks_mut(BLOCK_LEN)
        .enumerate()
        .for_each(|(block, chunk)| fill_block(chunk, block as u64, dist));
    PhaseSequence::new(values, dist.kind.bound(), 1)
}

fn fill_block(out: &mut [Complex64], block: u64, dist: &WeightDistribution) {
    let mut rng = ChaCha20Rng::seed_from_u64(dist.seed);
    rng.set_stream(block);
    for z in out.iter_mut() {
        *z = match dist.kind {
            WeightKind::Rademacher => {
                let bit = rng.gen::<u64>() >> 63;
                Complex64::new(if bit == 0 { 1.0 } else { -1.0 }, 0.0)
            }
            WeightKind::UniformComplex => Turn(rng.gen::<u128>()).cis(),
            WeightKind::GaussianTruncated => loop {
                let x: f64 = rng.sample(StandardNormal);
                if x.abs() <= GAUSSIAN_TRUNCATION {
                    break Complex64::new(x, 0.0);
                }
            },
        };
    }
}
