//! Weight sequences: multiplicative, automatic, random and analytic.

mod analytic;
mod automatic;
mod irrational;
mod random;
mod sieve;

pub use analytic::{
    akiyama_jiang, akiyama_jiang_horizon, bracket_seq, geometric_phase, AkiyamaJiang,
    GFunction, GeometricArg, AKIYAMA_MAX_BITS,
};
pub use automatic::{rudin_shapiro, thue_morse, MAX_AUTOMATIC_LEN};
pub use irrational::{Irrational, QuadraticIrrational};
pub use random::{random_weights, WeightDistribution, WeightKind, BLOCK_LEN, GAUSSIAN_TRUNCATION, MAX_RANDOM_LEN,
    RNG_ALGORITHM,};
pub use sieve::{
    liouville_range, mobius_range, CacheStatus, SieveCache, SieveTable, CACHE_MAGIC, MAX_SIEVE_LIMIT,
    MIN_SIEVE_LIMIT,
};
