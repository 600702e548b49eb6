//! Desk-scale laboratory for oscillating sequences and zero-entropy dynamics.
//!
//! The crate is split the same way the experiments are:
//!
//! * [`seqgen`] produces weight sequences (Möbius/Liouville sieves, automatic
//!   sequences, random weights, analytic phase sequences);
//! * [`dynsys`] simulates unipotent torus maps, nilrotations, quasi-discrete
//!   spectrum samples and expanding maps;
//! * [`gowers`] evaluates Gowers uniformity norms on cyclic groups and intervals;
//! * [`correlate`] holds every averaging estimate (Cesàro correlations,
//!   polynomial-grid suprema, short-interval averages, Weyl sums).
//!
//! Phases modulo one are carried as [`Turn`] values (128-bit fixed point), so
//! that quantities such as `C(n, 5)·θ mod 1` stay exact long after `f64` has
//! lost every fractional digit.

pub mod correlate;
pub mod dynsys;
pub mod error;
pub mod gowers;
pub mod seqgen;
pub mod sequence;
pub mod summation;
pub mod turn;

pub use error::{Error, Result};
pub use sequence::PhaseSequence;
pub use turn::Turn;

pub use num_complex::Complex64;

/// Version string written into every run header and cache file.
pub const ARTIFACT_VERSION: &str = concat!("oscillab ", env!("CARGO_PKG_VERSION"));
