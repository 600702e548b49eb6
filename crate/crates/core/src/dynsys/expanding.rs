//! Expanding circle maps `x ↦ px mod 1` and `x ↦ βx mod 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpandingMap {
    TimesP(u64),
    TimesBeta(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitStart {
    Rational { a: i64, q: u64 },
    Real(f64),
}

impl ExpandingMap {
    fn factor(self) -> f64 {
        match self {
            ExpandingMap::TimesP(p) => p as f64,
            ExpandingMap::TimesBeta(b) => b,
        }
    }

    /// Steps a binary64 start point survives before its digits run out.
    pub fn horizon(self) -> u64 {
        (52.0 / self.factor().log2()).floor() as u64
    }
}

/// `x₀, Tx₀, …, T^{n_max−1}x₀`.
///
/// `×p` on a rational start is exact. Everything else runs in binary64 and is
/// refused past [`ExpandingMap::horizon`] steps.
pub fn expanding_orbit(map: ExpandingMap, x0: OrbitStart, n_max: usize) -> Result<Vec<f64>> {
    match map {
        ExpandingMap::TimesP(p) if p < 2 => {
            return Err(Error::Domain(format!("p must be at least 2, got {p}")))
        }
        ExpandingMap::TimesBeta(b) if !(b.is_finite() && b > 1.0) => {
            return Err(Error::Domain(format!("beta must exceed 1, got {b}")))
        }
        _ => {}
    }
    if let (ExpandingMap::TimesP(p), OrbitStart::Rational { a, q }) = (map, x0) {
        if q == 0 {
            return Err(Error::Domain("denominator must be positive".into()));
        }
        let q = q as u128;
        let mut r = (a as i128).rem_euclid(q as i128) as u128;
        let p = p as u128 % q;
        return Ok((0..n_max)
            .map(|_| {
                let x = r as f64 / q as f64;
                r = r * p % q;
                x
            })
            .collect());
    }
    let start = match x0 {
        OrbitStart::Rational { a, q } if q > 0 => (a as f64 / q as f64).rem_euclid(1.0),
        OrbitStart::Rational { .. } => return Err(Error::Domain("denominator must be positive".into())),
        OrbitStart::Real(x) => x.rem_euclid(1.0),
    };
    let horizon = map.horizon();
    if n_max as u64 > horizon + 1 {
        return Err(Error::precision(
            format!("binary64 orbit of {map:?} with {n_max} points"),
            horizon,
        ));
    }
    let f = map.factor();
    let mut x = start;
    Ok((0..n_max)
        .map(|_| {
            let v = x;
            x = (f * x).rem_euclid(1.0);
            v
        })
        .collect())
}
