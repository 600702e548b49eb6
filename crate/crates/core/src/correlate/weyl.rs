//! Möbius-weighted exponential sums: Davenport–Hua type suprema and the
//! short-interval double average over a `β` grid.

use rayon::prelude::*;

use super::report::{GridDescriptor, GridKind, SupReport};
use crate::error::{Error, Result};
use crate::seqgen::SieveTable;
use crate::sequence::PhaseSequence;
use crate::summation::{argmax, ComplexSum, KahanSum};
use crate::turn::Turn;
use crate::Complex64;

/// Weight sequence indexed by `n ≥ 1`.
#[derive(Debug, Clone, Copy)]
pub enum Weights<'a> {
    Mobius(&'a SieveTable),
    Liouville(&'a SieveTable),
    /// `w ≡ 1`, for calibration.
    Ones,
    Sequence(&'a PhaseSequence),
}

impl Weights<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            Weights::Mobius(_) => "mobius",
            Weights::Liouville(_) => "liouville",
            Weights::Ones => "ones",
            Weights::Sequence(_) => "sequence",
        }
    }

    /// `w(1), …, w(len)`.
    pub fn dense(&self, len: usize) -> Result<Vec<Complex64>> {
        let short = |have: u64| {
            Error::Length(format!(
                "weights cover n ≤ {have} but n ≤ {len} is needed"
            ))
        };
        let real = |s: &[i8]| s[1..=len].iter().map(|&v| Complex64::new(v as f64, 0.0)).collect();
        match self {
            Weights::Mobius(t) if t.limit() >= len as u64 => Ok(real(t.mobius_slice())),
            Weights::Liouville(t) if t.limit() >= len as u64 => Ok(real(t.liouville_slice())),
            Weights::Mobius(t) | Weights::Liouville(t) => Err(short(t.limit())),
            Weights::Ones => Ok(vec![Complex64::new(1.0, 0.0); len]),
            Weights::Sequence(s) => {
                if len == 0 {
                    return Ok(Vec::new());
                }
                if !s.covers(1) || !s.covers(len as i64) {
                    return Err(short(s.last_index().max(0) as u64));
                }
                let start = (1 - s.origin()) as usize;
                Ok(s.values()[start..start + len].to_vec())
            }
        }
    }
}

fn grid_report(
    values: &[f64],
    grid: &[f64],
    kind: GridKind,
    degree: u32,
    n: usize,
) -> Result<SupReport> {
    let (i, v) = argmax(values).ok_or_else(|| Error::Config("parameter grid is empty".into()))?;
    let name = match kind {
        GridKind::Beta => "beta",
        GridKind::Theta => "theta",
        GridKind::Polynomial => "poly",
    };
    Ok(SupReport {
        sup_value: v,
        argmax_params: vec![grid[i]],
        argmax_label: format!("{name}={}", grid[i]),
        grid: GridDescriptor {
            kind,
            degree,
            q_cap: 0,
            random_draws: 0,
            seed: 0,
            extra: 0,
            size: grid.len(),
        },
        n,
        is_lower_bound: true,
    })
}

/// `sup_θ |(1/N) Σ_{n ≤ N} w(n) e^{2πi nᵏθ}|` with `nᵏθ mod 1` exact.
pub fn weyl_sup_mobius(n: usize, k: u32, theta_grid: &[f64], weights: Weights) -> Result<SupReport> {
    if n == 0 {
        return Err(Error::Length("N must be at least 1".into()));
    }
    let w = weights.dense(n)?;
    let support: Vec<(u128, Complex64)> = w
        .iter()
        .enumerate()
        .filter(|(_, z)| **z != Complex64::new(0.0, 0.0))
        .map(|(i, z)| {
            let m = (i + 1) as u128;
            (m.wrapping_pow(k), *z)
        })
        .collect();
    let values: Vec<f64> = theta_grid
        .par_iter()
        .map(|&theta| {
            let t = Turn::from_f64(theta);
            let mut acc = ComplexSum::new();
            for &(nk, z) in &support {
                acc.add(z * t.times(nk).cis());
            }
            acc.value().norm() / n as f64
        })
        .collect();
    grid_report(&values, theta_grid, GridKind::Theta, k, n)
}

/// `sup_β (1/N) Σ_{n=1}^{N} |(1/L) Σ_{l=1}^{L} w(l+n) e^{2πiβlᵏ}|`.
///
/// `k = 1` slides the inner sum in `O(N + L)` per `β`, resynchronizing every
/// 1024 steps; other `k` cost `O(NL)` per `β`.
pub fn huang_sup(n: usize, l: usize, k: u32, beta_grid: &[f64], weights: Weights) -> Result<SupReport> {
    if n == 0 || l == 0 {
        return Err(Error::Length("N and L must be at least 1".into()));
    }
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let w = weights.dense(n + l)?;
    let values: Vec<f64> = beta_grid
        .par_iter()
        .map(|&beta| {
            if k == 1 {
                huang_value_sliding(&w, n, l, beta)
            } else {
                huang_value_direct(&w, n, l, k, beta)
            }
        })
        .collect();
    grid_report(&values, beta_grid, GridKind::Beta, k, n)
}

/// `e^{2πiβlᵏ}` for `l = 1..=L`.
fn twiddles(l: usize, k: u32, beta: f64) -> Vec<Complex64> {
    let t = Turn::from_f64(beta);
    (1..=l as u128).map(|x| t.times(x.wrapping_pow(k)).cis()).collect()
}

/// `w` is `w(1), w(2), …`, so `w(l+n)` sits at `w[l+n-1]`.
pub(crate) fn huang_value_direct(w: &[Complex64], n: usize, l: usize, k: u32, beta: f64) -> f64 {
    let tw = twiddles(l, k, beta);
    let mut outer = KahanSum::new();
    for start in 1..=n {
        let window = &w[start..start + l];
        let mut inner = Complex64::new(0.0, 0.0);
        for (a, b) in window.iter().zip(&tw) {
            inner += a * b;
        }
        outer.add(inner.norm() / l as f64);
    }
    outer.value() / n as f64
}

fn huang_value_sliding(w: &[Complex64], n: usize, l: usize, beta: f64) -> f64 {
    const RESYNC: usize = 1024;
    let tw = twiddles(l + 1, 1, beta);
    let back = Turn::from_f64(beta).cis().conj();
    let fresh = |start: usize| -> Complex64 {
        w[start..start + l].iter().zip(&tw).map(|(a, b)| a * b).sum()
    };
    let mut outer = KahanSum::new();
    let mut s = fresh(1);
    for start in 1..=n {
        if start > 1 {
            if (start - 1) % RESYNC == 0 {
                s = fresh(start);
            } else {
                // S(n) = e(−β)·(S(n−1) − w(n)e(β) + w(n+L)e(β(L+1)))
                s = back * (s - w[start - 1] * tw[0] + w[start - 1 + l] * tw[l]);
            }
        }
        outer.add(s.norm() / l as f64);
    }
    outer.value() / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqgen::mobius_range;

    #[test]
    fn calibration_values() {
        let r = weyl_sup_mobius(100, 2, &[0.0], Weights::Ones).unwrap();
        assert!((r.sup_value - 1.0).abs() < 1e-15);
        let r = weyl_sup_mobius(100, 1, &[0.5], Weights::Ones).unwrap();
        assert!(r.sup_value < 1e-14);
        let r = huang_sup(50, 20, 2, &[0.0], Weights::Ones).unwrap();
        assert!((r.sup_value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sliding_matches_direct() {
        let table = mobius_range(5000).unwrap();
        let w = Weights::Mobius(&table).dense(4000).unwrap();
        for beta in [0.0, 0.1234, 0.5, 0.987654] {
            let a = huang_value_sliding(&w, 2500, 1000, beta);
            let b = huang_value_direct(&w, 2500, 1000, 1, beta);
            assert!((a - b).abs() < 1e-12, "beta={beta}: {a} vs {b}");
        }
    }

    #[test]
    fn beta_zero_is_plain_window_average() {
        let table = mobius_range(400).unwrap();
        let r = huang_sup(200, 100, 3, &[0.0], Weights::Mobius(&table)).unwrap();
        let mut want = 0.0;
        for n in 1..=200u64 {
            let s: i64 = (1..=100u64).map(|l| table.mobius(l + n) as i64).sum();
            want += (s as f64 / 100.0).abs();
        }
        assert!((r.sup_value - want / 200.0).abs() < 1e-12);
    }

    #[test]
    fn short_sieve_is_rejected() {
        let table = mobius_range(100).unwrap();
        assert!(matches!(
            huang_sup(80, 30, 1, &[0.1], Weights::Mobius(&table)),
            Err(Error::Length(_))
        ));
    }

    #[test]
    fn sequence_weights_start_at_one() {
        let s = PhaseSequence::from_real((0..10).map(|i| i as f64), 9.0, 0).unwrap();
        let d = Weights::Sequence(&s).dense(3).unwrap();
        assert_eq!(d.iter().map(|z| z.re).collect::<Vec<_>>(), vec![1.0, 2.0, 3.0]);
    }
}
