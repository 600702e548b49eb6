//! The β-integral bound for short sums of `e^{2πiℓf_{α,β}(h)}` and the
//! greedy digit search for `x` correlating `λ(n)` with `sin(2πbⁿx)`.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::weyl::Weights;
use crate::dynsys::RealPoly;
use crate::error::{Error, Result};
use crate::seqgen::{akiyama_jiang, AkiyamaJiang, GFunction};
use crate::summation::{ComplexSum, KahanSum};

pub const DEFAULT_BETA_CONSTANT: f64 = 10.0;
pub const MIN_QUAD_POINTS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaIntegralConfig {
    pub a: f64,
    pub b: f64,
    #[serde(rename = "H")]
    pub h: u64,
    pub ell: i64,
    pub m: u64,
    pub quad_points: usize,
    pub alpha: f64,
    pub q: RealPoly,
    /// Stand-in for the unspecified absolute constant of the bound.
    pub constant: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaIntegral {
    pub lhs: f64,
    pub rhs: f64,
}

/// `lhs = ∫_a^b |(1/H) Σ_{m ≤ h < m+H} e^{2πiℓf_{α,β}(h)}|² dβ` by the midpoint
/// rule, `rhs = (b−a)/H + C·log(3H)/(|ℓ|H)`. Nothing is asserted.
pub fn beta_integral_check(cfg: &BetaIntegralConfig) -> Result<BetaIntegral> {
    if !(cfg.a > 1.0 && cfg.b > cfg.a) {
        return Err(Error::Domain(format!("need 1 < a < b, got a={}, b={}", cfg.a, cfg.b)));
    }
    if cfg.h == 0 || cfg.ell == 0 {
        return Err(Error::Domain("H and ell must be non-zero".into()));
    }
    if cfg.quad_points < MIN_QUAD_POINTS {
        return Err(Error::Config(format!(
            "quadrature needs at least {MIN_QUAD_POINTS} points, got {}",
            cfg.quad_points
        )));
    }
    let width = (cfg.b - cfg.a) / cfg.quad_points as f64;
    let n_max = cfg.m + cfg.h;
    let samples: Vec<f64> = (0..cfg.quad_points)
        .into_par_iter()
        .map(|i| {
            let beta = cfg.a + (i as f64 + 0.5) * width;
            let params = AkiyamaJiang::new(cfg.alpha, beta, GFunction::One).with_poly(cfg.q.clone());
            let seq = akiyama_jiang(n_max, &params)?;
            let window = &seq.values()[cfg.m as usize..n_max as usize];
            let s: ComplexSum = window.iter().map(|z| z.powi(cfg.ell as i32)).collect();
            Ok((s.value() / cfg.h as f64).norm_sqr())
        })
        .collect::<Result<_>>()?;
    let mean = samples.iter().copied().collect::<KahanSum>().value() / samples.len() as f64;
    let h = cfg.h as f64;
    Ok(BetaIntegral {
        lhs: (cfg.b - cfg.a) * mean,
        rhs: (cfg.b - cfg.a) / h + cfg.constant * (3.0 * h).ln() / (cfg.ell.unsigned_abs() as f64 * h),
    })
}

pub const MAX_EXPANSIVE_DIGITS: usize = 40;
pub const MAX_EXPANSIVE_N: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansiveResult {
    pub base: u64,
    pub digits: Vec<u64>,
    pub x: f64,
    pub correlation: f64,
}

/// `(1/N) Σ_{n ≤ N} w(n) sin(2π bⁿ x)` for `x = 0.d₁d₂…d_t` in base `b`.
///
/// `frac(bⁿx)` is the digit tail after shifting `n` places, so terms with
/// `n ≥ t` vanish.
fn digit_correlation(base: u64, digits: &[u64], w: &[f64]) -> f64 {
    let t = digits.len();
    let b = BigUint::from(base);
    let mut x = BigUint::zero();
    for &d in digits {
        x = x * &b + d;
    }
    let mut acc = KahanSum::new();
    let mut denom = num_traits::pow(b.clone(), t);
    for (i, &wn) in w.iter().enumerate() {
        let n = i + 1;
        if n >= t {
            break;
        }
        denom /= &b;
        let tail = &x % &denom;
        let frac = ((tail << 64u32) / &denom).to_f64().unwrap_or(0.0) / 2f64.powi(64);
        acc.add(wn * (std::f64::consts::TAU * frac).sin());
    }
    acc.value() / w.len() as f64
}

/// Greedy base-`b` search: append the digit maximizing the correlation,
/// smallest digit on ties. Exploratory, with no optimality claim.
pub fn expansive_search(base: u64, n: usize, weights: Weights, digits: usize) -> Result<ExpansiveResult> {
    if base < 2 {
        return Err(Error::Domain(format!("base must be at least 2, got {base}")));
    }
    if digits > MAX_EXPANSIVE_DIGITS || n == 0 || n > MAX_EXPANSIVE_N {
        return Err(Error::capacity(
            format!("expansive search with N = {n}, {digits} digits"),
            format!("N ≤ {MAX_EXPANSIVE_N}, digits ≤ {MAX_EXPANSIVE_DIGITS}"),
        ));
    }
    let w: Vec<f64> = weights.dense(n)?.iter().map(|z| z.re).collect();
    let mut chosen: Vec<u64> = Vec::with_capacity(digits);
    let mut best = 0.0;
    for _ in 0..digits {
        let scores: Vec<f64> = (0..base)
            .into_par_iter()
            .map(|d| {
                let mut trial = chosen.clone();
                trial.push(d);
                digit_correlation(base, &trial, &w)
            })
            .collect();
        let (mut pick, mut value) = (0u64, scores[0]);
        for (d, &s) in scores.iter().enumerate() {
            if s > value {
                pick = d as u64;
                value = s;
            }
        }
        chosen.push(pick);
        best = value;
    }
    let x = chosen
        .iter()
        .rev()
        .fold(0.0, |acc, &d| (acc + d as f64) / base as f64);
    Ok(ExpansiveResult {
        base,
        digits: chosen,
        x,
        correlation: best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(h: u64, ell: i64) -> BetaIntegralConfig {
        BetaIntegralConfig {
            a: 1.1,
            b: 2.0,
            h,
            ell,
            m: 50,
            quad_points: 100,
            alpha: 1.0,
            q: RealPoly::zero(),
            constant: DEFAULT_BETA_CONSTANT,
        }
    }

    #[test]
    fn single_term_integrand_is_one() {
        let r = beta_integral_check(&cfg(1, 1)).unwrap();
        assert!((r.lhs - (2.0 - 1.1)).abs() < 1e-15);
        assert!(r.rhs >= 2.0 - 1.1);
    }

    #[test]
    fn doubling_ell_halves_second_term() {
        let r1 = beta_integral_check(&cfg(20, 1)).unwrap();
        let r2 = beta_integral_check(&cfg(20, 2)).unwrap();
        let first = 0.9 / 20.0;
        assert!(((r2.rhs - first) - (r1.rhs - first) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn quadrature_floor() {
        let mut c = cfg(5, 1);
        c.quad_points = 10;
        assert!(matches!(beta_integral_check(&c), Err(Error::Config(_))));
    }

    #[test]
    fn digit_tail_arithmetic() {
        // x = 0.011 in base 2 = 3/8: frac(2x) = 3/4, frac(4x) = 1/2
        let w = [1.0, 0.0, 0.0, 0.0];
        let c = digit_correlation(2, &[0, 1, 1], &w);
        assert!((c - (std::f64::consts::TAU * 0.75).sin() / 4.0).abs() < 1e-15);
        let w = [0.0, 1.0];
        let c = digit_correlation(2, &[0, 1, 1], &w);
        assert!((c - (std::f64::consts::PI).sin() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn greedy_with_unit_weights_is_nonnegative() {
        let r = expansive_search(3, 200, Weights::Ones, 12).unwrap();
        assert!(r.correlation >= 0.0 && r.correlation <= 1.0);
        assert_eq!(r.digits.len(), 12);
        assert!((0.0..1.0).contains(&r.x));
    }
}
