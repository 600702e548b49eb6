//! Real polynomials in the monomial basis `Σ aⱼ nʲ` or the binomial basis `Σ bⱼ C(n, j)`.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::turn::{bigint_mod_2_128, Turn};

pub const MAX_POLY_DEGREE: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Monomial,
    Binomial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealPoly {
    coeffs: Vec<f64>,
    basis: Basis,
}

/// `j!·S(i, j)`: the monomial-to-binomial change of basis, `nⁱ = Σⱼ T(i,j)·C(n,j)`.
fn surjection_table(max: usize) -> Vec<Vec<u128>> {
    let mut t = vec![vec![0u128; max + 1]; max + 1];
    t[0][0] = 1;
    for i in 1..=max {
        for j in 1..=i {
            t[i][j] = (j as u128) * (t[i - 1][j] + t[i - 1][j - 1]);
        }
    }
    t
}

/// Signed Stirling numbers of the first kind, `n(n−1)⋯(n−j+1) = Σᵢ s(j,i)·nⁱ`.
fn stirling_first_table(max: usize) -> Vec<Vec<i128>> {
    let mut s = vec![vec![0i128; max + 1]; max + 1];
    s[0][0] = 1;
    for j in 0..max {
        for i in 1..=j + 1 {
            s[j + 1][i] = s[j][i - 1] - (j as i128) * s[j][i];
        }
    }
    s
}

/// `C(n, j)` for any integer `n` (so `C(−1, 2) = 1`).
pub fn binomial_big(n: i64, j: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..j {
        num *= BigInt::from(n - i as i64);
        den *= BigInt::from(i + 1);
    }
    num / den
}

impl RealPoly {
    pub fn new(coeffs: Vec<f64>, basis: Basis) -> Self {
        let coeffs = if coeffs.is_empty() { vec![0.0] } else { coeffs };
        Self { coeffs, basis }
    }

    pub fn monomial(coeffs: Vec<f64>) -> Self {
        Self::new(coeffs, Basis::Monomial)
    }

    pub fn binomial(coeffs: Vec<f64>) -> Self {
        Self::new(coeffs, Basis::Binomial)
    }

    pub fn zero() -> Self {
        Self::monomial(vec![0.0])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    /// Index of the last non-zero coefficient (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    fn check_degree(&self) -> Result<()> {
        if self.degree() > MAX_POLY_DEGREE {
            return Err(Error::capacity(
                format!("polynomial of degree {}", self.degree()),
                MAX_POLY_DEGREE,
            ));
        }
        Ok(())
    }

    fn trimmed(&self) -> &[f64] {
        &self.coeffs[..=self.degree()]
    }

    /// Same polynomial written as `Σ bⱼ C(n, j)`.
    pub fn to_binomial_basis(&self) -> Result<RealPoly> {
        self.check_degree()?;
        if self.basis == Basis::Binomial {
            return Ok(self.clone());
        }
        let a = self.trimmed();
        let d = a.len() - 1;
        let t = surjection_table(d);
        let b = (0..=d)
            .map(|j| (j..=d).map(|i| a[i] * t[i][j] as f64).sum())
            .collect();
        Ok(RealPoly::binomial(b))
    }

    /// Same polynomial written as `Σ aᵢ nⁱ`.
    pub fn to_monomial_basis(&self) -> Result<RealPoly> {
        self.check_degree()?;
        if self.basis == Basis::Monomial {
            return Ok(self.clone());
        }
        let b = self.trimmed();
        let d = b.len() - 1;
        let s = stirling_first_table(d);
        let mut factorial = 1.0;
        let mut a = vec![0.0; d + 1];
        for (j, &bj) in b.iter().enumerate() {
            if j > 0 {
                factorial *= j as f64;
            }
            for i in 0..=j {
                a[i] += bj * s[j][i] as f64 / factorial;
            }
        }
        Ok(RealPoly::monomial(a))
    }

    /// Binomial-basis coefficients reduced mod 1, computed exactly.
    ///
    /// `b_j` are the forward differences `Δʲ P(0)`.
    pub fn binomial_phases(&self) -> Result<Vec<Turn>> {
        self.check_degree()?;
        let c = self.trimmed();
        Ok(match self.basis {
            Basis::Binomial => c.iter().map(|&b| Turn::from_f64(b)).collect(),
            Basis::Monomial => {
                let d = c.len() - 1;
                let t = surjection_table(d);
                let a: Vec<Turn> = c.iter().map(|&x| Turn::from_f64(x)).collect();
                (0..=d)
                    .map(|j| (j..=d).map(|i| a[i].times(t[i][j])).sum())
                    .collect()
            }
        })
    }

    /// `P(n) mod 1`, exact for binary64 coefficients.
    pub fn phase_at(&self, n: i64) -> Turn {
        let c = self.trimmed();
        match self.basis {
            Basis::Monomial => {
                let n = n as i128 as u128;
                let mut power: u128 = 1;
                let mut acc = Turn::ZERO;
                for &a in c {
                    acc += Turn::from_f64(a).times(power);
                    power = power.wrapping_mul(n);
                }
                acc
            }
            Basis::Binomial => c
                .iter()
                .enumerate()
                .map(|(j, &b)| Turn::from_f64(b).times(bigint_mod_2_128(&binomial_big(n, j))))
                .sum(),
        }
    }

    /// Iterator over `P(start), P(start+1), …` mod 1, by exact forward differences.
    pub fn phase_stepper(&self, start: i64) -> PhaseStepper {
        let d = self.degree();
        let mut diffs: Vec<Turn> = (0..=d as i64).map(|k| self.phase_at(start + k)).collect();
        for level in 1..=d {
            for i in (level..=d).rev() {
                diffs[i] = diffs[i] - diffs[i - 1];
            }
        }
        PhaseStepper { diffs }
    }

    /// Floating evaluation; only for display and coarse checks.
    pub fn eval_f64(&self, x: f64) -> f64 {
        let c = self.trimmed();
        match self.basis {
            Basis::Monomial => c.iter().rev().fold(0.0, |acc, &a| acc * x + a),
            Basis::Binomial => {
                let mut binom = 1.0;
                let mut acc = 0.0;
                for (j, &b) in c.iter().enumerate() {
                    if j > 0 {
                        binom *= (x - (j - 1) as f64) / j as f64;
                    }
                    acc += b * binom;
                }
                acc
            }
        }
    }

    /// True when the polynomial maps integers to integers.
    pub fn is_integer_valued(&self) -> bool {
        match self.to_binomial_basis() {
            Ok(b) => b.coeffs.iter().all(|c| c.fract() == 0.0 && c.abs() < 2f64.powi(62)),
            Err(_) => false,
        }
    }

    /// `P(n)` for an integer-valued polynomial.
    pub fn eval_integer(&self, n: i64) -> Result<i128> {
        let b = self.to_binomial_basis()?;
        if !self.is_integer_valued() {
            return Err(Error::Domain(
                "polynomial does not take integer values at integers".into(),
            ));
        }
        let mut acc = BigInt::from(0);
        for (j, &c) in b.coeffs.iter().enumerate() {
            acc += BigInt::from(c as i64) * binomial_big(n, j);
        }
        acc.to_i128()
            .ok_or_else(|| Error::capacity(format!("P({n}) outside 128-bit range"), "i128"))
    }
}

/// Walks `P(n) mod 1` one step at a time.
#[derive(Debug, Clone)]
pub struct PhaseStepper {
    diffs: Vec<Turn>,
}

impl PhaseStepper {
    /// Current value.
    #[inline]
    pub fn current(&self) -> Turn {
        self.diffs[0]
    }

    #[inline]
    pub fn advance(&mut self) {
        for j in 0..self.diffs.len() - 1 {
            let next = self.diffs[j + 1];
            self.diffs[j] += next;
        }
    }
}

impl Iterator for PhaseStepper {
    type Item = Turn;

    #[inline]
    fn next(&mut self) -> Option<Turn> {
        let v = self.current();
        self.advance();
        Some(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomial_basis_examples() {
        assert_eq!(RealPoly::monomial(vec![0.3]).to_binomial_basis().unwrap().coeffs(), &[0.3]);
        assert_eq!(
            RealPoly::monomial(vec![0.0, 0.0, 1.0]).to_binomial_basis().unwrap().coeffs(),
            &[0.0, 1.0, 2.0]
        );
        let cube = RealPoly::monomial(vec![0.0, 0.0, 0.0, 1.0]).to_binomial_basis().unwrap();
        assert_eq!(cube.coeffs(), &[0.0, 1.0, 6.0, 6.0]);
        assert_eq!(cube.eval_f64(2.0), 8.0);
        assert_eq!(cube.eval_f64(3.0), 27.0);
    }

    #[test]
    fn degree_ignores_trailing_zeros() {
        assert_eq!(RealPoly::monomial(vec![1.0, 2.0, 0.0, 0.0]).degree(), 1);
        assert_eq!(RealPoly::zero().degree(), 0);
        let big = RealPoly::monomial(vec![1.0; 32]);
        assert!(matches!(big.to_binomial_basis(), Err(Error::Capacity { .. })));
    }

    #[test]
    fn stepper_matches_direct_phase() {
        let p = RealPoly::monomial(vec![0.1, 0.37, -0.2, 0.011]);
        let stepped: Vec<Turn> = p.phase_stepper(-5).take(200).collect();
        for (i, t) in stepped.iter().enumerate() {
            assert_eq!(*t, p.phase_at(i as i64 - 5));
        }
    }

    #[test]
    fn binomial_phase_agrees_with_monomial_phase() {
        let p = RealPoly::monomial(vec![0.25, 0.5, 0.125, 0.0625]);
        let b = RealPoly::binomial(p.to_binomial_basis().unwrap().coeffs().to_vec());
        for n in -20..50 {
            assert_eq!(p.phase_at(n), b.phase_at(n));
        }
        let phases = p.binomial_phases().unwrap();
        let from_f64: Vec<Turn> = b.coeffs().iter().map(|&x| Turn::from_f64(x)).collect();
        assert_eq!(phases, from_f64);
    }

    #[test]
    fn integer_valued() {
        let half_square = RealPoly::binomial(vec![0.0, 0.0, 1.0]);
        assert!(half_square.is_integer_valued());
        assert_eq!(half_square.eval_integer(10).unwrap(), 45);
        assert_eq!(half_square.eval_integer(-1).unwrap(), 1);
        assert!(!RealPoly::monomial(vec![0.0, 0.5]).is_integer_valued());
    }

    proptest! {
        #[test]
        fn basis_round_trip_on_integers(coeffs in prop::collection::vec(-50i32..50, 1..7)) {
            let a: Vec<f64> = coeffs.iter().map(|&c| c as f64).collect();
            let p = RealPoly::monomial(a.clone());
            let back = p.to_binomial_basis().unwrap().to_monomial_basis().unwrap();
            let d = p.degree();
            prop_assert_eq!(&back.coeffs()[..=d], &a[..=d]);
        }

        #[test]
        fn change_of_basis_preserves_values(coeffs in prop::collection::vec(-3.0f64..3.0, 1..6), n in -30i64..30) {
            let p = RealPoly::monomial(coeffs);
            let b = p.to_binomial_basis().unwrap();
            let x = n as f64;
            let (u, v) = (p.eval_f64(x), b.eval_f64(x));
            prop_assert!((u - v).abs() <= 1e-9 * (1.0 + u.abs()));
        }
    }
}
