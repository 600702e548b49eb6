//! Quasi-eigenfunction samples `f(Tⁿx) = f(x)·e^{2πi Σⱼ C(n,j)θⱼ}`.

use serde::{Deserialize, Serialize};

use super::poly::{RealPoly, MAX_POLY_DEGREE};
use crate::error::{Error, Result};
use crate::sequence::PhaseSequence;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiEigenData {
    /// `θ₁, …, θ_k`.
    pub thetas: Vec<f64>,
    /// Phase of `f(x)`.
    pub base_phase: f64,
}

impl QuasiEigenData {
    pub fn new(thetas: Vec<f64>, base_phase: f64) -> Self {
        Self { thetas, base_phase }
    }

    pub fn order(&self) -> usize {
        self.thetas.len()
    }

    /// `base + Σⱼ θⱼ C(n, j)` as a binomial-basis polynomial.
    pub fn phase_poly(&self) -> RealPoly {
        let mut coeffs = Vec::with_capacity(self.thetas.len() + 1);
        coeffs.push(self.base_phase);
        coeffs.extend_from_slice(&self.thetas);
        RealPoly::binomial(coeffs)
    }
}

/// `n ↦ e^{2πi(base + Σⱼ C(n,j)θⱼ)}` for `n = 0, …, n_max − 1`, exact mod 1.
pub fn quasi_eigen_eval(q: &QuasiEigenData, n_max: usize) -> Result<PhaseSequence> {
    if q.order() > MAX_POLY_DEGREE {
        return Err(Error::capacity(
            format!("quasi-eigenvalue data of order {}", q.order()),
            MAX_POLY_DEGREE,
        ));
    }
    let values = q.phase_poly().phase_stepper(0).take(n_max).map(|t| t.cis()).collect();
    PhaseSequence::unimodular(values, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynsys::{iterate, skew_product, Character, TorusPoint};
    use crate::turn::Turn;

    #[test]
    fn zero_thetas_give_constant() {
        let s = quasi_eigen_eval(&QuasiEigenData::new(vec![0.0; 3], 0.2), 30).unwrap();
        let want = Turn::from_f64(0.2).cis();
        assert!(s.values().iter().all(|z| *z == want));
    }

    #[test]
    fn first_order_is_rotation() {
        let s = quasi_eigen_eval(&QuasiEigenData::new(vec![0.3], 0.1), 100).unwrap();
        for n in 0..100 {
            let want = (Turn::from_f64(0.1) + Turn::from_f64(0.3).times(n as u128)).cis();
            assert!((s.values()[n] - want).norm() < 1e-13);
        }
    }

    #[test]
    fn second_order_matches_skew_product() {
        // x₂(n) = x₂ + n·x₁ + C(n,2)·α, so θ₁ = x₁, θ₂ = α
        let alpha = 0.1234;
        let x0 = TorusPoint::from_f64(&[0.77, 0.05]);
        let orbit = iterate(&skew_product(2, Turn::from_f64(alpha)).unwrap(), &x0, 501).unwrap();
        let q = QuasiEigenData::new(vec![0.77, alpha], 0.05);
        let s = quasi_eigen_eval(&q, 501).unwrap();
        let chi = Character::coordinate(2, 1);
        for (n, x) in orbit.iter().enumerate() {
            assert!((s.values()[n] - chi.eval(x).unwrap()).norm() < 1e-8);
        }
    }

    #[test]
    fn order_guard() {
        let q = QuasiEigenData::new(vec![0.1; 31], 0.0);
        assert!(matches!(quasi_eigen_eval(&q, 5), Err(Error::Capacity { .. })));
    }
}
