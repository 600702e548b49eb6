//! Finite surrogate for "every real polynomial of degree ≤ k" and the
//! supremum of `|(1/N) Σ cₙ e^{2πiP(n)}|` over it.

use std::collections::HashMap;
use std::f64::consts::TAU;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{GridDescriptor, GridKind, SupReport};
use crate::dynsys::RealPoly;
use crate::error::{Error, Result};
use crate::sequence::PhaseSequence;
use crate::summation::ComplexSum;
use crate::Complex64;

/// Polynomials `Σ_{j=1}^{k} aⱼ nʲ` (constant terms never change a modulus):
///
/// * every tuple of reduced fractions `aⱼ = a/q`, `0 ≤ a < q ≤ Q` (with `0 = 0/1`);
/// * for each level `j = 1..k`, `R` random vectors `(a₁..aⱼ) ∈ [0,1)ʲ`, drawn
///   from ChaCha20 stream `j` of `seed`, so a larger `R` or `k` only adds points;
/// * any `extra` polynomials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyGrid {
    pub degree: u32,
    pub q_cap: u32,
    pub random_draws: u32,
    pub seed: u64,
    #[serde(default)]
    pub extra: Vec<RealPoly>,
}

impl PolyGrid {
    pub fn new(degree: u32, q_cap: u32, random_draws: u32, seed: u64) -> Self {
        Self {
            degree,
            q_cap,
            random_draws,
            seed,
            extra: Vec::new(),
        }
    }

    pub fn with_extra(mut self, p: RealPoly) -> Self {
        self.extra.push(p);
        self
    }

    pub fn with_degree(&self, degree: u32) -> Self {
        Self {
            degree,
            ..self.clone()
        }
    }

    pub fn rational_count(&self) -> usize {
        let per_coeff: usize = (1..=self.q_cap.max(1) as u64).map(|q| fractions(q).len()).sum();
        if self.q_cap == 0 {
            return 0;
        }
        per_coeff.pow(self.degree)
    }

    pub fn size(&self) -> usize {
        self.rational_count() + (self.random_draws * self.degree) as usize + self.extra.len()
    }

    pub fn descriptor(&self) -> GridDescriptor {
        GridDescriptor {
            kind: GridKind::Polynomial,
            degree: self.degree,
            q_cap: self.q_cap,
            random_draws: self.random_draws,
            seed: self.seed,
            extra: self.extra.len(),
            size: self.size(),
        }
    }

    /// Random coefficient vectors `(a₁..aⱼ)` of level `j`.
    pub fn random_vectors(&self, level: u32) -> Vec<Vec<f64>> {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(level as u64);
        (0..self.random_draws)
            .map(|_| (0..level).map(|_| rng.gen::<f64>()).collect())
            .collect()
    }
}

/// Reduced numerators `a` with `0 ≤ a < q`, `gcd(a, q) = 1`.
fn fractions(q: u64) -> Vec<u64> {
    if q == 1 {
        return vec![0];
    }
    (1..q).filter(|a| a.gcd(&q) == 1).collect()
}

#[derive(Debug, Clone)]
struct Candidate {
    value: f64,
    params: Vec<f64>,
    label: String,
}

fn better(best: Option<Candidate>, c: Candidate) -> Option<Candidate> {
    match best {
        Some(b) if b.value >= c.value => Some(b),
        _ => Some(c),
    }
}

/// `sup_{P ∈ grid} |(1/N) Σ_{first N terms} cₙ e^{2πiP(n)}|`, with `n` the true index.
pub fn grid_sup(c: &PhaseSequence, grid: &PolyGrid, n: usize) -> Result<SupReport> {
    if grid.size() == 0 {
        return Err(Error::Config("polynomial grid is empty".into()));
    }
    if n == 0 || n > c.len() {
        return Err(Error::Length(format!(
            "checkpoint {n} outside 1..={} available terms",
            c.len()
        )));
    }
    let values = &c.values()[..n];
    let origin = c.origin();
    let mut best: Option<Candidate> = None;
    if grid.q_cap > 0 && grid.degree > 0 {
        if let Some(r) = rational_sup(values, origin, grid.degree, grid.q_cap) {
            best = better(best, r);
        }
    }
    for level in 1..=grid.degree {
        let polys: Vec<Vec<f64>> = grid.random_vectors(level);
        let scored: Vec<f64> = polys
            .par_iter()
            .map(|a| {
                let mut coeffs = vec![0.0];
                coeffs.extend_from_slice(a);
                direct_value(values, origin, &RealPoly::monomial(coeffs))
            })
            .collect();
        for (r, (a, v)) in polys.iter().zip(scored).enumerate() {
            let mut params = a.clone();
            params.resize(grid.degree as usize, 0.0);
            best = better(
                best,
                Candidate {
                    value: v,
                    params,
                    label: format!("random:level{level}#{r}"),
                },
            );
        }
    }
    for (i, p) in grid.extra.iter().enumerate() {
        let v = direct_value(values, origin, p);
        let params = p.to_monomial_basis().map(|m| m.coeffs().to_vec()).unwrap_or_default();
        best = better(
            best,
            Candidate {
                value: v,
                params: params.into_iter().skip(1).collect(),
                label: format!("extra#{i}"),
            },
        );
    }
    let best = best.expect("non-empty grid");
    Ok(SupReport {
        sup_value: best.value,
        argmax_params: best.params,
        argmax_label: best.label,
        grid: grid.descriptor(),
        n,
        is_lower_bound: true,
    })
}

/// `|(1/N) Σ cₙ e^{2πiP(n)}|` with `P(n) mod 1` stepped exactly.
pub(crate) fn direct_value(values: &[Complex64], origin: i64, p: &RealPoly) -> f64 {
    let mut acc = ComplexSum::new();
    for (v, t) in values.iter().zip(p.phase_stepper(origin)) {
        acc.add(v * t.cis());
    }
    acc.value().norm() / values.len() as f64
}

fn roots(m: usize) -> Vec<Complex64> {
    (0..m)
        .map(|t| Complex64::from_polar(1.0, TAU * t as f64 / m as f64))
        .collect()
}

/// Residue-class sums `B_r = Σ_{n ≡ r (mod L)} cₙ`.
fn buckets(values: &[Complex64], origin: i64, l: usize) -> Vec<Complex64> {
    let mut sums = vec![ComplexSum::new(); l];
    let mut r = origin.rem_euclid(l as i64) as usize;
    for v in values {
        sums[r].add(*v);
        r += 1;
        if r == l {
            r = 0;
        }
    }
    sums.iter().map(ComplexSum::value).collect()
}

/// Exhaustive search over the rational part of the grid.
///
/// For denominators `(q₁, …, q_k)`, `P(n) mod 1` depends only on `n mod L`,
/// `L = lcm(q)`. The higher coefficients are summed once per residue into
/// `q₁` bins; every linear numerator then costs a length-`q₁` DFT.
fn rational_sup(values: &[Complex64], origin: i64, degree: u32, q_cap: u32) -> Option<Candidate> {
    let k = degree as usize;
    let n = values.len();
    let qs: Vec<u64> = (1..=q_cap as u64).collect();
    let mut tuples: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..k {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                qs.iter().map(move |&q| {
                    let mut t = t.clone();
                    t.push(q);
                    t
                })
            })
            .collect();
    }
    let lcm_of = |t: &[u64]| t.iter().fold(1u64, |a, &q| a.lcm(&q));
    let mut needed: Vec<usize> = tuples
        .iter()
        .map(|t| lcm_of(t) as usize)
        .filter(|&l| l < n)
        .collect();
    needed.sort_unstable();
    needed.dedup();
    let bucket_table: HashMap<usize, Vec<Complex64>> = needed
        .par_iter()
        .map(|&l| (l, buckets(values, origin, l)))
        .collect();

    let per_tuple: Vec<Option<Candidate>> = tuples
        .par_iter()
        .map(|t| {
            let l = lcm_of(t) as usize;
            let (bins, base): (&[Complex64], i64) = match bucket_table.get(&l) {
                Some(b) => (b, 0),
                None => (values, origin),
            };
            tuple_sup(bins, base, t, n)
        })
        .collect();
    per_tuple.into_iter().flatten().fold(None, better)
}

fn tuple_sup(bins: &[Complex64], base: i64, q: &[u64], n: usize) -> Option<Candidate> {
    let q1 = q[0] as usize;
    let higher = &q[1..];
    let lh = higher.iter().fold(1u64, |a, &x| a.lcm(&x)) as usize;
    let rh = roots(lh);
    let r1 = roots(q1);
    // powers[j][r] = r^(j+2) mod lh
    let powers: Vec<Vec<usize>> = (0..higher.len())
        .map(|j| {
            (0..lh)
                .map(|r| {
                    let mut p = 1usize;
                    for _ in 0..j + 2 {
                        p = p * r % lh;
                    }
                    p
                })
                .collect()
        })
        .collect();
    let numerators: Vec<Vec<u64>> = higher.iter().map(|&qj| fractions(qj)).collect();
    let lin = fractions(q[0]);
    let start_rh = base.rem_euclid(lh as i64) as usize;
    let start_q1 = base.rem_euclid(q1 as i64) as usize;

    let mut best: Option<Candidate> = None;
    let mut idx = vec![0usize; higher.len()];
    let mut bins_by_s = vec![Complex64::new(0.0, 0.0); q1];
    let mut twist = vec![Complex64::new(0.0, 0.0); lh];
    loop {
        let weights: Vec<usize> = idx
            .iter()
            .zip(&numerators)
            .zip(higher)
            .map(|((&i, nums), &qj)| (nums[i] as usize) * (lh / qj as usize) % lh)
            .collect();
        for (r, z) in twist.iter_mut().enumerate() {
            let t: usize = weights.iter().zip(&powers).map(|(w, pw)| w * pw[r]).sum();
            *z = rh[t % lh];
        }
        bins_by_s.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        let (mut rp, mut s) = (start_rh, start_q1);
        for b in bins {
            bins_by_s[s] += b * twist[rp];
            rp += 1;
            if rp == lh {
                rp = 0;
            }
            s += 1;
            if s == q1 {
                s = 0;
            }
        }
        for &a1 in &lin {
            let mut total = Complex64::new(0.0, 0.0);
            for (si, d) in bins_by_s.iter().enumerate() {
                total += d * r1[(a1 as usize * si) % q1];
            }
            let value = total.norm() / n as f64;
            if best.as_ref().map_or(true, |b| value > b.value) {
                let mut params = vec![a1 as f64 / q[0] as f64];
                let mut label = format!("rational:{a1}/{}", q[0]);
                for ((&i, nums), &qj) in idx.iter().zip(&numerators).zip(higher) {
                    params.push(nums[i] as f64 / qj as f64);
                    label.push_str(&format!(";{}/{qj}", nums[i]));
                }
                best = Some(Candidate { value, params, label });
            }
        }
        // next tuple of higher numerators, last coefficient fastest
        let mut j = higher.len();
        loop {
            if j == 0 {
                return best;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < numerators[j].len() {
                break;
            }
            idx[j] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::turn::Turn;

    fn sample(n: usize, origin: i64) -> PhaseSequence {
        let vals = (0..n)
            .map(|i| Complex64::from_polar(1.0, 0.37 * (i * i) as f64 + (i as f64).sqrt()))
            .collect();
        PhaseSequence::unimodular(vals, origin).unwrap()
    }

    /// Brute-force value of the rational polynomial `Σ (aⱼ/qⱼ) nʲ`.
    fn brute(c: &PhaseSequence, num: &[i128], den: &[u128]) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, v) in c.values().iter().enumerate() {
            let nn = c.origin() + i as i64;
            let mut t = Turn::ZERO;
            for (j, (&a, &q)) in num.iter().zip(den).enumerate() {
                let p = (nn as i128).pow(j as u32 + 1);
                t += Turn::from_ratio((a * p).rem_euclid(q as i128), q);
            }
            acc += v * t.cis();
        }
        acc.norm() / c.len() as f64
    }

    #[test]
    fn fraction_lists() {
        assert_eq!(fractions(1), vec![0]);
        assert_eq!(fractions(6), vec![1, 5]);
        assert_eq!(PolyGrid::new(1, 20, 0, 0).rational_count(), 128);
    }

    #[test]
    fn rational_sup_matches_brute_force() {
        for (n, origin) in [(50usize, 1i64), (300, 0), (37, 1)] {
            let c = sample(n, origin);
            let grid = PolyGrid::new(2, 6, 0, 1);
            let report = grid_sup(&c, &grid, n).unwrap();
            let mut best = 0.0f64;
            for q1 in 1..=6u128 {
                for q2 in 1..=6u128 {
                    for &a1 in &fractions(q1 as u64) {
                        for &a2 in &fractions(q2 as u64) {
                            best = best.max(brute(&c, &[a1 as i128, a2 as i128], &[q1, q2]));
                        }
                    }
                }
            }
            assert!((report.sup_value - best).abs() < 1e-12, "n={n}: {} vs {best}", report.sup_value);
        }
    }

    #[test]
    fn matching_polynomial_gives_one() {
        let p = RealPoly::monomial(vec![0.0, 3.0 / 7.0, 0.0, 5.0 / 11.0]);
        let vals: Vec<Complex64> = p.phase_stepper(1).take(2000).map(|t| (-t).cis()).collect();
        let c = PhaseSequence::unimodular(vals, 1).unwrap();
        let r = grid_sup(&c, &PolyGrid::new(3, 11, 0, 0), 2000).unwrap();
        assert!((r.sup_value - 1.0).abs() < 1e-9, "{}", r.sup_value);
        assert_eq!(r.argmax_label, "rational:3/7;0/1;5/11");
        assert!(r.is_lower_bound);
    }

    #[test]
    fn zero_sequence_has_zero_sup() {
        let c = PhaseSequence::new(vec![Complex64::new(0.0, 0.0); 100], 1.0, 1).unwrap();
        assert_eq!(grid_sup(&c, &PolyGrid::new(2, 5, 3, 9), 100).unwrap().sup_value, 0.0);
    }

    #[test]
    fn grid_growth_is_monotone() {
        let c = sample(400, 1);
        let small = grid_sup(&c, &PolyGrid::new(2, 5, 10, 3), 400).unwrap().sup_value;
        let more_q = grid_sup(&c, &PolyGrid::new(2, 7, 10, 3), 400).unwrap().sup_value;
        let more_r = grid_sup(&c, &PolyGrid::new(2, 5, 20, 3), 400).unwrap().sup_value;
        let more_k = grid_sup(&c, &PolyGrid::new(3, 5, 10, 3), 400).unwrap().sup_value;
        assert!(more_q >= small && more_r >= small && more_k >= small);
    }

    #[test]
    fn empty_grid_is_an_error() {
        let c = sample(10, 1);
        assert!(matches!(grid_sup(&c, &PolyGrid::new(2, 0, 0, 0), 10), Err(Error::Config(_))));
    }
}
