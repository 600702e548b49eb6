//! Gowers uniformity norms on `Z/NZ` and on intervals `{1, …, N}`.
//!
//! Averages are normalized counting measures:
//! `‖f‖_{U^d}^{2^d} = E_{x,h₁,…,h_d} Π_{c ∈ {0,1}^d} C^{|c|} f(x + c·h)`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::dynsys::RealPoly;
use crate::error::{Error, Result};
use crate::sequence::PhaseSequence;
use crate::summation::{pairwise_sum, ComplexSum};
use crate::Complex64;

/// Largest `N^(d+1)` the naive and recursive evaluators accept.
pub const NAIVE_BUDGET: f64 = 1e10;

pub const MAX_NAIVE_D: u32 = 4;
pub const MAX_RECURSIVE_D: u32 = 6;
pub const MAX_INTERVAL_D: u32 = 4;
pub const MAX_INNER_PRODUCT_D: u32 = 3;

/// Imaginary residue tolerated in a Gowers average before it is reported.
pub const IMAG_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CyclicFunction {
    values: Vec<Complex64>,
}

impl CyclicFunction {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Length("a function on Z/NZ needs N ≥ 1".into()));
        }
        Ok(Self { values })
    }

    pub fn from_real(values: impl IntoIterator<Item = f64>) -> Result<Self> {
        Self::new(values.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
    }

    pub fn constant(c: Complex64, n: usize) -> Result<Self> {
        Self::new(vec![c; n])
    }

    /// Values of a sequence, read in index order as `f(0), …, f(len−1)`.
    pub fn from_sequence(s: &PhaseSequence) -> Self {
        Self {
            values: s.values().to_vec(),
        }
    }

    pub fn modulus(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn at(&self, x: i64) -> Complex64 {
        self.values[x.rem_euclid(self.values.len() as i64) as usize]
    }

    /// `x ↦ f(x + a)`.
    pub fn shift(&self, a: i64) -> CyclicFunction {
        let n = self.modulus() as i64;
        Self {
            values: (0..n).map(|x| self.at(x + a)).collect(),
        }
    }

    pub fn add(&self, other: &CyclicFunction) -> Result<CyclicFunction> {
        same_modulus(self, other)?;
        Ok(Self {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn mean(&self) -> Complex64 {
        pairwise_sum(&self.values) / self.modulus() as f64
    }
}

fn same_modulus(a: &CyclicFunction, b: &CyclicFunction) -> Result<()> {
    if a.modulus() != b.modulus() {
        return Err(Error::Length(format!(
            "functions on Z/{}Z and Z/{}Z",
            a.modulus(),
            b.modulus()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GowersMethod {
    Naive,
    Recursive,
    FftU2,
}

impl GowersMethod {
    pub fn name(self) -> &'static str {
        match self {
            GowersMethod::Naive => "naive",
            GowersMethod::Recursive => "recursive",
            GowersMethod::FftU2 => "fft_u2",
        }
    }
}

impl fmt::Display for GowersMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GowersMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "naive" => Ok(GowersMethod::Naive),
            "recursive" => Ok(GowersMethod::Recursive),
            "fft" | "fft_u2" => Ok(GowersMethod::FftU2),
            other => Err(Error::Config(format!(
                "unknown Gowers method {other:?} (expected naive, recursive, fft_u2)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GowersDomain {
    Cyclic,
    Interval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GowersResult {
    pub d: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub domain: GowersDomain,
    pub method: GowersMethod,
    pub norm: f64,
    /// `norm^(2^d)` before the root is taken.
    pub raw_power: f64,
}

impl GowersResult {
    fn from_average(avg: Complex64, d: u32, n: usize, method: GowersMethod) -> Result<Self> {
        let scale = 1.0f64.max(avg.re.abs());
        if avg.im.abs() > IMAG_TOLERANCE * scale * 1e3 {
            return Err(Error::Domain(format!(
                "Gowers average has imaginary part {:e}; input is not a valid function",
                avg.im
            )));
        }
        Ok(Self {
            d,
            n,
            domain: GowersDomain::Cyclic,
            method,
            norm: avg.re.max(0.0).powf(1.0 / (1u64 << d) as f64),
            raw_power: avg.re,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// `x ↦ f(x+h)·conj(f(x))`.
pub fn discrete_derivative(f: &CyclicFunction, h: i64) -> CyclicFunction {
    let n = f.modulus();
    let h = h.rem_euclid(n as i64) as usize;
    let values = (0..n)
        .map(|x| f.values[(x + h) % n] * f.values[x].conj())
        .collect();
    CyclicFunction { values }
}

fn guard(what: &str, n: usize, d: u32, max_d: u32) -> Result<()> {
    if d == 0 || d > max_d {
        return Err(Error::capacity(format!("{what} with d = {d}"), format!("1..={max_d}")));
    }
    let cost = (n as f64).powi(d as i32 + 1);
    if cost > NAIVE_BUDGET {
        return Err(Error::capacity(
            format!("{what} with N = {n}, d = {d} needs N^(d+1) = {cost:e} terms"),
            format!("N^(d+1) ≤ {NAIVE_BUDGET:e}"),
        ));
    }
    Ok(())
}

/// Direct average over all `(x, h₁, …, h_d) ∈ (Z/NZ)^{d+1}`.
///
/// Parallel over `h₁`; per-`h₁` partial sums are combined by a fixed pairwise tree.
pub fn gowers_norm_naive(f: &CyclicFunction, d: u32) -> Result<GowersResult> {
    let n = f.modulus();
    guard("naive Gowers norm", n, d, MAX_NAIVE_D)?;
    let partial: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|h1| cube_sum_with_first(f, d, h1))
        .collect();
    let total = pairwise_sum(&partial) / (n as f64).powi(d as i32 + 1);
    GowersResult::from_average(total, d, n, GowersMethod::Naive)
}

/// `Σ_{x, h₂..h_d} Π_c C^{|c|} f(x + c·h)` with `h₁` fixed.
fn cube_sum_with_first(f: &CyclicFunction, d: u32, h1: usize) -> Complex64 {
    let n = f.modulus();
    let vertices = 1usize << d;
    let mut h = vec![0usize; d as usize];
    h[0] = h1;
    let mut offsets = vec![0usize; vertices];
    let mut acc = ComplexSum::new();
    loop {
        for (c, off) in offsets.iter_mut().enumerate() {
            *off = (0..d as usize).filter(|&i| c >> i & 1 == 1).map(|i| h[i]).sum::<usize>() % n;
        }
        for x in 0..n {
            let mut prod = Complex64::new(1.0, 0.0);
            for (c, &off) in offsets.iter().enumerate() {
                let v = f.values[(x + off) % n];
                prod *= if c.count_ones() % 2 == 1 { v.conj() } else { v };
            }
            acc.add(prod);
        }
        // next (h₂, …, h_d)
        let mut i = 1;
        loop {
            if i >= d as usize {
                return acc.value();
            }
            h[i] += 1;
            if h[i] < n {
                break;
            }
            h[i] = 0;
            i += 1;
        }
    }
}

/// `‖f‖_{U^d}^{2^d} = E_h ‖∂_h f‖_{U^{d−1}}^{2^{d−1}}`, with `‖f‖_{U¹} = |E f|`.
pub fn gowers_norm_recursive(f: &CyclicFunction, d: u32) -> Result<GowersResult> {
    let n = f.modulus();
    guard("recursive Gowers norm", n, d, MAX_RECURSIVE_D)?;
    let raw = recursive_raw(f, d);
    GowersResult::from_average(Complex64::new(raw, 0.0), d, n, GowersMethod::Recursive)
}

fn recursive_raw(f: &CyclicFunction, d: u32) -> f64 {
    if d == 1 {
        return f.mean().norm_sqr();
    }
    let n = f.modulus();
    let terms: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|h| Complex64::new(recursive_raw(&discrete_derivative(f, h as i64), d - 1), 0.0))
        .collect();
    pairwise_sum(&terms).re / n as f64
}

/// `‖f‖_{U²}^4 = Σ_ξ |f̂(ξ)|⁴` with `f̂(ξ) = E_x f(x) e^{−2πixξ/N}`.
pub fn gowers_u2_fft(f: &CyclicFunction) -> Result<GowersResult> {
    let n = f.modulus();
    let fft: Arc<dyn rustfft::Fft<f64>> = FftPlanner::new().plan_fft_forward(n);
    let mut buf = f.values.clone();
    fft.process(&mut buf);
    let scale = 1.0 / n as f64;
    let fourth: Vec<Complex64> = buf
        .iter()
        .map(|z| Complex64::new((z * scale).norm_sqr().powi(2), 0.0))
        .collect();
    GowersResult::from_average(pairwise_sum(&fourth), 2, n, GowersMethod::FftU2)
}

pub fn gowers_norm(f: &CyclicFunction, d: u32, method: GowersMethod) -> Result<GowersResult> {
    match method {
        GowersMethod::Naive => gowers_norm_naive(f, d),
        GowersMethod::Recursive => gowers_norm_recursive(f, d),
        GowersMethod::FftU2 if d == 2 => gowers_u2_fft(f),
        GowersMethod::FftU2 => Err(Error::Config(format!(
            "the FFT path computes U² only, not U^{d}"
        ))),
    }
}

/// `‖f·𝟙_[N]‖_{U^d(Z/2^dN)} / ‖𝟙_[N]‖_{U^d(Z/2^dN)}`, both by the same method.
pub fn gowers_norm_interval(f: &[Complex64], d: u32, method: GowersMethod) -> Result<GowersResult> {
    if f.is_empty() {
        return Err(Error::Length("interval norm needs N ≥ 1".into()));
    }
    if d == 0 || d > MAX_INTERVAL_D {
        return Err(Error::capacity(
            format!("interval Gowers norm with d = {d}"),
            format!("1..={MAX_INTERVAL_D}"),
        ));
    }
    let n = f.len();
    let m = n << d;
    let mut embedded = vec![Complex64::new(0.0, 0.0); m];
    embedded[..n].copy_from_slice(f);
    let mut indicator = vec![Complex64::new(0.0, 0.0); m];
    indicator[..n].fill(Complex64::new(1.0, 0.0));
    let num = gowers_norm(&CyclicFunction::new(embedded)?, d, method)?;
    let den = gowers_norm(&CyclicFunction::new(indicator)?, d, method)?;
    Ok(GowersResult {
        d,
        n,
        domain: GowersDomain::Interval,
        method,
        norm: num.norm / den.norm,
        raw_power: num.raw_power / den.raw_power,
    })
}

/// `E_{x,h} Π_{c ∈ {0,1}^d} C^{|c|} f_c(x + c·h)`, vertex `c` read as a bit mask.
pub fn gowers_inner_product(family: &[CyclicFunction], d: u32) -> Result<Complex64> {
    if d == 0 || d > MAX_INNER_PRODUCT_D {
        return Err(Error::capacity(
            format!("Gowers inner product with d = {d}"),
            format!("1..={MAX_INNER_PRODUCT_D}"),
        ));
    }
    if family.len() != 1 << d {
        return Err(Error::Length(format!(
            "expected 2^{d} = {} functions, got {}",
            1 << d,
            family.len()
        )));
    }
    for g in &family[1..] {
        same_modulus(&family[0], g)?;
    }
    let n = family[0].modulus();
    guard("Gowers inner product", n, d, MAX_INNER_PRODUCT_D)?;
    let total_tuples = n.pow(d);
    let partial: Vec<Complex64> = (0..total_tuples)
        .into_par_iter()
        .map(|t| {
            let mut h = vec![0usize; d as usize];
            let mut rest = t;
            for hi in h.iter_mut() {
                *hi = rest % n;
                rest /= n;
            }
            let offsets: Vec<usize> = (0..1usize << d)
                .map(|c| (0..d as usize).filter(|&i| c >> i & 1 == 1).map(|i| h[i]).sum::<usize>() % n)
                .collect();
            let mut acc = ComplexSum::new();
            for x in 0..n {
                let mut prod = Complex64::new(1.0, 0.0);
                for (c, &off) in offsets.iter().enumerate() {
                    let v = family[c].values[(x + off) % n];
                    prod *= if c.count_ones() % 2 == 1 { v.conj() } else { v };
                }
                acc.add(prod);
            }
            acc.value()
        })
        .collect();
    Ok(pairwise_sum(&partial) / (n as f64).powi(d as i32 + 1))
}

/// `x ↦ e^{2πiφ(x)} f(x)` with `φ` evaluated at the integers `0, …, N−1`.
pub fn poly_phase_modulate(f: &CyclicFunction, phi: &RealPoly) -> CyclicFunction {
    let values = f
        .values
        .iter()
        .zip(phi.phase_stepper(0))
        .map(|(v, t)| v * t.cis())
        .collect();
    CyclicFunction { values }
}
