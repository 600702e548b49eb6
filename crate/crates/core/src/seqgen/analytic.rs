//! Analytic phase sequences: `αβⁿg(β) + Q(n)`, bracket polynomials `nα⌊nβ⌋`
//! and geometric phases `bⁿx`.

use std::str::FromStr;

use num_bigint::{BigUint, Sign};
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::irrational::{dyadic, Irrational};
use crate::dynsys::RealPoly;
use crate::error::{Error, Result};
use crate::sequence::PhaseSequence;
use crate::turn::Turn;

/// Upper limit on the working precision of the extended path, in bits.
pub const AKIYAMA_MAX_BITS: u64 = 1 << 21;

/// Guard bits kept below the last bit that matters for the phase.
const GUARD_BITS: u64 = 64;

/// Significant bits assumed available in the floating path.
const FLOAT_BITS: f64 = 50.0;

/// The registered family of smooth positive factors `g(β)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GFunction {
    One,
    Identity,
    Log,
}

impl GFunction {
    pub fn eval(self, beta: f64) -> f64 {
        match self {
            GFunction::One => 1.0,
            GFunction::Identity => beta,
            GFunction::Log => beta.ln(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GFunction::One => "one",
            GFunction::Identity => "identity",
            GFunction::Log => "log",
        }
    }
}

impl FromStr for GFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "one" | "1" => Ok(GFunction::One),
            "identity" | "x" | "id" => Ok(GFunction::Identity),
            "log" | "ln" => Ok(GFunction::Log),
            other => Err(Error::Config(format!(
                "unknown g function {other:?} (expected one, identity, log)"
            ))),
        }
    }
}

/// Parameters of `f(n) = αβⁿg(β) + Q(n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AkiyamaJiang {
    pub alpha: f64,
    pub beta: f64,
    pub g: GFunction,
    pub q: RealPoly,
}

impl AkiyamaJiang {
    pub fn new(alpha: f64, beta: f64, g: GFunction) -> Self {
        Self {
            alpha,
            beta,
            g,
            q: RealPoly::zero(),
        }
    }

    pub fn with_poly(mut self, q: RealPoly) -> Self {
        self.q = q;
        self
    }

    /// `α·g(β)`, rounded once to binary64 and used exactly from then on.
    pub fn scale(&self) -> f64 {
        self.alpha * self.g.eval(self.beta)
    }

    fn validate(&self) -> Result<()> {
        if !(self.beta.is_finite() && self.beta > 1.0) {
            return Err(Error::Domain(format!("beta must exceed 1, got {}", self.beta)));
        }
        if !self.alpha.is_finite() || self.alpha == 0.0 {
            return Err(Error::Domain(format!("alpha must be finite and non-zero, got {}", self.alpha)));
        }
        let c = self.scale();
        if !c.is_finite() || c == 0.0 {
            return Err(Error::Domain("alpha·g(beta) must be finite and non-zero".into()));
        }
        Ok(())
    }
}

/// `(floating, extended)`: the largest `n_max` each evaluation path accepts.
pub fn akiyama_jiang_horizon(params: &AkiyamaJiang) -> Result<(u64, u64)> {
    params.validate()?;
    let lb = params.beta.log2();
    let lc = params.scale().abs().log2();
    let float = ((FLOAT_BITS - lc) / lb).floor().max(-1.0) as i64 + 1;
    let overhead = lc.max(0.0) + (1.0 / (params.beta - 1.0)).log2().max(0.0) + GUARD_BITS as f64;
    let extended = (((AKIYAMA_MAX_BITS as f64 - overhead) / (2.0 * lb)).floor() as i64).max(0) as u64;
    Ok((float.max(0) as u64, extended))
}

/// `e^{2πi(αβⁿg(β) + Q(n))}` for `n = 0, …, n_max − 1`.
///
/// Short runs use double-double arithmetic for `βⁿ`. Longer runs switch to a
/// fixed-point power of the (exact, dyadic) binary64 value of `β` carrying
/// enough bits that the phase error stays below `2^-60`.
pub fn akiyama_jiang(n_max: u64, params: &AkiyamaJiang) -> Result<PhaseSequence> {
    let (float_horizon, extended_horizon) = akiyama_jiang_horizon(params)?;
    if n_max == 0 {
        return Err(Error::Length("akiyama_jiang needs n_max ≥ 1".into()));
    }
    let main: Vec<Turn> = if n_max <= float_horizon {
        float_phases(n_max, params)
    } else if n_max <= extended_horizon {
        extended_phases(n_max, params)
    } else {
        return Err(Error::precision(
            format!("akiyama_jiang with beta = {} and n_max = {n_max}", params.beta),
            extended_horizon,
        ));
    };
    let values = main
        .into_iter()
        .zip(params.q.phase_stepper(0))
        .map(|(m, q)| (m + q).cis())
        .collect();
    PhaseSequence::unimodular(values, 0)
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn float_phases(n_max: u64, params: &AkiyamaJiang) -> Vec<Turn> {
    let c = params.scale();
    let beta = params.beta;
    let (mut hi, mut lo) = (1.0f64, 0.0f64);
    let mut out = Vec::with_capacity(n_max as usize);
    for _ in 0..n_max {
        let t = c * hi;
        let e = c.mul_add(hi, -t) + c * lo;
        out.push(Turn::from_f64(t) + Turn::from_f64(e));
        let p = hi * beta;
        let err = hi.mul_add(beta, -p) + lo * beta;
        (hi, lo) = two_sum(p, err);
    }
    out
}

fn extended_phases(n_max: u64, params: &AkiyamaJiang) -> Vec<Turn> {
    let (beta_m, beta_k) = dyadic(params.beta);
    let beta_m = beta_m.to_u64().expect("binary64 significand fits a word");
    let (c_m, c_k) = dyadic(params.scale());
    let negative = c_m.sign() == Sign::Minus;
    let c_mag: BigUint = c_m.magnitude().clone();

    let lb = params.beta.log2();
    let lc = params.scale().abs().log2();
    let bits = lc.max(0.0) + (n_max as f64) * lb + (1.0 / (params.beta - 1.0)).log2().max(0.0);
    let precision = bits.ceil() as u64 + GUARD_BITS;

    let shift = precision + c_k as u64;
    let mut x = BigUint::one() << precision;
    let mut out = Vec::with_capacity(n_max as usize);
    for _ in 0..n_max {
        let y = &x * &c_mag;
        let t = Turn(bits_below(&y, shift));
        out.push(if negative { -t } else { t });
        x *= beta_m;
        x >>= beta_k as usize;
    }
    out
}

/// The 128 bits of `y` immediately below bit position `shift`, i.e. `frac(y / 2^shift)`.
fn bits_below(y: &BigUint, shift: u64) -> u128 {
    if shift == 0 {
        return 0;
    }
    if shift <= 128 {
        let low = y
            .iter_u64_digits()
            .take(2)
            .enumerate()
            .fold(0u128, |acc, (i, d)| acc | (d as u128) << (64 * i));
        let masked = if shift == 128 { low } else { low & ((1u128 << shift) - 1) };
        return masked << (128 - shift);
    }
    let start = shift - 128;
    let word = (start / 64) as usize;
    let offset = (start % 64) as u32;
    let mut d = [0u64; 3];
    for (slot, digit) in d.iter_mut().zip(y.iter_u64_digits().skip(word)) {
        *slot = digit;
    }
    let wide_lo = (d[0] as u128) | ((d[1] as u128) << 64);
    if offset == 0 {
        wide_lo
    } else {
        (wide_lo >> offset) | ((d[2] as u128) << (128 - offset))
    }
}

/// `e^{2πi·nα⌊nβ⌋}` for `n = 1, …, n_max`.
pub fn bracket_seq(n_max: u64, alpha: Irrational, beta: Irrational) -> Result<PhaseSequence> {
    if n_max == 0 {
        return Err(Error::Length("bracket_seq needs n_max ≥ 1".into()));
    }
    let alpha_turn = alpha.turn();
    let limit: u128 = 1 << 80;
    let mut values = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max as i64 {
        let floor = beta.floor_mul(n)?;
        let m = floor
            .checked_mul(n as i128)
            .ok_or_else(|| Error::precision("n·⌊nβ⌋ outside 128-bit range", n as u64 - 1))?;
        if matches!(alpha, Irrational::Quadratic(_)) && m.unsigned_abs() >= limit {
            return Err(Error::precision(
                format!("n·⌊nβ⌋ = {m} exceeds 2^80, the exact range of the 128-bit expansion of alpha"),
                n as u64 - 1,
            ));
        }
        values.push(alpha_turn.times_signed(m).cis());
    }
    PhaseSequence::unimodular(values, 1)
}

/// Argument `x` of a geometric phase `bⁿx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeometricArg {
    Rational { p: i64, q: u64 },
    Real(f64),
}

impl FromStr for GeometricArg {
    type Err = Error;

    /// `p/q` or a decimal.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("cannot parse geometric argument {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: u64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            return Ok(GeometricArg::Rational { p, q });
        }
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(GeometricArg::Real)
            .ok_or_else(bad)
    }
}

/// `e^{2πi·bⁿx}` for `n = 1, …, n_max`.
///
/// Rational arguments are exact (via `bⁿ mod q`). Real arguments are refused
/// past `⌊52 / log₂ b⌋` terms, where a binary64 `x` has no digits left.
pub fn geometric_phase(n_max: u64, base: u64, x: GeometricArg) -> Result<PhaseSequence> {
    if base < 2 {
        return Err(Error::Domain(format!("base must be at least 2, got {base}")));
    }
    if n_max == 0 {
        return Err(Error::Length("geometric_phase needs n_max ≥ 1".into()));
    }
    let mut values = Vec::with_capacity(n_max as usize);
    match x {
        GeometricArg::Rational { p, q } => {
            if q == 0 {
                return Err(Error::Domain("denominator must be positive".into()));
            }
            let q128 = q as u128;
            let p_mod = (p as i128).rem_euclid(q as i128) as u128;
            let b = base as u128 % q128;
            let mut r = b;
            for _ in 0..n_max {
                let s = p_mod * r % q128;
                values.push(Turn::from_ratio(s as i128, q128).cis());
                r = r * b % q128;
            }
        }
        GeometricArg::Real(x) => {
            let horizon = (52.0 / (base as f64).log2()).floor() as u64;
            if n_max > horizon {
                return Err(Error::precision(
                    format!("geometric phase {base}^n·x for real x with n_max = {n_max}"),
                    horizon,
                ));
            }
            let t = Turn::from_f64(x);
            let mut power: u128 = base as u128;
            for _ in 0..n_max {
                values.push(t.times(power).cis());
                power = power.wrapping_mul(base as u128);
            }
        }
    }
    PhaseSequence::unimodular(values, 1)
}
