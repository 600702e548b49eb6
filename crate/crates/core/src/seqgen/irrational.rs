//! Exact descriptors for the irrational parameters used by the generators.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::turn::{bigint_mod_2_128, Turn};

/// The real number `(p + q·√d) / r` with `r > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticIrrational {
    pub p: i64,
    pub q: i64,
    pub d: u64,
    pub r: u64,
}

impl QuadraticIrrational {
    pub const fn new(p: i64, q: i64, d: u64, r: u64) -> Self {
        Self { p, q, d, r }
    }

    pub const fn sqrt(d: u64) -> Self {
        Self::new(0, 1, d, 1)
    }

    /// `√2 − 1`.
    pub const fn sqrt2_minus_1() -> Self {
        Self::new(-1, 1, 2, 1)
    }

    /// `(1 + √5) / 2`.
    pub const fn golden_ratio() -> Self {
        Self::new(1, 1, 5, 2)
    }

    /// `⌊x · 2^bits⌋` as an exact integer.
    pub fn floor_scaled(&self, bits: u32) -> BigInt {
        let abs_q = BigUint::from(self.q.unsigned_abs());
        let radicand = &abs_q * &abs_q * (BigUint::from(self.d) << (2 * bits));
        let numer = BigInt::from(self.p) * (BigInt::one() << bits) + signed_floor_sqrt(radicand, self.q < 0);
        numer.div_floor(&BigInt::from(self.r))
    }

    pub fn to_f64(&self) -> f64 {
        let scaled = self.floor_scaled(80);
        scaled.to_f64().unwrap_or(f64::NAN) / 2f64.powi(80)
    }

    /// Fractional part, truncated to 128 bits.
    pub fn turn(&self) -> Turn {
        Turn(bigint_mod_2_128(&self.floor_scaled(128)))
    }

    /// `⌊n·x⌋`, exact.
    pub fn floor_mul(&self, n: i64) -> Result<i128> {
        if let Some(v) = self.floor_mul_small(n) {
            return Ok(v);
        }
        let n = BigInt::from(n);
        let nq = &n * BigInt::from(self.q);
        let radicand = nq.magnitude() * nq.magnitude() * BigUint::from(self.d);
        let irr = signed_floor_sqrt(radicand, nq.sign() == Sign::Minus);
        let value = (n * BigInt::from(self.p) + irr).div_floor(&BigInt::from(self.r));
        value
            .to_i128()
            .ok_or_else(|| Error::capacity("floor(n·x) outside 128-bit range", "i128"))
    }
}

impl QuadraticIrrational {
    /// Word-sized fast path of [`floor_mul`](Self::floor_mul).
    fn floor_mul_small(&self, n: i64) -> Option<i128> {
        let nq = (n as i128).checked_mul(self.q as i128)?;
        let radicand = (nq.unsigned_abs()).checked_mul(nq.unsigned_abs())?.checked_mul(self.d as u128)?;
        let root = radicand.sqrt() as i128;
        let irr = if nq >= 0 {
            root
        } else if (root as u128) * (root as u128) == radicand {
            -root
        } else {
            -root - 1
        };
        let numer = (n as i128).checked_mul(self.p as i128)?.checked_add(irr)?;
        Some(numer.div_euclid(self.r as i128))
    }
}

/// `⌊±√radicand⌋`.
fn signed_floor_sqrt(radicand: BigUint, negative: bool) -> BigInt {
    let root = radicand.sqrt();
    if !negative {
        BigInt::from(root)
    } else if &root * &root == radicand {
        -BigInt::from(root)
    } else {
        -BigInt::from(root) - 1
    }
}

impl fmt::Display for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}{:+}*sqrt({}))/{}", self.p, self.q, self.d, self.r)
    }
}

/// A parameter given either exactly or as a binary64 literal (taken at face value).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Irrational {
    Quadratic(QuadraticIrrational),
    Literal(f64),
}

impl Irrational {
    pub fn to_f64(&self) -> f64 {
        match self {
            Irrational::Quadratic(q) => q.to_f64(),
            Irrational::Literal(x) => *x,
        }
    }

    pub fn turn(&self) -> Turn {
        match self {
            Irrational::Quadratic(q) => q.turn(),
            Irrational::Literal(x) => Turn::from_f64(*x),
        }
    }

    /// `⌊n·x⌋`. For literals this is exact for the binary64 value.
    pub fn floor_mul(&self, n: i64) -> Result<i128> {
        match self {
            Irrational::Quadratic(q) => q.floor_mul(n),
            Irrational::Literal(x) => {
                let (m, e) = decompose(*x);
                let prod = BigInt::from(m) * BigInt::from(n);
                let floor = if e >= 0 {
                    prod << e as u32
                } else {
                    prod.div_floor(&(BigInt::one() << (-e) as u32))
                };
                floor
                    .to_i128()
                    .ok_or_else(|| Error::capacity("floor(n·x) outside 128-bit range", "i128"))
            }
        }
    }

    /// Whether multiplying the fractional part by integers up to `bound` in
    /// magnitude is exact (literals) or within `2^-48` (truncated expansions).
    pub fn phase_error_bound(&self, multiplier: u128) -> f64 {
        match self {
            Irrational::Literal(_) => 0.0,
            Irrational::Quadratic(_) => multiplier as f64 * 2f64.powi(-128),
        }
    }
}

impl From<QuadraticIrrational> for Irrational {
    fn from(q: QuadraticIrrational) -> Self {
        Irrational::Quadratic(q)
    }
}

impl From<f64> for Irrational {
    fn from(x: f64) -> Self {
        Irrational::Literal(x)
    }
}

impl FromStr for Irrational {
    type Err = Error;

    /// Accepts `sqrt2`, `sqrt3`, `sqrtD`, `sqrt2-1`, `golden`,
    /// `quad:p,q,d,r` or a decimal literal.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let bad = || Error::Config(format!("cannot parse irrational parameter {s:?}"));
        match t.as_str() {
            "golden" | "phi" => return Ok(QuadraticIrrational::golden_ratio().into()),
            "sqrt2-1" => return Ok(QuadraticIrrational::sqrt2_minus_1().into()),
            _ => {}
        }
        if let Some(rest) = t.strip_prefix("sqrt") {
            let d: u64 = rest.trim_matches(|c| c == '(' || c == ')').parse().map_err(|_| bad())?;
            return Ok(QuadraticIrrational::sqrt(d).into());
        }
        if let Some(rest) = t.strip_prefix("quad:") {
            let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
            if parts.len() != 4 {
                return Err(bad());
            }
            let q = QuadraticIrrational::new(
                parts[0].parse().map_err(|_| bad())?,
                parts[1].parse().map_err(|_| bad())?,
                parts[2].parse().map_err(|_| bad())?,
                parts[3].parse().map_err(|_| bad())?,
            );
            if q.r == 0 {
                return Err(bad());
            }
            return Ok(q.into());
        }
        t.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(Irrational::Literal)
            .ok_or_else(bad)
    }
}

impl fmt::Display for Irrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Irrational::Quadratic(q) => write!(f, "{q}"),
            Irrational::Literal(x) => write!(f, "{x}"),
        }
    }
}

/// `x = m · 2^e` with `m` a signed integer.
pub(crate) fn decompose(x: f64) -> (i64, i32) {
    if x == 0.0 || !x.is_finite() {
        return (0, 0);
    }
    let bits = x.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i32;
    let frac = (bits & ((1u64 << 52) - 1)) as i64;
    let (m, e) = if biased == 0 {
        (frac, -1074)
    } else {
        (frac | (1i64 << 52), biased - 1075)
    };
    let m = if x < 0.0 { -m } else { m };
    (m, e)
}

/// Exact binary64 value as a big rational `m / 2^k` with `k ≥ 0`: returns `(m, k)`.
pub(crate) fn dyadic(x: f64) -> (BigInt, u32) {
    let (m, e) = decompose(x);
    if e >= 0 {
        (BigInt::from(m) << e as u32, 0)
    } else {
        let mut m = BigInt::from(m);
        let mut k = (-e) as u32;
        while k > 0 && !m.is_zero() && m.is_even() {
            m >>= 1u32;
            k -= 1;
        }
        if m.is_zero() {
            k = 0;
        }
        (m, k)
    }
}
