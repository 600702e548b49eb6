//! Exact arithmetic on the circle group R/Z.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

const TWO_POW_64: f64 = 18_446_744_073_709_551_616.0;

/// A point of R/Z stored as `k / 2^128`.
///
/// Addition is wrapping addition and multiplication by an integer is wrapping
/// multiplication, both of which are exact modulo one. Any `f64` of magnitude
/// at least `2^-75` converts without loss.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Turn(pub u128);

impl Turn {
    pub const ZERO: Turn = Turn(0);
    pub const HALF: Turn = Turn(1 << 127);

    /// Fractional part of `x`, rounded to the nearest multiple of `2^-128`.
    pub fn from_f64(x: f64) -> Turn {
        if !x.is_finite() || x == 0.0 {
            return Turn::ZERO;
        }
        let bits = x.to_bits();
        let negative = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i32;
        let frac_bits = bits & ((1u64 << 52) - 1);
        let (mantissa, exp) = if biased == 0 {
            (frac_bits, -1074)
        } else {
            (frac_bits | (1u64 << 52), biased - 1075)
        };
        // x = mantissa * 2^exp, we want mantissa * 2^(exp + 128) mod 2^128
        let shift = exp + 128;
        let raw = if shift >= 128 {
            0
        } else if shift >= 0 {
            (mantissa as u128) << shift
        } else {
            let down = (-shift) as u32;
            if down > 64 {
                0
            } else {
                let m = mantissa as u128;
                (m + (1u128 << (down - 1))) >> down
            }
        };
        let t = Turn(raw);
        if negative {
            -t
        } else {
            t
        }
    }

    /// Fractional part of `a / q`, rounded down to a multiple of `2^-128`.
    pub fn from_ratio(a: i128, q: u128) -> Turn {
        assert!(q > 0, "denominator must be positive");
        let r = BigInt::from(a).mod_floor(&BigInt::from(q));
        let r = r.to_biguint().expect("non-negative remainder");
        let scaled: BigUint = (r << 128u32) / BigUint::from(q);
        Turn(scaled.to_u128().expect("fraction below one"))
    }

    /// Value in `[0, 1)`.
    pub fn to_f64(self) -> f64 {
        let hi = (self.0 >> 64) as u64 as f64;
        let lo = self.0 as u64 as f64;
        let v = (hi + lo / TWO_POW_64) / TWO_POW_64;
        // rounding can land on 1.0 for the last few ulps below one
        if v >= 1.0 {
            1.0 - f64::EPSILON / 2.0
        } else {
            v
        }
    }

    /// Representative in `[-1/2, 1/2)`.
    pub fn signed(self) -> f64 {
        self.0 as i128 as f64 / (TWO_POW_64 * TWO_POW_64)
    }

    /// Value in `[0, 1)` for printing: anything within `1e-12` of one reads as zero.
    pub fn to_output_f64(self) -> f64 {
        let v = self.to_f64();
        if v >= 1.0 - 1e-12 {
            0.0
        } else {
            v
        }
    }

    /// `e^{2πi·self}`.
    pub fn cis(self) -> Complex64 {
        let (s, c) = (TAU * self.signed()).sin_cos();
        Complex64::new(c, s)
    }

    /// `k·self mod 1` for an integer `k` taken modulo `2^128`.
    #[inline]
    pub fn times(self, k: u128) -> Turn {
        Turn(self.0.wrapping_mul(k))
    }

    #[inline]
    pub fn times_signed(self, k: i128) -> Turn {
        Turn(self.0.wrapping_mul(k as u128))
    }

    /// Multiply by an arbitrary-size integer, exact modulo one.
    pub fn times_big(self, k: &BigInt) -> Turn {
        self.times(bigint_mod_2_128(k))
    }
}

/// `k mod 2^128` as an unsigned word.
pub fn bigint_mod_2_128(k: &BigInt) -> u128 {
    if k.is_zero() {
        return 0;
    }
    let (sign, digits) = k.to_u64_digits();
    let lo = digits.first().copied().unwrap_or(0) as u128;
    let hi = digits.get(1).copied().unwrap_or(0) as u128;
    let v = lo | (hi << 64);
    if sign == num_bigint::Sign::Minus {
        v.wrapping_neg()
    } else {
        v
    }
}

impl Add for Turn {
    type Output = Turn;
    #[inline]
    fn add(self, rhs: Turn) -> Turn {
        Turn(self.0.wrapping_add(rhs.0))
    }
}

impl AddAssign for Turn {
    #[inline]
    fn add_assign(&mut self, rhs: Turn) {
        self.0 = self.0.wrapping_add(rhs.0);
    }
}

impl Sub for Turn {
    type Output = Turn;
    #[inline]
    fn sub(self, rhs: Turn) -> Turn {
        Turn(self.0.wrapping_sub(rhs.0))
    }
}

impl SubAssign for Turn {
    #[inline]
    fn sub_assign(&mut self, rhs: Turn) {
        self.0 = self.0.wrapping_sub(rhs.0);
    }
}

impl Neg for Turn {
    type Output = Turn;
    #[inline]
    fn neg(self) -> Turn {
        Turn(self.0.wrapping_neg())
    }
}

impl std::iter::Sum for Turn {
    fn sum<I: Iterator<Item = Turn>>(iter: I) -> Turn {
        iter.fold(Turn::ZERO, Add::add)
    }
}

impl fmt::Debug for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Turn({})", self.to_f64())
    }
}

impl fmt::Display for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_output_f64())
    }
}
