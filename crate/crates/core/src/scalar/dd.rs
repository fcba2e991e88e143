//! Double-double real numbers.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use super::eft::{quick_two_sum, two_prod, two_sum};
use crate::Error;

/// An unevaluated sum `hi + lo` of two binary64 numbers, roughly 32 significant
/// decimal digits.
///
/// Values produced by the arithmetic here are normalized: `hi` is the binary64
/// nearest to `hi + lo`, so `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DDReal {
    pub hi: f64,
    pub lo: f64,
}

impl DDReal {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    /// Builds a normalized value from an arbitrary pair.
    #[inline]
    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        Self { hi, lo }
    }

    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Rounds to the nearest binary64.
    #[inline]
    pub fn to_f64(self) -> f64 {
        // Keeps the sign of a negative zero.
        if self.lo == 0.0 {
            return self.hi;
        }
        self.hi + self.lo
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.hi == 0.0
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    #[inline]
    pub fn is_sign_negative(self) -> bool {
        self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0)
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.is_sign_negative() {
            -self
        } else {
            self
        }
    }

    /// Exact multiplication by `2^k`.
    #[inline]
    pub fn mul_pow2(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        Self { hi: self.hi * s, lo: self.lo * s }
    }

    /// Product with a binary64 factor.
    #[inline]
    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = self.lo.mul_add(b, e);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }

    /// Division that reports a zero divisor instead of producing a non-finite value.
    pub fn checked_div(self, rhs: Self) -> Result<Self, Error> {
        if rhs.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(self / rhs)
        }
    }
}

impl From<f64> for DDReal {
    #[inline]
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl Neg for DDReal {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for DDReal {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        // Accurate (IEEE-style) addition; keeps relative accuracy under cancellation.
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Self { hi, lo }
    }
}

impl Sub for DDReal {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DDReal {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl Div for DDReal {
    type Output = Self;
    /// Three-quotient long division. A zero divisor yields a non-finite
    /// result; use [`DDReal::checked_div`] to get an error instead.
    #[inline]
    fn div(self, rhs: Self) -> Self {
        let q1 = self.hi / rhs.hi;
        if !q1.is_finite() {
            return Self { hi: q1, lo: 0.0 };
        }
        let r = self - rhs.mul_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs.mul_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Self { hi: q1, lo: q2 } + Self::from_f64(q3)
    }
}

impl AddAssign for DDReal {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for DDReal {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for DDReal {
    #[inline]
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl PartialOrd for DDReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl fmt::Display for DDReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} + {:e}", self.hi, self.lo)
    }
}

pub fn dd_add(a: DDReal, b: DDReal) -> DDReal {
    a + b
}

pub fn dd_sub(a: DDReal, b: DDReal) -> DDReal {
    a - b
}

pub fn dd_mul(a: DDReal, b: DDReal) -> DDReal {
    a * b
}

pub fn dd_div(a: DDReal, b: DDReal) -> Result<DDReal, Error> {
    a.checked_div(b)
}
