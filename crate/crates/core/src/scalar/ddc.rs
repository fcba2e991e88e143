//! Complex numbers with double-double components.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use super::dd::DDReal;
use crate::Error;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DDComplex {
    pub re: DDReal,
    pub im: DDReal,
}

impl DDComplex {
    pub const ZERO: Self = Self { re: DDReal::ZERO, im: DDReal::ZERO };
    pub const ONE: Self = Self { re: DDReal::ONE, im: DDReal::ZERO };

    #[inline]
    pub fn new(re: DDReal, im: DDReal) -> Self {
        Self { re, im }
    }

    #[inline]
    pub fn from_c64(z: Complex64) -> Self {
        Self { re: DDReal::from(z.re), im: DDReal::from(z.im) }
    }

    #[inline]
    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self { re: self.re, im: -self.im }
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    #[inline]
    pub fn mul_pow2(self, k: i32) -> Self {
        Self { re: self.re.mul_pow2(k), im: self.im.mul_pow2(k) }
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self, Error> {
        if rhs.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(self / rhs)
        }
    }
}

impl From<Complex64> for DDComplex {
    fn from(z: Complex64) -> Self {
        Self::from_c64(z)
    }
}

impl Neg for DDComplex {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

impl Add for DDComplex {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for DDComplex {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Mul for DDComplex {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Self {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl Div for DDComplex {
    type Output = Self;
    /// Smith's algorithm: scale by the ratio of the smaller to the larger
    /// divisor component so no intermediate squares the divisor.
    fn div(self, rhs: Self) -> Self {
        let (a, b) = (self.re, self.im);
        let (c, d) = (rhs.re, rhs.im);
        if c.abs() >= d.abs() {
            let ratio = d / c;
            let denom = c + d * ratio;
            Self { re: (a + b * ratio) / denom, im: (b - a * ratio) / denom }
        } else {
            let ratio = c / d;
            let denom = c * ratio + d;
            Self { re: (a * ratio + b) / denom, im: (b * ratio - a) / denom }
        }
    }
}

impl fmt::Display for DDComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})i", self.re, self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> DDComplex {
        DDComplex::from_c64(Complex64::new(re, im))
    }

    #[test]
    fn product_matches_hand_expansion() {
        // (1 + 2i)(3 - i) = 5 + 5i
        assert_eq!(c(1.0, 2.0) * c(3.0, -1.0), c(5.0, 5.0));
    }

    #[test]
    fn smith_division_both_branches() {
        // Smith's ratio d/c is inexact here, so allow a double-double rounding residue.
        let close = |a: DDComplex, b: DDComplex| {
            let d = a - b;
            d.re.to_f64().abs() < 1e-30 && d.im.to_f64().abs() < 1e-30
        };
        assert!(close(c(5.0, 5.0) / c(3.0, -1.0), c(1.0, 2.0)));
        assert!(close(c(5.0, 5.0) / c(1.0, 2.0), c(3.0, -1.0)));
    }

    #[test]
    fn division_avoids_spurious_overflow() {
        let big = c(1e300, 1e300);
        let q = big / big;
        assert_eq!(q.to_c64(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn zero_divisor() {
        assert_eq!(c(1.0, 0.0).checked_div(DDComplex::ZERO), Err(Error::DivisionByZero));
    }
}
