//! Scalar abstraction shared by every numeric kernel.
//!
//! Each kernel is written once against [`Scalar`] and instantiated at machine
//! precision (`f64`, [`Complex64`]) or in double-double ([`DDReal`],
//! [`DDComplex`]) for extended-precision reference runs.

mod dd;
mod ddc;
mod eft;

use std::fmt::{self, Debug};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

pub use dd::{dd_add, dd_div, dd_mul, dd_sub, DDReal};
pub use ddc::DDComplex;
pub use eft::{quick_two_sum, split, two_prod, two_prod_dekker, two_sum};
pub use num_complex::Complex64;

use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarKind {
    F64,
    C64,
    DD,
    DDC,
}

impl ScalarKind {
    pub fn tag(self) -> &'static str {
        match self {
            ScalarKind::F64 => "f64",
            ScalarKind::C64 => "c64",
            ScalarKind::DD => "dd",
            ScalarKind::DDC => "ddc",
        }
    }

    pub fn is_complex(self) -> bool {
        matches!(self, ScalarKind::C64 | ScalarKind::DDC)
    }
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ScalarKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "f64" => Ok(ScalarKind::F64),
            "c64" => Ok(ScalarKind::C64),
            "dd" => Ok(ScalarKind::DD),
            "ddc" => Ok(ScalarKind::DDC),
            other => Err(Error::Parse { line: 0, message: format!("unknown scalar kind `{other}`") }),
        }
    }
}

pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const KIND: ScalarKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    /// Real kinds keep only the real part.
    fn from_c64(z: Complex64) -> Self;
    /// Rounds to machine precision.
    fn to_c64(self) -> Complex64;
    /// Modulus, rounded to binary64.
    fn magnitude(self) -> f64;
    /// Squared modulus, without the square root.
    #[inline]
    fn abs_sqr(self) -> f64 {
        let m = self.magnitude();
        m * m
    }
    fn conj(self) -> Self;
    fn is_zero(self) -> bool;
    fn is_finite(self) -> bool;
    /// Exact multiplication by `2^k`.
    fn mul_pow2(self, k: i32) -> Self;
}

impl Scalar for f64 {
    const KIND: ScalarKind = ScalarKind::F64;

    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn one() -> Self {
        1.0
    }
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn from_c64(z: Complex64) -> Self {
        z.re
    }
    #[inline]
    fn to_c64(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    #[inline]
    fn magnitude(self) -> f64 {
        self.abs()
    }
    #[inline]
    fn abs_sqr(self) -> f64 {
        self * self
    }
    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn is_zero(self) -> bool {
        self == 0.0
    }
    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    #[inline]
    fn mul_pow2(self, k: i32) -> Self {
        self * 2f64.powi(k)
    }
}

impl Scalar for Complex64 {
    const KIND: ScalarKind = ScalarKind::C64;

    #[inline]
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    #[inline]
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    #[inline]
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    #[inline]
    fn from_c64(z: Complex64) -> Self {
        z
    }
    #[inline]
    fn to_c64(self) -> Complex64 {
        self
    }
    #[inline]
    fn magnitude(self) -> f64 {
        self.norm()
    }
    #[inline]
    fn abs_sqr(self) -> f64 {
        self.norm_sqr()
    }
    #[inline]
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    #[inline]
    fn is_zero(self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    #[inline]
    fn is_finite(self) -> bool {
        Complex64::is_finite(self)
    }
    #[inline]
    fn mul_pow2(self, k: i32) -> Self {
        self * 2f64.powi(k)
    }
}

impl Scalar for DDReal {
    const KIND: ScalarKind = ScalarKind::DD;

    #[inline]
    fn zero() -> Self {
        DDReal::ZERO
    }
    #[inline]
    fn one() -> Self {
        DDReal::ONE
    }
    #[inline]
    fn from_f64(x: f64) -> Self {
        DDReal::from_f64(x)
    }
    #[inline]
    fn from_c64(z: Complex64) -> Self {
        DDReal::from_f64(z.re)
    }
    #[inline]
    fn to_c64(self) -> Complex64 {
        Complex64::new(self.to_f64(), 0.0)
    }
    #[inline]
    fn magnitude(self) -> f64 {
        self.to_f64().abs()
    }
    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn is_zero(self) -> bool {
        DDReal::is_zero(self)
    }
    #[inline]
    fn is_finite(self) -> bool {
        DDReal::is_finite(self)
    }
    #[inline]
    fn mul_pow2(self, k: i32) -> Self {
        DDReal::mul_pow2(self, k)
    }
}

impl Scalar for DDComplex {
    const KIND: ScalarKind = ScalarKind::DDC;

    #[inline]
    fn zero() -> Self {
        DDComplex::ZERO
    }
    #[inline]
    fn one() -> Self {
        DDComplex::ONE
    }
    #[inline]
    fn from_f64(x: f64) -> Self {
        DDComplex::new(DDReal::from_f64(x), DDReal::ZERO)
    }
    #[inline]
    fn from_c64(z: Complex64) -> Self {
        DDComplex::from_c64(z)
    }
    #[inline]
    fn to_c64(self) -> Complex64 {
        DDComplex::to_c64(self)
    }
    #[inline]
    fn magnitude(self) -> f64 {
        self.to_c64().norm()
    }
    #[inline]
    fn conj(self) -> Self {
        DDComplex::conj(self)
    }
    #[inline]
    fn is_zero(self) -> bool {
        DDComplex::is_zero(self)
    }
    #[inline]
    fn is_finite(self) -> bool {
        DDComplex::is_finite(self)
    }
    #[inline]
    fn mul_pow2(self, k: i32) -> Self {
        DDComplex::mul_pow2(self, k)
    }
}

/// A machine-precision scalar paired with its double-double counterpart.
pub trait MachineScalar: Scalar {
    type Extended: Scalar;

    fn extend(self) -> Self::Extended;
    fn round(x: Self::Extended) -> Self;
}

impl MachineScalar for f64 {
    type Extended = DDReal;

    #[inline]
    fn extend(self) -> DDReal {
        DDReal::from_f64(self)
    }
    #[inline]
    fn round(x: DDReal) -> f64 {
        x.to_f64()
    }
}

impl MachineScalar for Complex64 {
    type Extended = DDComplex;

    #[inline]
    fn extend(self) -> DDComplex {
        DDComplex::from_c64(self)
    }
    #[inline]
    fn round(x: DDComplex) -> Complex64 {
        x.to_c64()
    }
}
