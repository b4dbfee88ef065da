//! Scalar abstraction over `f64` and [`Dd`], so the contour machinery can
//! run in either working precision.

use super::dd::Dd;
use num_traits::Num;
use std::fmt::Debug;
use std::ops::Neg;

pub trait Scalar:
    Num + Neg<Output = Self> + Copy + PartialOrd + Debug + Send + Sync + 'static
{
    const NAME: &'static str;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    /// Unit roundoff of the format.
    fn eps() -> f64;

    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin_cos(self) -> (Self, Self);
    fn sinh_cosh(self) -> (Self, Self);
    fn atan2(self, x: Self) -> Self;
    fn floor(self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn mul_pow2(self, k: i32) -> Self;
    fn is_finite(self) -> bool;

    fn pi() -> Self;
    fn two_pi() -> Self;

    fn maxv(self, o: Self) -> Self {
        if self > o { self } else { o }
    }
}

impl Scalar for f64 {
    const NAME: &'static str = "double";

    #[inline]
    fn from_f64(x: f64) -> f64 {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    fn eps() -> f64 {
        f64::EPSILON
    }
    #[inline]
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    #[inline]
    fn sqrt(self) -> f64 {
        f64::sqrt(self)
    }
    #[inline]
    fn exp(self) -> f64 {
        f64::exp(self)
    }
    #[inline]
    fn ln(self) -> f64 {
        f64::ln(self)
    }
    #[inline]
    fn sin_cos(self) -> (f64, f64) {
        f64::sin_cos(self)
    }
    #[inline]
    fn sinh_cosh(self) -> (f64, f64) {
        (self.sinh(), self.cosh())
    }
    #[inline]
    fn atan2(self, x: f64) -> f64 {
        f64::atan2(self, x)
    }
    #[inline]
    fn floor(self) -> f64 {
        f64::floor(self)
    }
    #[inline]
    fn powi(self, n: i32) -> f64 {
        f64::powi(self, n)
    }
    #[inline]
    fn mul_pow2(self, k: i32) -> f64 {
        self * (k as f64).exp2()
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn pi() -> f64 {
        std::f64::consts::PI
    }
    fn two_pi() -> f64 {
        std::f64::consts::TAU
    }
}

impl Scalar for Dd {
    const NAME: &'static str = "double-double";

    #[inline]
    fn from_f64(x: f64) -> Dd {
        Dd::from_f64(x)
    }
    #[inline]
    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }
    fn eps() -> f64 {
        Dd::EPS
    }
    #[inline]
    fn abs(self) -> Dd {
        Dd::abs(self)
    }
    #[inline]
    fn sqrt(self) -> Dd {
        Dd::sqrt(self)
    }
    #[inline]
    fn exp(self) -> Dd {
        Dd::exp(self)
    }
    #[inline]
    fn ln(self) -> Dd {
        Dd::ln(self)
    }
    #[inline]
    fn sin_cos(self) -> (Dd, Dd) {
        Dd::sin_cos(self)
    }
    #[inline]
    fn sinh_cosh(self) -> (Dd, Dd) {
        Dd::sinh_cosh(self)
    }
    #[inline]
    fn atan2(self, x: Dd) -> Dd {
        Dd::atan2(self, x)
    }
    #[inline]
    fn floor(self) -> Dd {
        Dd::floor(self)
    }
    #[inline]
    fn powi(self, n: i32) -> Dd {
        Dd::powi(self, n)
    }
    #[inline]
    fn mul_pow2(self, k: i32) -> Dd {
        Dd::mul_pow2(self, k)
    }
    fn is_finite(self) -> bool {
        Dd::is_finite(self)
    }
    fn pi() -> Dd {
        Dd::PI
    }
    fn two_pi() -> Dd {
        Dd::TWO_PI
    }
}
