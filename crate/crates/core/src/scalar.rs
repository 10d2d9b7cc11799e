//! The approximate real scalar behind numeric root finding and ball
//! arithmetic. Implemented for `f64` and for [`BigFloat`].

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, Num, ToPrimitive};

use crate::bigfloat::BigFloat;

pub trait Scalar: Clone + Debug + Num + Neg<Output = Self> + PartialOrd {
    fn from_f64_prec(x: f64, prec: u32) -> Self;
    fn from_int_prec(x: &BigInt, prec: u32) -> Self;
    fn from_ratio_prec(x: &BigRational, prec: u32) -> Self;
    fn to_f64(&self) -> f64;
    /// Exact value of a finite scalar.
    fn to_ratio(&self) -> BigRational;
    fn log2_abs(&self) -> f64;
    fn sqrt(&self) -> Self;
    fn abs(&self) -> Self;
    /// Mantissa bits, so a single rounding has relative error `<= 2^-precision`.
    fn precision(&self) -> u32;
    fn is_finite(&self) -> bool;
}

impl Scalar for f64 {
    fn from_f64_prec(x: f64, _prec: u32) -> Self {
        x
    }
    fn from_int_prec(x: &BigInt, _prec: u32) -> Self {
        x.to_f64().unwrap_or(f64::INFINITY)
    }
    fn from_ratio_prec(x: &BigRational, _prec: u32) -> Self {
        BigFloat::from_ratio(x, 64).to_f64()
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_ratio(&self) -> BigRational {
        BigRational::from_float(*self).expect("finite f64")
    }
    fn log2_abs(&self) -> f64 {
        Float::abs(*self).log2()
    }
    fn sqrt(&self) -> Self {
        Float::sqrt(*self)
    }
    fn abs(&self) -> Self {
        Float::abs(*self)
    }
    fn precision(&self) -> u32 {
        53
    }
    fn is_finite(&self) -> bool {
        Float::is_finite(*self)
    }
}

impl Scalar for BigFloat {
    fn from_f64_prec(x: f64, prec: u32) -> Self {
        BigFloat::from_f64(x, prec)
    }
    fn from_int_prec(x: &BigInt, prec: u32) -> Self {
        BigFloat::from_int(x, prec)
    }
    fn from_ratio_prec(x: &BigRational, prec: u32) -> Self {
        BigFloat::from_ratio(x, prec)
    }
    fn to_f64(&self) -> f64 {
        BigFloat::to_f64(self)
    }
    fn to_ratio(&self) -> BigRational {
        BigFloat::to_ratio(self)
    }
    fn log2_abs(&self) -> f64 {
        BigFloat::log2_abs(self)
    }
    fn sqrt(&self) -> Self {
        BigFloat::sqrt(self)
    }
    fn abs(&self) -> Self {
        BigFloat::abs(self)
    }
    fn precision(&self) -> u32 {
        self.prec()
    }
    fn is_finite(&self) -> bool {
        true
    }
}
