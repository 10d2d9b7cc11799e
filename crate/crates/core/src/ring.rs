//! Coefficient traits. Polynomials, rational functions and the Sturm
//! machinery are generic over these; the concrete carriers are `BigInt`,
//! `BigRational`, [`QuadElem`](crate::quad::QuadElem), `f64`,
//! [`BigFloat`](crate::bigfloat::BigFloat) and complex numbers over them.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, Zero};

pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + FromPrimitive
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + FromPrimitive
        + Neg<Output = T>
        + for<'a> Add<&'a T, Output = T>
        + for<'a> Sub<&'a T, Output = T>
        + for<'a> Mul<&'a T, Output = T>
{
}

pub trait Field: Ring + for<'a> Div<&'a Self, Output = Self> {}

impl<T> Field for T where T: Ring + for<'a> Div<&'a T, Output = T> {}

/// An exactly ordered subfield of the reals: the sign of every element is
/// decidable.
pub trait OrderedField: Field {
    fn sign(&self) -> i32;

    fn cmp_exact(&self, other: &Self) -> std::cmp::Ordering {
        (self.clone() - other).sign().cmp(&0)
    }
}

impl OrderedField for BigRational {
    fn sign(&self) -> i32 {
        if self.is_zero() {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }
}

pub(crate) fn bigint_sign(x: &BigInt) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// `n/d` as an exact rational.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
