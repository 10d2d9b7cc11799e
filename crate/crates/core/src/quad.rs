//! Elements `a + b√D` of a quadratic field.
//!
//! Every element carries its `D`; the value `0` for `D` marks a plain
//! rational that has not been attached to a field yet (what `Zero::zero()`
//! and `One::one()` produce). Binary operations adopt the nonzero `D` of
//! either operand, so rationals mix freely with field elements.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::ring::OrderedField;

#[derive(Clone, Debug, Eq, Serialize, Deserialize)]
pub struct QuadElem {
    d: i64,
    a: BigRational,
    b: BigRational,
}

/// Whether `d` is a squarefree integer other than 0 and 1.
pub fn is_valid_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let n = d.unsigned_abs();
    let mut k = 2u64;
    while k * k <= n {
        if n % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Write `n = s^2 * core` with `core` squarefree (sign kept in `core`).
/// Trial division up to `10^6`; a cofactor left over is split only when it
/// is a perfect square.
pub fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    if n.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let mut m = n.abs();
    let mut s = BigInt::one();
    let mut core = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut k = 2u64;
    while k <= 1_000_000 {
        let kk = BigInt::from(k);
        if &kk * &kk > m {
            break;
        }
        let mut e = 0;
        while (&m % &kk).is_zero() {
            m /= &kk;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= &kk;
        }
        if e % 2 == 1 {
            core *= &kk;
        }
        k += if k == 2 { 1 } else { 2 };
    }
    let r = m.sqrt();
    if &r * &r == m {
        s *= r;
    } else {
        core *= m;
    }
    (s, core)
}

impl QuadElem {
    pub fn new(d: i64, a: BigRational, b: BigRational) -> Result<Self> {
        if !is_valid_discriminant(d) {
            return invalid(format!("{d} is not a squarefree integer other than 0 and 1"));
        }
        Ok(QuadElem { d, a, b })
    }

    pub fn rational(a: BigRational) -> Self {
        QuadElem { d: 0, a, b: BigRational::zero() }
    }

    /// `√D` itself.
    pub fn sqrt(d: i64) -> Result<Self> {
        QuadElem::new(d, BigRational::zero(), BigRational::one())
    }

    /// Attach a rational to the field `Q(√d)`.
    pub fn in_field(self, d: i64) -> Self {
        QuadElem { d, ..self }
    }

    /// `D`, or `0` for an element not yet attached to a field.
    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.a.clone())
    }

    /// The Galois conjugate `a - b√D`.
    pub fn conj(&self) -> Self {
        QuadElem { d: self.d, a: self.a.clone(), b: -self.b.clone() }
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.d.into())
    }

    pub fn trace(&self) -> BigRational {
        &self.a + &self.a
    }

    pub fn is_real(&self) -> bool {
        self.d > 0 || self.b.is_zero()
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(QuadElem { d: self.d, a: &self.a / &n, b: -(&self.b / &n) })
    }

    /// Numeric value of the embedding with `√D > 0` (or `i√|D|`), as
    /// `(re, im)`.
    pub fn to_complex_f64(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        if self.b.is_zero() {
            (a, 0.0)
        } else if self.d > 0 {
            (a + b * (self.d as f64).sqrt(), 0.0)
        } else {
            (a, b * ((-self.d) as f64).sqrt())
        }
    }

    fn join(&self, other: &Self) -> i64 {
        if self.d == 0 || self.b.is_zero() && other.d != 0 {
            other.d
        } else {
            if other.d != 0 && other.d != self.d && !other.b.is_zero() {
                panic!("mixing elements of Q(sqrt {}) and Q(sqrt {})", self.d, other.d);
            }
            self.d
        }
    }
}

/// The nontrivial automorphism of `Q(√D)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisAction {
    pub d: i64,
}

impl GaloisAction {
    pub fn new(d: i64) -> Result<Self> {
        if !is_valid_discriminant(d) {
            return invalid(format!("{d} is not a squarefree integer other than 0 and 1"));
        }
        Ok(GaloisAction { d })
    }

    pub fn apply(&self, e: &QuadElem) -> QuadElem {
        e.conj()
    }
}

impl PartialEq for QuadElem {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a
            && self.b == other.b
            && (self.b.is_zero() || self.d == other.d)
    }
}

impl Zero for QuadElem {
    fn zero() -> Self {
        QuadElem::rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadElem {
    fn one() -> Self {
        QuadElem::rational(BigRational::one())
    }
}

impl FromPrimitive for QuadElem {
    fn from_i64(n: i64) -> Option<Self> {
        Some(QuadElem::rational(BigRational::from_integer(n.into())))
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(QuadElem::rational(BigRational::from_integer(n.into())))
    }
}

impl From<BigRational> for QuadElem {
    fn from(a: BigRational) -> Self {
        QuadElem::rational(a)
    }
}

impl From<i64> for QuadElem {
    fn from(n: i64) -> Self {
        QuadElem::rational(BigRational::from_integer(n.into()))
    }
}

fn add(x: &QuadElem, y: &QuadElem) -> QuadElem {
    QuadElem { d: x.join(y), a: &x.a + &y.a, b: &x.b + &y.b }
}

fn sub(x: &QuadElem, y: &QuadElem) -> QuadElem {
    QuadElem { d: x.join(y), a: &x.a - &y.a, b: &x.b - &y.b }
}

fn mul(x: &QuadElem, y: &QuadElem) -> QuadElem {
    let d = x.join(y);
    let dd = BigRational::from_integer(d.into());
    QuadElem {
        d,
        a: &x.a * &y.a + &x.b * &y.b * dd,
        b: &x.a * &y.b + &x.b * &y.a,
    }
}

fn div(x: &QuadElem, y: &QuadElem) -> QuadElem {
    let d = x.join(y);
    let y = QuadElem { d, ..y.clone() };
    mul(x, &y.inv().expect("division by zero in a quadratic field"))
}

macro_rules! quad_binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&QuadElem> for QuadElem {
            type Output = QuadElem;
            fn $m(self, rhs: &QuadElem) -> QuadElem {
                $f(&self, rhs)
            }
        }
        impl $tr<QuadElem> for QuadElem {
            type Output = QuadElem;
            fn $m(self, rhs: QuadElem) -> QuadElem {
                $f(&self, &rhs)
            }
        }
        impl $tr<&QuadElem> for &QuadElem {
            type Output = QuadElem;
            fn $m(self, rhs: &QuadElem) -> QuadElem {
                $f(self, rhs)
            }
        }
    };
}

quad_binop!(Add, add, add);
quad_binop!(Sub, sub, sub);
quad_binop!(Mul, mul, mul);
quad_binop!(Div, div, div);

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem { d: self.d, a: -self.a, b: -self.b }
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        -(self.clone())
    }
}

/// Exact sign of `a + b√D` for real fields. Panics on a non-real element.
impl OrderedField for QuadElem {
    fn sign(&self) -> i32 {
        let sa = rat_sign(&self.a);
        let sb = rat_sign(&self.b);
        if sb == 0 {
            return sa;
        }
        assert!(self.d > 0, "sign of a non-real element of Q(sqrt {})", self.d);
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a^2 with b^2 D
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * BigRational::from_integer(self.d.into());
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }
}

fn rat_sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let root = format!("sqrt({})", self.d);
        let babs = self.b.abs();
        let body = if babs.is_one() {
            root
        } else if babs.is_integer() {
            format!("{babs}*{root}")
        } else {
            format!("({babs})*{root}")
        };
        let sep = if self.b.is_negative() { "-" } else { "+" };
        if self.a.is_zero() {
            let lead = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{lead}{body}")
        } else {
            write!(f, "{}{sep}{body}", self.a)
        }
    }
}

impl crate::poly::CoeffFormat for QuadElem {
    fn unit_sign(&self) -> Option<bool> {
        if self.is_one() {
            Some(true)
        } else if (-self).is_one() {
            Some(false)
        } else {
            None
        }
    }
    fn is_negative_simple(&self) -> bool {
        if self.b.is_zero() {
            self.a.is_negative()
        } else {
            self.a.is_zero() && self.b.is_negative()
        }
    }
    fn fmt_abs(&self) -> String {
        (-self).to_string()
    }
    fn fmt_plain(&self) -> String {
        self.to_string()
    }
    fn juxtaposable(&self) -> bool {
        self.b.is_zero() && self.a.is_integer()
    }
}

/// Convenience constructor for tests and parsers.
pub fn quad(d: i64, a: (i64, i64), b: (i64, i64)) -> QuadElem {
    QuadElem {
        d,
        a: BigRational::new(BigInt::from(a.0), BigInt::from(a.1)),
        b: BigRational::new(BigInt::from(b.0), BigInt::from(b.1)),
    }
}
