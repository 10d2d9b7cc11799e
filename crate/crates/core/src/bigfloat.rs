//! Binary floating point with an arbitrary-size mantissa.
//!
//! A value is `mant * 2^exp` with `mant` rounded to at most `prec` bits.
//! Every operation rounds to nearest at the larger precision of its
//! operands, so the relative error of one operation is below `2^-prec`.
//! Exponents are unbounded, so there is no overflow or underflow.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

pub const DEFAULT_PREC: u32 = 64;

#[derive(Clone, Debug)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Round {
    Nearest,
    Up,
}

fn round_parts(mant: BigInt, mut exp: i64, prec: u32, mode: Round) -> BigFloat {
    if mant.is_zero() {
        return BigFloat { mant, exp: 0, prec };
    }
    let prec = prec.max(2);
    let (sign, mut mag) = mant.into_parts();
    let bits = mag.bits();
    if bits > prec as u64 {
        let shift = bits - prec as u64;
        let dropped_nonzero = mag.trailing_zeros().map_or(false, |tz| tz < shift);
        mag = match mode {
            Round::Nearest => (mag + (BigUint::one() << (shift - 1))) >> shift,
            Round::Up => {
                let q = mag >> shift;
                if dropped_nonzero {
                    q + 1u32
                } else {
                    q
                }
            }
        };
        exp += shift as i64;
    }
    if let Some(tz) = mag.trailing_zeros() {
        if tz > 0 {
            mag >>= tz;
            exp += tz as i64;
        }
    }
    BigFloat {
        mant: BigInt::from_biguint(sign, mag),
        exp,
        prec,
    }
}

impl BigFloat {
    pub fn zero_with(prec: u32) -> Self {
        BigFloat {
            mant: BigInt::zero(),
            exp: 0,
            prec,
        }
    }

    pub fn from_int(x: &BigInt, prec: u32) -> Self {
        round_parts(x.clone(), 0, prec, Round::Nearest)
    }

    pub fn from_i64(x: i64, prec: u32) -> Self {
        round_parts(BigInt::from(x), 0, prec, Round::Nearest)
    }

    /// Exact conversion; `x` must be finite.
    pub fn from_f64(x: f64, prec: u32) -> Self {
        assert!(x.is_finite(), "BigFloat::from_f64 on non-finite value");
        if x == 0.0 {
            return Self::zero_with(prec);
        }
        let (m, e, s) = x.integer_decode();
        let mant = BigInt::from(m) * i64::from(s);
        round_parts(mant, e as i64, prec.max(53), Round::Nearest)
    }

    pub fn from_ratio(x: &BigRational, prec: u32) -> Self {
        let num = Self::from_int(x.numer(), prec + 8);
        let den = Self::from_int(x.denom(), prec + 8);
        num.div_prec(&den, prec)
    }

    /// `mant * 2^exp` from an `f64` mantissa and an integer binary exponent,
    /// rounded away from zero.
    pub fn from_f64_scaled_up(m: f64, e: i64, prec: u32) -> Self {
        let base = Self::from_f64(m, 64);
        let scaled = BigFloat {
            mant: base.mant,
            exp: base.exp + e,
            prec: 64,
        };
        round_parts(scaled.mant, scaled.exp, prec, Round::Up)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        round_parts(self.mant.clone(), self.exp, prec, Round::Nearest)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum_i(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Binary exponent of the leading bit plus one: `2^(top-1) <= |x| < 2^top`.
    fn top(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    /// Multiply by `2^k` exactly.
    pub fn ldexp(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        BigFloat {
            mant: self.mant.clone(),
            exp: self.exp + k,
            prec: self.prec,
        }
    }

    fn add_mode(&self, other: &Self, prec: u32, mode: Round) -> Self {
        if self.is_zero() {
            return round_parts(other.mant.clone(), other.exp, prec, mode);
        }
        if other.is_zero() {
            return round_parts(self.mant.clone(), self.exp, prec, mode);
        }
        // An operand far below half an ulp of the other cannot change a
        // round-to-nearest result.
        if mode == Round::Nearest {
            let gap = prec as i64 + 3;
            if self.top() - other.top() > gap {
                return round_parts(self.mant.clone(), self.exp, prec, mode);
            }
            if other.top() - self.top() > gap {
                return round_parts(other.mant.clone(), other.exp, prec, mode);
            }
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        round_parts(a + b, e, prec, mode)
    }

    pub fn mul_prec(&self, other: &Self, prec: u32) -> Self {
        round_parts(&self.mant * &other.mant, self.exp + other.exp, prec, Round::Nearest)
    }

    pub fn div_prec(&self, other: &Self, prec: u32) -> Self {
        assert!(!other.is_zero(), "BigFloat division by zero");
        if self.is_zero() {
            return Self::zero_with(prec);
        }
        let shift = (prec as i64 + 2 + other.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let q = (&self.mant << shift as usize) / &other.mant;
        round_parts(q, self.exp - shift - other.exp, prec, Round::Nearest)
    }

    /// Upper bound for `self + other` on nonnegative values.
    pub fn add_up(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        self.add_mode(other, prec, Round::Up)
    }

    /// Upper bound for `self * other` on nonnegative values.
    pub fn mul_up(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        round_parts(&self.mant * &other.mant, self.exp + other.exp, prec, Round::Up)
    }

    pub fn sqrt(&self) -> Self {
        assert!(self.signum_i() >= 0, "square root of a negative BigFloat");
        if self.is_zero() {
            return self.clone();
        }
        let mag = self.mant.magnitude();
        let want = 2 * self.prec as i64 + 4;
        let mut shift = (want - mag.bits() as i64).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let r = (mag << shift as usize).sqrt();
        round_parts(BigInt::from(r), (self.exp - shift) / 2, self.prec, Round::Nearest)
    }

    /// Exact value as a rational number.
    pub fn to_ratio(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    /// Top 64 bits of the mantissa and the matching exponent.
    fn top_bits(&self) -> (f64, i64) {
        let bits = self.mant.bits();
        if bits <= 64 {
            (self.mant.to_f64().unwrap_or(0.0), self.exp)
        } else {
            let shift = bits - 64;
            let m = &self.mant >> shift as usize;
            (m.to_f64().unwrap_or(0.0), self.exp + shift as i64)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let (m, e) = self.top_bits();
        if e > 2000 {
            return m.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0 * m.signum();
        }
        // split the scaling so intermediate powers stay finite
        let half = (e / 2) as i32;
        m * 2f64.powi(half) * 2f64.powi(e as i32 - half)
    }

    /// `log2 |x|`, `-inf` at zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (m, e) = self.top_bits();
        m.abs().log2() + e as f64
    }

    /// Natural logarithm of `|x|` rounded to an `f64`.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (m, e) = self.top_bits();
        m.abs().ln() + e as f64 * std::f64::consts::LN_2
    }

    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            // arithmetic shift floors toward negative infinity
            &self.mant >> (-self.exp) as usize
        }
    }

    fn cmp_exact(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum_i(), other.signum_i());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let by_mag = if self.top() != other.top() {
            self.top().cmp(&other.top())
        } else {
            let e = self.exp.min(other.exp);
            let a = self.mant.magnitude() << (self.exp - e) as usize;
            let b = other.mant.magnitude() << (other.exp - e) as usize;
            a.cmp(&b)
        };
        if sa > 0 {
            by_mag
        } else {
            by_mag.reverse()
        }
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_exact(other) == Ordering::Equal
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_exact(other))
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a BigFloat> for &'a BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: &'a BigFloat) -> BigFloat {
                let f: fn(&BigFloat, &BigFloat) -> BigFloat = $body;
                f(self, rhs)
            }
        }
        impl $tr<BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: &'a BigFloat) -> BigFloat {
                (&self).$m(rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.add_mode(b, a.prec.max(b.prec), Round::Nearest));
binop!(Sub, sub, |a, b| a.add_mode(&-b, a.prec.max(b.prec), Round::Nearest));
binop!(Mul, mul, |a, b| a.mul_prec(b, a.prec.max(b.prec)));
binop!(Div, div, |a, b| a.div_prec(b, a.prec.max(b.prec)));
binop!(Rem, rem, |a, b| {
    let q = a.div_prec(b, a.prec.max(b.prec) + 64);
    let t = BigFloat::from_int(&trunc_int(&q), q.prec);
    a - &(&t * b)
});

fn trunc_int(x: &BigFloat) -> BigInt {
    if x.signum_i() >= 0 {
        x.floor_int()
    } else {
        -(-x).floor_int()
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat {
            mant: -self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        -(self.clone())
    }
}

impl Zero for BigFloat {
    fn zero() -> Self {
        Self::zero_with(DEFAULT_PREC)
    }
    fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }
}

impl One for BigFloat {
    fn one() -> Self {
        Self::from_i64(1, DEFAULT_PREC)
    }
}

impl FromPrimitive for BigFloat {
    fn from_i64(n: i64) -> Option<Self> {
        Some(BigFloat::from_i64(n, DEFAULT_PREC))
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(BigFloat::from_int(&BigInt::from(n), DEFAULT_PREC))
    }
    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then(|| BigFloat::from_f64(x, DEFAULT_PREC))
    }
}

impl Num for BigFloat {
    type FromStrRadixErr = String;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, String> {
        if radix != 10 {
            return Err(format!("unsupported radix {radix}"));
        }
        let x: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
        Ok(Self::from_f64(x, DEFAULT_PREC))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bf(x: f64) -> BigFloat {
        BigFloat::from_f64(x, 128)
    }

    #[test]
    fn arithmetic_matches_f64_on_small_values() {
        let a = bf(1.5);
        let b = bf(-0.25);
        assert_eq!((&a + &b).to_f64(), 1.25);
        assert_eq!((&a * &b).to_f64(), -0.375);
        assert_eq!((&a / &b).to_f64(), -6.0);
        assert_eq!((&a - &a).to_f64(), 0.0);
    }

    #[test]
    fn sqrt_two_to_high_precision() {
        let two = BigFloat::from_i64(2, 256);
        let r = two.sqrt();
        let back = &r * &r;
        let err = (&back - &two).abs();
        assert!(err.log2_abs() < -250.0, "sqrt error too large: {}", err.log2_abs());
    }

    #[test]
    fn division_has_relative_error_below_prec() {
        let one = BigFloat::from_i64(1, 200);
        let three = BigFloat::from_i64(3, 200);
        let q = &one / &three;
        let r = &(&q * &three) - &one;
        assert!(r.log2_abs() < -195.0);
    }

    #[test]
    fn exact_rational_round_trip() {
        let x = bf(0.1);
        let r = x.to_ratio();
        assert_eq!(BigFloat::from_ratio(&r, 128), x);
    }

    #[test]
    fn comparisons_across_exponents() {
        assert!(bf(1e-300) < bf(1e300));
        assert!(bf(-1e300) < bf(-1e-300));
        assert!(bf(2.0) > bf(1.9999999));
        assert_eq!(bf(0.0), BigFloat::zero());
    }

    #[test]
    fn upward_rounding_never_undershoots() {
        let a = BigFloat::from_ratio(&BigRational::new(1.into(), 3.into()), 10);
        let b = BigFloat::from_ratio(&BigRational::new(1.into(), 7.into()), 10);
        let s = a.add_up(&b);
        assert!(s.to_ratio() >= a.to_ratio() + b.to_ratio());
        let m = a.mul_up(&b);
        assert!(m.to_ratio() >= a.to_ratio() * b.to_ratio());
    }

    #[test]
    fn log_and_conversion_of_huge_values() {
        let big = BigFloat::from_int(&(BigInt::one() << 5000usize), 64);
        assert!((big.log2_abs() - 5000.0).abs() < 1e-9);
        assert_eq!(big.to_f64(), f64::INFINITY);
        let tiny = big.ldexp(-10000);
        assert!((tiny.log2_abs() + 5000.0).abs() < 1e-9);
    }
}
