//! Dense univariate polynomials, constant term first.
//!
//! `Poly<T>` works over any [`Ring`]; Euclidean division and gcd need a
//! [`Field`]. Integer polynomials get primitive-part normalization,
//! pseudo-remainders, subresultant resultants and squarefree
//! decomposition in `impl Poly<BigInt>`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};
use crate::ring::{bigint_sign, Field, Ring};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly::new(vec![T::zero(), T::one()])
    }

    pub fn monomial(c: T, k: usize) -> Self {
        let mut v = vec![T::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&c| T::from_i64(c).expect("integer coefficient")).collect())
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn lead(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Evaluate at a point of another ring through a coefficient embedding.
    pub fn eval_in<U: Ring>(&self, x: &U, embed: impl Fn(&T) -> U) -> U {
        let mut acc = U::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + &embed(c);
        }
        acc
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c).collect())
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![T::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * &T::from_usize(k).expect("small integer"))
                .collect(),
        )
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &Poly::constant(c.clone());
        }
        acc
    }

    /// `x^deg * self(1/x)` for the given formal degree.
    pub fn reverse_to(&self, deg: usize) -> Self {
        let mut v = vec![T::zero(); deg + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[deg - k] = c.clone();
        }
        Poly::new(v)
    }

    pub fn reverse(&self) -> Self {
        self.reverse_to(self.deg())
    }

    /// `self(-x)`.
    pub fn negate_var(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }
}

impl<T: Field> Poly<T> {
    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.coeffs.len() < d.coeffs.len() {
            return (Poly::zero(), self.clone());
        }
        let inv_lead = T::one() / &d.lead();
        let mut r = self.coeffs.clone();
        let dd = d.deg();
        let mut q = vec![T::zero(); self.deg() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone() * &inv_lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].clone() - &(c.clone() * dc);
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = T::one() / &self.lead();
        self.scale(&inv)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s2 = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = T::one() / &r0.lead();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Resultant over a field by the Euclidean recurrence.
    pub fn resultant_field(&self, other: &Self) -> T {
        if self.is_zero() || other.is_zero() {
            return T::zero();
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut acc = T::one();
        loop {
            let (da, db) = (a.deg(), b.deg());
            if db == 0 {
                let mut p = T::one();
                for _ in 0..da {
                    p = p * &b.lead();
                }
                return acc * &p;
            }
            let r = a.rem(&b);
            if r.is_zero() {
                return T::zero();
            }
            if (da * db) % 2 == 1 {
                acc = -acc;
            }
            let lb = b.lead();
            for _ in 0..(da - r.deg()) {
                acc = acc * &lb;
            }
            a = b;
            b = r;
        }
    }

    pub fn squarefree_part_field(&self) -> Self {
        if self.deg() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }
}

macro_rules! poly_binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl<'a, T: Ring> $tr<&'a Poly<T>> for &'a Poly<T> {
            type Output = Poly<T>;
            fn $m(self, rhs: &'a Poly<T>) -> Poly<T> {
                $f(self, rhs)
            }
        }
        impl<T: Ring> $tr<Poly<T>> for Poly<T> {
            type Output = Poly<T>;
            fn $m(self, rhs: Poly<T>) -> Poly<T> {
                $f(&self, &rhs)
            }
        }
    };
}

fn add_impl<T: Ring>(a: &Poly<T>, b: &Poly<T>) -> Poly<T> {
    let n = a.coeffs.len().max(b.coeffs.len());
    Poly::new((0..n).map(|k| a.coeff(k) + &b.coeff(k)).collect())
}

fn sub_impl<T: Ring>(a: &Poly<T>, b: &Poly<T>) -> Poly<T> {
    let n = a.coeffs.len().max(b.coeffs.len());
    Poly::new((0..n).map(|k| a.coeff(k) - &b.coeff(k)).collect())
}

fn mul_impl<T: Ring>(a: &Poly<T>, b: &Poly<T>) -> Poly<T> {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let mut v = vec![T::zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            v[i + j] = std::mem::replace(&mut v[i + j], T::zero()) + &(x.clone() * y);
        }
    }
    Poly::new(v)
}

poly_binop!(Add, add, add_impl);
poly_binop!(Sub, sub, sub_impl);
poly_binop!(Mul, mul, mul_impl);

impl<T: Ring> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<T: Ring> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        -(self.clone())
    }
}

// ---------------------------------------------------------------------------
// Integer polynomials

pub type IntPoly = Poly<BigInt>;
pub type RatPoly = Poly<BigRational>;

impl Poly<BigInt> {
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide by the content and make the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lead().is_negative() {
            g = -g;
        }
        Poly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn is_primitive(&self) -> bool {
        !self.is_zero() && self.content().is_one()
    }

    pub fn to_rat(&self) -> RatPoly {
        self.map(|c| BigRational::from_integer(c.clone()))
    }

    /// Clear denominators: returns the primitive integer polynomial with the
    /// same roots (positive leading coefficient).
    pub fn from_rat(p: &RatPoly) -> Self {
        if p.is_zero() {
            return Poly::zero();
        }
        let l = p
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        Poly::new(p.coeffs().iter().map(|c| (c * &l).to_integer()).collect()).primitive()
    }

    /// `lc(d)^(deg a - deg d + 1) * a mod d`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        assert!(!d.is_zero(), "pseudo-remainder by zero");
        if self.coeffs.len() < d.coeffs.len() {
            return self.clone();
        }
        let dd = d.deg();
        let ld = d.lead();
        let mut r = self.coeffs.clone();
        let mut e = self.deg() - dd + 1;
        let mut top = r.len();
        while top > dd && top > 0 {
            let lr = r[top - 1].clone();
            if lr.is_zero() {
                top -= 1;
                continue;
            }
            let k = top - 1 - dd;
            for c in r.iter_mut().take(top) {
                *c *= &ld;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &lr * dc;
            }
            e -= 1;
            top -= 1;
        }
        r.truncate(dd);
        let mut out = Poly::new(r);
        if e > 0 {
            let f = num_traits::pow(ld, e);
            out = out.scale(&f);
        }
        out
    }

    /// Exact quotient over the integers, `None` when `d` does not divide.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "exact division by zero");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if self.coeffs.len() < d.coeffs.len() {
            return None;
        }
        let dd = d.deg();
        let ld = d.lead();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.deg() - dd + 1];
        for k in (0..q.len()).rev() {
            let (c, rem) = r[k + dd].div_rem(&ld);
            if !rem.is_zero() {
                return None;
            }
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Poly::new(q))
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.exact_div(self).is_some()
    }

    /// Gcd over `Z[x]`: primitive with positive leading coefficient, times
    /// the gcd of the contents.
    pub fn gcd_int(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive().scale(&other.content());
        }
        if other.is_zero() {
            return self.primitive().scale(&self.content());
        }
        let c = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive(), other.primitive());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.primitive() };
        }
        a.primitive().scale(&c)
    }

    /// Primitive squarefree part, same roots with multiplicity one.
    pub fn squarefree_part(&self) -> Result<Self> {
        if self.is_zero() {
            return invalid("squarefree part of the zero polynomial");
        }
        if self.deg() == 0 {
            return Ok(Poly::constant(BigInt::one()));
        }
        let g = self.gcd_int(&self.derivative()).primitive();
        let q = self
            .primitive()
            .exact_div(&g)
            .expect("gcd divides its argument");
        Ok(q.primitive())
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd_int(&self.derivative()).deg() == 0
    }

    /// Yun's squarefree decomposition: `(s_k, k)` with `self = c * prod s_k^k`,
    /// every `s_k` primitive, squarefree, pairwise coprime and nonconstant.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        if self.deg() == 0 {
            return out;
        }
        let f = self.to_rat();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_rem(&a0).0;
        let mut c = fp.div_rem(&a0).0;
        let mut d = &c - &b.derivative();
        let mut k = 1u32;
        loop {
            let a = b.gcd(&d);
            if a.deg() > 0 {
                out.push((Self::from_rat(&a), k));
            }
            b = b.div_rem(&a).0;
            if b.deg() == 0 {
                break;
            }
            c = d.div_rem(&a).0;
            d = &c - &b.derivative();
            k += 1;
        }
        out
    }

    /// Resultant over the integers by the subresultant algorithm.
    pub fn resultant(&self, other: &Self) -> Result<BigInt> {
        if self.is_zero() || other.is_zero() {
            return invalid("resultant with the zero polynomial");
        }
        Ok(resultant_subres(self, other))
    }

    /// Sign of `self(r)` for a rational `r`, computed exactly.
    pub fn sign_at(&self, r: &BigRational) -> i32 {
        bigint_sign(&self.eval_homogeneous(r.numer(), r.denom()))
    }

    /// `den^deg * self(num/den)`.
    pub fn eval_homogeneous(&self, num: &BigInt, den: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        // Horner in num with powers of den on lower coefficients
        let n = self.deg();
        let mut den_pows = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            den_pows.push(dpow.clone());
            dpow *= den;
        }
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * num + c * &den_pows[n - k];
        }
        acc
    }

    pub fn eval_rat(&self, r: &BigRational) -> BigRational {
        let n = self.deg();
        BigRational::new(
            self.eval_homogeneous(r.numer(), r.denom()),
            num_traits::pow(r.denom().clone(), n),
        )
    }

    /// Sign of the polynomial at `+inf` (`positive = true`) or `-inf`.
    pub fn sign_at_infinity(&self, positive: bool) -> i32 {
        let s = bigint_sign(&self.lead());
        if positive || self.deg() % 2 == 0 {
            s
        } else {
            -s
        }
    }

    /// `self(a*x)` for integer `a`.
    pub fn scale_var(&self, a: &BigInt) -> Self {
        let mut p = BigInt::one();
        Poly::new(
            self.coeffs
                .iter()
                .map(|c| {
                    let out = c * &p;
                    p *= a;
                    out
                })
                .collect(),
        )
    }

    /// Largest coefficient magnitude, as `log2`.
    pub fn log2_max_coeff(&self) -> f64 {
        self.coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(log2_bigint)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Cauchy bound: every complex root has `|z| < 1 + max |a_k / a_n|`.
    /// Returned as a power of two for cheap rational arithmetic.
    pub fn root_bound_pow2(&self) -> i64 {
        let ln = log2_bigint(&self.lead());
        let m = self.coeffs[..self.deg()]
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| log2_bigint(c) - ln)
            .fold(0.0f64, f64::max);
        (m.ceil() as i64).max(0) + 2
    }

    /// Multiplicity of `0` as a root.
    pub fn zero_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect()
    }
}

pub(crate) fn log2_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        x.abs().to_f64().unwrap_or(0.0).log2()
    } else {
        let shift = bits - 60;
        let top = (x.abs() >> shift as usize).to_f64().unwrap_or(0.0);
        top.log2() + shift as f64
    }
}

pub fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        x.abs().to_f64().unwrap_or(0.0).ln()
    } else {
        let shift = bits - 60;
        let top = (x.abs() >> shift as usize).to_f64().unwrap_or(0.0);
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
}

fn resultant_subres(a: &IntPoly, b: &IntPoly) -> BigInt {
    if a.deg() < b.deg() {
        let r = finish_subres(b.clone(), a.clone(), b.content(), a.content(), 1);
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            return -r;
        }
        return r;
    }
    finish_subres(a.clone(), b.clone(), a.content(), b.content(), 1)
}

fn finish_subres(a: IntPoly, b: IntPoly, ca: BigInt, cb: BigInt, mut sign: i32) -> BigInt {
    // here deg a >= deg b
    let t = num_traits::pow(ca.clone(), b.deg()) * num_traits::pow(cb.clone(), a.deg());
    let mut a = Poly::new(a.coeffs().iter().map(|c| c / &ca).collect::<Vec<_>>());
    let mut b = Poly::new(b.coeffs().iter().map(|c| c / &cb).collect::<Vec<_>>());
    if b.deg() == 0 {
        return BigInt::from(sign) * t * num_traits::pow(b.lead(), a.deg());
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = a.deg() - b.deg();
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            sign = -sign;
        }
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return BigInt::zero();
        }
        a = b;
        let divisor = &g * num_traits::pow(h.clone(), delta);
        b = Poly::new(r.coeffs().iter().map(|c| c / &divisor).collect::<Vec<_>>());
        g = a.lead();
        // h <- h^(1-delta) * g^delta
        h = if delta == 0 {
            h
        } else {
            num_traits::pow(g.clone(), delta) / num_traits::pow(h.clone(), delta - 1)
        };
        if b.deg() == 0 {
            let da = a.deg();
            let hh = if da == 0 {
                BigInt::one()
            } else {
                num_traits::pow(b.lead(), da) / num_traits::pow(h, da - 1)
            };
            return BigInt::from(sign) * t * hh;
        }
    }
}

// ---------------------------------------------------------------------------
// Display

/// Formatting of a coefficient inside a polynomial string.
pub trait CoeffFormat {
    /// `Some(true)` for +1, `Some(false)` for -1, `None` otherwise.
    fn unit_sign(&self) -> Option<bool>;
    /// Whether the value prints with a leading minus sign and no other
    /// top-level `+`/`-`, so it can be joined with " - ".
    fn is_negative_simple(&self) -> bool;
    fn fmt_abs(&self) -> String;
    fn fmt_plain(&self) -> String;
    /// True when the printed form can be written directly before `x`.
    fn juxtaposable(&self) -> bool;
}

impl CoeffFormat for BigInt {
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
        self.is_negative()
    }
    fn fmt_abs(&self) -> String {
        self.abs().to_string()
    }
    fn fmt_plain(&self) -> String {
        self.to_string()
    }
    fn juxtaposable(&self) -> bool {
        true
    }
}

impl CoeffFormat for BigRational {
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
        self.is_negative()
    }
    fn fmt_abs(&self) -> String {
        self.abs().to_string()
    }
    fn fmt_plain(&self) -> String {
        self.to_string()
    }
    fn juxtaposable(&self) -> bool {
        self.is_integer()
    }
}

impl<T: Ring + CoeffFormat> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let first = out.is_empty();
            let neg = c.is_negative_simple();
            if !first {
                out.push_str(if neg { "-" } else { "+" });
            } else if neg {
                out.push('-');
            }
            let body = if neg { c.fmt_abs() } else { c.fmt_plain() };
            let is_unit = c.unit_sign().is_some();
            let var = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            if k == 0 {
                out.push_str(&body);
            } else if is_unit {
                out.push_str(&var);
            } else if c.juxtaposable() {
                out.push_str(&body);
                out.push_str(&var);
            } else {
                out.push_str(&format!("({body})*{var}"));
            }
        }
        write!(f, "{out}")
    }
}
