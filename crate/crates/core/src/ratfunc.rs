//! Rational functions `P/Q` in one variable.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Error, Result};
use crate::poly::{CoeffFormat, IntPoly, Poly};
use crate::ring::{Field, Ring};

/// `num/den` with coprime parts and a monic denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFunc<T> {
    num: Poly<T>,
    den: Poly<T>,
}

impl<T: Field> RatFunc<T> {
    pub fn new(num: Poly<T>, den: Poly<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.deg() > 0 {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        } else {
            (num, den)
        };
        let l = den.lead();
        let inv = T::one() / &l;
        Ok(RatFunc { num: num.scale(&inv), den: den.scale(&inv) })
    }

    pub fn from_poly(p: Poly<T>) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn num(&self) -> &Poly<T> {
        &self.num
    }

    pub fn den(&self) -> &Poly<T> {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.num.deg().max(self.den.deg())
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.deg() == 0
    }

    /// Value at a finite point; `None` means the point maps to infinity.
    pub fn eval(&self, x: &T) -> Option<T> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / &d)
    }

    /// Value at infinity; `None` means infinity is fixed.
    pub fn eval_inf(&self) -> Option<T> {
        match self.num.deg().cmp(&self.den.deg()) {
            std::cmp::Ordering::Greater => None,
            std::cmp::Ordering::Less => Some(T::zero()),
            std::cmp::Ordering::Equal => Some(self.num.lead() / &self.den.lead()),
        }
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        let (num, den) = compose_pairs(&self.num, &self.den, &g.num, &g.den);
        if den.is_zero() {
            return invalid("composition has a zero denominator");
        }
        let out = RatFunc::new(num, den)?;
        if out.degree() == 0 && self.degree() > 0 && g.degree() > 0 {
            return invalid("degenerate composition");
        }
        Ok(out)
    }

    pub fn iterate(&self, n: usize) -> Result<Self> {
        let mut acc = RatFunc::from_poly(Poly::x());
        for _ in 0..n {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let den = &self.den * &self.den;
        RatFunc::new(num, den).expect("nonzero denominator")
    }

    pub fn map_coeffs<U: Field>(&self, f: impl Fn(&T) -> U) -> RatFunc<U> {
        RatFunc { num: self.num.map(&f), den: self.den.map(&f) }
    }
}

/// Numerator and denominator of `(P/Q) ∘ (A/B)` through the homogeneous
/// forms: `sum p_k A^k B^(d-k) / sum q_k A^k B^(d-k)` with `d = deg(P/Q)`.
/// Coprime whenever both inputs are morphisms.
pub fn compose_pairs<T: Ring>(p: &Poly<T>, q: &Poly<T>, a: &Poly<T>, b: &Poly<T>) -> (Poly<T>, Poly<T>) {
    let d = p.deg().max(q.deg());
    let mut apow = vec![Poly::one()];
    let mut bpow = vec![Poly::one()];
    for k in 1..=d {
        apow.push(&apow[k - 1] * a);
        bpow.push(&bpow[k - 1] * b);
    }
    let mut num = Poly::zero();
    let mut den = Poly::zero();
    for k in 0..=d {
        let pk = p.coeff(k);
        let qk = q.coeff(k);
        if pk.is_zero() && qk.is_zero() {
            continue;
        }
        let term = &apow[k] * &bpow[d - k];
        if !pk.is_zero() {
            num = &num + &term.scale(&pk);
        }
        if !qk.is_zero() {
            den = &den + &term.scale(&qk);
        }
    }
    (num, den)
}

/// A rational function over `Q` as a coprime pair of integer polynomials
/// with no common content and a positive leading denominator coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntRatFunc {
    pub num: IntPoly,
    pub den: IntPoly,
}

impl IntRatFunc {
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = num.gcd_int(&den);
        let (num, den) = if g.deg() > 0 {
            (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
        } else {
            (num, den)
        };
        Ok(normalize_pair(num, den))
    }

    pub fn from_rat(f: &RatFunc<BigRational>) -> Self {
        let l = f
            .num
            .coeffs()
            .iter()
            .chain(f.den.coeffs())
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = Poly::new(f.num.coeffs().iter().map(|c| (c * &l).to_integer()).collect());
        let den = Poly::new(f.den.coeffs().iter().map(|c| (c * &l).to_integer()).collect());
        normalize_pair(num, den)
    }

    pub fn to_rat(&self) -> RatFunc<BigRational> {
        RatFunc::new(self.num.to_rat(), self.den.to_rat()).expect("nonzero denominator")
    }

    pub fn degree(&self) -> usize {
        self.num.deg().max(self.den.deg())
    }

    /// Composition `self ∘ g` without gcd computations; inputs must be
    /// morphisms for the result to stay coprime.
    pub fn compose(&self, g: &Self) -> Self {
        let (num, den) = compose_pairs(&self.num, &self.den, &g.num, &g.den);
        normalize_pair(num, den)
    }

    pub fn iterate(&self, n: usize) -> Self {
        let mut acc = IntRatFunc { num: Poly::x(), den: Poly::one() };
        for _ in 0..n {
            acc = self.compose(&acc);
        }
        acc
    }

    /// Primitive numerator of `self(x) - y` for rational `y`.
    pub fn numer_minus(&self, y: &BigRational) -> IntPoly {
        let p = &self.num.scale(y.denom()) - &self.den.scale(y.numer());
        if p.is_zero() {
            p
        } else {
            p.primitive()
        }
    }

    /// Primitive numerator of `self(x) - x`.
    pub fn fixed_point_poly(&self) -> IntPoly {
        let p = &self.num - &(&self.den * &Poly::x());
        if p.is_zero() {
            p
        } else {
            p.primitive()
        }
    }
}

fn normalize_pair(num: IntPoly, den: IntPoly) -> IntRatFunc {
    let mut c = num.content().gcd(&den.content());
    if c.is_zero() {
        c = BigInt::one();
    }
    if den.lead().is_negative() {
        c = -c;
    }
    IntRatFunc {
        num: Poly::new(num.coeffs().iter().map(|x| x / &c).collect()),
        den: Poly::new(den.coeffs().iter().map(|x| x / &c).collect()),
    }
}

/// `f ∘ g` for rational functions over `Q`, as a normalized coprime pair.
pub fn compose_rational(f: &IntRatFunc, g: &IntRatFunc) -> Result<IntRatFunc> {
    let (num, den) = compose_pairs(&f.num, &f.den, &g.num, &g.den);
    if den.is_zero() {
        return invalid("composition has a zero denominator");
    }
    let out = IntRatFunc::new(num, den)?;
    if out.degree() == 0 && f.degree() > 0 && g.degree() > 0 {
        return invalid("degenerate composition");
    }
    Ok(out)
}

impl<T: Ring + CoeffFormat> fmt::Display for RatFunc<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.lead().is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Display for IntRatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.lead().is_one() {
            write!(f, "{}", self.num)
        } else if self.den.is_constant() {
            write!(f, "({})/{}", self.num, self.den)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
