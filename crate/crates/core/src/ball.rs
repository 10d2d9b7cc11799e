//! Complex balls: a multiprecision center with an `f64` radius rounded
//! upward after every operation.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::bigfloat::BigFloat;
use crate::quad::QuadElem;

/// Inflate a nonnegative `f64` bound past any rounding in its computation.
pub(crate) fn up(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (1.0 + 8.0 * f64::EPSILON) + f64::MIN_POSITIVE
    }
}

/// Upper bound of `|x|` as an `f64`.
fn abs_up(x: &BigFloat) -> f64 {
    up(x.to_f64().abs())
}

/// Lower bound of `|x|` as an `f64`.
fn abs_down(x: &BigFloat) -> f64 {
    (x.to_f64().abs() * (1.0 - 8.0 * f64::EPSILON)).max(0.0)
}

#[derive(Clone, Debug)]
pub struct ComplexBall {
    pub re: BigFloat,
    pub im: BigFloat,
    /// Radius, an upper bound for the distance from the center to the
    /// enclosed value.
    pub rad: f64,
}

impl ComplexBall {
    pub fn new(re: BigFloat, im: BigFloat, rad: f64) -> Self {
        ComplexBall { re, im, rad }
    }

    pub fn exact(re: BigFloat, im: BigFloat) -> Self {
        ComplexBall { re, im, rad: 0.0 }
    }

    pub fn zero(prec: u32) -> Self {
        ComplexBall::exact(BigFloat::zero_with(prec), BigFloat::zero_with(prec))
    }

    pub fn from_i64(x: i64, prec: u32) -> Self {
        ComplexBall::exact(BigFloat::from_i64(x, prec), BigFloat::zero_with(prec))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        ComplexBall::exact(BigFloat::from_f64(re, prec), BigFloat::from_f64(im, prec))
    }

    pub fn from_rational(x: &BigRational, prec: u32) -> Self {
        let c = BigFloat::from_ratio(x, prec);
        let err = rounding_err(&c, prec);
        ComplexBall::new(c, BigFloat::zero_with(prec), err)
    }

    /// Enclosure of the embedding `a + b√D` with `√D > 0`, or `√D = i√|D|`
    /// for `D < 0`.
    pub fn from_quad(e: &QuadElem, prec: u32) -> Self {
        let a = ComplexBall::from_rational(e.a(), prec);
        if e.b().is_zero() {
            return a;
        }
        let b = ComplexBall::from_rational(e.b(), prec);
        a.add(&b.mul(&ComplexBall::sqrt_int(e.d(), prec)))
    }

    /// Enclosure of `√d` (principal branch, `i√|d|` for negative `d`).
    pub fn sqrt_int(d: i64, prec: u32) -> Self {
        let s = BigFloat::from_i64(d.abs(), prec).sqrt();
        let err = rounding_err(&s, prec) * 2.0;
        if d >= 0 {
            ComplexBall::new(s, BigFloat::zero_with(prec), err)
        } else {
            ComplexBall::new(BigFloat::zero_with(prec), s, err)
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        ComplexBall::new(self.re.with_prec(prec), self.im.with_prec(prec), self.rad)
    }

    pub fn mag_up(&self) -> f64 {
        up(abs_up(&self.re).hypot(abs_up(&self.im)) + self.rad)
    }

    pub fn mag_down(&self) -> f64 {
        (abs_down(&self.re).hypot(abs_down(&self.im)) * (1.0 - 4.0 * f64::EPSILON) - up(self.rad)).max(0.0)
    }

    /// `|center|` as an `f64`.
    pub fn center_abs(&self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }

    pub fn contains_zero(&self) -> bool {
        self.mag_down() <= 0.0
    }

    /// Whether the imaginary part is certainly nonzero.
    pub fn im_excludes_zero(&self) -> bool {
        abs_down(&self.im) > up(self.rad)
    }

    pub fn re_f64(&self) -> f64 {
        self.re.to_f64()
    }

    pub fn im_f64(&self) -> f64 {
        self.im.to_f64()
    }

    pub fn neg(&self) -> Self {
        ComplexBall::new(-self.re.clone(), -self.im.clone(), self.rad)
    }

    pub fn conj(&self) -> Self {
        ComplexBall::new(self.re.clone(), -self.im.clone(), self.rad)
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.prec().max(o.prec());
        let re = &self.re + &o.re;
        let im = &self.im + &o.im;
        let err = (self.center_abs() + o.center_abs()) * 2.0 * ulp(prec);
        ComplexBall::new(re, im, up(self.rad + o.rad + up(err)))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let prec = self.prec().max(o.prec());
        let re = &(&self.re * &o.re) - &(&self.im * &o.im);
        let im = &(&self.re * &o.im) + &(&self.im * &o.re);
        let (ma, mb) = (up(self.center_abs()), up(o.center_abs()));
        let err = 8.0 * ulp(prec) * ma * mb;
        let rad = ma * o.rad + mb * self.rad + self.rad * o.rad;
        ComplexBall::new(re, im, up(up(rad) + up(err)))
    }

    pub fn sqr(&self) -> Self {
        self.mul(self)
    }

    /// Multiply by a real integer scalar.
    pub fn scale_i64(&self, k: i64) -> Self {
        self.mul(&ComplexBall::from_i64(k, self.prec()))
    }

    /// `1/self`, `None` when the ball contains zero.
    pub fn inv(&self) -> Option<Self> {
        let lo = self.mag_down();
        if lo <= 0.0 {
            return None;
        }
        let prec = self.prec();
        let n2 = &(&self.re * &self.re) + &(&self.im * &self.im);
        let re = self.re.div_prec(&n2, prec);
        let im = (-self.im.clone()).div_prec(&n2, prec);
        let c = up(self.center_abs());
        let err = 8.0 * ulp(prec) / (c * (1.0 - 8.0 * ulp(prec))).max(f64::MIN_POSITIVE);
        // |1/z - 1/c| <= r / (|c| (|c| - r))
        let rad = self.rad / (lo * (lo + self.rad).max(lo));
        let rad = if self.rad == 0.0 { 0.0 } else { up(rad) };
        Some(ComplexBall::new(re, im, up(rad + up(err))))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = ComplexBall::from_i64(1, self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    /// Bounds `[lo, hi]` on `ln |z|`; `lo = -inf` if the ball contains zero.
    pub fn ln_abs_bounds(&self) -> (f64, f64) {
        let hi = self.mag_up();
        let lo = self.mag_down();
        let margin = 1e-14;
        let lnlo = if lo > 0.0 { lo.ln() - margin } else { f64::NEG_INFINITY };
        (lnlo, hi.ln() + margin)
    }

    /// Whether two balls certainly do not intersect.
    pub fn disjoint(&self, o: &Self) -> bool {
        let d = self.sub(o);
        d.mag_down() > 0.0
    }
}

/// Relative unit roundoff at `prec` bits.
pub(crate) fn ulp(prec: u32) -> f64 {
    2f64.powi(-(prec.min(1000) as i32) + 1)
}

fn rounding_err(x: &BigFloat, prec: u32) -> f64 {
    up(x.to_f64().abs() * ulp(prec))
}

impl fmt::Display for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im = self.im.to_f64();
        if im >= 0.0 {
            write!(f, "{:.12}+{:.12}i ± {:.2e}", self.re.to_f64(), im, self.rad)
        } else {
            write!(f, "{:.12}-{:.12}i ± {:.2e}", self.re.to_f64(), -im, self.rad)
        }
    }
}

impl Serialize for ComplexBall {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ComplexBall", 3)?;
        st.serialize_field("re", &format!("{:.17e}", self.re.to_f64()))?;
        st.serialize_field("im", &format!("{:.17e}", self.im.to_f64()))?;
        st.serialize_field("rad", &format!("{:.6e}", self.rad))?;
        st.end()
    }
}

/// Sign-aware comparison of a ball's real part with zero.
pub fn re_sign(b: &ComplexBall) -> Option<i32> {
    let r = b.re.to_f64();
    if r.abs() > up(b.rad) {
        Some(if r > 0.0 { 1 } else { -1 })
    } else {
        None
    }
}
