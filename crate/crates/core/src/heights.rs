//! Logarithmic Weil heights with certified error radii.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::algebraic::{quad_min_poly, AlgebraicNumber};
use crate::bigfloat::BigFloat;
use crate::error::{invalid, Error, Result};
use crate::poly::{ln_bigint, IntPoly};
use crate::quad::QuadElem;
use crate::roots::approx_roots;
use crate::sturm::{Bound, SturmChain};

/// Tag carried by heights whose minimal polynomial was not proven
/// irreducible.
pub const POSSIBLY_REDUCIBLE: &str = "possibly reducible";

/// A real number known to lie in `[value - err, value + err]`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeightEstimate {
    pub value: f64,
    pub err: f64,
    /// The value is the logarithm of a rational number and `err` is zero.
    pub exact: bool,
    pub note: Option<String>,
}

impl HeightEstimate {
    pub fn exact(value: f64) -> Self {
        HeightEstimate { value, err: 0.0, exact: true, note: None }
    }

    pub fn approx(value: f64, err: f64) -> Self {
        HeightEstimate { value, err, exact: false, note: None }
    }

    pub fn zero() -> Self {
        HeightEstimate::exact(0.0)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn lo(&self) -> f64 {
        self.value - self.err
    }

    pub fn hi(&self) -> f64 {
        self.value + self.err
    }

    pub fn contains(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.err
    }

    /// Both estimates agree within their combined radii plus `slack`.
    pub fn agrees(&self, o: &Self, slack: f64) -> bool {
        (self.value - o.value).abs() <= self.err + o.err + slack
    }

    /// Divide by a positive factor, e.g. `d^n`.
    pub fn div(&self, k: f64) -> Self {
        HeightEstimate { value: self.value / k, err: self.err / k, exact: self.exact && k == 1.0, note: self.note.clone() }
    }

    /// Interval hull of `[lo, hi]`.
    pub fn from_bounds(lo: f64, hi: f64) -> Self {
        let value = 0.5 * (lo + hi);
        let err = crate::ball::up((hi - lo) * 0.5).max((value - lo).abs()).max((hi - value).abs());
        HeightEstimate::approx(value, err)
    }
}

impl fmt::Display for HeightEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact {
            write!(f, "{:.17e}", self.value)
        } else {
            write!(f, "{:.17e} ± {:.3e}", self.value, self.err)
        }
    }
}

impl Serialize for HeightEstimate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("HeightEstimate", 4)?;
        st.serialize_field("value", &format!("{:.17e}", self.value))?;
        st.serialize_field("err", &format!("{:.17e}", self.err))?;
        st.serialize_field("exact", &self.exact)?;
        if let Some(n) = &self.note {
            st.serialize_field("note", n)?;
        }
        st.end()
    }
}

/// Rounding radius for an `f64` logarithm of magnitude `v`.
pub(crate) fn ln_err(v: f64) -> f64 {
    8.0 * f64::EPSILON * (1.0 + v.abs())
}

/// `h(r) = log max(|p|, q)`.
pub fn height_rational(r: &BigRational) -> HeightEstimate {
    if r.is_zero() {
        return HeightEstimate::zero();
    }
    let m = r.numer().abs().max(r.denom().clone());
    HeightEstimate::exact(ln_bigint(&m))
}

/// `log M(p)` for a nonzero integer polynomial, within `eps`.
pub fn mahler_measure(p: &IntPoly, eps: f64) -> Result<HeightEstimate> {
    if p.is_zero() {
        return invalid("Mahler measure of the zero polynomial");
    }
    if !(eps > 0.0) {
        return invalid("eps must be positive");
    }
    let lead = ln_bigint(&p.lead());
    match p.deg() {
        0 => return Ok(HeightEstimate::exact(lead)),
        1 => {
            let m = p.coeff(0).abs().max(p.coeff(1).abs());
            return Ok(HeightEstimate::exact(ln_bigint(&m)));
        }
        _ => {}
    }
    let n = p.deg() as f64;
    let mut reps = eps / (4.0 * n);
    for _ in 0..8 {
        let roots = approx_roots(p, reps)?;
        let (mut lo, mut hi) = (0.0, 0.0);
        for r in &roots {
            let (a, b) = r.ball.ln_abs_bounds();
            let m = r.multiplicity as f64;
            lo += m * a.max(0.0);
            hi += m * b.max(0.0);
        }
        let mut est = HeightEstimate::from_bounds(lead + lo, lead + hi);
        est.err += ln_err(est.value) * (n + 1.0);
        if est.err <= eps {
            return Ok(est);
        }
        reps /= 64.0;
    }
    Err(Error::PrecisionExhausted { bits: crate::roots::DEFAULT_MAX_BITS, context: "Mahler measure".into() })
}

/// `h(α) = log M(minpoly) / deg`.
pub fn height_algebraic(a: &AlgebraicNumber, eps: f64) -> Result<HeightEstimate> {
    if let Some(r) = a.as_rational() {
        return Ok(height_rational(&r));
    }
    let m = a.minimal_polynomial()?;
    let d = m.deg() as f64;
    let mut h = mahler_measure(&m, eps * d)?.div(d);
    if !a.min_poly_certified()? {
        h = h.with_note(POSSIBLY_REDUCIBLE);
    }
    Ok(h)
}

/// Height of an element of `Q(√D)`.
pub fn height_quad(e: &QuadElem) -> HeightEstimate {
    if let Some(r) = e.to_rational() {
        return height_rational(&r);
    }
    let m = quad_min_poly(e);
    let (a0, a1, a2) = (m.coeff(0), m.coeff(1), m.coeff(2));
    if e.d() < 0 {
        // Complex conjugate roots with |z|^2 = a0/a2.
        return HeightEstimate::exact(0.5 * ln_bigint(&a0.clone().max(a2)));
    }
    let chain = SturmChain::new(&m).expect("minimal polynomial is squarefree");
    let one = BigRational::one();
    let outside = chain.count_half_open(&Bound::At(one.clone()), &Bound::PosInf)
        + chain.count_half_open(&Bound::NegInf, &Bound::At(-one));
    // Roots at exactly ±1 contribute a factor 1 either way.
    match outside {
        0 => HeightEstimate::exact(0.5 * ln_bigint(&a2)),
        2 => HeightEstimate::exact(0.5 * ln_bigint(&a0.abs())),
        _ => {
            let prec = 256;
            let disc = &a1 * &a1 - BigInt::from(4) * &a0 * &a2;
            let s = BigFloat::from_int(&disc, prec).sqrt();
            let b = BigFloat::from_int(&a1, prec).abs();
            // The root of larger modulus is (|a1| + √disc) / (2|a2|); times a2.
            let big = (&b + &s).ldexp(-1);
            let v = 0.5 * big.ln_abs();
            HeightEstimate::approx(v, ln_err(v) + 1e-16)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use crate::quad::quad;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rationals() {
        assert_eq!(height_rational(&r(0, 1)).value, 0.0);
        assert!((height_rational(&r(1, 2)).value - 2f64.ln()).abs() < 1e-16);
        assert!((height_rational(&r(-7, 3)).value - 7f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn mahler() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let h = mahler_measure(&Poly::from_i64s(&[-1, -1, 1]), 1e-12).unwrap();
        assert!(h.contains(phi.ln()) && h.err <= 1e-12);
        let h = mahler_measure(&Poly::from_i64s(&[2, -1, 2]), 1e-10).unwrap();
        assert!(h.contains(2f64.ln()));
        let h = mahler_measure(&Poly::from_i64s(&[-2, 1]), 1e-10).unwrap();
        assert!(h.exact && (h.value - 2f64.ln()).abs() < 1e-16);
    }

    #[test]
    fn quadratic_heights() {
        let h = height_quad(&quad(5, (0, 1), (1, 1)));
        assert!(h.exact && (h.value - 0.5 * 5f64.ln()).abs() < 1e-15);
        let h = height_quad(&quad(5, (3, 2), (-1, 2)));
        assert!((h.value - 0.4812118250596034).abs() < 1e-15);
        assert!(h.contains(0.4812118250596034));
        let h = height_quad(&quad(-1, (0, 1), (1, 1)));
        assert_eq!(h.value, 0.0);
        let h = height_quad(&quad(2, (1, 3), (1, 3)));
        let m = mahler_measure(&quad_min_poly(&quad(2, (1, 3), (1, 3))), 1e-12).unwrap();
        assert!(h.agrees(&m.div(2.0), 1e-14));
    }

    #[test]
    fn algebraic_heights() {
        use crate::algebraic::Selector;
        let a = AlgebraicNumber::from_poly_root(&Poly::from_i64s(&[-5, 0, 2]), Selector::Interval(r(1, 1), r(2, 1)))
            .unwrap();
        let h = height_algebraic(&a, 1e-10).unwrap();
        assert!(h.contains(0.5 * 5f64.ln()));
        let w = AlgebraicNumber::from_quad(&quad(-3, (-1, 2), (1, 2))).unwrap();
        assert!(height_algebraic(&w, 1e-10).unwrap().contains(0.0));
    }

    #[test]
    fn serialization() {
        let s = serde_json::to_string(&HeightEstimate::exact(2f64.ln())).unwrap();
        assert_eq!(s, r#"{"value":"6.93147180559945286e-1","err":"0.00000000000000000e0","exact":true}"#);
    }
}
