//! Salem numbers, the trace map `α ↦ α + 1/α`, and points of `Q(√D)`
//! with prescribed real embeddings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::normalize_sign;
use crate::algebraic::{AlgebraicNumber, Selector};
use crate::dynamics::{canonical_height, chebyshev, Point, RationalMap};
use crate::error::{invalid, Result};
use crate::factor::is_irreducible;
use crate::heights::{height_algebraic, mahler_measure, HeightEstimate};
use crate::poly::{IntPoly, Poly};
use crate::quad::{is_valid_discriminant, QuadElem};
use crate::ring::OrderedField;
use crate::sturm::{isolate_real_roots, Bound, SturmChain};

fn is_reciprocal(p: &IntPoly) -> bool {
    let c = p.coeffs();
    c.iter().eq(c.iter().rev())
}

/// For a reciprocal `p` of degree `2m`, the `q` of degree `m` with
/// `p(x) = x^m q(x + 1/x)`.
pub fn trace_polynomial(p: &IntPoly) -> Result<IntPoly> {
    if p.deg() % 2 != 0 || p.deg() == 0 || !is_reciprocal(p) {
        return invalid("the trace polynomial needs a reciprocal polynomial of even degree");
    }
    let m = p.deg() / 2;
    let mut q = Poly::constant(p.coeff(m));
    for j in 1..=m {
        q = &q + &chebyshev(j)?.scale(&p.coeff(m - j));
    }
    Ok(q)
}

#[derive(Clone, Debug, Serialize)]
pub struct SalemReport {
    pub polynomial: String,
    pub is_salem: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root: Option<AlgebraicNumber>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root_approx: Option<f64>,
    /// `h(α) = log α / deg`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub height: Option<HeightEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_polynomial: Option<String>,
}

/// Decides whether the roots of `p` are a Salem number and its conjugates.
///
/// An irreducible polynomial with a root on the unit circle other than
/// `±1` is reciprocal, and then its roots `x` map to `y = x + 1/x`, which
/// is real in `(-2, 2)` exactly when `x` is on the circle and exceeds 2
/// exactly when `x > 1` is real. Both conditions are Sturm counts.
pub fn salem_check(p: &IntPoly) -> Result<SalemReport> {
    if p.is_zero() || p.deg() == 0 {
        return invalid("Salem check needs a polynomial of positive degree");
    }
    let p = normalize_sign(p.primitive());
    let polynomial = p.to_string();
    let reject = |why: &str| {
        Ok(SalemReport {
            polynomial: polynomial.clone(),
            is_salem: false,
            reason: Some(why.to_string()),
            root: None,
            root_approx: None,
            height: None,
            trace_polynomial: None,
        })
    };
    if !p.lead().is_one() {
        return reject("not monic, so its roots are not algebraic integers");
    }
    match is_irreducible(&p)? {
        Some(true) => {}
        Some(false) => return reject("reducible"),
        None => return reject("irreducibility could not be certified"),
    }
    if p.deg() < 4 || p.deg() % 2 != 0 || !is_reciprocal(&p) {
        return reject("not reciprocal of even degree at least 4, so no conjugate lies on the unit circle");
    }
    let q = trace_polynomial(&p)?;
    let chain = SturmChain::new(&q)?;
    let two = BigRational::from_integer(BigInt::from(2));
    let above = chain.count_half_open(&Bound::At(two.clone()), &Bound::PosInf);
    let inside = chain.count_half_open(&Bound::At(-two.clone()), &Bound::At(two));
    if above != 1 {
        return reject("the number of real conjugates greater than 1 is not exactly one");
    }
    if inside != q.deg() - 1 {
        return reject("some conjugate lies off the unit circle and is not the Salem root or its inverse");
    }
    let (lo, hi) = isolate_real_roots(&p)?.pop().expect("p has a root greater than 1");
    let root = AlgebraicNumber::from_poly_root(&p, Selector::Interval(lo, hi))?;
    let root_approx = root.approx().re;
    let d = p.deg() as f64;
    let height = mahler_measure(&p, 1e-12 * d)?.div(d);
    Ok(SalemReport {
        polynomial,
        is_salem: true,
        reason: None,
        root: Some(root),
        root_approx: Some(root_approx),
        height: Some(height),
        trace_polynomial: Some(q.to_string()),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SalemBridge {
    pub alpha: AlgebraicNumber,
    /// `α + 1/α`.
    pub beta: AlgebraicNumber,
    pub beta_degree: usize,
    pub totally_real: bool,
    /// `ĥ_{T_2}(β)`.
    pub canonical_height: HeightEstimate,
    /// `2 h(α)`.
    pub twice_height: HeightEstimate,
    pub difference: f64,
    pub consistent: bool,
}

/// Maps a Salem number `α` to the totally real `β = α + 1/α` and checks
/// `ĥ_{T_2}(β) = 2 h(α)`.
pub fn salem_bridge(alpha: &AlgebraicNumber, eps: f64) -> Result<SalemBridge> {
    let m = alpha.minimal_polynomial()?;
    let report = salem_check(&m)?;
    if !report.is_salem {
        return invalid(format!("{alpha} is not a Salem number: {}", report.reason.unwrap_or_default()));
    }
    let root = report.root.expect("Salem report carries its root");
    if !root.eq_exact(alpha)? {
        return invalid(format!("{alpha} is a conjugate of a Salem number, not the Salem number itself"));
    }
    let q = trace_polynomial(&normalize_sign(m.primitive()))?;
    let (lo, hi) = isolate_real_roots(&q)?.pop().expect("trace polynomial has a root above 2");
    let beta = AlgebraicNumber::from_poly_root(&q, Selector::Interval(lo, hi))?;
    let beta_degree = beta.degree()?;
    let totally_real = beta.is_totally_real()?;
    let t2 = RationalMap::polynomial(&chebyshev(2)?)?;
    let canonical = canonical_height(&t2, &Point::algebraic(beta.clone()), eps)?;
    let h = height_algebraic(alpha, eps / 2.0)?;
    let twice = HeightEstimate { value: 2.0 * h.value, err: 2.0 * h.err, exact: false, note: None };
    let difference = (canonical.value - twice.value).abs();
    let consistent = difference <= canonical.err + twice.err + 1e-12;
    Ok(SalemBridge {
        alpha: alpha.clone(),
        beta,
        beta_degree,
        totally_real,
        canonical_height: canonical,
        twice_height: twice,
        difference,
        consistent,
    })
}

const MAX_DENOMINATOR: u64 = 1 << 24;

/// Some `c = a + b√D` with `c ∈ I1` and its conjugate `a - b√D ∈ I2`, for
/// open intervals `I1`, `I2` and `D > 1` squarefree. Aims both embeddings
/// at the midpoints, then takes the smallest denominator for `b` that
/// keeps both inside.
pub fn approx_common_point(
    d: i64,
    i1: (&BigRational, &BigRational),
    i2: (&BigRational, &BigRational),
) -> Result<QuadElem> {
    if d <= 1 || !is_valid_discriminant(d) {
        return invalid(format!("{d} is not a positive squarefree integer greater than 1"));
    }
    if i1.0 >= i1.1 || i2.0 >= i2.1 {
        return invalid("intervals must be nonempty");
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let t1 = (i1.0 + i1.1) / &two;
    let t2 = (i2.0 + i2.1) / &two;
    let a = (&t1 + &t2) / &two;
    let s = (&t1 - &t2) / &two;
    let inside = |c: &QuadElem, iv: (&BigRational, &BigRational)| {
        let lo = QuadElem::rational(iv.0.clone()).in_field(d);
        let hi = QuadElem::rational(iv.1.clone()).in_field(d);
        (c.clone() - &lo).sign() > 0 && (hi - c).sign() > 0
    };
    let target = s.to_f64().unwrap_or(0.0) / (d as f64).sqrt();
    let mut den = 1u64;
    while den <= MAX_DENOMINATOR {
        let b = BigRational::new(BigInt::from((target * den as f64).round() as i64), BigInt::from(den));
        let c = QuadElem::new(d, a.clone(), b)?;
        if inside(&c, i1) && inside(&c.conj(), i2) {
            return Ok(c);
        }
        den += 1;
    }
    // Widths below 2^-24 relative to the midpoint gap: use a binary expansion.
    let mut k = 24;
    loop {
        let den = BigInt::one() << k;
        let num = exact_round(&s, d, &den);
        let c = QuadElem::new(d, a.clone(), BigRational::new(num, den))?;
        if inside(&c, i1) && inside(&c.conj(), i2) {
            return Ok(c);
        }
        k += 8;
    }
}

/// Integer nearest to `den · s / √D`, from an exact integer square root.
fn exact_round(s: &BigRational, d: i64, den: &BigInt) -> BigInt {
    // (den s)^2 / D scaled by 4^k for a fixed point estimate.
    let scale = BigInt::one() << 64;
    let x = s * BigRational::from_integer(den.clone());
    let sq = &x * &x / BigRational::from_integer(BigInt::from(d)) * BigRational::from_integer(&scale * &scale);
    let r: BigInt = num_integer::Roots::sqrt(&sq.to_integer()) / &scale;
    if s.numer().sign() == num_bigint::Sign::Minus {
        -r
    } else {
        r
    }
}
