//! Exact algebraic numbers: a squarefree defining polynomial plus a
//! selector that isolates one of its roots.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ball::ComplexBall;
use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};
use crate::factor;
use crate::poly::{IntPoly, Poly};
use crate::quad::QuadElem;
use crate::ratfunc::IntRatFunc;
use crate::roots::{approx_roots, RootEnclosure};
use crate::sturm::{isolate_real_roots, refine_with_chain, Bound, SturmChain};

/// Closed rectangle `[re_lo, re_hi] x [im_lo, im_hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rect {
    pub re_lo: BigRational,
    pub re_hi: BigRational,
    pub im_lo: BigRational,
    pub im_hi: BigRational,
}

impl Rect {
    fn ball_inside(&self, b: &ComplexBall) -> bool {
        let (re, im, r) = ball_parts(b);
        &re - &r > self.re_lo && &re + &r < self.re_hi && &im - &r > self.im_lo && &im + &r < self.im_hi
    }

    fn ball_disjoint(&self, b: &ComplexBall) -> bool {
        let (re, im, r) = ball_parts(b);
        &re + &r < self.re_lo || &re - &r > self.re_hi || &im + &r < self.im_lo || &im - &r > self.im_hi
    }

    fn from_ball(b: &ComplexBall) -> Rect {
        let (re, im, r) = ball_parts(b);
        Rect { re_lo: &re - &r, re_hi: &re + &r, im_lo: &im - &r, im_hi: &im + &r }
    }
}

fn ball_parts(b: &ComplexBall) -> (BigRational, BigRational, BigRational) {
    let r = BigRational::from_float(b.rad).unwrap_or_else(BigRational::zero);
    (b.re.to_ratio(), b.im.to_ratio(), r)
}

/// Which root of the defining polynomial is meant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selector {
    /// The unique root in `(lo, hi]`; `lo == hi` marks a rational root.
    Interval(BigRational, BigRational),
    /// The unique root in a closed rectangle; always a non-real root.
    Rect(Rect),
}

#[derive(Clone, Debug)]
struct MinPoly {
    poly: IntPoly,
    certified: bool,
}

#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    poly: IntPoly,
    sel: Selector,
    min: OnceLock<MinPoly>,
}

const EPS_START: f64 = 1e-12;
const REFINE_ROUNDS: usize = 10;

fn prec_for(eps: f64) -> u32 {
    ((-eps.log2()).max(0.0) as u32 + 64).max(128)
}

fn normalized(p: &IntPoly) -> Result<IntPoly> {
    let s = p.squarefree_part()?;
    Ok(if s.lead().is_negative() { -s } else { s })
}

impl AlgebraicNumber {
    /// The root of `p` picked out by `sel`. The polynomial is replaced by
    /// its squarefree part; the selector must isolate exactly one root.
    pub fn from_poly_root(p: &IntPoly, sel: Selector) -> Result<Self> {
        if p.is_zero() || p.deg() == 0 {
            return Err(Error::InvalidSelector("defining polynomial must have positive degree".into()));
        }
        let poly = normalized(p)?;
        match sel {
            Selector::Interval(lo, hi) => {
                if lo == hi {
                    if poly.sign_at(&lo) != 0 {
                        return Err(Error::InvalidSelector(format!("{lo} is not a root")));
                    }
                    return Ok(AlgebraicNumber::from_rational(&lo));
                }
                if lo > hi {
                    return Err(Error::InvalidSelector("empty interval".into()));
                }
                let chain = SturmChain::new(&poly)?;
                let n = chain.count_half_open(&Bound::At(lo.clone()), &Bound::At(hi.clone()));
                if n != 1 {
                    return Err(Error::InvalidSelector(format!("interval holds {n} roots")));
                }
                if poly.deg() == 1 {
                    return Ok(AlgebraicNumber::from_rational(&BigRational::new(-poly.coeff(0), poly.coeff(1))));
                }
                // The isolated root is zero; keep it in exact form.
                if poly.coeff(0).is_zero() && lo.is_negative() && !hi.is_negative() {
                    return Ok(AlgebraicNumber::from_int(0));
                }
                Ok(AlgebraicNumber::raw(poly, Selector::Interval(lo, hi)))
            }
            Selector::Rect(rect) => {
                if rect.re_lo > rect.re_hi || rect.im_lo > rect.im_hi {
                    return Err(Error::InvalidSelector("empty rectangle".into()));
                }
                let mut eps = EPS_START;
                for _ in 0..REFINE_ROUNDS {
                    let roots = approx_roots(&poly, eps)?;
                    let mut inside = Vec::new();
                    let mut undecided = false;
                    for r in &roots {
                        if rect.ball_inside(&r.ball) {
                            inside.push(r.clone());
                        } else if !rect.ball_disjoint(&r.ball) {
                            undecided = true;
                        }
                    }
                    if !undecided {
                        if inside.len() != 1 {
                            return Err(Error::InvalidSelector(format!("rectangle holds {} roots", inside.len())));
                        }
                        let root = &inside[0];
                        if root.real {
                            return AlgebraicNumber::from_real_ball(&poly, &root.ball);
                        }
                        return Ok(AlgebraicNumber::raw(poly, Selector::Rect(rect)));
                    }
                    eps /= 1e4;
                }
                Err(Error::InvalidSelector("rectangle boundary passes too close to a root".into()))
            }
        }
    }

    fn raw(poly: IntPoly, sel: Selector) -> Self {
        AlgebraicNumber { poly, sel, min: OnceLock::new() }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        let poly = Poly::new(vec![-r.numer().clone(), r.denom().clone()]);
        let min = OnceLock::new();
        let _ = min.set(MinPoly { poly: poly.clone(), certified: true });
        AlgebraicNumber { poly, sel: Selector::Interval(r.clone(), r.clone()), min }
    }

    pub fn from_int(n: i64) -> Self {
        AlgebraicNumber::from_rational(&BigRational::from_integer(n.into()))
    }

    /// Embedding of a quadratic field element (`√D > 0`, or `i√|D|`).
    pub fn from_quad(e: &QuadElem) -> Result<Self> {
        if let Some(r) = e.to_rational() {
            return Ok(AlgebraicNumber::from_rational(&r));
        }
        let p = quad_min_poly(e);
        let ball = ComplexBall::from_quad(e, 256);
        AlgebraicNumber::from_ball_root(&p, |_| Ok(ball.clone()))
    }

    /// Real root of `p` whose certified enclosure is `ball`.
    fn from_real_ball(poly: &IntPoly, ball: &ComplexBall) -> Result<Self> {
        let c = ball.re.to_ratio();
        let r = BigRational::from_float(ball.rad).unwrap_or_else(BigRational::zero);
        let chain = SturmChain::new(poly)?;
        let mut w = r.clone() + BigRational::new(1.into(), BigInt::one() << 200usize);
        for _ in 0..8 {
            let (lo, hi) = (&c - &w, &c + &w);
            if chain.count_half_open(&Bound::At(lo.clone()), &Bound::At(hi.clone())) == 1 {
                return AlgebraicNumber::from_poly_root(poly, Selector::Interval(lo, hi));
            }
            w = w / BigRational::from_integer(2.into());
        }
        for (lo, hi) in isolate_real_roots(poly)? {
            if lo <= c && c <= hi {
                return AlgebraicNumber::from_poly_root(poly, Selector::Interval(lo, hi));
            }
        }
        Err(Error::InvalidSelector("real root enclosure could not be converted".into()))
    }

    /// The root of `p` inside the enclosure returned by `enclose(eps)`,
    /// refining until exactly one root of `p` meets it.
    pub fn from_ball_root(p: &IntPoly, enclose: impl Fn(f64) -> Result<ComplexBall>) -> Result<Self> {
        let poly = normalized(p)?;
        if poly.deg() == 1 {
            return Ok(AlgebraicNumber::from_rational(&BigRational::new(-poly.coeff(0), poly.coeff(1))));
        }
        let mut eps = EPS_START;
        for _ in 0..REFINE_ROUNDS {
            let target = enclose(eps)?;
            let roots = approx_roots(&poly, eps)?;
            let hits: Vec<&RootEnclosure> = roots.iter().filter(|r| !r.ball.disjoint(&target)).collect();
            if hits.len() == 1 {
                let root = hits[0];
                if root.real {
                    return AlgebraicNumber::from_real_ball(&poly, &root.ball);
                }
                let rect = Rect::from_ball(&root.ball);
                if let Ok(a) = AlgebraicNumber::from_poly_root(&poly, Selector::Rect(rect)) {
                    return Ok(a);
                }
            }
            if hits.is_empty() {
                return Err(Error::InvalidArgument("enclosure meets no root of the polynomial".into()));
            }
            eps /= 1e6;
        }
        Err(Error::PrecisionExhausted { bits: prec_for(eps), context: "separating conjugate roots".into() })
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn selector(&self) -> &Selector {
        &self.sel
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match &self.sel {
            Selector::Interval(lo, hi) if lo == hi => Some(lo.clone()),
            _ => {
                let m = self.minimal_polynomial().ok()?;
                (m.deg() == 1).then(|| BigRational::new(-m.coeff(0), m.coeff(1)))
            }
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self.sel, Selector::Interval(..))
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.sel, Selector::Interval(lo, hi) if lo == hi && lo.is_zero())
    }

    /// Ball of radius at most `eps` around the number.
    pub fn enclosure(&self, eps: f64) -> Result<ComplexBall> {
        let prec = prec_for(eps);
        match &self.sel {
            Selector::Interval(lo, hi) => {
                if lo == hi {
                    return Ok(ComplexBall::from_rational(lo, prec));
                }
                let width = BigRational::from_float(eps).unwrap_or_else(BigRational::one);
                let chain = SturmChain::new(&self.poly)?;
                let (a, b) = refine_with_chain(&chain, &(lo.clone(), hi.clone()), &width);
                let mid = (&a + &b) / BigRational::from_integer(2.into());
                let half = ((&b - &a) / BigRational::from_integer(2.into())).to_f64().unwrap_or(eps);
                let c = ComplexBall::from_rational(&mid, prec);
                Ok(ComplexBall::new(c.re, c.im, crate::ball::up(c.rad + half)))
            }
            Selector::Rect(rect) => {
                let mut e = eps;
                for _ in 0..REFINE_ROUNDS {
                    let roots = approx_roots(&self.poly, e)?;
                    let inside: Vec<_> = roots.iter().filter(|r| !rect.ball_disjoint(&r.ball)).collect();
                    if inside.len() == 1 {
                        return Ok(inside[0].ball.clone());
                    }
                    e /= 1e4;
                }
                Err(Error::PrecisionExhausted { bits: prec_for(e), context: "locating root in rectangle".into() })
            }
        }
    }

    pub fn approx(&self) -> Complex64 {
        match self.enclosure(1e-15) {
            Ok(b) => Complex64::new(b.re_f64(), b.im_f64()),
            Err(_) => Complex64::new(f64::NAN, f64::NAN),
        }
    }

    /// Whether the number is a root of `q`.
    pub fn is_root_of(&self, q: &IntPoly) -> Result<bool> {
        if q.is_zero() {
            return Ok(true);
        }
        let g = self.poly.gcd_int(q);
        if g.deg() == 0 {
            return Ok(false);
        }
        self.selects_root_of(&g)
    }

    /// For a divisor `g` of the defining polynomial: whether the selected
    /// root is a root of `g`.
    fn selects_root_of(&self, g: &IntPoly) -> Result<bool> {
        let g = normalized(g)?;
        match &self.sel {
            Selector::Interval(lo, hi) if lo == hi => Ok(g.sign_at(lo) == 0),
            Selector::Interval(lo, hi) => {
                let chain = SturmChain::new(&g)?;
                Ok(chain.count_half_open(&Bound::At(lo.clone()), &Bound::At(hi.clone())) > 0)
            }
            Selector::Rect(rect) => {
                let mut eps = EPS_START;
                for _ in 0..REFINE_ROUNDS {
                    let roots = approx_roots(&g, eps)?;
                    if roots.iter().any(|r| rect.ball_inside(&r.ball)) {
                        return Ok(true);
                    }
                    if roots.iter().all(|r| rect.ball_disjoint(&r.ball)) {
                        return Ok(false);
                    }
                    eps /= 1e4;
                }
                Err(Error::PrecisionExhausted { bits: prec_for(eps), context: "root membership".into() })
            }
        }
    }

    /// Minimal polynomial (primitive, positive leading coefficient).
    pub fn minimal_polynomial(&self) -> Result<IntPoly> {
        Ok(self.min_poly()?.poly.clone())
    }

    /// Whether the minimal polynomial is proven irreducible.
    pub fn min_poly_certified(&self) -> Result<bool> {
        Ok(self.min_poly()?.certified)
    }

    fn min_poly(&self) -> Result<&MinPoly> {
        if let Some(m) = self.min.get() {
            return Ok(m);
        }
        let fs = factor::factor_squarefree(&self.poly)?;
        let mut found = None;
        if fs.factors.len() == 1 {
            found = Some(fs.factors[0].clone());
        } else {
            for g in &fs.factors {
                if self.selects_root_of(g)? {
                    found = Some(g.clone());
                    break;
                }
            }
        }
        let poly = found.ok_or_else(|| Error::InvalidArgument("no factor vanishes at the number".into()))?;
        let _ = self.min.set(MinPoly { poly, certified: fs.complete });
        Ok(self.min.get().expect("just set"))
    }

    pub fn degree(&self) -> Result<usize> {
        Ok(self.min_poly()?.poly.deg())
    }

    /// Every conjugate is real.
    pub fn is_totally_real(&self) -> Result<bool> {
        if crate::sturm::count_real_roots(&self.poly)? == self.poly.deg() {
            return Ok(true);
        }
        let m = self.minimal_polynomial()?;
        Ok(crate::sturm::count_real_roots(&m)? == m.deg())
    }

    /// Enclosures of the Galois conjugates (roots of the minimal polynomial).
    pub fn conjugates(&self, eps: f64) -> Result<Vec<RootEnclosure>> {
        approx_roots(&self.minimal_polynomial()?, eps)
    }

    /// Exact equality.
    pub fn eq_exact(&self, other: &Self) -> Result<bool> {
        if let (Some(a), Some(b)) = (self.rational_selector(), other.rational_selector()) {
            return Ok(a == b);
        }
        let g = self.poly.gcd_int(&other.poly);
        if g.deg() == 0 {
            return Ok(false);
        }
        if !self.selects_root_of(&g)? || !other.selects_root_of(&g)? {
            return Ok(false);
        }
        let g = normalized(&g)?;
        let mut eps = EPS_START;
        for _ in 0..REFINE_ROUNDS {
            let a = self.enclosure(eps)?;
            let b = other.enclosure(eps)?;
            if a.disjoint(&b) {
                return Ok(false);
            }
            let roots = approx_roots(&g, eps)?;
            let ia: Vec<usize> = (0..roots.len()).filter(|&i| !roots[i].ball.disjoint(&a)).collect();
            let ib: Vec<usize> = (0..roots.len()).filter(|&i| !roots[i].ball.disjoint(&b)).collect();
            if ia.len() == 1 && ib.len() == 1 {
                return Ok(ia[0] == ib[0]);
            }
            eps /= 1e4;
        }
        Err(Error::PrecisionExhausted { bits: prec_for(eps), context: "equality test".into() })
    }

    fn rational_selector(&self) -> Option<&BigRational> {
        match &self.sel {
            Selector::Interval(lo, hi) if lo == hi => Some(lo),
            _ => None,
        }
    }

    pub fn neg(&self) -> Self {
        if let Some(r) = self.rational_selector() {
            return AlgebraicNumber::from_rational(&-r);
        }
        let poly = normalized(&self.poly.negate_var()).expect("squarefree");
        let sel = match &self.sel {
            Selector::Interval(lo, hi) => {
                // (lo, hi] becomes [-hi, -lo); nudge to keep the half-open form.
                let chain = SturmChain::new(&poly).expect("squarefree");
                let (a, b) = (-hi.clone(), -lo.clone());
                let a = if poly.sign_at(&a) == 0 {
                    let w = &b - &a;
                    a - w
                } else {
                    a
                };
                debug_assert_eq!(chain.count_half_open(&Bound::At(a.clone()), &Bound::At(b.clone())), 1);
                Selector::Interval(a, b)
            }
            Selector::Rect(r) => Selector::Rect(Rect {
                re_lo: -r.re_hi.clone(),
                re_hi: -r.re_lo.clone(),
                im_lo: -r.im_hi.clone(),
                im_hi: -r.im_lo.clone(),
            }),
        };
        AlgebraicNumber::raw(poly, sel)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() || self.is_root_of(&Poly::x())? {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.rational_selector() {
            return Ok(AlgebraicNumber::from_rational(&(BigRational::one() / r)));
        }
        let rev = self.poly.reverse();
        AlgebraicNumber::from_ball_root(&rev, |eps| {
            let b = self.enclosure(eps * 1e-3)?;
            b.inv().ok_or(Error::DivisionByZero)
        })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if let (Some(a), Some(b)) = (self.rational_selector(), o.rational_selector()) {
            return Ok(AlgebraicNumber::from_rational(&(a + b)));
        }
        let r = sum_poly(&self.poly, &o.poly)?;
        AlgebraicNumber::from_ball_root(&r, |eps| Ok(self.enclosure(eps / 4.0)?.add(&o.enclosure(eps / 4.0)?)))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.is_zero() || o.is_zero() {
            return Ok(AlgebraicNumber::from_int(0));
        }
        if let (Some(a), Some(b)) = (self.rational_selector(), o.rational_selector()) {
            return Ok(AlgebraicNumber::from_rational(&(a * b)));
        }
        let r = prod_poly(&self.poly, &o.poly)?;
        AlgebraicNumber::from_ball_root(&r, |eps| {
            let a = self.enclosure(eps)?;
            let b = o.enclosure(eps)?;
            let s = eps / (4.0 * (1.0 + a.mag_up() + b.mag_up()));
            Ok(self.enclosure(s)?.mul(&o.enclosure(s)?))
        })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.mul(&o.inv()?)
    }

    /// `f(self)` for a rational function over `Q`; `None` is infinity.
    pub fn apply_map(&self, f: &IntRatFunc) -> Result<Option<Self>> {
        if let Some(r) = self.rational_selector() {
            let d = f.den.eval_rat(r);
            if d.is_zero() {
                return Ok(None);
            }
            return Ok(Some(AlgebraicNumber::from_rational(&(f.num.eval_rat(r) / d))));
        }
        if f.den.deg() > 0 && self.is_root_of(&f.den)? {
            return Ok(None);
        }
        let r = map_poly(&self.poly, &f.num, &f.den)?;
        let fnum = &f.num;
        let fden = &f.den;
        let out = AlgebraicNumber::from_ball_root(&r, |eps| {
            let mut e = eps;
            for _ in 0..REFINE_ROUNDS {
                let z = self.enclosure(e)?;
                let n = eval_ball(fnum, &z);
                let d = eval_ball(fden, &z);
                if let Some(v) = n.div(&d) {
                    if v.rad <= eps {
                        return Ok(v);
                    }
                }
                e /= 1e6;
            }
            Err(Error::PrecisionExhausted { bits: prec_for(e), context: "evaluating map".into() })
        })?;
        Ok(Some(out))
    }

    /// Embedding in the field generated by `√d`, when the number is one of
    /// its elements.
    pub fn to_quad(&self, d: i64) -> Result<Option<QuadElem>> {
        if let Some(r) = self.as_rational() {
            return Ok(Some(QuadElem::rational(r).in_field(d)));
        }
        let m = self.minimal_polynomial()?;
        if m.deg() != 2 {
            return Ok(None);
        }
        let (c, b, a) = (m.coeff(0), m.coeff(1), m.coeff(2));
        let disc = &b * &b - BigInt::from(4) * &a * &c;
        let (s, core) = crate::quad::split_square(&disc);
        if core != BigInt::from(d) {
            return Ok(None);
        }
        let den = BigInt::from(2) * &a;
        let re = BigRational::new(-b, den.clone());
        let im = BigRational::new(s, den);
        for sign in [1, -1] {
            let e = QuadElem::new(d, re.clone(), &im * BigRational::from_integer(sign.into()))?;
            if self.eq_exact(&AlgebraicNumber::from_quad(&e)?)? {
                return Ok(Some(e));
            }
        }
        Ok(None)
    }
}

/// Every distinct root of `p`: real roots in increasing order, then the
/// non-real ones ordered by real and imaginary part.
pub fn all_roots(p: &IntPoly) -> Result<Vec<AlgebraicNumber>> {
    let sqf = normalized(p)?;
    let (factors, complete) = if sqf.deg() <= factor::MAX_LIFT_DEGREE {
        let fs = factor::factor_squarefree(&sqf)?;
        (fs.factors, fs.complete)
    } else {
        (vec![sqf], false)
    };
    let mut real: Vec<(BigRational, AlgebraicNumber)> = Vec::new();
    let mut complex: Vec<(f64, f64, AlgebraicNumber)> = Vec::new();
    for g in &factors {
        let known = complete || factors.len() > 1 && g.deg() <= factor::MAX_LIFT_DEGREE;
        let tag = |a: AlgebraicNumber| {
            if known && a.min.get().is_none() {
                let _ = a.min.set(MinPoly { poly: g.clone(), certified: complete });
            }
            a
        };
        if g.deg() == 1 {
            let r = BigRational::new(-g.coeff(0), g.coeff(1));
            real.push((r.clone(), AlgebraicNumber::from_rational(&r)));
            continue;
        }
        let ivs = isolate_real_roots(g)?;
        for (lo, hi) in &ivs {
            real.push((lo.clone(), tag(AlgebraicNumber::raw(g.clone(), Selector::Interval(lo.clone(), hi.clone())))));
        }
        if ivs.len() == g.deg() {
            continue;
        }
        let mut eps = EPS_START;
        let mut placed = false;
        for _ in 0..REFINE_ROUNDS {
            let roots = approx_roots(g, eps)?;
            let nonreal: Vec<&RootEnclosure> = roots.iter().filter(|r| !r.real).collect();
            let mut found = Vec::new();
            for r in &nonreal {
                let (re, im, rad) = ball_parts(&r.ball);
                let w = &rad * BigRational::new(3.into(), 2.into()) + BigRational::new(1.into(), BigInt::one() << 300usize);
                let rect = Rect { re_lo: &re - &w, re_hi: &re + &w, im_lo: &im - &w, im_hi: &im + &w };
                let clean = roots.iter().all(|o| std::ptr::eq(o, *r) || rect.ball_disjoint(&o.ball));
                if !clean {
                    break;
                }
                found.push((r.re(), r.im(), rect));
            }
            if found.len() == nonreal.len() {
                for (re, im, rect) in found {
                    complex.push((re, im, tag(AlgebraicNumber::raw(g.clone(), Selector::Rect(rect)))));
                }
                placed = true;
                break;
            }
            eps /= 1e4;
        }
        if !placed {
            return Err(Error::PrecisionExhausted { bits: prec_for(eps), context: "separating complex roots".into() });
        }
    }
    real.sort_by(|a, b| a.0.cmp(&b.0));
    complex.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Ok(real.into_iter().map(|x| x.1).chain(complex.into_iter().map(|x| x.2)).collect())
}

/// Distinct roots of `p` with multiplicities.
pub fn roots_with_multiplicity(p: &IntPoly) -> Result<Vec<(AlgebraicNumber, u32)>> {
    let mut out = Vec::new();
    for (g, m) in p.squarefree_decomposition() {
        if g.deg() == 0 {
            continue;
        }
        out.extend(all_roots(&g)?.into_iter().map(|a| (a, m)));
    }
    Ok(out)
}

/// Minimal polynomial of a non-rational quadratic element, primitive.
pub fn quad_min_poly(e: &QuadElem) -> IntPoly {
    let t = e.trace();
    let n = e.norm();
    let p = Poly::new(vec![n, -t, BigRational::one()]);
    IntPoly::from_rat(&p)
}

/// Evaluate an integer polynomial on a ball.
pub fn eval_ball(p: &IntPoly, z: &ComplexBall) -> ComplexBall {
    let prec = z.prec();
    let mut acc = ComplexBall::zero(prec);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(z).add(&ComplexBall::exact(BigFloat::from_int(c, prec), BigFloat::zero_with(prec)));
    }
    acc
}

/// Integer polynomial through the values `v(0), v(1), ..., v(n)`.
fn interpolate(n: usize, v: impl Fn(i64) -> Result<BigInt>) -> Result<IntPoly> {
    let xs: Vec<BigRational> = (0..=n as i64).map(|k| BigRational::from_integer(k.into())).collect();
    let mut dd: Vec<BigRational> = Vec::with_capacity(n + 1);
    for k in 0..=n as i64 {
        dd.push(BigRational::from_integer(v(k)?));
    }
    for j in 1..=n {
        for i in (j..=n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut acc: Poly<BigRational> = Poly::constant(dd[n].clone());
    for i in (0..n).rev() {
        let lin = Poly::new(vec![-xs[i].clone(), BigRational::one()]);
        acc = &(&acc * &lin) + &Poly::constant(dd[i].clone());
    }
    let out = Poly::new(acc.coeffs().iter().map(|c| c.to_integer()).collect());
    debug_assert!(acc.coeffs().iter().all(|c| c.is_integer()));
    Ok(out)
}

/// Polynomial whose roots are all sums `a + b` of roots of `p` and `q`.
pub fn sum_poly(p: &IntPoly, q: &IntPoly) -> Result<IntPoly> {
    let n = p.deg() * q.deg();
    interpolate(n, |t| {
        let shifted = q.compose(&Poly::new(vec![BigInt::from(t), BigInt::from(-1)]));
        p.resultant(&shifted)
    })
}

/// Polynomial whose roots are all products of roots of `p` and `q`.
pub fn prod_poly(p: &IntPoly, q: &IntPoly) -> Result<IntPoly> {
    let n = p.deg() * q.deg();
    let m = q.deg();
    interpolate(n, |t| {
        let tb = BigInt::from(t);
        let cs: Vec<BigInt> = (0..=m).map(|j| q.coeff(m - j) * num_traits::pow(tb.clone(), m - j)).collect();
        p.resultant(&Poly::new(cs))
    })
}

/// Polynomial vanishing at `num(a)/den(a)` for every root `a` of `p`.
pub fn map_poly(p: &IntPoly, num: &IntPoly, den: &IntPoly) -> Result<IntPoly> {
    interpolate(p.deg(), |t| {
        let lin = &den.scale(&BigInt::from(t)) - num;
        p.resultant(&lin)
    })
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.eq_exact(other).unwrap_or(false)
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.sel {
            Selector::Interval(lo, hi) if lo == hi => write!(f, "{lo}"),
            Selector::Interval(lo, hi) => write!(f, "root({}, {lo}, {hi})", self.poly),
            Selector::Rect(r) => {
                write!(f, "root({}, {}, {}, {}, {})", self.poly, r.re_lo, r.re_hi, r.im_lo, r.im_hi)
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct AlgebraicJson {
    poly: Vec<String>,
    selector_lo: String,
    selector_hi: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    rect: Option<[String; 4]>,
}

impl Serialize for AlgebraicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let poly = self.poly.coeffs().iter().map(|c| c.to_string()).collect();
        let j = match &self.sel {
            Selector::Interval(lo, hi) => {
                AlgebraicJson { poly, selector_lo: lo.to_string(), selector_hi: hi.to_string(), rect: None }
            }
            Selector::Rect(r) => AlgebraicJson {
                poly,
                selector_lo: r.re_lo.to_string(),
                selector_hi: r.re_hi.to_string(),
                rect: Some([r.re_lo.to_string(), r.re_hi.to_string(), r.im_lo.to_string(), r.im_hi.to_string()]),
            },
        };
        j.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraicNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = AlgebraicJson::deserialize(d)?;
        let int = |s: &String| s.parse::<BigInt>().map_err(D::Error::custom);
        let rat = |s: &String| s.parse::<BigRational>().map_err(D::Error::custom);
        let poly = Poly::new(j.poly.iter().map(int).collect::<std::result::Result<Vec<_>, _>>()?);
        let sel = match &j.rect {
            None => Selector::Interval(rat(&j.selector_lo)?, rat(&j.selector_hi)?),
            Some([a, b, c, e]) => Selector::Rect(Rect { re_lo: rat(a)?, re_hi: rat(b)?, im_lo: rat(c)?, im_hi: rat(e)? }),
        };
        AlgebraicNumber::from_poly_root(&poly, sel).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(cs: &[i64]) -> IntPoly {
        Poly::from_i64s(cs)
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn phi() -> AlgebraicNumber {
        AlgebraicNumber::from_poly_root(&ip(&[-1, -1, 1]), Selector::Interval(r(1, 1), r(2, 1))).unwrap()
    }

    #[test]
    fn selectors_validate() {
        assert!(AlgebraicNumber::from_poly_root(&ip(&[-1, -1, 1]), Selector::Interval(r(-2, 1), r(2, 1))).is_err());
        let i = AlgebraicNumber::from_poly_root(
            &ip(&[1, 0, 1]),
            Selector::Rect(Rect { re_lo: r(-1, 1), re_hi: r(1, 1), im_lo: r(1, 2), im_hi: r(2, 1) }),
        )
        .unwrap();
        assert!(!i.is_real());
        assert!((i.approx().im - 1.0).abs() < 1e-12);
        let two = AlgebraicNumber::from_poly_root(&ip(&[-2, 1]), Selector::Interval(r(0, 1), r(3, 1))).unwrap();
        assert_eq!(two.as_rational(), Some(r(2, 1)));
    }

    #[test]
    fn field_operations() {
        let p = phi();
        let q = p.mul(&p).unwrap().sub(&p).unwrap();
        assert_eq!(q.as_rational(), Some(r(1, 1)));
        let inv = p.inv().unwrap();
        let d = p.sub(&inv).unwrap();
        assert_eq!(d.as_rational(), Some(r(1, 1)));
        let s2 = AlgebraicNumber::from_poly_root(&ip(&[-2, 0, 1]), Selector::Interval(r(1, 1), r(2, 1))).unwrap();
        let s3 = AlgebraicNumber::from_poly_root(&ip(&[-3, 0, 1]), Selector::Interval(r(1, 1), r(2, 1))).unwrap();
        let sum = s2.add(&s3).unwrap();
        assert_eq!(sum.minimal_polynomial().unwrap(), ip(&[1, 0, -10, 0, 1]));
        assert!((sum.approx().re - (2f64.sqrt() + 3f64.sqrt())).abs() < 1e-12);
        assert!(sum.is_totally_real().unwrap());
    }

    #[test]
    fn maps_and_quadratics() {
        let f = IntRatFunc::new(ip(&[-1, 0, 1]), ip(&[1])).unwrap();
        let p = phi();
        let fp = p.apply_map(&f).unwrap().unwrap();
        assert!(fp.eq_exact(&p).unwrap());
        let e = crate::quad::quad(5, (1, 2), (1, 2));
        let a = AlgebraicNumber::from_quad(&e).unwrap();
        assert!(a.eq_exact(&p).unwrap());
        assert_eq!(a.to_quad(5).unwrap(), Some(e));
        let g = crate::quad::quad(-3, (0, 1), (-1, 1));
        let b = AlgebraicNumber::from_quad(&g).unwrap();
        assert!(b.approx().im < -1.7);
        assert_eq!(b.to_quad(-3).unwrap(), Some(g));
    }

    #[test]
    fn json_round_trip() {
        let p = phi();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"poly":["-1","-1","1"],"selector_lo":"1","selector_hi":"2"}"#);
        let back: AlgebraicNumber = serde_json::from_str(&s).unwrap();
        assert!(back.eq_exact(&p).unwrap());
    }

    #[test]
    fn root_lists() {
        let roots = all_roots(&ip(&[0, -1, 0, 0, 1])).unwrap();
        assert_eq!(roots.len(), 4);
        assert_eq!(roots[0].as_rational(), Some(r(0, 1)));
        assert_eq!(roots[1].as_rational(), Some(r(1, 1)));
        assert!((roots[2].approx().im + 0.75f64.sqrt()).abs() < 1e-12);
        assert_eq!(roots[3].minimal_polynomial().unwrap(), ip(&[1, 1, 1]));
        let m = roots_with_multiplicity(&ip(&[0, 0, 1])).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].1, 2);
    }
}
