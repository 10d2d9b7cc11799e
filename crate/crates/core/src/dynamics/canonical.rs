//! Canonical heights.
//!
//! For a map over `Q` with integral homogeneous lift `F` and a point `α`
//! of degree `n` with primitive minimal form `M_0`,
//!
//! ```text
//! n ĥ(α) = log|lead M_0| + Σ_i G(α_i, 1) - Σ_k d^-(k+1) log c_k
//! ```
//!
//! where `G` is the archimedean escape rate of `F`, and `c_k` is the
//! content of `Res(M_k, Y F0 - X F1)` with `M_{k+1}` its primitive part.
//! Every `c_k` divides `Res(F0, F1)^n`, so the sum over `k` converges
//! geometrically and can be tracked modulo a power of the resultant.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{evaluate, RationalMap, Point};
use crate::algebraic::AlgebraicNumber;
use crate::ball::ComplexBall;
use crate::error::{invalid, Error, Result};
use crate::heights::{height_algebraic, height_quad, HeightEstimate, POSSIBLY_REDUCIBLE};
use crate::linalg::{det_bareiss, det_mod, solve};
use crate::poly::{ln_bigint, Poly};
use crate::quad::QuadElem;
use crate::ratfunc::IntRatFunc;
use crate::ring::Field;
use crate::roots::approx_roots;

/// Largest degree handled by the resultant recursion directly; points of
/// larger degree are first pushed forward along their orbit.
const MAX_DIRECT_DEGREE: usize = 8;

/// Explicit bound `|h(f(x)) - d h(x)| <= c`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ComparisonConstant {
    pub c: f64,
    /// Bound on `h(f(x)) - d h(x)`.
    pub upper: f64,
    /// Bound on `d h(x) - h(f(x))`.
    pub lower: f64,
}

fn round_up(x: f64) -> f64 {
    x + 1e-12 * (1.0 + x.abs())
}

/// Coefficient lists of the homogeneous lift, indexed by the power of `X`.
fn int_lift(int: &IntRatFunc, d: usize) -> (Vec<BigInt>, Vec<BigInt>) {
    let pad = |p: &Poly<BigInt>| (0..=d).map(|k| p.coeff(k)).collect();
    (pad(&int.num), pad(&int.den))
}

fn quad_lift(f: &RationalMap) -> (Vec<QuadElem>, Vec<QuadElem>) {
    let d = f.degree();
    let pad = |p: &Poly<QuadElem>| (0..=d).map(|k| p.coeff(k)).collect();
    (pad(f.f.num()), pad(f.f.den()))
}

/// Forms `G_i0, G_i1` of degree `d - 1` with `G_00 F0 + G_01 F1 = X^{2d-1}`
/// and `G_10 F0 + G_11 F1 = Y^{2d-1}`.
fn cofactors<T: Field>(f0: &[T], f1: &[T]) -> Option<[Vec<T>; 2]> {
    let d = f0.len() - 1;
    let size = 2 * d;
    let coeff = |f: &[T], i: isize| if i >= 0 && (i as usize) <= d { f[i as usize].clone() } else { T::zero() };
    let mut a = vec![vec![T::zero(); size]; size];
    for (t, row) in a.iter_mut().enumerate() {
        for j in 0..d {
            row[j] = coeff(f0, t as isize - j as isize);
            row[d + j] = coeff(f1, t as isize - j as isize);
        }
    }
    let mut rhs_x = vec![T::zero(); size];
    rhs_x[size - 1] = T::one();
    let mut rhs_y = vec![T::zero(); size];
    rhs_y[0] = T::one();
    Some([solve(&a, &rhs_x)?, solve(&a, &rhs_y)?])
}

/// Sylvester matrix of two forms given by their coefficient lists (power
/// of `X` as index, formal degree `len - 1`).
fn sylvester(a: &[BigInt], b: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = a.len() - 1;
    let m = b.len() - 1;
    let size = n + m;
    let mut rows = Vec::with_capacity(size);
    for i in 0..m {
        let mut row = vec![BigInt::zero(); size];
        for (j, c) in a.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..n {
        let mut row = vec![BigInt::zero(); size];
        for (j, c) in b.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// `|Res(F0, F1)|` of the homogeneous lift.
fn lift_resultant(f0: &[BigInt], f1: &[BigInt]) -> BigInt {
    det_bareiss(sylvester(f0, f1)).abs()
}

pub fn comparison_constant(f: &RationalMap) -> Result<ComparisonConstant> {
    let d = f.degree();
    if let Some(int) = f.as_int() {
        let (f0, f1) = int_lift(int, d);
        let sum = |v: &[BigInt]| v.iter().fold(BigInt::zero(), |acc, c| acc + c.abs());
        let upper = ln_bigint(&sum(&f0).max(sum(&f1)));
        let r0: Vec<BigRational> = f0.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let r1: Vec<BigRational> = f1.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let gs = cofactors(&r0, &r1).ok_or_else(|| Error::InvalidArgument("map is not a morphism".into()))?;
        // With a common denominator N the cofactors are integral and
        // d h(x) - h(f(x)) <= log N + max_i log Σ|G_i|.
        let n = gs.iter().flatten().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let lower = gs
            .iter()
            .map(|g| {
                let s = g.iter().fold(BigInt::zero(), |acc, c| acc + (c * BigRational::from_integer(n.clone())).to_integer().abs());
                ln_bigint(&s)
            })
            .fold(f64::NEG_INFINITY, f64::max);
        let (upper, lower) = (round_up(upper.max(0.0)), round_up(lower.max(0.0)));
        return Ok(ComparisonConstant { c: upper.max(lower), upper, lower });
    }
    let (f0, f1) = quad_lift(f);
    let hsum = |v: &[QuadElem]| v.iter().map(|c| height_quad(c).hi()).sum::<f64>();
    let upper = hsum(&f0) + hsum(&f1) + ((d + 1) as f64).ln();
    let gs = cofactors(&f0, &f1).ok_or_else(|| Error::InvalidArgument("map is not a morphism".into()))?;
    let lower = gs.iter().map(|g| hsum(g)).sum::<f64>() + ((2 * d) as f64).ln();
    let (upper, lower) = (round_up(upper), round_up(lower));
    Ok(ComparisonConstant { c: upper.max(lower), upper, lower })
}

/// Ball coefficients of a lift under one complex embedding, with the
/// bounds `g_low <= log|F(w)| - d log|w| <= c_plus` for all `w`.
pub(crate) struct BallLift {
    f0: Vec<ComplexBall>,
    f1: Vec<ComplexBall>,
    c_plus: f64,
    g_low: f64,
}

impl BallLift {
    fn from_int(f0: &[BigInt], f1: &[BigInt], prec: u32) -> Result<Self> {
        let r0: Vec<BigRational> = f0.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let r1: Vec<BigRational> = f1.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let gs = cofactors(&r0, &r1).ok_or_else(|| Error::InvalidArgument("map is not a morphism".into()))?;
        let sum = |v: &[BigInt]| v.iter().fold(BigInt::zero(), |acc, c| acc + c.abs());
        let c_plus = ln_bigint(&sum(f0).max(sum(f1))) + 1e-14;
        let s = gs
            .iter()
            .map(|g| g.iter().map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY)).sum::<f64>())
            .fold(0.0, f64::max);
        let ball = |c: &BigInt| ComplexBall::from_rational(&BigRational::from_integer(c.clone()), prec);
        Ok(BallLift {
            f0: f0.iter().map(ball).collect(),
            f1: f1.iter().map(ball).collect(),
            c_plus,
            g_low: -(s.ln() + 1e-13),
        })
    }

    fn from_quad(f0: &[QuadElem], f1: &[QuadElem], conj: bool, prec: u32) -> Result<Self> {
        let gs = cofactors(f0, f1).ok_or_else(|| Error::InvalidArgument("map is not a morphism".into()))?;
        let emb = |c: &QuadElem| ComplexBall::from_quad(&if conj { c.conj() } else { c.clone() }, prec);
        let f0: Vec<ComplexBall> = f0.iter().map(emb).collect();
        let f1: Vec<ComplexBall> = f1.iter().map(emb).collect();
        let mag = |v: &[ComplexBall]| v.iter().map(|c| c.mag_up()).sum::<f64>();
        let c_plus = mag(&f0).max(mag(&f1)).ln() + 1e-13;
        let s = gs.iter().map(|g| mag(&g.iter().map(emb).collect::<Vec<_>>())).fold(0.0, f64::max);
        Ok(BallLift { f0, f1, c_plus, g_low: -(s.ln() + 1e-13) })
    }

    fn degree(&self) -> usize {
        self.f0.len() - 1
    }
}

fn eval_form(c: &[ComplexBall], x: &ComplexBall, y: &ComplexBall) -> ComplexBall {
    let d = c.len() - 1;
    let prec = x.prec();
    let mut xp = vec![ComplexBall::from_i64(1, prec)];
    let mut yp = vec![ComplexBall::from_i64(1, prec)];
    for k in 1..=d {
        xp.push(xp[k - 1].mul(x));
        yp.push(yp[k - 1].mul(y));
    }
    let mut acc = ComplexBall::zero(prec);
    for (k, ck) in c.iter().enumerate() {
        if ck.mag_up() == 0.0 {
            continue;
        }
        acc = acc.add(&ck.mul(&xp[k]).mul(&yp[d - k]));
    }
    acc
}

fn ldexp_ball(b: &ComplexBall, e: i64) -> ComplexBall {
    ComplexBall::new(b.re.ldexp(e), b.im.ldexp(e), crate::ball::up(b.rad * 2f64.powi(e as i32)))
}

/// Bounds on the escape rate `G(x, y) = lim d^-n log|F^n(x, y)|` (max
/// norm), within about `tol`.
pub(crate) fn escape_rate(lift: &BallLift, x: &ComplexBall, y: &ComplexBall, tol: f64) -> Result<(f64, f64)> {
    let d = lift.degree() as f64;
    let spread = (lift.c_plus - lift.g_low) / (d - 1.0);
    let mut steps = 0;
    while spread / d.powi(steps) > tol / 2.0 && steps < 400 {
        steps += 1;
    }
    let (mut wx, mut wy) = (x.clone(), y.clone());
    let ln2 = std::f64::consts::LN_2;
    let mut acc = 0.0;
    let mut scale = 1.0;
    let mut done = 0;
    for _ in 0..steps {
        let a = eval_form(&lift.f0, &wx, &wy);
        let b = eval_form(&lift.f1, &wx, &wy);
        let m = a.center_abs().max(b.center_abs());
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::PrecisionExhausted { bits: x.prec(), context: "escape rate iteration".into() });
        }
        let e = m.log2().floor() as i64;
        wx = ldexp_ball(&a, -e);
        wy = ldexp_ball(&b, -e);
        scale /= d;
        acc += e as f64 * ln2 * scale;
        done += 1;
        if wx.rad.max(wy.rad) > 1e-3 {
            break;
        }
    }
    let _ = done;
    let lo_n = wx.ln_abs_bounds().0.max(wy.ln_abs_bounds().0);
    let hi_n = wx.ln_abs_bounds().1.max(wy.ln_abs_bounds().1);
    if !lo_n.is_finite() {
        return Err(Error::PrecisionExhausted { bits: x.prec(), context: "escape rate iteration".into() });
    }
    let round = 1e-15 * (1.0 + acc.abs());
    let lo = acc + scale * (lo_n + lift.g_low / (d - 1.0)) - round;
    let hi = acc + scale * (hi_n + lift.c_plus / (d - 1.0)) + round;
    Ok((lo, hi))
}

/// `Σ_k d^-(k+1) log c_k` for the primitive form `form`, as
/// `(partial sum, bound on the remainder)`.
fn finite_correction(f0: &[BigInt], f1: &[BigInt], form: &[BigInt], tol: f64) -> Result<(f64, f64)> {
    let r = lift_resultant(f0, f1);
    if r.is_zero() {
        return invalid("map is not a morphism");
    }
    if r.is_one() {
        return Ok((0.0, 0.0));
    }
    let d = f0.len() - 1;
    let n = form.len() - 1;
    let df = d as f64;
    let ln_r = ln_bigint(&r);
    let mut steps = 0usize;
    while ln_r / ((df - 1.0) * df.powi(steps as i32)) > tol && steps < 200 {
        steps += 1;
    }
    let rn = num_traits::pow(r.clone(), n);
    let mut modulus = num_traits::pow(rn.clone(), steps + 1);
    let fact: BigInt = (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k));
    // Falling factorials u(u-1)...(u-k+1), scaled by n!/k!.
    let mut ff: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for k in 1..=n {
        let prev = &ff[k - 1];
        let mut next = vec![BigInt::zero(); k + 1];
        for (j, c) in prev.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= c * BigInt::from(k - 1);
        }
        ff.push(next);
    }
    let weight: Vec<BigInt> = (0..=n)
        .map(|k| &fact / (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(j)))
        .collect();
    let mut m: Vec<BigInt> = form.to_vec();
    let mut sum = 0.0;
    let mut scale = 1.0;
    for _ in 0..steps {
        let big = &modulus * &fact;
        let mut vals = Vec::with_capacity(n + 1);
        for u in 0..=n {
            let ub = BigInt::from(u);
            let b: Vec<BigInt> = f0.iter().zip(f1).map(|(a, c)| a - &ub * c).collect();
            vals.push(det_mod(sylvester(&m, &b), &big));
        }
        for k in 1..=n {
            for i in (k..=n).rev() {
                vals[i] = (&vals[i] - &vals[i - 1]).mod_floor(&big);
            }
        }
        let mut scaled = vec![BigInt::zero(); n + 1];
        for k in 0..=n {
            let w = &vals[k] * &weight[k];
            for (j, c) in ff[k].iter().enumerate() {
                scaled[j] += &w * c;
            }
        }
        let p: Vec<BigInt> = scaled.iter().map(|c| c.mod_floor(&big) / &fact).collect();
        let c = p.iter().fold(rn.clone(), |acc, x| acc.gcd(x));
        scale /= df;
        if !c.is_one() {
            sum += ln_bigint(&c) * scale;
        }
        m = p.iter().map(|x| x / &c).collect();
        modulus = &modulus / &c;
    }
    let tail = n as f64 * ln_r * scale / (df - 1.0);
    Ok((sum, tail + 1e-15 * (1.0 + sum.abs())))
}

/// Archimedean data of a point: a scale `log|lead|` and the lifts of its
/// conjugates.
struct ArchData {
    log_lead: f64,
    lifts: Vec<(ComplexBall, ComplexBall)>,
}

fn arch_data(form: &[BigInt], alpha: Option<&AlgebraicNumber>, prec: u32) -> Result<ArchData> {
    let one = ComplexBall::from_i64(1, prec);
    let zero = ComplexBall::zero(prec);
    let n = form.len() - 1;
    if form[n].is_zero() {
        // The point at infinity, form `-Y`.
        return Ok(ArchData { log_lead: 0.0, lifts: vec![(one, zero)] });
    }
    let log_lead = ln_bigint(&form[n]);
    if n == 1 {
        let r = BigRational::new(-form[0].clone(), form[1].clone());
        return Ok(ArchData { log_lead, lifts: vec![(ComplexBall::from_rational(&r, prec), one)] });
    }
    let p = Poly::new(form.to_vec());
    let eps = 2f64.powi(-(prec as i32 - 40).min(1000));
    let eps = eps.max(1e-300);
    let roots = approx_roots(&p, eps)?;
    let _ = alpha;
    let lifts = roots.into_iter().map(|r| (r.ball.with_prec(prec), one.clone())).collect();
    Ok(ArchData { log_lead, lifts })
}

/// `ĥ` for a point of a map over `Q`, given the primitive form of the
/// point.
fn height_from_form(int: &IntRatFunc, d: usize, form: &[BigInt], eps: f64) -> Result<HeightEstimate> {
    let (f0, f1) = int_lift(int, d);
    let n = form.len() - 1;
    let (corr, tail) = finite_correction(&f0, &f1, form, eps / 4.0)?;
    let mut prec = 256;
    loop {
        let lift = BallLift::from_int(&f0, &f1, prec)?;
        let data = arch_data(form, None, prec)?;
        let (mut lo, mut hi) = (data.log_lead, data.log_lead);
        let mut ok = true;
        for (x, y) in &data.lifts {
            match escape_rate(&lift, x, y, eps / 4.0) {
                Ok((a, b)) => {
                    lo += a;
                    hi += b;
                }
                Err(Error::PrecisionExhausted { .. }) => ok = false,
                Err(e) => return Err(e),
            }
        }
        let nf = n as f64;
        let est = HeightEstimate::from_bounds((lo - corr - tail) / nf, (hi - corr) / nf);
        if ok && est.err <= eps {
            return Ok(est);
        }
        if prec >= 4096 {
            if ok {
                return Ok(est);
            }
            return Err(Error::PrecisionExhausted { bits: prec, context: "canonical height".into() });
        }
        prec *= 2;
    }
}

/// Integral coefficients and a unit leading coefficient: the polynomial
/// map has good reduction at every finite place of `Q(√D)`.
fn good_reduction_polynomial(f: &RationalMap) -> bool {
    if !f.is_polynomial() {
        return false;
    }
    let integral = |c: &QuadElem| {
        let t = c.a() * BigRational::from_integer(2.into());
        t.is_integer() && c.norm().is_integer()
    };
    let num = f.f.num();
    num.coeffs().iter().all(integral) && num.lead().norm().abs().is_one()
}

/// Sum over the two embeddings of `G_σ(σα) - log⁺|σα|`, halved.
fn quad_local_correction(f: &RationalMap, alpha: &QuadElem, eps: f64) -> Result<(f64, f64)> {
    let (f0, f1) = quad_lift(f);
    let mut prec = 256;
    loop {
        let (mut lo, mut hi) = (0.0, 0.0);
        let mut ok = true;
        for conj in [false, true] {
            let lift = BallLift::from_quad(&f0, &f1, conj, prec)?;
            let a = if conj { alpha.conj() } else { alpha.clone() };
            let x = ComplexBall::from_quad(&a, prec);
            let y = ComplexBall::from_i64(1, prec);
            match escape_rate(&lift, &x, &y, eps / 2.0) {
                Ok((g_lo, g_hi)) => {
                    let (l_lo, l_hi) = x.ln_abs_bounds();
                    lo += g_lo - l_hi.max(0.0);
                    hi += g_hi - l_lo.max(0.0);
                }
                Err(Error::PrecisionExhausted { .. }) => ok = false,
                Err(e) => return Err(e),
            }
        }
        if ok && (hi - lo) / 2.0 <= eps {
            return Ok((lo / 2.0, hi / 2.0));
        }
        if prec >= 4096 {
            return Err(Error::PrecisionExhausted { bits: prec, context: "canonical height".into() });
        }
        prec *= 2;
    }
}

/// `h(f^k α) / d^k` until the comparison bound is below `eps`.
fn naive_height(f: &RationalMap, alpha: &Point, eps: f64) -> Result<HeightEstimate> {
    let cc = comparison_constant(f)?;
    let d = f.degree() as f64;
    let mut p = alpha.clone();
    let mut scale = 1.0;
    loop {
        let tail = cc.c / ((d - 1.0) * scale);
        if tail <= eps / 2.0 {
            let h = point_height(&p, eps)?;
            let v = h.value / scale;
            return Ok(HeightEstimate::from_bounds(v - tail - h.err / scale, v + tail + h.err / scale));
        }
        if let Point::Quad(e) = &p {
            let bits = e.a().numer().bits() + e.a().denom().bits() + e.b().numer().bits() + e.b().denom().bits();
            if bits > 1 << 20 {
                return Err(Error::PrecisionExhausted { bits: 0, context: "orbit height growth".into() });
            }
        }
        p = evaluate(f, &p)?;
        scale *= d;
    }
}

/// Weil height of a point.
pub(crate) fn point_height(p: &Point, eps: f64) -> Result<HeightEstimate> {
    match p {
        Point::Infinity => Ok(HeightEstimate::zero()),
        Point::Quad(e) => Ok(height_quad(e)),
        Point::Algebraic(a) => height_algebraic(a, eps),
    }
}

/// Cheap exact check: does the orbit close up within a few steps while the
/// points stay small?
fn short_cycle(f: &RationalMap, p: &Point) -> Result<bool> {
    if let Point::Algebraic(_) = p {
        return Ok(false);
    }
    let mut seen = vec![p.clone()];
    for _ in 0..24 {
        let next = evaluate(f, seen.last().expect("nonempty"))?;
        if let Point::Quad(e) = &next {
            let bits = |r: &BigRational| r.numer().bits() + r.denom().bits();
            if bits(e.a()) + bits(e.b()) > 256 {
                return Ok(false);
            }
        }
        for q in &seen {
            if q.eq_exact(&next)? {
                return Ok(true);
            }
        }
        seen.push(next);
    }
    Ok(false)
}

/// `ĥ_f(α)` with `err <= eps`.
pub fn canonical_height(f: &RationalMap, alpha: &Point, eps: f64) -> Result<HeightEstimate> {
    if !(eps > 0.0) {
        return invalid("eps must be positive");
    }
    f.check_point(alpha)?;
    if short_cycle(f, alpha)? {
        return Ok(HeightEstimate::zero());
    }
    let d = f.degree();
    if let Some(int) = f.as_int() {
        return match alpha {
            Point::Infinity => height_from_form(int, d, &[-BigInt::one(), BigInt::zero()], eps),
            Point::Quad(e) if e.is_rational() => {
                let r = e.a();
                height_from_form(int, d, &[-r.numer().clone(), r.denom().clone()], eps)
            }
            Point::Quad(e) => algebraic_height(f, int, &AlgebraicNumber::from_quad(e)?, eps),
            Point::Algebraic(a) => algebraic_height(f, int, a, eps),
        };
    }
    let Point::Quad(e) = alpha else {
        return naive_height(f, alpha, eps);
    };
    if good_reduction_polynomial(f) {
        let h = height_quad(e);
        let (lo, hi) = quad_local_correction(f, e, eps / 2.0)?;
        return Ok(HeightEstimate::from_bounds(h.lo() + lo, h.hi() + hi));
    }
    naive_height(f, alpha, eps)
}

fn algebraic_height(f: &RationalMap, int: &IntRatFunc, a: &AlgebraicNumber, eps: f64) -> Result<HeightEstimate> {
    let d = f.degree();
    if let Some(r) = a.as_rational() {
        return height_from_form(int, d, &[-r.numer().clone(), r.denom().clone()], eps);
    }
    let n = a.degree()?;
    if n > MAX_DIRECT_DEGREE {
        // ĥ(α) = ĥ(f^k α) / d^k; push forward until the degree is small.
        let mut p = Point::Algebraic(a.clone());
        let mut scale = 1.0;
        for _ in 0..16 {
            p = evaluate(f, &p)?;
            scale *= d as f64;
            let small = match &p {
                Point::Algebraic(b) => b.degree()? <= MAX_DIRECT_DEGREE,
                _ => true,
            };
            if small {
                let h = canonical_height(f, &p, eps * scale)?;
                let mut out = h.div(scale);
                out.exact = out.exact && out.value == 0.0;
                return Ok(out);
            }
        }
        return Err(Error::Budget(format!("degree {n} point does not collapse along its orbit")));
    }
    let m = a.minimal_polynomial()?;
    let m = if m.lead().is_negative() { -m } else { m };
    let form: Vec<BigInt> = m.coeffs().to_vec();
    let mut h = height_from_form(int, d, &form, eps)?;
    if !a.min_poly_certified()? {
        h = h.with_note(POSSIBLY_REDUCIBLE);
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::quad;
    use crate::ring::rat;

    fn map(s: &str) -> RationalMap {
        RationalMap::parse(s).unwrap()
    }

    fn q(n: i64, d: i64) -> Point {
        Point::rational(rat(n, d))
    }

    #[test]
    fn comparison_constants() {
        let c = comparison_constant(&map("x^2-2")).unwrap();
        assert!((c.c - 3f64.ln()).abs() < 1e-9);
        assert!(comparison_constant(&map("x^2")).unwrap().c < 1e-9);
        let c = comparison_constant(&map("(x^2-1)/(2x)")).unwrap();
        assert!((c.lower - 3f64.ln()).abs() < 1e-9);
        assert!((c.upper - 2f64.ln()).abs() < 1e-9);
        let c = comparison_constant(&map("x^2-sqrt(5)")).unwrap();
        assert!(c.c > 0.0 && c.c.is_finite());
    }

    #[test]
    fn resultant_of_lift() {
        let f = map("x^2-5/2");
        let (f0, f1) = int_lift(f.as_int().unwrap(), 2);
        assert_eq!(lift_resultant(&f0, &f1), BigInt::from(16));
        let f = map("(x^2-1)/(2x)");
        let (f0, f1) = int_lift(f.as_int().unwrap(), 2);
        assert_eq!(lift_resultant(&f0, &f1), BigInt::from(4));
    }

    #[test]
    fn rational_points() {
        let h = canonical_height(&map("x^2"), &q(3, 1), 1e-10).unwrap();
        assert!(h.contains(3f64.ln()) && h.err <= 1e-10);
        let h = canonical_height(&map("x^2-2"), &q(5, 2), 1e-10).unwrap();
        assert!(h.contains(2.0 * 2f64.ln()), "{h:?}");
        let h = canonical_height(&map("x^2-2"), &q(1, 2), 1e-10).unwrap();
        assert!(h.contains(2f64.ln()), "{h:?}");
        let h = canonical_height(&map("x^2-3"), &q(1, 1), 1e-10).unwrap();
        assert!(h.exact && h.value == 0.0);
        let h = canonical_height(&map("x^2"), &Point::Infinity, 1e-10).unwrap();
        assert_eq!(h.value, 0.0);
    }

    #[test]
    fn bad_reduction_functional_equation() {
        for f in [map("x^2-5/2"), map("(x^2-1)/(2x)"), map("(3x^2+1)/(x^2-4x)")] {
            let x = q(2, 7);
            let fx = evaluate(&f, &x).unwrap();
            let a = canonical_height(&f, &x, 1e-10).unwrap();
            let b = canonical_height(&f, &fx, 1e-10).unwrap();
            assert!((b.value - 2.0 * a.value).abs() <= 3e-10, "{f}: {a:?} {b:?}");
        }
    }

    #[test]
    fn algebraic_points() {
        // z + 1/z with z = φ is √5; ĥ_{T_2}(√5) = 2 h(φ) = log φ.
        let s5 = Point::Quad(quad(5, (0, 1), (1, 1)));
        let h = canonical_height(&map("x^2-2"), &s5, 1e-9).unwrap();
        assert!(h.contains(0.48121182505960347), "{h:?}");
        let phi = Point::parse("root(x^2-x-1, 1, 2)").unwrap();
        let f = map("x^2-5/2");
        let fphi = evaluate(&f, &phi).unwrap();
        let a = canonical_height(&f, &phi, 1e-9).unwrap();
        let b = canonical_height(&f, &fphi, 1e-9).unwrap();
        assert!((b.value - 2.0 * a.value).abs() < 3e-9, "{a:?} {b:?}");
    }

    #[test]
    fn quadratic_field_maps() {
        let f = map("x^2-sqrt(5)");
        let g = super::super::conjugate_map(&f);
        let a = quad(5, (3, 2), (-1, 7));
        let h1 = canonical_height(&f, &Point::Quad(a.clone()), 1e-8).unwrap();
        let h2 = canonical_height(&g, &Point::Quad(a.conj()), 1e-8).unwrap();
        assert!((h1.value - h2.value).abs() <= 2e-8);
        let fa = evaluate(&f, &Point::Quad(a)).unwrap();
        let h3 = canonical_height(&f, &fa, 1e-8).unwrap();
        assert!((h3.value - 2.0 * h1.value).abs() <= 3e-8);
        // Bad reduction over Q(√5): the naive route with a loose tolerance.
        let f = map("x^2-sqrt(5)/2");
        let h = canonical_height(&f, &Point::Quad(quad(5, (1, 1), (1, 1))), 1e-2).unwrap();
        assert!(h.err <= 1e-2);
    }
}
