//! Certificates for whether a Julia set lies in the real line.
//!
//! A non-real repelling periodic point lies in `J(f)`, so it settles the
//! `J ⊄ R` direction. For the other direction a polynomial gets a finite
//! union of closed intervals `S` with `f^{-1}(S) ⊆ S` checked over `C`,
//! together with a real repelling periodic point in `S`: its backward orbit
//! is dense in `J(f)` and stays in `S`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::algebraic::{map_poly, AlgebraicNumber, Selector};
use crate::ball::ComplexBall;
use crate::dynamics::{
    is_preperiodic, quad_poly_roots, to_int_poly, BallPoly, Multiplier, MultiplierClass, Point, RationalMap, DEFAULT_ITERATE_CAP,
};
use crate::error::{invalid, Error, Result};
use crate::poly::{IntPoly, Poly};
use crate::quad::QuadElem;
use crate::ratfunc::IntRatFunc;
use crate::roots::roots_c64;
use crate::sturm::{all_roots_real, isolate_real_roots, refine_interval, Bound, SturmChain};

pub const DEFAULT_DEPTH: usize = 4;
const BURN_IN: usize = 50;
const MAX_CANDIDATE_PAIRS: usize = 96;

fn rat_str<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A closed interval with rational endpoints.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Interval {
    #[serde(serialize_with = "rat_str")]
    pub lo: BigRational,
    #[serde(serialize_with = "rat_str")]
    pub hi: BigRational,
}

/// Sorted, pairwise disjoint closed intervals.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntervalSystem {
    intervals: Vec<Interval>,
}

impl IntervalSystem {
    pub fn new(mut intervals: Vec<(BigRational, BigRational)>) -> Result<Self> {
        if intervals.is_empty() {
            return invalid("interval system must be nonempty");
        }
        if intervals.iter().any(|(lo, hi)| lo > hi) {
            return invalid("interval with lo > hi");
        }
        intervals.sort_by(|a, b| a.0.cmp(&b.0));
        for w in intervals.windows(2) {
            if w[0].1 >= w[1].0 {
                return invalid("intervals must be pairwise disjoint");
            }
        }
        Ok(IntervalSystem { intervals: intervals.into_iter().map(|(lo, hi)| Interval { lo, hi }).collect() })
    }

    pub fn single(lo: BigRational, hi: BigRational) -> Result<Self> {
        Self::new(vec![(lo, hi)])
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn contains_rational(&self, x: &BigRational) -> bool {
        self.intervals.iter().any(|iv| &iv.lo <= x && x <= &iv.hi)
    }

    /// Exact membership of a real algebraic number.
    pub fn contains(&self, a: &AlgebraicNumber) -> Result<bool> {
        if let Some(r) = a.as_rational() {
            return Ok(self.contains_rational(&r));
        }
        let Selector::Interval(lo, hi) = a.selector() else {
            return Ok(false);
        };
        let m = a.poly().squarefree_part()?;
        let chain = SturmChain::new(&m)?;
        let at = |x: &BigRational| Bound::At(x.clone());
        for iv in &self.intervals {
            // The root is the unique root of m in (lo, hi].
            let below_hi = &iv.hi >= hi || (&iv.hi > lo && chain.count_half_open(&at(lo), &at(&iv.hi)) == 1);
            let above_lo = &iv.lo <= lo
                || (&iv.lo <= hi && m.sign_at(&iv.lo) == 0)
                || (&iv.lo <= hi && chain.count_half_open(&at(lo), &at(&iv.lo)) == 0);
            if below_hi && above_lo {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl std::fmt::Display for IntervalSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.intervals.iter().map(|iv| format!("[{}, {}]", iv.lo, iv.hi)).collect();
        write!(f, "{}", parts.join(" ∪ "))
    }
}

/// One recorded check of an interval-invariance proof.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum TraceStep {
    /// Polynomial whose roots include every critical value.
    CriticalValues { polynomial: String, real_roots: usize },
    /// Preimages of a sample value; all must be real.
    Sample {
        #[serde(serialize_with = "rat_str")]
        y: BigRational,
        real_roots: usize,
        degree: usize,
        all_real: bool,
    },
    /// A gap of the complement checked to avoid `f^{-1}` of one interval.
    Gap {
        lo: String,
        hi: String,
        interval: usize,
        crossings: usize,
        #[serde(serialize_with = "rat_str")]
        sample: BigRational,
        #[serde(serialize_with = "rat_str")]
        image: BigRational,
        outside: bool,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct IntervalTrace {
    pub holds: bool,
    pub steps: Vec<TraceStep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

fn int_map(f: &RationalMap) -> Result<&IntRatFunc> {
    f.as_int().ok_or_else(|| Error::Unsupported("this operation needs a map with rational coefficients".into()))
}

/// Whether every solution of `f(x) = y` on the Riemann sphere is real.
pub fn all_preimages_real(f: &RationalMap, y: &BigRational) -> Result<bool> {
    let int = int_map(f)?;
    let p = int.numer_minus(y);
    if p.is_zero() {
        return invalid("f is constant");
    }
    // Missing degree means preimages at infinity, which are real.
    all_roots_real(&p)
}

fn real_roots_count(p: &IntPoly) -> Result<usize> {
    let mut total = 0;
    for (s, k) in p.squarefree_decomposition() {
        total += SturmChain::new(&s)?.count_real() * k as usize;
    }
    Ok(total)
}

fn bound_str(b: &Bound) -> String {
    match b {
        Bound::NegInf => "-inf".into(),
        Bound::PosInf => "inf".into(),
        Bound::At(r) => r.to_string(),
    }
}

/// Roots of a squarefree `p` in the open interval `(lo, hi)`.
fn roots_in_open(chain: &SturmChain, lo: &Bound, hi: &Bound) -> usize {
    let n = chain.count_half_open(lo, hi);
    match hi {
        Bound::At(r) if chain.poly().sign_at(r) == 0 => n.saturating_sub(1),
        _ => n,
    }
}

/// Sample points, one in each component of `(a, b)` minus the roots of `p`.
fn cell_samples(p: &IntPoly, a: &BigRational, b: &BigRational) -> Result<Vec<BigRational>> {
    let two = rat(2);
    let mut inside = Vec::new();
    for iv in isolate_real_roots(p)? {
        let mut iv = iv;
        loop {
            let (lo, hi) = &iv;
            if hi <= a || lo >= b {
                break;
            }
            let holds_a = lo < a && a < hi;
            let holds_b = lo < b && b < hi;
            if holds_a && p.sign_at(a) == 0 || holds_b && p.sign_at(b) == 0 {
                break;
            }
            if !holds_a && !holds_b {
                inside.push(iv);
                break;
            }
            let w = (hi - lo) / &two;
            iv = refine_interval(p, &iv, &w);
        }
    }
    inside.sort_by(|x, y| x.0.cmp(&y.0));
    let mut out = Vec::new();
    let mut left = a.clone();
    for (lo, hi) in &inside {
        out.push(if &left < lo { (&left + lo) / &two } else { lo.clone() });
        left = hi.clone();
    }
    out.push(if &left < b { (&left + b) / &two } else { left });
    Ok(out)
}

/// Decides `f^{-1}(S) ⊆ S` over `C` for a polynomial `f` over `Q`.
pub fn verify_invariant_intervals(f: &RationalMap, s: &IntervalSystem) -> Result<IntervalTrace> {
    let int = int_map(f)?;
    if int.den.deg() > 0 {
        return Err(Error::Unsupported("invariant intervals for non-polynomial maps".into()));
    }
    let mut steps = Vec::new();
    let fail = |steps: Vec<TraceStep>, why: String| Ok(IntervalTrace { holds: false, steps, failure: Some(why) });

    // (1) Every value in S has only real preimages. The number of real
    // preimages is constant between critical values.
    let cv = map_poly(&int.num.derivative(), &int.num, &int.den)?;
    let cv = if cv.is_zero() { cv } else { cv.squarefree_part()? };
    let cv_real = if cv.deg() == 0 { 0 } else { SturmChain::new(&cv)?.count_real() };
    steps.push(TraceStep::CriticalValues { polynomial: cv.to_string(), real_roots: cv_real });
    for iv in s.intervals() {
        let samples = if iv.lo == iv.hi || cv.deg() == 0 {
            vec![iv.lo.clone()]
        } else {
            cell_samples(&cv, &iv.lo, &iv.hi)?
        };
        for y in samples {
            let p = int.numer_minus(&y);
            let real = real_roots_count(&p)?;
            let ok = real == p.deg();
            steps.push(TraceStep::Sample { y: y.clone(), real_roots: real, degree: p.deg(), all_real: ok });
            if !ok {
                return fail(steps, format!("{y} has a non-real preimage"));
            }
        }
    }

    // (2) No real point outside S maps into S.
    let ivs = s.intervals();
    let mut gaps = vec![(Bound::NegInf, Bound::At(ivs[0].lo.clone()))];
    for w in ivs.windows(2) {
        gaps.push((Bound::At(w[0].hi.clone()), Bound::At(w[1].lo.clone())));
    }
    gaps.push((Bound::At(ivs[ivs.len() - 1].hi.clone()), Bound::PosInf));
    for (g_lo, g_hi) in &gaps {
        let sample = match (g_lo, g_hi) {
            (Bound::At(a), Bound::At(b)) => (a + b) / rat(2),
            (Bound::NegInf, Bound::At(b)) => b - rat(1),
            (Bound::At(a), _) => a + rat(1),
            _ => unreachable!("gaps have a finite endpoint"),
        };
        let image = int.num.eval_rat(&sample) / int.den.eval_rat(&sample);
        for (k, iv) in ivs.iter().enumerate() {
            let mut crossings = 0;
            for y in [&iv.lo, &iv.hi] {
                let p = int.numer_minus(y).squarefree_part()?;
                if p.deg() > 0 {
                    crossings += roots_in_open(&SturmChain::new(&p)?, g_lo, g_hi);
                }
            }
            let outside = image < iv.lo || image > iv.hi;
            steps.push(TraceStep::Gap {
                lo: bound_str(g_lo),
                hi: bound_str(g_hi),
                interval: k,
                crossings,
                sample: sample.clone(),
                image: image.clone(),
                outside,
            });
            if crossings > 0 || !outside {
                return fail(
                    steps,
                    format!("points of ({}, {}) map into [{}, {}]", bound_str(g_lo), bound_str(g_hi), iv.lo, iv.hi),
                );
            }
        }
    }
    Ok(IntervalTrace { holds: true, steps, failure: None })
}

/// `(f^n)'(α)` from a ball orbit of `α`, with escalating precision.
pub fn ball_multiplier(f: &RationalMap, alpha: &AlgebraicNumber, n: usize) -> Result<Multiplier> {
    let df = f.ratfunc().derivative();
    let mut eps: f64 = 1e-30;
    let mut last = None;
    for _ in 0..6 {
        let prec = ((-eps.log2()) as u32 + 64).max(128);
        let num = BallPoly::from_quad_poly(f.ratfunc().num(), false, prec);
        let den = BallPoly::from_quad_poly(f.ratfunc().den(), false, prec);
        let dnum = BallPoly::from_quad_poly(df.num(), false, prec);
        let dden = BallPoly::from_quad_poly(df.den(), false, prec);
        let mut z = alpha.enclosure(eps)?.with_prec(prec);
        let mut lam = ComplexBall::from_i64(1, prec);
        let mut ok = true;
        for _ in 0..n {
            match (dnum.eval(&z).div(&dden.eval(&z)), num.eval(&z).div(&den.eval(&z))) {
                (Some(dv), Some(next)) => {
                    lam = lam.mul(&dv);
                    z = next;
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let a2 = lam.mul(&lam.conj());
            let (lo, hi) = (a2.re_f64() - a2.rad, a2.re_f64() + a2.rad);
            let class = if lo > 1.0 {
                MultiplierClass::Repelling
            } else if hi < 1.0 {
                MultiplierClass::Attracting
            } else {
                MultiplierClass::Unresolved
            };
            let out = Multiplier { lambda: lam, abs2_lo: lo.max(0.0), abs2_hi: hi, class };
            if class != MultiplierClass::Unresolved {
                return Ok(out);
            }
            last = Some(out);
        }
        eps *= 1e-20;
    }
    last.ok_or_else(|| Error::PrecisionExhausted { bits: 512, context: "multiplier enclosure".into() })
}

fn divisors(n: usize) -> Vec<usize> {
    (1..n).filter(|m| n % m == 0).collect()
}

/// Numerator of `f^n(x) - x` over the coefficient field.
fn period_poly(f: &RationalMap, n: usize) -> Result<Poly<QuadElem>> {
    let g = f.ratfunc().iterate(n)?;
    Ok(g.num() - &(g.den() * &Poly::x()))
}

/// Finite points of exact period `n`, with multiplicities.
pub fn exact_period_points(f: &RationalMap, n: usize) -> Result<Vec<(AlgebraicNumber, u32)>> {
    let mut phi = period_poly(f, n)?;
    if phi.deg() == 0 {
        return Ok(Vec::new());
    }
    for m in divisors(n) {
        let lower = period_poly(f, m)?;
        loop {
            let g = phi.gcd(&lower);
            if g.deg() == 0 {
                break;
            }
            phi = phi.div_rem(&g).0;
        }
    }
    if phi.deg() == 0 {
        return Ok(Vec::new());
    }
    quad_poly_roots(&phi)
}

fn within_cap(d: usize, n: usize, cap: u64) -> bool {
    (d as u64).checked_pow(n as u32).is_some_and(|v| v <= cap)
}

/// A non-real repelling periodic point.
#[derive(Clone, Debug, Serialize)]
pub struct NonRealWitness {
    pub point: AlgebraicNumber,
    pub period: usize,
    pub multiplier: Multiplier,
}

/// Scans periods `1..=max_period` for a certified non-real repelling
/// periodic point. Stops early at the iterate cap.
pub fn find_nonreal_repelling(f: &RationalMap, max_period: usize, cap: u64) -> Result<Option<NonRealWitness>> {
    for n in 1..=max_period {
        if !within_cap(f.degree(), n, cap) {
            break;
        }
        let mut pts: Vec<AlgebraicNumber> =
            exact_period_points(f, n)?.into_iter().map(|p| p.0).filter(|a| !a.is_real()).collect();
        // Upper half-plane first, for a stable choice among conjugate pairs.
        pts.sort_by_key(|a| a.approx().im < 0.0);
        for a in pts {
            let m = ball_multiplier(f, &a, n)?;
            if m.class == MultiplierClass::Repelling {
                return Ok(Some(NonRealWitness { point: a, period: n, multiplier: m }));
            }
        }
    }
    Ok(None)
}

/// Preimage reality at a rational sample value.
#[derive(Clone, Debug, Serialize)]
pub struct PreimageSample {
    #[serde(serialize_with = "rat_str")]
    pub y: BigRational,
    pub all_real: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum JuliaVerdict {
    NonReal {
        witness: NonRealWitness,
    },
    Real {
        system: IntervalSystem,
        anchor: AlgebraicNumber,
        anchor_period: usize,
        multiplier: Multiplier,
        trace: IntervalTrace,
    },
    Inconclusive {
        depth: usize,
        reason: String,
        samples: Vec<PreimageSample>,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct JuliaRealityCertificate {
    pub map: RationalMap,
    #[serde(flatten)]
    pub verdict: JuliaVerdict,
}

impl JuliaRealityCertificate {
    pub fn is_real(&self) -> bool {
        matches!(self.verdict, JuliaVerdict::Real { .. })
    }

    pub fn is_nonreal(&self) -> bool {
        matches!(self.verdict, JuliaVerdict::NonReal { .. })
    }
}

/// Rational points at or around the real roots of `p`; exact roots go to
/// `exact`, bracketing approximations to `approx`.
fn rational_marks(p: &IntPoly, exact: &mut Vec<BigRational>, approx: &mut Vec<BigRational>) -> Result<()> {
    if p.deg() == 0 {
        return Ok(());
    }
    for (s, _) in p.squarefree_decomposition() {
        if s.deg() == 1 {
            exact.push(BigRational::new(-s.coeff(0), s.coeff(1)));
            continue;
        }
        if s.deg() == 0 {
            continue;
        }
        for iv in isolate_real_roots(&s)? {
            let (lo, hi) = refine_interval(&s, &iv, &BigRational::new(1.into(), 1024.into()));
            approx.push(lo);
            approx.push(hi);
        }
    }
    Ok(())
}

fn symmetric_pairs(marks: &[BigRational]) -> Vec<(BigRational, BigRational)> {
    let mut all: Vec<BigRational> = marks.iter().flat_map(|m| [m.clone(), -m.clone()]).collect();
    all.sort();
    all.dedup();
    let mut pairs = Vec::new();
    for (i, lo) in all.iter().enumerate() {
        for hi in &all[i + 1..] {
            pairs.push((lo.clone(), hi.clone()));
        }
    }
    pairs.sort_by(|a, b| {
        let wa = &a.1 - &a.0;
        let wb = &b.1 - &b.0;
        wa.cmp(&wb).then_with(|| a.0.cmp(&b.0))
    });
    pairs
}

/// Candidate single intervals. Endpoints come from the critical values, the
/// fixed points and the escape radius; exact values are tried first,
/// narrowest first.
fn candidate_intervals(int: &IntRatFunc) -> Result<Vec<(BigRational, BigRational)>> {
    let (mut exact, mut approx) = (Vec::new(), Vec::new());
    let cv = map_poly(&int.num.derivative(), &int.num, &int.den)?;
    rational_marks(&cv, &mut exact, &mut approx)?;
    rational_marks(&int.fixed_point_poly(), &mut exact, &mut approx)?;
    let lead = BigRational::new(int.num.lead(), int.den.lead());
    let escape = int.num.coeffs()[..int.num.deg()]
        .iter()
        .map(|c| BigRational::new(c.abs(), int.den.lead().abs()) / lead.abs())
        .fold(BigRational::one(), |acc, x| acc + x);
    approx.push(escape);
    let mut pairs = symmetric_pairs(&exact);
    let all: Vec<BigRational> = exact.iter().chain(&approx).cloned().collect();
    for p in symmetric_pairs(&all) {
        if !pairs.contains(&p) {
            pairs.push(p);
        }
    }
    pairs.truncate(MAX_CANDIDATE_PAIRS);
    Ok(pairs)
}

/// `numer(f^{k+m}(x) - f^k(x))` for a map over `Q`.
fn preperiodic_numerator(int: &IntRatFunc, k: usize, m: usize) -> IntPoly {
    let g1 = int.iterate(k + m);
    let g0 = int.iterate(k);
    &(&g1.num * &g0.den) - &(&g0.num * &g1.den)
}

/// Every point of period `m` has all of its `k`-th preimages, `k <= depth`,
/// real and inside `S`.
fn backward_orbits_inside(int: &IntRatFunc, s: &IntervalSystem, m: usize, depth: usize) -> Result<bool> {
    for k in 0..=depth {
        let p = preperiodic_numerator(int, k, m);
        if p.is_zero() || !all_roots_real(&p)? {
            return Ok(false);
        }
        let sq = p.squarefree_part()?;
        let chain = SturmChain::new(&sq)?;
        let mut inside = 0;
        for iv in s.intervals() {
            inside += chain.count_half_open(&Bound::At(iv.lo.clone()), &Bound::At(iv.hi.clone()));
            if sq.sign_at(&iv.lo) == 0 {
                inside += 1;
            }
        }
        if inside != chain.count_real() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn real_anchor(f: &RationalMap, s: &IntervalSystem, depth: usize, cap: u64) -> Result<Option<(AlgebraicNumber, usize, Multiplier)>> {
    for n in 1..=depth.max(1) {
        if !within_cap(f.degree(), n, cap) {
            break;
        }
        let mut pts: Vec<AlgebraicNumber> =
            exact_period_points(f, n)?.into_iter().map(|p| p.0).filter(|a| a.is_real()).collect();
        pts.sort_by(|a, b| b.approx().re.partial_cmp(&a.approx().re).unwrap_or(Ordering::Equal));
        for a in pts {
            if !s.contains(&a)? {
                continue;
            }
            let m = ball_multiplier(f, &a, n)?;
            if m.class == MultiplierClass::Repelling {
                return Ok(Some((a, n, m)));
            }
        }
    }
    Ok(None)
}

fn default_samples(f: &RationalMap) -> Result<Vec<PreimageSample>> {
    let mut out = Vec::new();
    if f.as_int().is_none() {
        return Ok(out);
    }
    for k in -4..=4 {
        let y = BigRational::new(k.into(), 2.into());
        out.push(PreimageSample { all_real: all_preimages_real(f, &y)?, y });
    }
    Ok(out)
}

/// Real, NonReal or Inconclusive, searching periods up to `depth`.
pub fn certify_reality(f: &RationalMap, depth: usize) -> Result<JuliaRealityCertificate> {
    certify_reality_capped(f, depth, DEFAULT_ITERATE_CAP)
}

pub fn certify_reality_capped(f: &RationalMap, depth: usize, cap: u64) -> Result<JuliaRealityCertificate> {
    let wrap = |verdict| Ok(JuliaRealityCertificate { map: f.clone(), verdict });
    if let Some(w) = find_nonreal_repelling(f, depth, cap)? {
        return wrap(JuliaVerdict::NonReal { witness: w });
    }
    let Some(int) = f.as_int() else {
        return wrap(JuliaVerdict::Inconclusive {
            depth,
            reason: "real certificates need rational coefficients".into(),
            samples: Vec::new(),
        });
    };
    if int.den.deg() > 0 {
        return wrap(JuliaVerdict::Inconclusive {
            depth,
            reason: "no finite reality certificate for non-polynomial maps".into(),
            samples: default_samples(f)?,
        });
    }
    for (lo, hi) in candidate_intervals(int)? {
        let system = IntervalSystem::single(lo, hi)?;
        let trace = verify_invariant_intervals(f, &system)?;
        if !trace.holds {
            continue;
        }
        if let Some((anchor, anchor_period, multiplier)) = real_anchor(f, &system, depth, cap)? {
            return wrap(JuliaVerdict::Real { system, anchor, anchor_period, multiplier, trace });
        }
    }
    wrap(JuliaVerdict::Inconclusive {
        depth,
        reason: "no non-real repelling point and no invariant interval found".into(),
        samples: default_samples(f)?,
    })
}

/// Re-checks a certificate from scratch.
pub fn verify_certificate(cert: &JuliaRealityCertificate) -> Result<bool> {
    let f = &cert.map;
    match &cert.verdict {
        JuliaVerdict::NonReal { witness } => verify_nonreal_witness(f, witness),
        JuliaVerdict::Real { system, anchor, anchor_period, .. } => {
            let int = int_map(f)?;
            if !verify_invariant_intervals(f, system)?.holds {
                return Ok(false);
            }
            if !anchor.is_real() || !system.contains(anchor)? {
                return Ok(false);
            }
            let phi = int.iterate(*anchor_period).fixed_point_poly();
            if !anchor.is_root_of(&phi)? {
                return Ok(false);
            }
            if ball_multiplier(f, anchor, *anchor_period)?.class != MultiplierClass::Repelling {
                return Ok(false);
            }
            let depth = (0..=3).rev().find(|k| within_cap(f.degree(), anchor_period + k, 4096)).unwrap_or(0);
            backward_orbits_inside(int, system, *anchor_period, depth)
        }
        JuliaVerdict::Inconclusive { .. } => Ok(true),
    }
}

fn verify_nonreal_witness(f: &RationalMap, w: &NonRealWitness) -> Result<bool> {
    let a = &w.point;
    let z = a.enclosure(1e-30)?;
    if a.is_real() || !z.im_excludes_zero() {
        return Ok(false);
    }
    // Periodic: a root of f^n(x) - x that is no root of f^m(x) - x, m | n.
    let on_cycle = |n: usize| -> Result<Option<bool>> {
        let phi = period_poly(f, n)?;
        if phi.coeffs().iter().all(|c| c.is_rational()) {
            return Ok(Some(a.is_root_of(&to_int_poly(&phi))?));
        }
        let prec = 512;
        let zz = a.enclosure(1e-120)?.with_prec(prec);
        let here = BallPoly::from_quad_poly(&phi, false, prec).eval(&zz).contains_zero();
        let there = BallPoly::from_quad_poly(&phi, true, prec).eval(&zz).contains_zero();
        let norm_root = {
            let sg = phi.map(|c| c.conj());
            a.is_root_of(&to_int_poly(&(&phi * &sg)))?
        };
        Ok(match (norm_root, here, there) {
            (false, _, _) => Some(false),
            (true, _, false) => Some(true),
            (true, false, _) => Some(false),
            _ => None,
        })
    };
    if on_cycle(w.period)? != Some(true) {
        return Ok(false);
    }
    for m in divisors(w.period) {
        if on_cycle(m)? != Some(false) {
            return Ok(false);
        }
    }
    Ok(ball_multiplier(f, a, w.period)?.class == MultiplierClass::Repelling)
}

/// Outcome of the exact classification of `x^2 - c` for real `c`.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum QuadraticVerdict {
    /// `c >= 2`: `[-c, c]` is backward invariant and holds the repelling
    /// fixed point `(1 + √(4c+1))/2`.
    Real {
        interval: [String; 2],
        anchor: AlgebraicNumber,
        multiplier: Multiplier,
        #[serde(skip_serializing_if = "Option::is_none")]
        trace: Option<IntervalTrace>,
    },
    /// `c < 2`: `√(c - 1/2 - √(4c+1)/2)` is a non-real preperiodic point.
    NonReal {
        witness: AlgebraicNumber,
        witness_polynomial: String,
        tail: usize,
        period: usize,
        identity_checked: bool,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadraticClassification {
    pub c: String,
    #[serde(flatten)]
    pub verdict: QuadraticVerdict,
}

impl QuadraticClassification {
    pub fn is_real(&self) -> bool {
        matches!(self.verdict, QuadraticVerdict::Real { .. })
    }
}

pub fn classify_quadratic(c: &QuadElem) -> Result<QuadraticClassification> {
    if !c.is_real() {
        return invalid("classify_quadratic needs a real parameter");
    }
    let f = RationalMap::quadratic(c)?;
    let q = |n: i64| QuadElem::rational(rat(n)).in_field(c.d());
    let two = q(2);
    let verdict = if crate::ring::OrderedField::sign(&(c.clone() - &two)) >= 0 {
        let fixed = Poly::new(vec![-c.clone(), q(-1), q(1)]);
        let anchor = quad_poly_roots(&fixed)?
            .into_iter()
            .map(|r| r.0)
            .filter(|a| a.is_real())
            .max_by(|a, b| a.approx().re.partial_cmp(&b.approx().re).unwrap_or(Ordering::Equal))
            .ok_or_else(|| Error::InvalidArgument("no real fixed point".into()))?;
        let multiplier = ball_multiplier(&f, &anchor, 1)?;
        let trace = match c.to_rational() {
            Some(r) => Some(verify_invariant_intervals(&f, &IntervalSystem::single(-r.clone(), r)?)?),
            None => None,
        };
        QuadraticVerdict::Real { interval: [(-c.clone()).to_string(), c.to_string()], anchor, multiplier, trace }
    } else {
        // w^4 + (1 - 2c) w^2 + c^2 - 2c, with w^2 = c - 1/2 - √(4c+1)/2.
        let one = q(1);
        let wpoly = Poly::new(vec![
            c.clone() * c - &(c.clone() * &two),
            q(0),
            one.clone() - &(c.clone() * &two),
            q(0),
            one,
        ]);
        let mut roots: Vec<AlgebraicNumber> =
            quad_poly_roots(&wpoly)?.into_iter().map(|r| r.0).filter(|a| !a.is_real()).collect();
        let key = |a: &AlgebraicNumber| {
            let z = a.approx();
            ((z * z).re, z.im < 0.0)
        };
        roots.sort_by(|a, b| {
            let (ka, kb) = (key(a), key(b));
            ka.0.partial_cmp(&kb.0).unwrap_or(Ordering::Equal).then(ka.1.cmp(&kb.1))
        });
        let witness = roots.into_iter().next().ok_or_else(|| Error::InvalidArgument("no non-real witness".into()))?;
        // f^3(w) = f^2(w): the witness polynomial divides numer(f^3 - f^2).
        let g3 = f.ratfunc().iterate(3)?;
        let g2 = f.ratfunc().iterate(2)?;
        let numer = g3.num() - g2.num();
        let divides = numer.rem(&wpoly).is_zero();
        let (tail, period, exact) = if f.as_int().is_some() {
            let v = is_preperiodic(&f, &Point::Algebraic(witness.clone()))?;
            match v.verdict {
                crate::dynamics::Verdict::Preperiodic { tail, period } => (tail, period, v.identity_checked),
                _ => return Err(Error::InvalidArgument("witness is not preperiodic".into())),
            }
        } else {
            (2, 1, divides)
        };
        if !divides {
            return Err(Error::InvalidArgument("witness identity fails".into()));
        }
        QuadraticVerdict::NonReal {
            witness,
            witness_polynomial: poly_string(&wpoly),
            tail,
            period,
            identity_checked: exact && divides,
        }
    };
    Ok(QuadraticClassification { c: c.to_string(), verdict })
}

fn poly_string(p: &Poly<QuadElem>) -> String {
    let num = RationalMap::new(p.clone(), Poly::one(), p.coeffs().iter().map(|c| c.d()).max().unwrap_or(0));
    match num {
        Ok(m) => m.to_string(),
        Err(_) => format!("{:?}", p.coeffs()),
    }
}

const GENERIC_START: f64 = 0.318_309_886_183_790_7;

/// Inverse-iteration sample of the canonical measure: a random walk through
/// uniformly chosen preimages, started at a repelling fixed point.
pub fn sample_invariant_measure(f: &RationalMap, n: usize, seed: u64) -> Result<Vec<Complex64>> {
    if n == 0 {
        return invalid("sample count must be positive");
    }
    let emb = |p: &Poly<QuadElem>| -> Vec<Complex64> {
        p.coeffs()
            .iter()
            .map(|c| {
                let (re, im) = c.to_complex_f64();
                Complex64::new(re, im)
            })
            .collect()
    };
    let num = emb(f.ratfunc().num());
    let den = emb(f.ratfunc().den());
    let d = f.degree();
    let eval = |p: &[Complex64], z: Complex64| p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
    let deriv = |p: &[Complex64]| -> Vec<Complex64> {
        p.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect()
    };
    let (dn, dd) = (deriv(&num), deriv(&den));
    let combo = |a: &[Complex64], b: &[Complex64], w: Complex64| -> Vec<Complex64> {
        (0..=d)
            .map(|k| a.get(k).copied().unwrap_or_default() - w * b.get(k).copied().unwrap_or_default())
            .collect()
    };
    // Start at the most repelling fixed point.
    let mut xz = Complex64::new(0.0, 0.0);
    let fixed = {
        let mut c = combo(&num, &[], Complex64::new(0.0, 0.0));
        for (k, b) in den.iter().enumerate() {
            if k + 1 <= d {
                c[k + 1] -= b;
            } else {
                c.push(-b);
            }
        }
        roots_c64(&c)
    };
    let mut best = -1.0;
    for z in fixed {
        let q = eval(&den, z);
        if q.norm() == 0.0 {
            continue;
        }
        let lam = (eval(&dn, z) * q - eval(&num, z) * eval(&dd, z)) / (q * q);
        if lam.norm() > best {
            best = lam.norm();
            xz = z;
        }
    }
    // No repelling finite fixed point: any non-exceptional start works, and
    // its backward orbit accumulates on the Julia set.
    if best <= 1.0 {
        xz = Complex64::new(GENERIC_START, 0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for step in 0..(n + BURN_IN) {
        let pre = roots_c64(&combo(&num, &den, xz));
        let finite: Vec<Complex64> = pre.into_iter().filter(|z| z.re.is_finite() && z.im.is_finite()).collect();
        if !finite.is_empty() {
            xz = finite[rng.gen_range(0..finite.len())];
        }
        if step >= BURN_IN {
            out.push(xz);
        }
    }
    Ok(out)
}

/// Chordal distance on the Riemann sphere; `None` is infinity.
pub fn chordal_distance(z: Option<Complex64>, w: Option<Complex64>) -> f64 {
    match (z, w) {
        (None, None) => 0.0,
        (Some(a), None) | (None, Some(a)) => 1.0 / (1.0 + a.norm_sqr()).sqrt(),
        (Some(a), Some(b)) => (a - b).norm() / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt()),
    }
}

/// Whether every root of the real polynomial lies in `[lo, hi]`, exact.
pub fn roots_within(p: &IntPoly, lo: &BigRational, hi: &BigRational) -> Result<bool> {
    let sq = p.squarefree_part()?;
    let chain = SturmChain::new(&sq)?;
    let inside = chain.count_half_open(&Bound::At(lo.clone()), &Bound::At(hi.clone())) + usize::from(sq.sign_at(lo) == 0);
    Ok(inside == sq.deg())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::quad;
    use crate::ring::rat as r;

    fn map(s: &str) -> RationalMap {
        RationalMap::parse(s).unwrap()
    }

    #[test]
    fn preimage_reality() {
        assert!(all_preimages_real(&map("x^2-2"), &r(0, 1)).unwrap());
        assert!(!all_preimages_real(&map("x^2"), &r(-1, 1)).unwrap());
        assert!(all_preimages_real(&map("(x^2-1)/(2x)"), &r(2, 1)).unwrap());
    }

    #[test]
    fn invariant_intervals() {
        let s = |a: i64, b: i64| IntervalSystem::single(r(a, 1), r(b, 1)).unwrap();
        assert!(verify_invariant_intervals(&map("x^2-2"), &s(-2, 2)).unwrap().holds);
        assert!(!verify_invariant_intervals(&map("x^2"), &s(-1, 1)).unwrap().holds);
        assert!(verify_invariant_intervals(&map("x^2-3"), &s(-3, 3)).unwrap().holds);
        assert!(!verify_invariant_intervals(&map("x^2-3"), &s(-4, 4)).unwrap().holds);
        assert!(!verify_invariant_intervals(&map("x^2-3"), &s(-2, 2)).unwrap().holds);
        assert!(verify_invariant_intervals(&map("x^3-3x"), &s(-2, 2)).unwrap().holds);
        let two = IntervalSystem::new(vec![(r(-3, 1), r(-1, 1)), (r(1, 1), r(3, 1))]).unwrap();
        assert!(!verify_invariant_intervals(&map("x^2-3"), &two).unwrap().holds);
        assert!(IntervalSystem::new(vec![(r(0, 1), r(2, 1)), (r(1, 1), r(3, 1))]).is_err());
    }

    #[test]
    fn system_membership() {
        let s = IntervalSystem::single(r(-2, 1), r(2, 1)).unwrap();
        let phi = AlgebraicNumber::from_poly_root(&IntPoly::from_i64s(&[-1, -1, 1]), Selector::Interval(r(1, 1), r(2, 1))).unwrap();
        assert!(s.contains(&phi).unwrap());
        let s = IntervalSystem::single(r(-1, 1), r(3, 2)).unwrap();
        assert!(!s.contains(&phi).unwrap());
        let s = IntervalSystem::single(r(17, 10), r(3, 1)).unwrap();
        assert!(!s.contains(&phi).unwrap());
    }

    #[test]
    fn nonreal_witnesses() {
        let w = find_nonreal_repelling(&map("x^2"), 2, 256).unwrap().unwrap();
        assert_eq!(w.period, 2);
        assert!((w.multiplier.abs2_lo - 16.0).abs() < 1e-6);
        assert!(find_nonreal_repelling(&map("x^2-1"), 3, 256).unwrap().is_some());
        assert!(find_nonreal_repelling(&map("x^2-2"), 4, 256).unwrap().is_none());
        let w = find_nonreal_repelling(&map("x^2+sqrt(5)"), 2, 256).unwrap().unwrap();
        assert_eq!(w.period, 1);
        assert!(verify_nonreal_witness(&map("x^2+sqrt(5)"), &w).unwrap());
    }

    #[test]
    fn reality_certificates() {
        let c = certify_reality(&map("x^2-5/2"), 3).unwrap();
        match &c.verdict {
            JuliaVerdict::Real { system, anchor, .. } => {
                assert_eq!(system.intervals()[0].hi, r(5, 2));
                assert!((anchor.approx().re - 2.158312395177700).abs() < 1e-9);
            }
            v => panic!("{v:?}"),
        }
        assert!(verify_certificate(&c).unwrap());
        let c = certify_reality(&map("x^2-1"), 3).unwrap();
        assert!(c.is_nonreal() && verify_certificate(&c).unwrap());
        let c = certify_reality(&map("(x^2-1)/(2x)"), 3).unwrap();
        assert!(matches!(c.verdict, JuliaVerdict::Inconclusive { .. }));
        let c = certify_reality(&map("x^2-2"), 3).unwrap();
        assert!(c.is_real() && verify_certificate(&c).unwrap());
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(json["verdict"], "real");
    }

    #[test]
    fn quadratic_family() {
        for (c, real) in [(-1, false), (0, false), (1, false), (2, true), (3, true)] {
            let v = classify_quadratic(&QuadElem::rational(r(c, 1))).unwrap();
            assert_eq!(v.is_real(), real, "c = {c}");
        }
        assert!(!classify_quadratic(&QuadElem::rational(r(3, 2))).unwrap().is_real());
        assert!(classify_quadratic(&QuadElem::rational(r(5, 2))).unwrap().is_real());
        let v = classify_quadratic(&QuadElem::rational(r(1, 1))).unwrap();
        match v.verdict {
            QuadraticVerdict::NonReal { witness, tail, period, identity_checked, .. } => {
                let z = witness.approx();
                let expect = ((5f64.sqrt() - 1.0) / 2.0).sqrt();
                assert!(z.re.abs() < 1e-12 && (z.im.abs() - expect).abs() < 1e-12);
                assert_eq!((tail, period), (2, 1));
                assert!(identity_checked);
            }
            other => panic!("{other:?}"),
        }
        assert!(classify_quadratic(&quad(5, (0, 1), (1, 1))).unwrap().is_real());
        assert!(!classify_quadratic(&quad(5, (0, 1), (-1, 1))).unwrap().is_real());
        assert!(classify_quadratic(&quad(-1, (0, 1), (1, 1))).is_err());
    }

    #[test]
    fn sampler_and_metric() {
        let s = sample_invariant_measure(&map("x^2"), 500, 7).unwrap();
        assert!(s.iter().all(|z| (z.norm() - 1.0).abs() < 1e-6));
        let s = sample_invariant_measure(&map("x^2-2"), 500, 7).unwrap();
        assert!(s.iter().all(|z| z.re.abs() <= 2.0 + 1e-9 && z.im.abs() < 1e-6));
        assert_eq!(s, sample_invariant_measure(&map("x^2-2"), 500, 7).unwrap());
        let o = Some(Complex64::new(0.0, 0.0));
        assert!((chordal_distance(o, None) - 1.0).abs() < 1e-15);
        let one = Some(Complex64::new(1.0, 0.0));
        let m1 = Some(Complex64::new(-1.0, 0.0));
        assert!((chordal_distance(one, m1) - 1.0).abs() < 1e-15);
        assert_eq!(chordal_distance(one, one), 0.0);
    }
}
