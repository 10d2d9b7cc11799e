//! Rational maps of degree at least two over `Q` or `Q(√D)` acting on the
//! projective line.

mod canonical;
mod embed;
mod preper;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebraic::{roots_with_multiplicity, AlgebraicNumber, Rect, Selector};
use crate::ball::ComplexBall;
use crate::error::{invalid, Error, Result};
use crate::parse::{parse_constant, parse_poly, parse_ratfunc, parse_rational, split_args};
use crate::poly::{IntPoly, Poly};
use crate::quad::{is_valid_discriminant, QuadElem};
use crate::ratfunc::{IntRatFunc, RatFunc};

pub use canonical::{canonical_height, comparison_constant, ComparisonConstant};
pub use embed::BallPoly;
pub(crate) use embed::to_int_poly;
pub use preper::{is_preperiodic, verify_preperiodic, PreperiodicityVerdict, Verdict};

/// Default cap on `d^n` for iterated polynomials.
pub const DEFAULT_ITERATE_CAP: u64 = 256;

/// A point of the projective line over `Q`, `Q(√D)` or the algebraic
/// numbers.
#[derive(Clone, Debug)]
pub enum Point {
    Infinity,
    Quad(QuadElem),
    Algebraic(AlgebraicNumber),
}

impl Point {
    pub fn rational(r: BigRational) -> Self {
        Point::Quad(QuadElem::rational(r))
    }

    pub fn int(n: i64) -> Self {
        Point::Quad(QuadElem::from(n))
    }

    /// Wrap an algebraic number, demoting rationals to the exact carrier.
    pub fn algebraic(a: AlgebraicNumber) -> Self {
        match a.as_rational() {
            Some(r) => Point::rational(r),
            None => Point::Algebraic(a),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Point::Quad(e) => e.to_rational(),
            Point::Algebraic(a) => a.as_rational(),
            Point::Infinity => None,
        }
    }

    /// Field discriminant of a quadratic point (`0` for rationals).
    pub fn field(&self) -> i64 {
        match self {
            Point::Quad(e) if !e.is_rational() => e.d(),
            _ => 0,
        }
    }

    /// The point as an algebraic number; `None` for infinity.
    pub fn to_algebraic(&self) -> Result<Option<AlgebraicNumber>> {
        Ok(match self {
            Point::Infinity => None,
            Point::Quad(e) => Some(AlgebraicNumber::from_quad(e)?),
            Point::Algebraic(a) => Some(a.clone()),
        })
    }

    /// Complex approximation; `None` for infinity.
    pub fn approx(&self) -> Option<(f64, f64)> {
        match self {
            Point::Infinity => None,
            Point::Quad(e) => Some(e.to_complex_f64()),
            Point::Algebraic(a) => {
                let z = a.approx();
                Some((z.re, z.im))
            }
        }
    }

    /// Ball enclosure with radius at most `eps`; `None` for infinity.
    pub fn enclosure(&self, eps: f64) -> Result<Option<ComplexBall>> {
        let prec = ((-eps.log2()).max(0.0) as u32 + 64).max(128);
        Ok(match self {
            Point::Infinity => None,
            Point::Quad(e) => Some(ComplexBall::from_quad(e, prec)),
            Point::Algebraic(a) => Some(a.enclosure(eps)?),
        })
    }

    /// Exact equality.
    pub fn eq_exact(&self, other: &Point) -> Result<bool> {
        match (self, other) {
            (Point::Infinity, Point::Infinity) => Ok(true),
            (Point::Infinity, _) | (_, Point::Infinity) => Ok(false),
            (Point::Quad(a), Point::Quad(b)) => Ok(a == b),
            _ => {
                if let (Some(x), Some(y)) = (self.approx(), other.approx()) {
                    if (x.0 - y.0).hypot(x.1 - y.1) > 1e-6 * (1.0 + x.0.hypot(x.1)) {
                        return Ok(false);
                    }
                }
                let a = self.to_algebraic()?.expect("finite");
                let b = other.to_algebraic()?.expect("finite");
                a.eq_exact(&b)
            }
        }
    }

    /// Parse `inf`, a constant expression such as `(1+sqrt(5))/2`, or
    /// `root(poly, lo, hi)` / `root(poly, re_lo, re_hi, im_lo, im_hi)`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if matches!(t, "inf" | "infinity" | "oo" | "∞") {
            return Ok(Point::Infinity);
        }
        if let Some(inner) = t.strip_prefix("root(").and_then(|r| r.strip_suffix(')')) {
            let args = split_args(inner);
            let p = parse_poly(args[0])?;
            let rat = |i: usize| parse_rational(args[i]);
            let sel = match args.len() {
                3 => Selector::Interval(rat(1)?, rat(2)?),
                5 => Selector::Rect(Rect { re_lo: rat(1)?, re_hi: rat(2)?, im_lo: rat(3)?, im_hi: rat(4)? }),
                _ => return Err(Error::Parse("root() takes a polynomial and 2 or 4 bounds".into())),
            };
            return Ok(Point::algebraic(AlgebraicNumber::from_poly_root(&p, sel)?));
        }
        Ok(Point::Quad(parse_constant(t)?))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "inf"),
            Point::Quad(e) => write!(f, "{e}"),
            Point::Algebraic(a) => write!(f, "{a}"),
        }
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Point::Algebraic(a) => a.serialize(s),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

/// A rational map `P/Q` of degree `d >= 2`, with coprime parts and a monic
/// denominator.
#[derive(Clone, Debug)]
pub struct RationalMap {
    f: RatFunc<QuadElem>,
    field: i64,
    int: Option<IntRatFunc>,
}

impl RationalMap {
    /// Build a map over `Q(√field)` (`field = 0` for `Q`).
    pub fn new(num: Poly<QuadElem>, den: Poly<QuadElem>, field: i64) -> Result<Self> {
        if field != 0 && !is_valid_discriminant(field) {
            return invalid(format!("{field} is not a valid field discriminant"));
        }
        let mut d = field;
        for c in num.coeffs().iter().chain(den.coeffs()) {
            if !c.is_rational() {
                if d != 0 && d != c.d() {
                    return invalid(format!("coefficient {c} does not lie in Q(sqrt {d})"));
                }
                d = c.d();
            }
        }
        let attach = |p: &Poly<QuadElem>| p.map(|c| if d != 0 { c.clone().in_field(d) } else { c.clone() });
        let f = RatFunc::new(attach(&num), attach(&den))?;
        if f.degree() < 2 {
            return invalid("maps must have degree at least 2");
        }
        let rational = f.num().coeffs().iter().chain(f.den().coeffs()).all(|c| c.is_rational());
        let int = rational.then(|| {
            IntRatFunc::from_rat(&f.map_coeffs(|c| c.to_rational().expect("rational coefficient")))
        });
        Ok(RationalMap { f, field: d, int })
    }

    /// A map over `Q` from integer polynomials.
    pub fn from_int(num: &IntPoly, den: &IntPoly) -> Result<Self> {
        let lift = |p: &IntPoly| p.map(|c| QuadElem::rational(BigRational::from_integer(c.clone())));
        RationalMap::new(lift(num), lift(den), 0)
    }

    /// The polynomial map `p` over `Q`.
    pub fn polynomial(p: &IntPoly) -> Result<Self> {
        RationalMap::from_int(p, &Poly::one())
    }

    /// `x^2 - c`.
    pub fn quadratic(c: &QuadElem) -> Result<Self> {
        let num = Poly::new(vec![-c.clone(), QuadElem::zero(), QuadElem::one()]);
        RationalMap::new(num, Poly::one(), c.d())
    }

    pub fn parse(s: &str) -> Result<Self> {
        RationalMap::parse_in_field(s, 0)
    }

    /// Parse a map and attach it to `Q(√field)`.
    pub fn parse_in_field(s: &str, field: i64) -> Result<Self> {
        let (f, d) = parse_ratfunc(s)?;
        if field != 0 && d != 0 && d != field {
            return invalid(format!("`{s}` does not lie in Q(sqrt {field})"));
        }
        RationalMap::new(f.num().clone(), f.den().clone(), if field != 0 { field } else { d })
    }

    pub fn degree(&self) -> usize {
        self.f.degree()
    }

    /// Discriminant of the coefficient field, `0` for `Q`.
    pub fn field(&self) -> i64 {
        self.field
    }

    pub fn ratfunc(&self) -> &RatFunc<QuadElem> {
        &self.f
    }

    /// Integer form of a map with rational coefficients.
    pub fn as_int(&self) -> Option<&IntRatFunc> {
        self.int.as_ref()
    }

    pub fn is_polynomial(&self) -> bool {
        self.f.is_polynomial()
    }

    /// Every coefficient is rational (the field may still be quadratic).
    pub fn has_rational_coefficients(&self) -> bool {
        self.int.is_some()
    }

    /// Every coefficient is real under the embedding `√D > 0`.
    pub fn has_real_coefficients(&self) -> bool {
        self.field > 0 || self.int.is_some()
    }

    fn field_name(&self) -> String {
        if self.field == 0 {
            "Q".into()
        } else {
            format!("Q(sqrt {})", self.field)
        }
    }

    fn num_string(&self) -> String {
        match &self.int {
            Some(i) => i.num.to_string(),
            None => self.f.num().to_string(),
        }
    }

    fn den_string(&self) -> String {
        match &self.int {
            Some(i) => i.den.to_string(),
            None => self.f.den().to_string(),
        }
    }

    /// Whether `x` lies in a field the map can act on exactly.
    fn check_point(&self, x: &Point) -> Result<()> {
        let d = x.field();
        if d != 0 && self.int.is_none() && d != self.field {
            return invalid(format!("point {x} does not lie in Q(sqrt {})", self.field));
        }
        if let Point::Algebraic(_) = x {
            if self.int.is_none() {
                return Err(Error::Unsupported(
                    "algebraic points of degree above 2 require a map with rational coefficients".into(),
                ));
            }
        }
        Ok(())
    }
}

impl PartialEq for RationalMap {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.f == other.f
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.f.is_polynomial() && self.int.as_ref().map_or(true, |i| i.den == IntPoly::one()) {
            write!(f, "{}", self.num_string())
        } else {
            write!(f, "({})/({})", self.num_string(), self.den_string())
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MapJson {
    num: String,
    den: String,
    field: String,
}

impl Serialize for RationalMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MapJson { num: self.num_string(), den: self.den_string(), field: self.field_name() }.serialize(s)
    }
}

/// Parse `"Q"` or `"Q(sqrt D)"`.
pub fn parse_field(s: &str) -> Result<i64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t == "Q" {
        return Ok(0);
    }
    let inner = t
        .strip_prefix("Q(sqrt")
        .and_then(|r| r.strip_suffix(')'))
        .map(|r| r.trim_start_matches('(').trim_end_matches(')'))
        .ok_or_else(|| Error::Parse(format!("unknown field `{s}`")))?;
    let d: i64 = inner.parse().map_err(|_| Error::Parse(format!("unknown field `{s}`")))?;
    if !is_valid_discriminant(d) {
        return Err(Error::Parse(format!("{d} is not a squarefree integer other than 0 and 1")));
    }
    Ok(d)
}

impl<'de> Deserialize<'de> for RationalMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = MapJson::deserialize(d)?;
        let field = parse_field(&j.field).map_err(D::Error::custom)?;
        let text = format!("({})/({})", j.num, j.den);
        RationalMap::parse_in_field(&text, field).map_err(D::Error::custom)
    }
}

/// `f(x)`, exactly.
pub fn evaluate(f: &RationalMap, x: &Point) -> Result<Point> {
    f.check_point(x)?;
    match x {
        Point::Infinity => Ok(match f.f.eval_inf() {
            None => Point::Infinity,
            Some(v) => Point::Quad(v),
        }),
        Point::Quad(e) => Ok(match f.f.eval(e) {
            None => Point::Infinity,
            Some(v) => Point::Quad(v),
        }),
        Point::Algebraic(a) => {
            let int = f.int.as_ref().expect("checked");
            Ok(match a.apply_map(int)? {
                None => Point::Infinity,
                Some(b) => Point::algebraic(b),
            })
        }
    }
}

/// Forward orbit `[x0, f(x0), ..., f^n(x0)]`, stopped at the first repeat.
#[derive(Clone, Debug, Serialize)]
pub struct Orbit {
    pub points: Vec<Point>,
    /// `(i, j)` with `i < j` and `points[j] == points[i]`, `j` the last index.
    pub repeat: Option<(usize, usize)>,
}

pub fn iterate(f: &RationalMap, x0: &Point, n: usize) -> Result<Orbit> {
    let mut points = vec![x0.clone()];
    for _ in 0..n {
        let next = evaluate(f, points.last().expect("nonempty"))?;
        for (i, p) in points.iter().enumerate() {
            if p.eq_exact(&next)? {
                points.push(next);
                let j = points.len() - 1;
                return Ok(Orbit { points, repeat: Some((i, j)) });
            }
        }
        points.push(next);
    }
    Ok(Orbit { points, repeat: None })
}

fn check_cap(d: usize, n: usize, cap: u64) -> Result<()> {
    let mut acc: u64 = 1;
    for _ in 0..n {
        acc = acc.saturating_mul(d as u64);
        if acc > cap {
            return Err(Error::Budget(format!("degree {d}^{n} exceeds the iterate cap {cap}")));
        }
    }
    Ok(())
}

/// Numerator of `f^n(x) - β` over the coefficient field, or the
/// denominator of `f^n` when `β` is infinity.
fn iterate_numerator(f: &RationalMap, n: usize, beta: &Point) -> Result<Poly<QuadElem>> {
    let g = f.f.iterate(n)?;
    Ok(match beta {
        Point::Infinity => g.den().clone(),
        Point::Quad(b) => g.num() - &g.den().scale(b),
        Point::Algebraic(_) => return Err(Error::Unsupported("algebraic targets".into())),
    })
}

/// Roots of a polynomial over `Q(√D)` with multiplicities, as algebraic
/// numbers under the embedding `√D > 0` (or `i√|D|`).
pub fn quad_poly_roots(g: &Poly<QuadElem>) -> Result<Vec<(AlgebraicNumber, u32)>> {
    if g.is_zero() {
        return invalid("zero polynomial has no root list");
    }
    if g.coeffs().iter().all(|c| c.is_rational()) {
        let p = embed::to_int_poly(g);
        if p.deg() == 0 {
            return Ok(Vec::new());
        }
        return roots_with_multiplicity(&p);
    }
    let sg = g.map(|c| c.conj());
    let norm = embed::to_int_poly(&(g * &sg));
    let bg = BallPoly::from_quad_poly(g, false, 256);
    let bs = BallPoly::from_quad_poly(g, true, 256);
    let mut out = Vec::new();
    for (a, m) in roots_with_multiplicity(&norm)? {
        let mut eps = 1e-20;
        loop {
            let z = a.enclosure(eps)?;
            let prec = z.prec().max(128);
            let in_g = !bg.with_prec(prec).eval(&z).contains_zero();
            let in_s = !bs.with_prec(prec).eval(&z).contains_zero();
            match (in_g, in_s) {
                (true, _) => break,
                (false, true) => {
                    out.push((a, m));
                    break;
                }
                (false, false) => {
                    if eps < 1e-200 {
                        // A root of both g and its conjugate.
                        out.push((a, m.div_ceil(2)));
                        break;
                    }
                    eps *= 1e-30;
                }
            }
        }
    }
    Ok(out)
}

/// Points of period dividing `n`, with multiplicities.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodicPoints {
    pub points: Vec<(AlgebraicNumber, u32)>,
    /// Whether infinity is among them.
    pub infinity: bool,
}

impl PeriodicPoints {
    pub fn count(&self) -> usize {
        self.points.len() + usize::from(self.infinity)
    }
}

/// Roots of `numer(f^n(x) - x)`, plus infinity when it is fixed by `f^n`.
pub fn periodic_points(f: &RationalMap, n: usize, cap: u64) -> Result<PeriodicPoints> {
    if n == 0 {
        return invalid("period must be positive");
    }
    check_cap(f.degree(), n, cap)?;
    let infinity = {
        let mut p = Point::Infinity;
        for _ in 0..n {
            p = evaluate(f, &p)?;
        }
        p.is_infinity()
    };
    let points = match &f.int {
        Some(int) => {
            let phi = int.iterate(n).fixed_point_poly();
            if phi.deg() == 0 {
                Vec::new()
            } else {
                roots_with_multiplicity(&phi)?
            }
        }
        None => {
            let g = f.f.iterate(n)?;
            let phi = g.num() - &(g.den() * &Poly::x());
            quad_poly_roots(&phi)?
        }
    };
    Ok(PeriodicPoints { points, infinity })
}

/// Primitive numerator of `f^n(x) - x` for a map over `Q`.
pub fn periodic_polynomial(f: &RationalMap, n: usize) -> Result<IntPoly> {
    match &f.int {
        Some(int) => Ok(int.iterate(n).fixed_point_poly()),
        None => Err(Error::Unsupported("periodic polynomial of a map over a quadratic field".into())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MultiplierClass {
    Repelling,
    Attracting,
    Indifferent,
    Unresolved,
}

#[derive(Clone, Debug, Serialize)]
pub struct Multiplier {
    pub lambda: ComplexBall,
    /// Bounds on `|λ|^2`.
    pub abs2_lo: f64,
    pub abs2_hi: f64,
    pub class: MultiplierClass,
}

/// Multiplier `(f^m)'(α)` of a point of exact period `m`.
pub fn multiplier(f: &RationalMap, alpha: &Point, m: usize) -> Result<Multiplier> {
    if m == 0 {
        return invalid("period must be positive");
    }
    let orbit = cycle(f, alpha, m)?;
    if orbit.iter().any(|p| p.is_infinity()) {
        return Err(Error::Unsupported("multiplier of a cycle through infinity".into()));
    }
    // Exact multiplier for cycles of points in Q or Q(√D).
    let ratf = f.f.derivative();
    if orbit.iter().all(|p| matches!(p, Point::Quad(_))) {
        let mut lam = QuadElem::one();
        let mut finite = true;
        for p in &orbit {
            let Point::Quad(e) = p else { unreachable!() };
            match ratf.eval(e) {
                Some(v) => lam = lam * &v,
                None => finite = false,
            }
        }
        if finite {
            let a2 = if lam.d() < 0 && !lam.is_rational() { QuadElem::rational(lam.norm()) } else { &lam * &lam };
            let class = match crate::ring::OrderedField::sign(&(a2.clone() - &QuadElem::one())) {
                1 => MultiplierClass::Repelling,
                -1 => MultiplierClass::Attracting,
                _ => MultiplierClass::Indifferent,
            };
            let v = a2.to_complex_f64().0;
            let lambda = ComplexBall::from_quad(&lam, 128);
            return Ok(Multiplier { lambda, abs2_lo: v, abs2_hi: v, class });
        }
    }
    let mut eps: f64 = 1e-30;
    let mut last = None;
    for _ in 0..6 {
        let prec = ((-eps.log2()) as u32 + 64).max(128);
        let num = BallPoly::from_quad_poly(ratf.num(), false, prec);
        let den = BallPoly::from_quad_poly(ratf.den(), false, prec);
        let mut lam = ComplexBall::from_i64(1, prec);
        let mut ok = true;
        for p in &orbit {
            let z = p.enclosure(eps)?.expect("finite").with_prec(prec);
            match num.eval(&z).div(&den.eval(&z)) {
                Some(v) => lam = lam.mul(&v),
                None => {
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

/// The cycle `[α, f(α), ..., f^{m-1}(α)]`, after checking that `m` is the
/// exact period.
fn cycle(f: &RationalMap, alpha: &Point, m: usize) -> Result<Vec<Point>> {
    let mut pts = vec![alpha.clone()];
    for k in 1..=m {
        let next = evaluate(f, pts.last().expect("nonempty"))?;
        let back = next.eq_exact(alpha)?;
        if back && k < m {
            return invalid(format!("point has period {k}, not {m}"));
        }
        if k == m {
            if !back {
                return invalid(format!("point is not periodic with period {m}"));
            }
            break;
        }
        pts.push(next);
    }
    Ok(pts)
}

/// Preimages of `β` under `f^n` with multiplicities.
#[derive(Clone, Debug, Serialize)]
pub struct Preimages {
    pub roots: Vec<(AlgebraicNumber, u32)>,
    /// Multiplicity of infinity as a preimage.
    pub at_infinity: u32,
}

impl Preimages {
    pub fn total(&self) -> u64 {
        self.roots.iter().map(|r| r.1 as u64).sum::<u64>() + self.at_infinity as u64
    }
}

/// All solutions of `f^n(x) = β`.
pub fn preimages(f: &RationalMap, beta: &Point, n: usize, cap: u64) -> Result<Preimages> {
    if n == 0 {
        return invalid("n must be positive");
    }
    check_cap(f.degree(), n, cap)?;
    f.check_point(beta)?;
    let total = (f.degree() as u64).pow(n as u32) as u32;
    let (roots, deg) = match (&f.int, beta.as_rational()) {
        (Some(int), Some(b)) => {
            let p = int.iterate(n).numer_minus(&b);
            (roots_with_multiplicity(&p)?, p.deg())
        }
        (Some(int), None) if beta.is_infinity() => {
            let g = int.iterate(n);
            if g.den.deg() == 0 {
                (Vec::new(), 0)
            } else {
                (roots_with_multiplicity(&g.den)?, g.den.deg())
            }
        }
        _ => {
            let p = iterate_numerator(f, n, beta)?;
            if p.deg() == 0 {
                (Vec::new(), 0)
            } else {
                (quad_poly_roots(&p)?, p.deg())
            }
        }
    };
    Ok(Preimages { roots, at_infinity: total - deg as u32 })
}

/// The normalized Chebyshev polynomial with `T_d(z + 1/z) = z^d + z^-d`.
pub fn chebyshev(d: usize) -> Result<IntPoly> {
    if d == 0 {
        return invalid("Chebyshev degree must be at least 1");
    }
    let mut prev = Poly::constant(BigInt::from(2));
    let mut cur: IntPoly = Poly::x();
    for _ in 1..d {
        let next = &(&cur * &Poly::x()) - &prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Apply the nontrivial automorphism of `Q(√D)` to every coefficient; the
/// identity on maps with rational coefficients.
pub fn conjugate_map(f: &RationalMap) -> RationalMap {
    if f.int.is_some() {
        return f.clone();
    }
    let conj = |p: &Poly<QuadElem>| p.map(|c| c.conj());
    RationalMap::new(conj(f.f.num()), conj(f.f.den()), f.field).expect("conjugation preserves validity")
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
    fn evaluation() {
        let f2 = map("x^2-2");
        assert!(evaluate(&f2, &q(1, 2)).unwrap().eq_exact(&q(-7, 4)).unwrap());
        let big_f = map("(x^2-1)/(2x)");
        assert!(evaluate(&big_f, &q(1, 1)).unwrap().eq_exact(&q(0, 1)).unwrap());
        assert!(evaluate(&big_f, &q(0, 1)).unwrap().is_infinity());
        assert!(evaluate(&big_f, &Point::Infinity).unwrap().is_infinity());
        let fs5 = map("x^2-sqrt(5)");
        let img = evaluate(&fs5, &Point::Quad(quad(5, (0, 1), (1, 1)))).unwrap();
        assert!(img.eq_exact(&Point::Quad(quad(5, (5, 1), (-1, 1)))).unwrap());
        assert!(evaluate(&fs5, &Point::Quad(quad(2, (0, 1), (1, 1)))).is_err());
        let phi = Point::parse("root(x^2-x-1, 1, 2)").unwrap();
        let img = evaluate(&f2, &phi).unwrap();
        assert!((img.approx().unwrap().0 - 0.6180339887498949).abs() < 1e-12);
    }

    #[test]
    fn orbits() {
        let o = iterate(&map("x^2-3"), &q(1, 1), 10).unwrap();
        assert_eq!(o.points.len(), 3);
        assert_eq!(o.repeat, Some((0, 2)));
        let o = iterate(&map("x^2"), &Point::parse("i").unwrap(), 10).unwrap();
        assert_eq!(o.points.len(), 4);
        assert_eq!(o.repeat, Some((2, 3)));
        let o = iterate(&map("x^2-2"), &q(0, 1), 10).unwrap();
        let vals: Vec<String> = o.points.iter().map(|p| p.to_string()).collect();
        assert_eq!(vals, ["0", "-2", "2", "2"]);
        let o = iterate(&map("x^2-2"), &q(1, 3), 3).unwrap();
        assert!(o.repeat.is_none() && o.points.len() == 4);
    }

    #[test]
    fn maps_parse_and_serialize() {
        let f = map("(x^2-1)/(2x)");
        assert_eq!(f.to_string(), "(x^2-1)/(2x)");
        let j = serde_json::to_string(&f).unwrap();
        assert_eq!(j, r#"{"num":"x^2-1","den":"2x","field":"Q"}"#);
        let back: RationalMap = serde_json::from_str(&j).unwrap();
        assert_eq!(back, f);
        let g = map("x^2-sqrt(5)");
        let j = serde_json::to_string(&g).unwrap();
        assert_eq!(j, r#"{"num":"x^2-sqrt(5)","den":"1","field":"Q(sqrt 5)"}"#);
        assert_eq!(serde_json::from_str::<RationalMap>(&j).unwrap(), g);
        assert!(RationalMap::parse("x+1").is_err());
        assert!(RationalMap::parse("(x^2-1)/(x-1)").is_err());
        assert_eq!(parse_field("Q(sqrt -1)").unwrap(), -1);
    }

    #[test]
    fn chebyshev_recurrence() {
        assert_eq!(chebyshev(1).unwrap(), Poly::from_i64s(&[0, 1]));
        assert_eq!(chebyshev(2).unwrap(), Poly::from_i64s(&[-2, 0, 1]));
        assert_eq!(chebyshev(3).unwrap().to_string(), "x^3-3x");
        assert!(chebyshev(0).is_err());
    }

    #[test]
    fn galois_conjugate_maps() {
        assert_eq!(conjugate_map(&map("x^2-sqrt(5)")), map("x^2+sqrt(5)"));
        assert_eq!(conjugate_map(&map("x^2-(1+sqrt(5))/2")), map("x^2-(1-sqrt(5))/2"));
        let f = RationalMap::parse_in_field("x^2-2", 5).unwrap();
        assert_eq!(conjugate_map(&f), f);
        assert_eq!(f.field(), 5);
    }

    #[test]
    fn periodic_points_and_multipliers() {
        let p = periodic_points(&map("x^2"), 1, DEFAULT_ITERATE_CAP).unwrap();
        let vals: Vec<String> = p.points.iter().map(|(a, _)| a.to_string()).collect();
        assert_eq!(vals, ["0", "1"]);
        assert!(p.infinity);
        let p = periodic_points(&map("x^2"), 2, DEFAULT_ITERATE_CAP).unwrap();
        assert_eq!(p.points.len(), 4);
        let p = periodic_points(&map("x^2-2"), 1, DEFAULT_ITERATE_CAP).unwrap();
        let vals: Vec<String> = p.points.iter().map(|(a, _)| a.to_string()).collect();
        assert_eq!(vals, ["-1", "2"]);
        assert!(periodic_points(&map("x^2"), 9, DEFAULT_ITERATE_CAP).is_err());

        let m = multiplier(&map("x^2-2"), &q(2, 1), 1).unwrap();
        assert_eq!(m.class, MultiplierClass::Repelling);
        assert!((m.lambda.re_f64() - 4.0).abs() < 1e-12);
        let m = multiplier(&map("x^2"), &q(0, 1), 1).unwrap();
        assert_eq!(m.class, MultiplierClass::Attracting);
        let m = multiplier(&map("x^2"), &q(-1, 1), 1);
        assert!(m.is_err());
        let omega = Point::parse("(-1+sqrt(-3))/2").unwrap();
        let m = multiplier(&map("x^2"), &omega, 2).unwrap();
        assert_eq!(m.class, MultiplierClass::Repelling);
        assert!((m.abs2_lo.sqrt() - 4.0).abs() < 1e-9);
        assert!(multiplier(&map("x^2"), &omega, 1).is_err());
        let w = Point::parse("root(x^2+x+1, -1, 0, 0, 1)").unwrap();
        assert_eq!(multiplier(&map("x^2"), &w, 2).unwrap().class, MultiplierClass::Repelling);
    }

    #[test]
    fn preimage_sets() {
        let p = preimages(&map("x^2-3"), &q(1, 2), 1, DEFAULT_ITERATE_CAP).unwrap();
        assert_eq!(p.roots.len(), 2);
        assert_eq!(p.roots[0].0.minimal_polynomial().unwrap(), Poly::from_i64s(&[-7, 0, 2]));
        let p = preimages(&map("x^2-2"), &q(-2, 1), 1, DEFAULT_ITERATE_CAP).unwrap();
        assert_eq!(p.roots.len(), 1);
        assert_eq!(p.roots[0].1, 2);
        assert_eq!(p.total(), 2);
        let p = preimages(&map("(x^2-1)/(2x)"), &q(2, 1), 1, DEFAULT_ITERATE_CAP).unwrap();
        assert_eq!(p.roots[0].0.minimal_polynomial().unwrap(), Poly::from_i64s(&[-1, -4, 1]));
        assert_eq!(p.at_infinity, 0);
        let p = preimages(&map("(x^2-1)/(2x)"), &Point::Infinity, 1, DEFAULT_ITERATE_CAP).unwrap();
        assert_eq!(p.total(), 2);
        assert_eq!(p.at_infinity, 1);
        let p = preimages(&map("x^2-sqrt(5)"), &q(0, 1), 1, DEFAULT_ITERATE_CAP).unwrap();
        assert_eq!(p.roots.len(), 2);
        assert!(p.roots.iter().all(|(a, _)| a.is_real()));
        let p = preimages(&map("x^2+sqrt(5)"), &q(0, 1), 1, DEFAULT_ITERATE_CAP).unwrap();
        assert!(p.roots.iter().all(|(a, _)| !a.is_real()));
    }
}
