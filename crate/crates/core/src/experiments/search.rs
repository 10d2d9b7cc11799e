//! Exhaustive searches over boxes of integer polynomials.

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::algebraic::{all_roots, AlgebraicNumber};
use crate::dynamics::{comparison_constant, is_preperiodic, Point, RationalMap, Verdict};
use crate::error::{invalid, Result};
use crate::factor::is_irreducible;
use crate::heights::{mahler_measure, HeightEstimate};
use crate::poly::{ln_bigint, IntPoly, Poly};
use crate::sturm::SturmChain;

/// Candidate polynomials examined before a search reports a partial result.
pub const DEFAULT_SEARCH_BUDGET: u64 = 2_000_000;
const TIE: f64 = 1e-12;
const HEIGHT_EPS: f64 = 1e-13;

fn poly_str<S: Serializer>(p: &IntPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

/// Walks every coefficient vector `[a_0, .., a_k]` with `1 <= a_k <= bounds[k]`
/// and `|a_j| <= bounds[j]` otherwise. Returns `false` if `visit` stopped early.
fn for_each_poly(bounds: &[BigInt], mut visit: impl FnMut(&IntPoly) -> bool) -> bool {
    let k = bounds.len() - 1;
    let mut c: Vec<BigInt> = bounds.iter().map(|b| -b.clone()).collect();
    c[k] = BigInt::one();
    loop {
        if !visit(&Poly::new(c.clone())) {
            return false;
        }
        let mut j = 0;
        loop {
            if j == k {
                if c[k] >= bounds[k] {
                    return true;
                }
                c[k] += 1;
                break;
            }
            if c[j] < bounds[j] {
                c[j] += 1;
                break;
            }
            c[j] = -bounds[j].clone();
            j += 1;
        }
    }
}

/// Irreducible, primitive, of positive degree, with only real roots.
fn totally_real_irreducible(p: &IntPoly) -> Result<bool> {
    if !p.is_primitive() || !p.is_squarefree() {
        return Ok(false);
    }
    if SturmChain::new(p)?.count_real() != p.deg() {
        return Ok(false);
    }
    Ok(p.deg() == 1 || is_irreducible(p)? == Some(true))
}

/// Coefficients from the leading one down, for the lexicographic tie-break.
fn high_to_low(p: &IntPoly) -> Vec<BigInt> {
    p.coeffs().iter().rev().cloned().collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SchinzelResult {
    pub deg_bound: usize,
    pub coeff_bound: u64,
    /// Smallest Weil height of a totally real algebraic number found.
    pub height: HeightEstimate,
    #[serde(serialize_with = "poly_str")]
    pub witness: IntPoly,
    pub examined: u64,
    /// The budget ran out before the box was exhausted.
    pub partial: bool,
}

/// Smallest height among roots of primitive irreducible totally real
/// polynomials of degree `<= deg_bound` with coefficients bounded by
/// `coeff_bound`, excluding the roots `0` and `±1`. Ties within `1e-12`
/// go to the lexicographically smallest coefficient list, leading first.
pub fn schinzel_search(deg_bound: usize, coeff_bound: u64, budget: Option<u64>) -> Result<SchinzelResult> {
    if !(1..=4).contains(&deg_bound) {
        return invalid("degree bound must lie in 1..=4");
    }
    if coeff_bound == 0 {
        return invalid("coefficient bound must be positive");
    }
    let budget = budget.unwrap_or(DEFAULT_SEARCH_BUDGET);
    let b = BigInt::from(coeff_bound);
    let mut best: Option<(HeightEstimate, IntPoly)> = None;
    let mut examined = 0u64;
    let mut partial = false;
    let mut failure = None;
    for k in 1..=deg_bound {
        let bounds = vec![b.clone(); k + 1];
        let done = for_each_poly(&bounds, |p| {
            if examined >= budget {
                partial = true;
                return false;
            }
            examined += 1;
            match consider(p, k, &best) {
                Ok(Some(h)) => {
                    let better = match &best {
                        None => true,
                        Some((bh, bp)) => {
                            h.value < bh.value - TIE
                                || ((h.value - bh.value).abs() <= TIE && high_to_low(p) < high_to_low(bp))
                        }
                    };
                    if better {
                        best = Some((h, p.clone()));
                    }
                    true
                }
                Ok(None) => true,
                Err(e) => {
                    failure = Some(e);
                    false
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        if !done {
            break;
        }
    }
    let Some((height, witness)) = best else {
        return invalid("no admissible polynomial in the box");
    };
    Ok(SchinzelResult { deg_bound, coeff_bound, height, witness, examined, partial })
}

fn consider(p: &IntPoly, k: usize, best: &Option<(HeightEstimate, IntPoly)>) -> Result<Option<HeightEstimate>> {
    let a0 = p.coeff(0);
    if a0.is_zero() {
        return Ok(None);
    }
    if k == 1 && p.coeff(1).is_one() && a0.abs().is_one() {
        return Ok(None);
    }
    // M(p) >= max(|a_k|, |a_0|).
    let lower = ln_bigint(&p.lead().max(a0.abs())) / k as f64;
    if let Some((bh, _)) = best {
        if lower > bh.value + TIE {
            return Ok(None);
        }
    }
    if !totally_real_irreducible(p)? {
        return Ok(None);
    }
    let kf = k as f64;
    Ok(Some(mahler_measure(p, HEIGHT_EPS * kf)?.div(kf)))
}

/// Coefficient box for minimal polynomials of degree `k` of points with
/// `ĥ_f = 0`: `|a_j| <= binom(k, j) exp(k C/(d-1))`, rounded up. The leading
/// coefficient is pinned to 1 for monic integral polynomial maps, whose
/// preperiodic points are algebraic integers.
pub fn northcott_box(f: &RationalMap, k: usize) -> Result<Vec<BigInt>> {
    let Some(int) = f.as_int() else {
        return invalid("the Northcott box needs a map with rational coefficients");
    };
    if k == 0 {
        return invalid("degree must be positive");
    }
    let cc = comparison_constant(f)?;
    let bound = cc.c / (f.degree() as f64 - 1.0);
    let m = (k as f64 * bound).exp();
    let mut out: Vec<BigInt> = (0..=k)
        .map(|j| {
            let b = binomial(k as u64, j as u64) as f64 * m;
            BigInt::from((b * (1.0 + 1e-12)).ceil().to_u64().unwrap_or(u64::MAX))
        })
        .collect();
    let integral = int.den.deg() == 0 && int.den.coeff(0).abs().is_one() && int.num.lead().abs().is_one();
    if integral {
        out[k] = BigInt::one();
    }
    Ok(out)
}

/// A totally real preperiodic point with its orbit shape.
#[derive(Clone, Debug, Serialize)]
pub struct PreperiodicPoint {
    pub point: AlgebraicNumber,
    #[serde(serialize_with = "poly_str")]
    pub minimal_polynomial: IntPoly,
    pub tail: usize,
    pub period: usize,
    /// The polynomial identity `numer(f^{tail+period} - f^tail)` was checked.
    pub identity_checked: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PreperiodicEnumeration {
    pub deg_bound: usize,
    /// `C/(d-1)`, the height bound for points with `ĥ = 0`.
    pub height_bound: f64,
    pub points: Vec<PreperiodicPoint>,
    pub examined: u64,
    pub partial: bool,
}

/// All totally real preperiodic points of degree `<= deg_bound` of a map
/// over `Q`, found by testing every minimal polynomial in the Northcott box.
pub fn enumerate_totally_real_preperiodic(
    f: &RationalMap,
    deg_bound: usize,
    budget: Option<u64>,
) -> Result<PreperiodicEnumeration> {
    if !(1..=4).contains(&deg_bound) {
        return invalid("degree bound must lie in 1..=4");
    }
    if !f.has_rational_coefficients() {
        return invalid("enumeration needs a map with rational coefficients");
    }
    let budget = budget.unwrap_or(DEFAULT_SEARCH_BUDGET);
    let height_bound = comparison_constant(f)?.c / (f.degree() as f64 - 1.0);
    let mut points = Vec::new();
    let mut examined = 0u64;
    let mut partial = false;
    let mut failure = None;
    'degrees: for k in 1..=deg_bound {
        let bounds = northcott_box(f, k)?;
        let mut found: Vec<PreperiodicPoint> = Vec::new();
        let done = for_each_poly(&bounds, |p| {
            if examined >= budget {
                partial = true;
                return false;
            }
            examined += 1;
            match preperiodic_roots(f, p, height_bound) {
                Ok(mut pts) => {
                    found.append(&mut pts);
                    true
                }
                Err(e) => {
                    failure = Some(e);
                    false
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        found.sort_by(|a, b| a.point.approx().re.total_cmp(&b.point.approx().re));
        points.append(&mut found);
        if !done {
            break 'degrees;
        }
    }
    Ok(PreperiodicEnumeration { deg_bound, height_bound, points, examined, partial })
}

fn preperiodic_roots(f: &RationalMap, p: &IntPoly, height_bound: f64) -> Result<Vec<PreperiodicPoint>> {
    let k = p.deg();
    // 0 is the only root of a non-constant-term polynomial allowed here.
    if p.coeff(0).is_zero() && !(k == 1 && p.coeff(1).is_one()) {
        return Ok(Vec::new());
    }
    if !totally_real_irreducible(p)? {
        return Ok(Vec::new());
    }
    if k > 1 {
        let h = mahler_measure(p, 1e-9)?.div(k as f64);
        if h.lo() > height_bound {
            return Ok(Vec::new());
        }
    }
    let mut out = Vec::new();
    for a in all_roots(p)? {
        let v = is_preperiodic(f, &Point::algebraic(a.clone()))?;
        match v.verdict {
            Verdict::Preperiodic { tail, period } => out.push(PreperiodicPoint {
                point: a,
                minimal_polynomial: p.clone(),
                tail,
                period,
                identity_checked: v.identity_checked,
            }),
            // Preperiodicity is Galois invariant for maps over Q.
            Verdict::Wandering { .. } => return Ok(Vec::new()),
        }
    }
    Ok(out)
}
