//! Reproducible computations built on the exact core: small-height
//! sequences, the Bogomolov classifier, searches and diagnostics.

mod equidist;
mod salem;
mod search;

pub use equidist::{
    conjugate_points, discrepancy_curve, equidistribution_report, eval_c64, pushforward_check, DiscrepancyReport,
    Reference,
};
pub use salem::{approx_common_point, salem_bridge, salem_check, trace_polynomial, SalemBridge, SalemReport};
pub use search::{
    enumerate_totally_real_preperiodic, northcott_box, schinzel_search, PreperiodicEnumeration, PreperiodicPoint,
    SchinzelResult, DEFAULT_SEARCH_BUDGET,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::algebraic::{AlgebraicNumber, Selector};
use crate::dynamics::{
    canonical_height, conjugate_map, is_preperiodic, preimages, Point, RationalMap, DEFAULT_ITERATE_CAP,
};
use crate::error::{invalid, Error, Result};
use crate::heights::HeightEstimate;
use crate::julia::{certify_reality, classify_quadratic, JuliaRealityCertificate, QuadraticClassification};
use crate::quad::QuadElem;
use crate::sturm::{count_real_roots, isolate_real_roots};

pub(crate) fn rat_str<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// One step of a small-height sequence.
#[derive(Clone, Debug, Serialize)]
pub struct SequenceRecord {
    pub n: usize,
    pub gamma: AlgebraicNumber,
    pub degree: usize,
    pub canonical_height: HeightEstimate,
    /// `ĥ(ε) / d^n`.
    pub expected: HeightEstimate,
    pub totally_real: bool,
    /// Distinct real roots of the defining polynomial of `f^n(x) = ε`.
    pub real_roots: usize,
    pub defining_degree: usize,
}

impl SequenceRecord {
    /// The computed height agrees with `ĥ(ε)/d^n` within both radii.
    pub fn consistent(&self) -> bool {
        self.canonical_height.agrees(&self.expected, 1e-12)
    }
}

/// For `n = 1..=n_max`, the largest real solution `γ_n` of `f^n(x) = ε`
/// with its canonical height. `ε` must not be preperiodic.
pub fn small_height_sequence(f: &RationalMap, eps_point: &BigRational, n_max: usize, eps: f64) -> Result<Vec<SequenceRecord>> {
    if n_max == 0 {
        return invalid("sequence length must be positive");
    }
    let e = Point::rational(eps_point.clone());
    if is_preperiodic(f, &e)?.is_preperiodic() {
        return invalid(format!("{eps_point} is preperiodic, so its preimages all have height zero"));
    }
    let d = f.degree() as f64;
    let base = canonical_height(f, &e, eps)?;
    let mut out = Vec::with_capacity(n_max);
    let mut scale = 1.0;
    for n in 1..=n_max {
        scale *= d;
        let (gamma, real_roots, defining_degree) = match f.as_int() {
            Some(int) => {
                let p = int.iterate(n).numer_minus(eps_point);
                let p = p.squarefree_part()?;
                let ivs = isolate_real_roots(&p)?;
                let Some((lo, hi)) = ivs.last().cloned() else {
                    return invalid(format!("f^{n}(x) = {eps_point} has no real solution"));
                };
                let gamma = AlgebraicNumber::from_poly_root(&p, Selector::Interval(lo, hi))?;
                (gamma, count_real_roots(&p)?, int.iterate(n).numer_minus(eps_point).deg())
            }
            None => {
                let pre = preimages(f, &e, n, DEFAULT_ITERATE_CAP)?;
                let real: Vec<&AlgebraicNumber> = pre.roots.iter().map(|r| &r.0).filter(|a| a.is_real()).collect();
                let Some(gamma) =
                    real.iter().copied().max_by(|a, b| a.approx().re.total_cmp(&b.approx().re)).cloned()
                else {
                    return invalid(format!("f^{n}(x) = {eps_point} has no real solution"));
                };
                let total: u32 = pre.roots.iter().map(|r| r.1).sum();
                (gamma, real.len(), total as usize)
            }
        };
        let degree = gamma.degree()?;
        let totally_real = gamma.is_totally_real()?;
        let h = canonical_height(f, &Point::algebraic(gamma.clone()), eps)?;
        out.push(SequenceRecord {
            n,
            gamma,
            degree,
            canonical_height: h,
            expected: base.div(scale),
            totally_real,
            real_roots,
            defining_degree,
        });
    }
    Ok(out)
}

/// Evidence that one Galois conjugate of the map has its Julia set in `R`.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RealityEvidence {
    Certificate(JuliaRealityCertificate),
    Quadratic(QuadraticClassification),
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict")]
pub enum Trichotomy {
    BogomolovHolds {
        /// The conjugate map whose Julia set leaves the real line.
        conjugate: RationalMap,
        certificate: JuliaRealityCertificate,
        /// Whether the input map itself has a real Julia set, when known.
        #[serde(skip_serializing_if = "Option::is_none")]
        own_julia_real: Option<bool>,
        #[serde(skip_serializing_if = "Option::is_none")]
        note: Option<String>,
        /// Totally real preperiodic points of degree at most 2.
        #[serde(skip_serializing_if = "Option::is_none")]
        preperiodic: Option<PreperiodicEnumeration>,
    },
    BogomolovFails {
        evidence: Vec<RealityEvidence>,
        #[serde(serialize_with = "rat_str")]
        epsilon: BigRational,
        sequence: Vec<SequenceRecord>,
    },
    Inconclusive {
        depth: usize,
        certificates: Vec<JuliaRealityCertificate>,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct TrichotomyResult {
    pub map: RationalMap,
    #[serde(flatten)]
    pub verdict: Trichotomy,
}

impl TrichotomyResult {
    pub fn holds(&self) -> bool {
        matches!(self.verdict, Trichotomy::BogomolovHolds { .. })
    }

    pub fn fails(&self) -> bool {
        matches!(self.verdict, Trichotomy::BogomolovFails { .. })
    }
}

/// Length of the sequence attached to a failing verdict.
pub const CLASSIFY_SEQUENCE_LEN: usize = 6;
const SEQUENCE_EPS: f64 = 1e-9;

/// `c` when `f = x^2 - c`.
fn quadratic_parameter(f: &RationalMap) -> Option<QuadElem> {
    let r = f.ratfunc();
    let num = r.num();
    if r.den().deg() != 0 || num.deg() != 2 || !num.coeff(1).is_zero() {
        return None;
    }
    let lead = num.coeff(2);
    if !lead.is_one() || !r.den().coeff(0).is_one() {
        return None;
    }
    Some(-num.coeff(0))
}

/// Decides whether the totally real numbers have the Bogomolov property for
/// `ĥ_f`: it holds exactly when some Galois conjugate of `f` has a Julia set
/// outside the real line.
pub fn bogomolov_classify(f: &RationalMap, depth: usize) -> Result<TrichotomyResult> {
    let mut maps = vec![f.clone()];
    if !f.has_rational_coefficients() {
        maps.push(conjugate_map(f));
    }
    let mut certs = Vec::with_capacity(maps.len());
    let mut evidence = Vec::with_capacity(maps.len());
    let mut all_real = true;
    for (i, g) in maps.iter().enumerate() {
        let cert = certify_reality(g, depth)?;
        if cert.is_nonreal() {
            return holds(f, g, i > 0, cert, depth);
        }
        let real_here = if cert.is_real() {
            evidence.push(RealityEvidence::Certificate(cert.clone()));
            true
        } else if let Some(c) = quadratic_parameter(g).filter(|c| c.is_real()) {
            let q = classify_quadratic(&c)?;
            let real = q.is_real();
            if real {
                evidence.push(RealityEvidence::Quadratic(q));
            }
            real
        } else {
            false
        };
        all_real &= real_here;
        certs.push(cert);
    }
    if !all_real {
        return Ok(TrichotomyResult { map: f.clone(), verdict: Trichotomy::Inconclusive { depth, certificates: certs } });
    }
    let (epsilon, sequence) = failing_sequence(f)?;
    Ok(TrichotomyResult { map: f.clone(), verdict: Trichotomy::BogomolovFails { evidence, epsilon, sequence } })
}

fn holds(
    f: &RationalMap,
    g: &RationalMap,
    via_conjugate: bool,
    cert: JuliaRealityCertificate,
    depth: usize,
) -> Result<TrichotomyResult> {
    let own_julia_real = if !via_conjugate {
        Some(false)
    } else {
        match quadratic_parameter(f).filter(|c| c.is_real()) {
            Some(c) => Some(classify_quadratic(&c)?.is_real()),
            None => None,
        }
    };
    let note = (own_julia_real == Some(true)).then(|| {
        "the Julia set of this map lies in the real line, yet its Galois conjugate has a non-real Julia set, \
         so the property holds for this map as well"
            .to_string()
    });
    let preperiodic = if f.has_rational_coefficients() && depth > 0 {
        match enumerate_totally_real_preperiodic(f, 2, None) {
            Ok(e) => Some(e),
            Err(Error::Budget(_)) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    Ok(TrichotomyResult {
        map: f.clone(),
        verdict: Trichotomy::BogomolovHolds { conjugate: g.clone(), certificate: cert, own_julia_real, note, preperiodic },
    })
}

/// Picks a small rational `ε` with real preimages that is not preperiodic,
/// and builds the sequence from it.
fn failing_sequence(f: &RationalMap) -> Result<(BigRational, Vec<SequenceRecord>)> {
    let cands = [(1, 2), (1, 3), (2, 3), (1, 5), (3, 4), (0, 1), (1, 1)];
    let mut last = None;
    for (p, q) in cands {
        let e = BigRational::new(BigInt::from(p), BigInt::from(q));
        if is_preperiodic(f, &Point::rational(e.clone()))?.is_preperiodic() {
            continue;
        }
        match small_height_sequence(f, &e, CLASSIFY_SEQUENCE_LEN, SEQUENCE_EPS) {
            Ok(s) if s.iter().all(|r| r.totally_real) => return Ok((e, s)),
            Ok(_) => {}
            Err(err @ Error::InvalidArgument(_)) => last = Some(err),
            Err(err) => return Err(err),
        }
    }
    Err(last.unwrap_or_else(|| Error::InvalidArgument("no rational starting point gives a totally real sequence".into())))
}

/// Sign convention helper shared by the searches: leading coefficient positive.
pub(crate) fn normalize_sign(p: crate::IntPoly) -> crate::IntPoly {
    if p.lead().is_negative() {
        -p
    } else {
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    fn map(s: &str) -> RationalMap {
        RationalMap::parse(s).unwrap()
    }

    #[test]
    fn first_preimage_of_three() {
        let s = small_height_sequence(&map("x^2-3"), &rat(1, 2), 1, 1e-9).unwrap();
        let want = AlgebraicNumber::from_poly_root(
            &crate::parse::parse_poly("2x^2-7").unwrap(),
            Selector::Interval(rat(1, 1), rat(2, 1)),
        )
        .unwrap();
        assert!(s[0].gamma.eq_exact(&want).unwrap());
        assert!(s[0].totally_real);
        assert!(s[0].consistent());
    }

    #[test]
    fn halving_heights() {
        let s = small_height_sequence(&map("x^2-2"), &rat(1, 2), 4, 1e-9).unwrap();
        for r in &s {
            assert!(r.totally_real && r.consistent(), "{r:?}");
            assert_eq!(r.real_roots, 1 << r.n);
        }
        assert!(small_height_sequence(&map("x^2-2"), &rat(0, 1), 2, 1e-9).is_err());
    }

    #[test]
    fn classifier() {
        let r = bogomolov_classify(&map("x^2-1"), 4).unwrap();
        assert!(r.holds());
        let r = bogomolov_classify(&map("x^2-sqrt(5)"), 4).unwrap();
        match &r.verdict {
            Trichotomy::BogomolovHolds { own_julia_real, note, .. } => {
                assert_eq!(*own_julia_real, Some(true));
                assert!(note.is_some());
            }
            other => panic!("{other:?}"),
        }
    }
}
