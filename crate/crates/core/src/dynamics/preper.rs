//! Deciding preperiodicity.
//!
//! The orbit is computed exactly. A repeat is confirmed by the polynomial
//! identity `numer(f^{k+m}(x) - f^k(x)) = 0` at the point; a wandering
//! point is recognised once some orbit element is taller than
//! `C/(d-1) + 1`, since then `ĥ >= h - C/(d-1) > 0` there.

use num_traits::Zero;
use serde::Serialize;

use super::canonical::point_height;
use super::{comparison_constant, evaluate, Point, RationalMap};
use crate::error::{Error, Result};
use crate::heights::HeightEstimate;

/// Largest `d^{k+m}` for which the polynomial identity is formed.
const IDENTITY_CAP: u64 = 4096;
const MAX_STEPS: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Preperiodic { tail: usize, period: usize },
    /// `ĥ(α) >= lower_bound > 0`.
    Wandering { lower_bound: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct PreperiodicityVerdict {
    pub verdict: Verdict,
    /// The exact orbit up to the repeat, or up to the tall element.
    pub orbit: Vec<Point>,
    /// Weil heights of the orbit elements.
    pub heights: Vec<HeightEstimate>,
    /// Whether `numer(f^{k+m} - f^k)` was checked to vanish at the point.
    pub identity_checked: bool,
}

impl PreperiodicityVerdict {
    pub fn is_preperiodic(&self) -> bool {
        matches!(self.verdict, Verdict::Preperiodic { .. })
    }
}

pub fn is_preperiodic(f: &RationalMap, alpha: &Point) -> Result<PreperiodicityVerdict> {
    f.check_point(alpha)?;
    let cc = comparison_constant(f)?;
    let d = f.degree() as f64;
    let bound = cc.c / (d - 1.0);
    let mut orbit = vec![alpha.clone()];
    let mut heights = Vec::new();
    let mut scale = 1.0;
    for _ in 0..MAX_STEPS {
        let cur = orbit.last().expect("nonempty");
        let h = point_height(cur, 1e-6)?;
        let lo = h.lo();
        heights.push(h);
        if lo > bound + 1.0 {
            return Ok(PreperiodicityVerdict {
                verdict: Verdict::Wandering { lower_bound: (lo - bound) / scale },
                orbit,
                heights,
                identity_checked: false,
            });
        }
        let next = evaluate(f, cur)?;
        for (i, p) in orbit.iter().enumerate() {
            if p.eq_exact(&next)? {
                let (tail, period) = (i, orbit.len() - i);
                let checked = identity_holds(f, alpha, tail, period)?;
                if checked == Some(false) {
                    return Err(Error::InvalidArgument(format!(
                        "orbit repeat at ({tail}, {period}) fails the polynomial identity"
                    )));
                }
                return Ok(PreperiodicityVerdict {
                    verdict: Verdict::Preperiodic { tail, period },
                    orbit,
                    heights,
                    identity_checked: checked.is_some(),
                });
            }
        }
        orbit.push(next);
        scale *= d;
    }
    Err(Error::Budget(format!("orbit undecided after {MAX_STEPS} steps")))
}

/// Checks `f^{tail+period}(α) = f^tail(α)` both along the exact orbit and
/// through the polynomial identity when it is small enough to form.
pub fn verify_preperiodic(f: &RationalMap, alpha: &Point, tail: usize, period: usize) -> Result<bool> {
    if period == 0 {
        return Ok(false);
    }
    let mut p = alpha.clone();
    let mut at_tail = None;
    for j in 0..=(tail + period) {
        if j == tail {
            at_tail = Some(p.clone());
        }
        if j == tail + period {
            break;
        }
        p = evaluate(f, &p)?;
    }
    if !at_tail.expect("tail visited").eq_exact(&p)? {
        return Ok(false);
    }
    Ok(identity_holds(f, alpha, tail, period)?.unwrap_or(true))
}

/// Whether `numer(f^{k+m}(x) - f^k(x))` vanishes at `α`; `None` when the
/// iterates are too large to form.
fn identity_holds(f: &RationalMap, alpha: &Point, k: usize, m: usize) -> Result<Option<bool>> {
    let d = f.degree() as u64;
    let mut size: u64 = 1;
    for _ in 0..(k + m) {
        size = size.saturating_mul(d);
    }
    if size > IDENTITY_CAP {
        return Ok(None);
    }
    match alpha {
        Point::Algebraic(a) => {
            let int = f.as_int().expect("checked by the caller");
            let g1 = int.iterate(k + m);
            let g0 = int.iterate(k);
            let numer = &(&g1.num * &g0.den) - &(&g0.num * &g1.den);
            Ok(Some(a.is_root_of(&numer)?))
        }
        Point::Quad(e) => {
            let g1 = f.f.iterate(k + m)?;
            let g0 = f.f.iterate(k)?;
            let numer = &(g1.num() * g0.den()) - &(g0.num() * g1.den());
            Ok(Some(numer.eval(e).is_zero()))
        }
        Point::Infinity => {
            let g1 = f.f.iterate(k + m)?;
            let g0 = f.f.iterate(k)?;
            Ok(Some(g1.eval_inf() == g0.eval_inf()))
        }
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
    fn rational_examples() {
        let v = is_preperiodic(&map("x^2-3"), &Point::int(1)).unwrap();
        assert_eq!(v.verdict, Verdict::Preperiodic { tail: 0, period: 2 });
        assert!(v.identity_checked);
        let v = is_preperiodic(&map("x^2-2"), &Point::int(0)).unwrap();
        assert_eq!(v.verdict, Verdict::Preperiodic { tail: 2, period: 1 });
        let v = is_preperiodic(&map("x^2-2"), &Point::rational(rat(1, 2))).unwrap();
        match v.verdict {
            Verdict::Wandering { lower_bound } => assert!(lower_bound > 0.0 && lower_bound <= 2f64.ln() + 1e-6),
            other => panic!("{other:?}"),
        }
        let v = is_preperiodic(&map("(x^2-1)/(2x)"), &Point::int(1)).unwrap();
        assert_eq!(v.verdict, Verdict::Preperiodic { tail: 2, period: 1 });
        assert!(verify_preperiodic(&map("(x^2-1)/(2x)"), &Point::int(1), 2, 1).unwrap());
        assert!(!verify_preperiodic(&map("x^2-3"), &Point::int(1), 0, 1).unwrap());
    }

    #[test]
    fn algebraic_examples() {
        let phi = Point::parse("root(x^2-x-1, 1, 2)").unwrap();
        let v = is_preperiodic(&map("x^2-1"), &phi).unwrap();
        assert_eq!(v.verdict, Verdict::Preperiodic { tail: 0, period: 1 });
        assert!(v.identity_checked);
        let v = is_preperiodic(&map("x^2"), &phi).unwrap();
        match v.verdict {
            Verdict::Wandering { lower_bound } => {
                assert!(lower_bound > 0.0 && lower_bound <= 0.5 * 1.618033988749895f64.ln() + 1e-6)
            }
            other => panic!("{other:?}"),
        }
        // 2cos(2π/7) is preperiodic for x^2 - 2.
        let z = Point::parse("root(x^3+x^2-2x-1, 1, 2)").unwrap();
        assert!(is_preperiodic(&map("x^2-2"), &z).unwrap().is_preperiodic());
    }

    #[test]
    fn quadratic_field_points() {
        let f = map("x^2-sqrt(5)");
        let v = is_preperiodic(&f, &Point::parse("sqrt(5)").unwrap()).unwrap();
        assert!(!v.is_preperiodic());
        let v = is_preperiodic(&map("x^2"), &Point::parse("i").unwrap()).unwrap();
        assert_eq!(v.verdict, Verdict::Preperiodic { tail: 2, period: 1 });
        let v = is_preperiodic(&map("x^2"), &Point::Infinity).unwrap();
        assert_eq!(v.verdict, Verdict::Preperiodic { tail: 0, period: 1 });
    }
}
