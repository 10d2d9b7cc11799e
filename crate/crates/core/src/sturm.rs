//! Sturm chains, exact real-root counting and isolation.
//!
//! Integer polynomials use a primitive pseudo-remainder chain with the
//! signs tracked so that each member agrees in sign with the classical
//! Euclidean chain. Polynomials over any other exactly ordered field use
//! field division directly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{invalid, Result};
use crate::poly::{IntPoly, Poly};
use crate::ring::{bigint_sign, OrderedField};

/// An endpoint of a counting interval.
#[derive(Clone, Debug, PartialEq)]
pub enum Bound {
    NegInf,
    PosInf,
    At(BigRational),
}

impl From<BigRational> for Bound {
    fn from(r: BigRational) -> Self {
        Bound::At(r)
    }
}

/// An open interval `(lo, hi)` with rational endpoints.
pub type RatInterval = (BigRational, BigRational);

#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<IntPoly>,
}

impl SturmChain {
    /// Chain of a squarefree polynomial. Returns an error for the zero
    /// polynomial or a repeated root.
    pub fn new(p: &IntPoly) -> Result<Self> {
        if p.is_zero() {
            return invalid("Sturm chain of the zero polynomial");
        }
        let chain = int_chain(p);
        if chain.last().map_or(false, |g| g.deg() > 0) {
            return invalid("Sturm counting needs a squarefree polynomial");
        }
        Ok(SturmChain { chain })
    }

    pub fn poly(&self) -> &IntPoly {
        &self.chain[0]
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn variations(&self, at: &Bound) -> usize {
        let signs = self.chain.iter().map(|q| match at {
            Bound::NegInf => q.sign_at_infinity(false),
            Bound::PosInf => q.sign_at_infinity(true),
            Bound::At(r) => q.sign_at(r),
        });
        count_variations(signs)
    }

    /// Number of roots in the half-open interval `(lo, hi]`.
    pub fn count_half_open(&self, lo: &Bound, hi: &Bound) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }

    /// Number of roots in the open interval `(lo, hi)`. Finite endpoints
    /// must not be roots.
    pub fn count(&self, lo: &Bound, hi: &Bound) -> Result<usize> {
        for b in [lo, hi] {
            if let Bound::At(r) = b {
                if self.poly().sign_at(r) == 0 {
                    return invalid(format!("interval endpoint {r} is a root"));
                }
            }
        }
        if let (Bound::At(a), Bound::At(b)) = (lo, hi) {
            if a >= b {
                return invalid("empty counting interval");
            }
        }
        Ok(self.count_half_open(lo, hi))
    }

    pub fn count_real(&self) -> usize {
        self.count_half_open(&Bound::NegInf, &Bound::PosInf)
    }
}

fn count_variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut v = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

fn int_chain(p: &IntPoly) -> Vec<IntPoly> {
    let mut chain = vec![p.clone()];
    if p.deg() == 0 {
        return chain;
    }
    chain.push(p.derivative());
    loop {
        let n = chain.len();
        let (a, b) = (&chain[n - 2], &chain[n - 1]);
        if b.deg() == 0 {
            break;
        }
        let e = a.deg() - b.deg() + 1;
        let r = a.pseudo_rem(b);
        if r.is_zero() {
            break;
        }
        // prem = lc(b)^e * rem, and the chain wants -rem up to a positive factor
        let flip = b.lead().is_negative() && e % 2 == 1;
        let c = r.content();
        let mut next = Poly::new(r.coeffs().iter().map(|x| x / &c).collect());
        if !flip {
            next = -next;
        }
        chain.push(next);
    }
    chain
}

/// Exact number of real roots of a squarefree polynomial in `(lo, hi)`.
pub fn sturm_count(p: &IntPoly, lo: &Bound, hi: &Bound) -> Result<usize> {
    SturmChain::new(p)?.count(lo, hi)
}

/// Number of distinct real roots, accepting any nonzero polynomial.
pub fn count_real_roots(p: &IntPoly) -> Result<usize> {
    let s = p.squarefree_part()?;
    Ok(SturmChain::new(&s)?.count_real())
}

/// Disjoint open rational intervals, one around each real root, sorted.
/// No endpoint is a root.
pub fn isolate_real_roots(p: &IntPoly) -> Result<Vec<RatInterval>> {
    let chain = SturmChain::new(p)?;
    let total = chain.count_real();
    let mut out = Vec::with_capacity(total);
    if total == 0 {
        return Ok(out);
    }
    let k = p.root_bound_pow2();
    let b = BigRational::from_integer(BigInt::one() << k as usize);
    let lo = -b.clone();
    let vlo = chain.variations(&Bound::At(lo.clone()));
    let vhi = chain.variations(&Bound::At(b.clone()));
    bisect(&chain, lo, b, vlo, vhi, &mut out);
    Ok(out)
}

fn bisect(
    chain: &SturmChain,
    lo: BigRational,
    hi: BigRational,
    vlo: usize,
    vhi: usize,
    out: &mut Vec<RatInterval>,
) {
    let n = vlo - vhi;
    if n == 0 {
        return;
    }
    if n == 1 {
        out.push((lo, hi));
        return;
    }
    let mid = nonroot_midpoint(chain.poly(), &lo, &hi);
    let vmid = chain.variations(&Bound::At(mid.clone()));
    bisect(chain, lo, mid.clone(), vlo, vmid, out);
    bisect(chain, mid, hi, vmid, vhi, out);
}

/// A point near the midpoint of `(lo, hi)` where `p` does not vanish.
fn nonroot_midpoint(p: &IntPoly, lo: &BigRational, hi: &BigRational) -> BigRational {
    let two = BigRational::from_integer(2.into());
    let mid = (lo + hi) / &two;
    if p.sign_at(&mid) != 0 {
        return mid;
    }
    let w = (hi - lo) / BigRational::from_integer(1024.into());
    let mut k = 1i64;
    loop {
        let cand = &mid + &w * BigRational::from_integer(k.into()) / BigRational::from_integer(7.into());
        if p.sign_at(&cand) != 0 {
            return cand;
        }
        k += 1;
    }
}

/// Shrink an isolating interval of a squarefree polynomial by bisection until
/// its width is at most `width`.
pub fn refine_interval(p: &IntPoly, iv: &RatInterval, width: &BigRational) -> RatInterval {
    let (mut lo, mut hi) = iv.clone();
    let slo = p.sign_at(&lo);
    let two = BigRational::from_integer(2.into());
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / &two;
        let s = p.sign_at(&mid);
        if s == 0 {
            let q = ((&hi - &lo) / BigRational::from_integer(4.into())).min(width / &two);
            return (&mid - &q, &mid + &q);
        }
        if s == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Refine an isolating interval using a Sturm chain when the endpoint signs
/// are not known to differ (e.g. the root is a root of a factor only).
pub fn refine_with_chain(chain: &SturmChain, iv: &RatInterval, width: &BigRational) -> RatInterval {
    let (mut lo, mut hi) = iv.clone();
    while &(&hi - &lo) > width {
        let mid = nonroot_midpoint(chain.poly(), &lo, &hi);
        if chain.count_half_open(&Bound::At(lo.clone()), &Bound::At(mid.clone())) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

// ---------------------------------------------------------------------------
// Generic chains over an ordered field

/// Sturm chain over an exactly ordered field (e.g. a real quadratic field).
#[derive(Clone, Debug)]
pub struct FieldSturmChain<T> {
    chain: Vec<Poly<T>>,
}

impl<T: OrderedField + From<BigRational>> FieldSturmChain<T> {
    pub fn new(p: &Poly<T>) -> Result<Self> {
        if p.is_zero() {
            return invalid("Sturm chain of the zero polynomial");
        }
        let mut chain = vec![p.clone()];
        if p.deg() > 0 {
            chain.push(p.derivative());
            loop {
                let n = chain.len();
                if chain[n - 1].deg() == 0 {
                    break;
                }
                let r = chain[n - 2].rem(&chain[n - 1]);
                if r.is_zero() {
                    break;
                }
                chain.push(-r);
            }
        }
        if chain.last().map_or(false, |g| g.deg() > 0) {
            return invalid("Sturm counting needs a squarefree polynomial");
        }
        Ok(FieldSturmChain { chain })
    }

    pub fn poly(&self) -> &Poly<T> {
        &self.chain[0]
    }

    pub fn sign_at(p: &Poly<T>, at: &Bound) -> i32 {
        match at {
            Bound::At(r) => p.eval(&T::from(r.clone())).sign(),
            Bound::PosInf => p.lead().sign(),
            Bound::NegInf => {
                let s = p.lead().sign();
                if p.deg() % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
        }
    }

    pub fn variations(&self, at: &Bound) -> usize {
        count_variations(self.chain.iter().map(|q| Self::sign_at(q, at)))
    }

    pub fn count_half_open(&self, lo: &Bound, hi: &Bound) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }

    pub fn count_real(&self) -> usize {
        self.count_half_open(&Bound::NegInf, &Bound::PosInf)
    }
}

/// Squarefree part over a field, made monic.
pub fn squarefree_field<T: OrderedField>(p: &Poly<T>) -> Poly<T> {
    p.squarefree_part_field()
}

/// Sign of a polynomial at `x` where `x` is given as a rational.
pub fn sign_at_rational(p: &IntPoly, x: &BigRational) -> i32 {
    bigint_sign(&p.eval_homogeneous(x.numer(), x.denom()))
}

/// Whether every root of `p` is real, counting multiplicity.
pub fn all_roots_real(p: &IntPoly) -> Result<bool> {
    if p.is_zero() {
        return invalid("reality test of the zero polynomial");
    }
    let mut total = 0usize;
    for (s, k) in p.squarefree_decomposition() {
        total += SturmChain::new(&s)?.count_real() * k as usize;
    }
    Ok(total == p.deg())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::quad::QuadElem;

    fn ip(cs: &[i64]) -> IntPoly {
        Poly::from_i64s(cs)
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn counts() {
        let all = |p: &IntPoly| sturm_count(p, &Bound::NegInf, &Bound::PosInf).unwrap();
        assert_eq!(all(&ip(&[-5, 0, 1])), 2);
        assert_eq!(all(&ip(&[1, 0, 1])), 0);
        assert_eq!(all(&ip(&[1, -3, 0, 1])), 3);
        assert_eq!(all(&ip(&[-2, 0, 0, 1])), 1);
        // negative leading coefficient
        assert_eq!(all(&ip(&[5, 0, -1])), 2);
        assert_eq!(all(&ip(&[-1, 3, 0, -1])), 3);
        let p = ip(&[-2, 0, 1]);
        assert_eq!(sturm_count(&p, &Bound::At(r(0, 1)), &Bound::At(r(2, 1))).unwrap(), 1);
        assert!(sturm_count(&ip(&[1, -2, 1]), &Bound::NegInf, &Bound::PosInf).is_err());
        assert!(sturm_count(&p, &Bound::At(r(1, 1)), &Bound::At(r(2, 1))).is_ok());
        assert!(sturm_count(&ip(&[-1, 1]), &Bound::At(r(1, 1)), &Bound::At(r(2, 1))).is_err());
    }

    #[test]
    fn isolation() {
        let ivs = isolate_real_roots(&ip(&[-2, 0, 1])).unwrap();
        assert_eq!(ivs.len(), 2);
        assert!(ivs[0].1 <= ivs[1].0);
        assert!(isolate_real_roots(&ip(&[1, 0, 1])).unwrap().is_empty());
        let ivs = isolate_real_roots(&ip(&[-1, -1, 1])).unwrap();
        let fine = refine_interval(&ip(&[-1, -1, 1]), &ivs[1], &r(1, 1 << 30));
        let mid: f64 = num_traits::ToPrimitive::to_f64(&((&fine.0 + &fine.1) / r(2, 1))).unwrap();
        assert!((mid - 1.618033988749895).abs() < 1e-8);
        // a root exactly at a bisection point
        let ivs = isolate_real_roots(&ip(&[0, -1, 0, 1])).unwrap();
        assert_eq!(ivs.len(), 3);
    }

    #[test]
    fn quadratic_field_chain() {
        // x^2 - sqrt(5) has two real roots, x^2 + sqrt(5) none
        let s5 = QuadElem::sqrt(5).unwrap();
        let p = Poly::new(vec![-s5.clone(), QuadElem::zero(), QuadElem::one()]);
        assert_eq!(FieldSturmChain::new(&p).unwrap().count_real(), 2);
        let q = Poly::new(vec![s5, QuadElem::zero(), QuadElem::one()]);
        assert_eq!(FieldSturmChain::new(&q).unwrap().count_real(), 0);
    }

    #[test]
    fn multiplicity_aware_reality() {
        let p = &ip(&[-1, 1]).pow(2) * &ip(&[2, 1]);
        assert!(all_roots_real(&p).unwrap());
        assert!(!all_roots_real(&ip(&[1, 0, 1])).unwrap());
    }
}
