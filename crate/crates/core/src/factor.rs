//! Factorization of integer polynomials: distinct and equal degree
//! factorization modulo a prime, quadratic Hensel lifting and subset
//! recombination.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::poly::{log2_bigint, IntPoly, Poly};

/// Above this degree no Hensel lifting is attempted.
pub const MAX_LIFT_DEGREE: usize = 64;

const RECOMBINATION_BUDGET: usize = 200_000;

const PRIMES: [u64; 40] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109,
    113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179,
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Primitive factors with positive leading coefficients.
    pub factors: Vec<IntPoly>,
    /// `false` when some factor could not be proven irreducible.
    pub complete: bool,
}

/// Factor a squarefree primitive polynomial of positive degree.
pub fn factor_squarefree(f: &IntPoly) -> Result<Factorization> {
    if f.deg() == 0 {
        return invalid("cannot factor a constant");
    }
    let f = normalize(f);
    if !f.is_squarefree() {
        return invalid("polynomial is not squarefree");
    }
    let mut factors = Vec::new();
    let mut rest = f;
    if rest.coeff(0).is_zero() {
        factors.push(Poly::x());
        rest = rest.exact_div(&Poly::x()).expect("x divides");
    }
    let mut complete = true;
    if rest.deg() > 0 {
        complete = zassenhaus(&rest, &mut factors);
    }
    factors.sort_by(|a, b| a.deg().cmp(&b.deg()).then_with(|| a.coeffs().cmp(b.coeffs())));
    Ok(Factorization { factors, complete })
}

/// Full factorization with multiplicities.
pub fn factor(f: &IntPoly) -> Result<(Vec<(IntPoly, u32)>, bool)> {
    if f.is_zero() {
        return invalid("cannot factor zero");
    }
    let mut out = Vec::new();
    let mut complete = true;
    for (g, m) in f.squarefree_decomposition() {
        if g.deg() == 0 {
            continue;
        }
        let fs = factor_squarefree(&g)?;
        complete &= fs.complete;
        out.extend(fs.factors.into_iter().map(|h| (h, m)));
    }
    Ok((out, complete))
}

/// `Some(true)` irreducible, `Some(false)` reducible, `None` undecided.
pub fn is_irreducible(f: &IntPoly) -> Result<Option<bool>> {
    let fs = factor_squarefree(f)?;
    if fs.factors.len() > 1 {
        Ok(Some(false))
    } else if fs.complete {
        Ok(Some(true))
    } else {
        Ok(None)
    }
}

fn normalize(f: &IntPoly) -> IntPoly {
    let p = f.primitive();
    if p.lead().is_negative() {
        -p
    } else {
        p
    }
}

fn zassenhaus(f: &IntPoly, out: &mut Vec<IntPoly>) -> bool {
    let n = f.deg();
    if n == 1 {
        out.push(f.clone());
        return true;
    }
    // Degree analysis over several primes.
    let mut allowed = vec![true; n + 1];
    let mut best: Option<(u64, Vec<(ModPoly, usize)>)> = None;
    let mut used = 0;
    for &p in PRIMES.iter() {
        if (f.lead() % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = ModPoly::from_int(f, p);
        if fp.deg() != n || fp.gcd(&fp.deriv()).deg() > 0 {
            continue;
        }
        let ddf = fp.monic().ddf();
        let mut degs = Vec::new();
        for (g, d) in &ddf {
            for _ in 0..g.deg() / d {
                degs.push(*d);
            }
        }
        let sums = subset_sums(&degs, n);
        for k in 0..=n {
            allowed[k] &= sums[k];
        }
        let count = degs.len();
        if best.as_ref().map_or(true, |(_, b)| count < b.iter().map(|(g, d)| g.deg() / d).sum()) {
            best = Some((p, ddf));
        }
        used += 1;
        if used >= 6 || (1..n).all(|k| !allowed[k]) {
            break;
        }
    }
    if (1..n).all(|k| !allowed[k]) {
        out.push(f.clone());
        return true;
    }
    if n > MAX_LIFT_DEGREE {
        out.push(f.clone());
        return false;
    }
    let Some((p, ddf)) = best else {
        out.push(f.clone());
        return false;
    };
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    let mut modular = Vec::new();
    for (g, d) in ddf {
        modular.extend(g.edf(d, &mut rng));
    }
    if modular.len() == 1 {
        out.push(f.clone());
        return true;
    }
    // Lift to p^k above twice the coefficient bound on lc * factor.
    let norm2 = f.coeffs().iter().map(|c| c * c).fold(BigInt::zero(), |a, b| a + b);
    let bound_bits = n as f64 + log2_bigint(&norm2) / 2.0 + log2_bigint(&f.lead()) + 2.0;
    let mut k = 1u32;
    while (k as f64) * (p as f64).log2() < bound_bits {
        k *= 2;
    }
    let modulus = BigInt::from(p).pow(k);
    let lifted: Vec<IntPoly> = modular.iter().map(|g| hensel_lift(f, g, p, k)).collect();
    recombine(f, lifted, &modulus, &allowed, out)
}

fn subset_sums(degs: &[usize], n: usize) -> Vec<bool> {
    let mut s = vec![false; n + 1];
    s[0] = true;
    for &d in degs {
        for k in (d..=n).rev() {
            if s[k - d] {
                s[k] = true;
            }
        }
    }
    s
}

fn recombine(f: &IntPoly, mut lifted: Vec<IntPoly>, m: &BigInt, allowed: &[bool], out: &mut Vec<IntPoly>) -> bool {
    let mut cur = f.clone();
    let mut size = 1;
    let mut tests = 0usize;
    while 2 * size <= lifted.len() {
        let mut found = None;
        let r = lifted.len();
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let deg: usize = idx.iter().map(|&i| lifted[i].deg()).sum();
            if allowed[deg] {
                tests += 1;
                if tests > RECOMBINATION_BUDGET {
                    out.push(cur);
                    return false;
                }
                let lc = cur.lead();
                let mut cand = Poly::constant(lc.clone());
                for &i in &idx {
                    cand = reduce_sym(&(&cand * &lifted[i]), m);
                }
                let cand = normalize(&cand);
                if !cand.coeff(0).is_zero() && (cur.coeff(0) % cand.coeff(0)).is_zero() {
                    if let Some(q) = cur.exact_div(&cand) {
                        found = Some((idx.clone(), cand, q));
                        break;
                    }
                }
            }
            if !next_combination(&mut idx, r) {
                break;
            }
        }
        match found {
            Some((idx, g, q)) => {
                out.push(g);
                cur = normalize(&q);
                for &i in idx.iter().rev() {
                    lifted.remove(i);
                }
            }
            None => size += 1,
        }
    }
    if cur.deg() > 0 {
        out.push(cur);
    }
    true
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn reduce_sym(p: &IntPoly, m: &BigInt) -> IntPoly {
    let half = m >> 1;
    Poly::new(
        p.coeffs()
            .iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn reduce_pos(p: &IntPoly, m: &BigInt) -> IntPoly {
    Poly::new(p.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

/// Division by a monic integer polynomial.
fn divrem_monic(a: &IntPoly, b: &IntPoly) -> (IntPoly, IntPoly) {
    let db = b.deg();
    if a.is_zero() || a.deg() < db {
        return (Poly::zero(), a.clone());
    }
    let mut r = a.coeffs().to_vec();
    let mut q = vec![BigInt::zero(); a.deg() - db + 1];
    for i in (0..q.len()).rev() {
        let c = r[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.coeffs().iter().enumerate() {
            r[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    r.truncate(db);
    (Poly::new(q), Poly::new(r))
}

/// Lift a monic factor `h` of `f mod p` to a monic factor modulo `p^k`,
/// `k` a power of two.
fn hensel_lift(f: &IntPoly, h: &ModPoly, p: u64, k: u32) -> IntPoly {
    let fp = ModPoly::from_int(f, p);
    let (g0, _) = fp.divrem(h);
    let (one, s0, t0) = g0.xgcd(h);
    debug_assert_eq!(one.deg(), 0);
    let inv = inv_mod(one.c[0], p);
    let mut s = s0.scale(inv).to_int();
    let mut t = t0.scale(inv).to_int();
    let mut g = g0.to_int();
    let mut hh = h.to_int();
    let mut m = BigInt::from(p);
    let mut e = 1u32;
    while e < k {
        let m2 = &m * &m;
        let err = reduce_pos(&(f - &(&g * &hh)), &m2);
        let (q, r) = divrem_monic(&reduce_pos(&(&s * &err), &m2), &hh);
        let g2 = reduce_pos(&(&(&g + &(&t * &err)) + &(&q * &g)), &m2);
        let h2 = reduce_pos(&(&hh + &r), &m2);
        let b = reduce_pos(&(&(&(&s * &g2) + &(&t * &h2)) - &Poly::one()), &m2);
        let (c, d) = divrem_monic(&reduce_pos(&(&s * &b), &m2), &h2);
        let s2 = reduce_pos(&(&s - &d), &m2);
        let t2 = reduce_pos(&(&(&t - &(&t * &b)) - &(&c * &g2)), &m2);
        g = g2;
        hh = h2;
        s = s2;
        t = t2;
        m = m2;
        e *= 2;
    }
    hh
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

/// Polynomial over `F_p`, constant term first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
struct ModPoly {
    c: Vec<u64>,
    p: u64,
}

impl ModPoly {
    fn new(mut c: Vec<u64>, p: u64) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        ModPoly { c, p }
    }

    fn from_int(f: &IntPoly, p: u64) -> Self {
        let bp = BigInt::from(p);
        ModPoly::new(f.coeffs().iter().map(|x| x.mod_floor(&bp).to_u64().expect("small")).collect(), p)
    }

    fn to_int(&self) -> IntPoly {
        Poly::new(self.c.iter().map(|&x| BigInt::from(x)).collect())
    }

    fn x(p: u64) -> Self {
        ModPoly::new(vec![0, 1], p)
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    fn lead(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }

    fn scale(&self, k: u64) -> Self {
        ModPoly::new(self.c.iter().map(|&x| x * k % self.p).collect(), self.p)
    }

    fn monic(&self) -> Self {
        self.scale(inv_mod(self.lead(), self.p))
    }

    fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| (self.c.get(i).copied().unwrap_or(0) + self.p - o.c.get(i).copied().unwrap_or(0)) % self.p)
            .collect();
        ModPoly::new(c, self.p)
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return ModPoly::new(vec![], self.p);
        }
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = (c[i + j] + a * b) % self.p;
            }
        }
        ModPoly::new(c, self.p)
    }

    fn divrem(&self, d: &Self) -> (Self, Self) {
        let p = self.p;
        if self.deg() < d.deg() || self.is_zero() {
            return (ModPoly::new(vec![], p), self.clone());
        }
        let inv = inv_mod(d.lead(), p);
        let dd = d.deg();
        let mut r = self.c.clone();
        let mut q = vec![0u64; self.deg() - dd + 1];
        for i in (0..q.len()).rev() {
            let c = r[i + dd] * inv % p;
            q[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in d.c.iter().enumerate() {
                r[i + j] = (r[i + j] + p - c * b % p) % p;
            }
        }
        r.truncate(dd);
        (ModPoly::new(q, p), ModPoly::new(r, p))
    }

    fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    fn deriv(&self) -> Self {
        let c = self.c.iter().enumerate().skip(1).map(|(i, &a)| (i as u64 % self.p) * a % self.p).collect();
        ModPoly::new(c, self.p)
    }

    fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// `(g, s, t)` with `s*self + t*o = g`.
    fn xgcd(&self, o: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (ModPoly::new(vec![1], p), ModPoly::new(vec![], p));
        let (mut t0, mut t1) = (ModPoly::new(vec![], p), ModPoly::new(vec![1], p));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s2 = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t2);
        }
        (r0, s0, t0)
    }

    fn powmod(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = ModPoly::new(vec![1], self.p);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    /// Distinct degree factorization of a monic squarefree polynomial.
    fn ddf(&self) -> Vec<(Self, usize)> {
        let p = self.p;
        let mut out = Vec::new();
        let mut f = self.clone();
        let x = ModPoly::x(p);
        let mut h = x.clone();
        let pe = BigUint::from(p);
        let mut i = 1;
        while f.deg() >= 2 * i {
            h = h.powmod(&pe, &f);
            let g = f.gcd(&h.sub(&x));
            if g.deg() > 0 {
                f = f.divrem(&g).0;
                h = h.rem(&f);
                out.push((g, i));
            }
            i += 1;
        }
        if f.deg() > 0 {
            let d = f.deg();
            out.push((f.monic(), d));
        }
        out
    }

    /// Equal degree factorization into monic irreducibles of degree `d`.
    fn edf(&self, d: usize, rng: &mut ChaCha8Rng) -> Vec<Self> {
        let n = self.deg();
        if n == d {
            return vec![self.monic()];
        }
        let p = self.p;
        let e: BigUint = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
        loop {
            let a = ModPoly::new((0..n).map(|_| rng.gen_range(0..p)).collect(), p);
            if a.deg() == 0 {
                continue;
            }
            let g = self.gcd(&a);
            let split = if g.deg() > 0 && g.deg() < n {
                g
            } else {
                let b = a.powmod(&e, self).sub(&ModPoly::new(vec![1], p));
                self.gcd(&b)
            };
            if split.deg() > 0 && split.deg() < n {
                let (q, _) = self.divrem(&split);
                let mut out = split.edf(d, rng);
                out.extend(q.monic().edf(d, rng));
                return out;
            }
        }
    }
}

/// Rational roots of an integer polynomial, read off its linear factors.
pub fn rational_roots(f: &IntPoly) -> Result<Vec<num_rational::BigRational>> {
    let (fs, _) = factor(f)?;
    let mut out: Vec<_> = fs
        .iter()
        .filter(|(g, _)| g.deg() == 1)
        .map(|(g, _)| num_rational::BigRational::new(-g.coeff(0), g.coeff(1)))
        .collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(cs: &[i64]) -> IntPoly {
        Poly::from_i64s(cs)
    }

    fn product(fs: &[IntPoly]) -> IntPoly {
        fs.iter().fold(Poly::one(), |a, b| &a * b)
    }

    #[test]
    fn small_cases() {
        let f = ip(&[-1, 0, 1]);
        let fs = factor_squarefree(&f).unwrap();
        assert_eq!(fs.factors, vec![ip(&[-1, 1]), ip(&[1, 1])]);
        assert!(fs.complete);
        assert_eq!(is_irreducible(&ip(&[-1, -1, 1])).unwrap(), Some(true));
        assert_eq!(is_irreducible(&ip(&[1, 0, 0, 0, 1])).unwrap(), Some(true));
        // x^4 + 1 splits modulo every prime.
        assert_eq!(is_irreducible(&ip(&[4, 0, 0, 0, 1])).unwrap(), Some(false));
    }

    #[test]
    fn non_monic_products() {
        let parts = vec![ip(&[1, 2]), ip(&[-3, 0, 5]), ip(&[7, -1, 0, 2]), ip(&[1, 1, 1, 1, 3])];
        let f = product(&parts);
        let fs = factor_squarefree(&f).unwrap();
        assert!(fs.complete);
        assert_eq!(fs.factors.len(), 4);
        assert_eq!(product(&fs.factors), f);
    }

    #[test]
    fn lehmer_is_irreducible() {
        let l = ip(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        assert_eq!(is_irreducible(&l).unwrap(), Some(true));
    }

    #[test]
    fn swinnerton_dyer_like() {
        // (x^2-2)(x^2-3)(x^2-5)(x^2-7), many modular factors.
        let parts = vec![ip(&[-2, 0, 1]), ip(&[-3, 0, 1]), ip(&[-5, 0, 1]), ip(&[-7, 0, 1])];
        let f = product(&parts);
        let fs = factor_squarefree(&f).unwrap();
        assert_eq!(fs.factors.len(), 4);
        assert!(fs.complete);
        // x^4 - 10x^2 + 1 is irreducible but splits modulo every prime.
        assert_eq!(is_irreducible(&ip(&[1, 0, -10, 0, 1])).unwrap(), Some(true));
    }

    #[test]
    fn iterated_quadratic() {
        // numerator of f^4(x) - 1/2 for f = x^2 - 2 is irreducible of degree 16.
        let f = crate::ratfunc::IntRatFunc::new(ip(&[-2, 0, 1]), ip(&[1])).unwrap();
        let q = f.iterate(4).numer_minus(&num_rational::BigRational::new(1.into(), 2.into()));
        assert_eq!(q.deg(), 16);
        assert_eq!(is_irreducible(&q).unwrap(), Some(true));
        let roots = rational_roots(&ip(&[-6, 1, 1])).unwrap();
        assert_eq!(roots.len(), 2);
    }
}
