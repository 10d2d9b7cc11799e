//! Simultaneous complex root finding with certified enclosures.
//!
//! Approximations come from Aberth–Ehrlich iteration, first in `f64` and
//! then at rising multiprecision. A set of approximations `z_i` of a
//! squarefree polynomial of degree `n` is certified with the inclusion
//! disks `|z - z_i| <= n |p(z_i)| / (|a_n| prod_{j != i} |z_i - z_j|)`:
//! their union holds every root, and a connected union of `m` disks holds
//! exactly `m` roots. Pairwise disjoint disks therefore isolate the roots.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_traits::{ToPrimitive, Zero};

use crate::ball::ComplexBall;
use crate::bigfloat::BigFloat;
use crate::error::{invalid, Error, Result};
use crate::poly::{log2_bigint, IntPoly};
use crate::sturm::SturmChain;

/// Default ceiling for precision escalation, in bits.
pub const DEFAULT_MAX_BITS: u32 = 1 << 14;

/// One distinct root of a polynomial.
#[derive(Clone, Debug)]
pub struct RootEnclosure {
    /// Contains exactly one root.
    pub ball: ComplexBall,
    pub multiplicity: u32,
    /// Certified real: the center lies on the real axis.
    pub real: bool,
}

impl RootEnclosure {
    pub fn re(&self) -> f64 {
        self.ball.re_f64()
    }

    pub fn im(&self) -> f64 {
        self.ball.im_f64()
    }

    pub fn approx(&self) -> Complex64 {
        Complex64::new(self.re(), self.im())
    }
}

/// Certified enclosures of all distinct roots of `p`, each of radius at
/// most `eps`, with multiplicities summing to `deg p`.
pub fn approx_roots(p: &IntPoly, eps: f64) -> Result<Vec<RootEnclosure>> {
    approx_roots_capped(p, eps, DEFAULT_MAX_BITS)
}

pub fn approx_roots_capped(p: &IntPoly, eps: f64, max_bits: u32) -> Result<Vec<RootEnclosure>> {
    if p.is_zero() || p.deg() == 0 {
        return invalid("root finding needs a polynomial of degree at least 1");
    }
    if !(eps > 0.0) {
        return invalid("root enclosure radius must be positive");
    }
    let parts = p.squarefree_decomposition();
    let mut target = eps;
    for _ in 0..12 {
        let mut out = Vec::new();
        for (s, k) in &parts {
            for (ball, real) in certify_squarefree(s, target, max_bits)? {
                out.push(RootEnclosure { ball, multiplicity: *k, real });
            }
        }
        let separated = (0..out.len())
            .all(|i| (i + 1..out.len()).all(|j| out[i].ball.disjoint(&out[j].ball)));
        if separated {
            sort_roots(&mut out);
            return Ok(out);
        }
        target /= 64.0;
    }
    Err(Error::PrecisionExhausted {
        bits: max_bits,
        context: "enclosures of distinct squarefree factors keep overlapping".into(),
    })
}

/// Sort by real part, then imaginary part.
fn sort_roots(v: &mut [RootEnclosure]) {
    v.sort_by(|a, b| {
        a.re()
            .partial_cmp(&b.re())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im().partial_cmp(&b.im()).unwrap_or(std::cmp::Ordering::Equal))
    });
}

/// Certified isolating balls for a squarefree integer polynomial, with a
/// flag for certified real roots.
pub fn certify_squarefree(p: &IntPoly, eps: f64, max_bits: u32) -> Result<Vec<(ComplexBall, bool)>> {
    let n = p.deg();
    if n == 1 {
        let r = num_rational::BigRational::new(-p.coeff(0), p.coeff(1));
        let mag = crate::poly::log2_bigint(r.numer()) - crate::poly::log2_bigint(r.denom());
        let prec = (128.0f64.max(mag - eps.log2() + 16.0)).min(max_bits.max(128) as f64) as u32;
        let c = BigFloat::from_ratio(&r, prec);
        let rad = crate::ball::up(c.to_f64().abs() * crate::ball::ulp(prec));
        return Ok(vec![(ComplexBall::new(c, BigFloat::zero_with(prec), rad), true)]);
    }
    let real_count = SturmChain::new(p)?.count_real();
    let coeff_bits = p.coeffs().iter().map(|c| c.bits()).max().unwrap_or(1) as u32;
    let mut z: Vec<Complex<BigFloat>> = match aberth_f64_int(p) {
        Some(zs) => zs
            .iter()
            .map(|c| Complex::new(BigFloat::from_f64(c.re, 128), BigFloat::from_f64(c.im, 128)))
            .collect(),
        None => initial_guesses_big(p, 128),
    };
    let mut prec = 128u32.max(next_pow2(coeff_bits / 2));
    let mut first = true;
    let mut last_failure = String::new();
    while prec <= max_bits {
        let work = prec + coeff_bits.min(prec) + 2 * (usize::BITS - n.leading_zeros()) + 16;
        let coeffs: Vec<BigFloat> = p.coeffs().iter().map(|c| BigFloat::from_int(c, work)).collect();
        for zi in z.iter_mut() {
            *zi = Complex::new(zi.re.with_prec(work), zi.im.with_prec(work));
        }
        let max_iter = if first { 200 } else { 12 };
        aberth_big(&coeffs, &mut z, max_iter, prec);
        first = false;
        match certify(p, &coeffs, &z, eps, real_count, work) {
            Ok(v) => return Ok(v),
            Err(msg) => last_failure = msg,
        }
        prec *= 2;
    }
    Err(Error::PrecisionExhausted { bits: max_bits, context: last_failure })
}

fn next_pow2(x: u32) -> u32 {
    x.max(1).next_power_of_two()
}

fn log2_sum_exp(terms: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = terms.filter(|t| t.is_finite()).collect();
    let m = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|t| (t - m).exp2()).sum::<f64>().log2()
}

fn cabs_log2(z: &Complex<BigFloat>) -> f64 {
    let a = z.re.log2_abs();
    let b = z.im.log2_abs();
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + 0.5 * ((2.0 * (a - m)).exp2() + (2.0 * (b - m)).exp2()).log2()
}

fn certify(
    p: &IntPoly,
    coeffs: &[BigFloat],
    z: &[Complex<BigFloat>],
    eps: f64,
    real_count: usize,
    work: u32,
) -> std::result::Result<Vec<(ComplexBall, bool)>, String> {
    let n = z.len();
    let log_a: Vec<f64> = p
        .coeffs()
        .iter()
        .map(|c| if c.is_zero() { f64::NEG_INFINITY } else { log2_bigint(c) })
        .collect();
    let log_lead = log_a[n];
    let unit = -(work as f64) + ((4 * n + 8) as f64).log2();
    // pairwise distances, log2
    let mut dist = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = Complex::new(&z[i].re - &z[j].re, &z[i].im - &z[j].im);
            let l = cabs_log2(&d);
            if l == f64::NEG_INFINITY {
                return Err("coincident approximations".into());
            }
            dist[i][j] = l;
            dist[j][i] = l;
        }
    }
    let margin = 1e-9 + n as f64 * 2f64.powi(-(work.min(1000) as i32) + 4);
    let mut log_r = vec![0.0f64; n];
    for i in 0..n {
        let lz = cabs_log2(&z[i]);
        let val = horner_big(coeffs, &z[i]);
        let lv = cabs_log2(&val);
        let lerr = unit + log2_sum_exp(log_a.iter().enumerate().map(|(k, la)| if k == 0 { *la } else { la + k as f64 * lz }));
        let lnum = log2_sum_exp([lv, lerr].into_iter());
        let lprod: f64 = (0..n).filter(|&j| j != i).map(|j| dist[i][j]).sum();
        log_r[i] = (n as f64).log2() + lnum - log_lead - lprod + margin;
        if log_r[i] > eps.log2() {
            return Err(format!("inclusion radius 2^{:.1} exceeds the requested bound", log_r[i]));
        }
    }
    let r: Vec<f64> = log_r.iter().map(|l| crate::ball::up(l.exp2())).collect();
    for i in 0..n {
        for j in i + 1..n {
            if dist[i][j] <= (r[i] + r[j]).log2() + margin {
                return Err("inclusion disks overlap".into());
            }
        }
    }
    // a disk meeting the real axis whose mirror image meets no other disk
    // holds a self-conjugate, hence real, root
    let mut out = Vec::with_capacity(n);
    let mut reals = 0;
    for i in 0..n {
        let im = z[i].im.to_f64().abs();
        let mut real = false;
        if im <= r[i] {
            let mirror = Complex::new(z[i].re.clone(), -z[i].im.clone());
            real = (0..n).filter(|&j| j != i).all(|j| {
                let d = Complex::new(&mirror.re - &z[j].re, &mirror.im - &z[j].im);
                cabs_log2(&d) > (r[i] + r[j]).log2() + margin
            });
        }
        if real {
            reals += 1;
            let rad = crate::ball::up(r[i] + crate::ball::up(im));
            if rad > eps {
                return Err("real enclosure wider than requested".into());
            }
            out.push((ComplexBall::new(z[i].re.clone(), BigFloat::zero_with(work), rad), true));
        } else {
            out.push((ComplexBall::new(z[i].re.clone(), z[i].im.clone(), r[i]), false));
        }
    }
    if reals != real_count {
        return Err(format!("{reals} certified real roots, Sturm count {real_count}"));
    }
    // recentring real roots enlarged their disks
    for i in 0..n {
        for j in i + 1..n {
            if !out[i].0.disjoint(&out[j].0) {
                return Err("recentred real disks overlap".into());
            }
        }
    }
    Ok(out)
}

fn horner_big(coeffs: &[BigFloat], z: &Complex<BigFloat>) -> Complex<BigFloat> {
    let mut acc = Complex::new(BigFloat::zero_with(z.re.prec()), BigFloat::zero_with(z.re.prec()));
    for c in coeffs.iter().rev() {
        acc = &acc * z;
        acc.re = &acc.re + c;
    }
    acc
}

/// `p(z)` and `p'(z)` together.
fn horner2_big(coeffs: &[BigFloat], z: &Complex<BigFloat>) -> (Complex<BigFloat>, Complex<BigFloat>) {
    let prec = z.re.prec();
    let zero = || Complex::new(BigFloat::zero_with(prec), BigFloat::zero_with(prec));
    let mut p = zero();
    let mut d = zero();
    for c in coeffs.iter().rev() {
        d = &(&d * z) + &p;
        p = &p * z;
        p.re = &p.re + c;
    }
    (p, d)
}

fn aberth_big(coeffs: &[BigFloat], z: &mut [Complex<BigFloat>], max_iter: usize, target_bits: u32) {
    let n = z.len();
    let prec = z.first().map_or(64, |c| c.re.prec());
    let one = BigFloat::from_i64(1, prec);
    for _ in 0..max_iter {
        let mut worst = f64::NEG_INFINITY;
        for i in 0..n {
            let (pv, dv) = horner2_big(coeffs, &z[i]);
            if pv.re.is_zero() && pv.im.is_zero() {
                continue;
            }
            if dv.re.is_zero() && dv.im.is_zero() {
                continue;
            }
            let ratio = cdiv(&pv, &dv, prec);
            let mut s = Complex::new(BigFloat::zero_with(prec), BigFloat::zero_with(prec));
            for j in 0..n {
                if j != i {
                    let d = Complex::new(&z[i].re - &z[j].re, &z[i].im - &z[j].im);
                    if d.re.is_zero() && d.im.is_zero() {
                        continue;
                    }
                    s = &s + &cinv(&d, prec);
                }
            }
            let rs = &ratio * &s;
            let den = Complex::new(&one - &rs.re, -rs.im.clone());
            if den.re.is_zero() && den.im.is_zero() {
                continue;
            }
            let w = cdiv(&ratio, &den, prec);
            let rel = cabs_log2(&w) - cabs_log2(&z[i]).max(-(prec as f64) / 2.0);
            worst = worst.max(rel);
            z[i] = Complex::new(&z[i].re - &w.re, &z[i].im - &w.im);
        }
        if worst < -(target_bits as f64) + 4.0 {
            break;
        }
    }
}

fn cinv(d: &Complex<BigFloat>, prec: u32) -> Complex<BigFloat> {
    let n2 = &(&d.re * &d.re) + &(&d.im * &d.im);
    Complex::new(d.re.div_prec(&n2, prec), (-d.im.clone()).div_prec(&n2, prec))
}

fn cdiv(a: &Complex<BigFloat>, b: &Complex<BigFloat>, prec: u32) -> Complex<BigFloat> {
    let i = cinv(b, prec);
    a * &i
}

/// Starting points on circles given by the upper convex hull of the
/// Newton polygon of `(k, log2 |a_k|)`.
fn newton_polygon_radii(log_a: &[f64]) -> Vec<(usize, f64)> {
    // returns (count, log2 radius) pairs
    let pts: Vec<(usize, f64)> = log_a
        .iter()
        .enumerate()
        .filter(|(_, l)| l.is_finite())
        .map(|(k, l)| (k, *l))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::new();
    // zero roots from leading zero coefficients
    if let Some(first) = hull.first() {
        if first.0 > 0 {
            out.push((first.0, f64::NEG_INFINITY));
        }
    }
    for w in hull.windows(2) {
        let m = w[1].0 - w[0].0;
        out.push((m, (w[0].1 - w[1].1) / m as f64));
    }
    out
}

fn initial_points(log_a: &[f64]) -> Vec<(f64, f64)> {
    let n = log_a.len() - 1;
    let mut out = Vec::with_capacity(n);
    let sigma = 0.7;
    for (m, lr) in newton_polygon_radii(log_a) {
        for j in 0..m {
            let ang = 2.0 * std::f64::consts::PI * (j as f64 / m as f64) + 2.0 * std::f64::consts::PI * out.len() as f64 / n as f64 + sigma;
            out.push((lr, ang));
        }
    }
    out
}

fn initial_guesses_big(p: &IntPoly, prec: u32) -> Vec<Complex<BigFloat>> {
    let log_a: Vec<f64> = p
        .coeffs()
        .iter()
        .map(|c| if c.is_zero() { f64::NEG_INFINITY } else { log2_bigint(c) })
        .collect();
    initial_points(&log_a)
        .into_iter()
        .map(|(lr, ang)| {
            let lr = if lr.is_finite() { lr } else { -60.0 };
            let e = lr.floor() as i64;
            let m = (lr - e as f64).exp2();
            let re = BigFloat::from_f64(m * ang.cos(), prec).ldexp(e);
            let im = BigFloat::from_f64(m * ang.sin(), prec).ldexp(e);
            Complex::new(re, im)
        })
        .collect()
}

/// Aberth iteration in `f64` on an integer polynomial whose coefficients
/// and roots fit the `f64` range. `None` when they do not.
fn aberth_f64_int(p: &IntPoly) -> Option<Vec<Complex64>> {
    let log_a: Vec<f64> = p
        .coeffs()
        .iter()
        .map(|c| if c.is_zero() { f64::NEG_INFINITY } else { log2_bigint(c) })
        .collect();
    let top = log_a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let shift = (top - 500.0).max(0.0) as usize;
    let coeffs: Vec<Complex64> = p
        .coeffs()
        .iter()
        .map(|c| Complex64::new(scaled_to_f64(c, shift), 0.0))
        .collect();
    if coeffs.last().map_or(true, |c| c.re == 0.0 || !c.re.is_finite()) {
        return None;
    }
    let init: Vec<Complex64> = initial_points(&log_a)
        .into_iter()
        .map(|(lr, ang)| {
            let r = if lr.is_finite() { lr.clamp(-900.0, 900.0).exp2() } else { 1e-30 };
            Complex64::from_polar(r, ang)
        })
        .collect();
    if init.iter().any(|z| !z.re.is_finite() || z.norm() > 1e200 || (z.norm() < 1e-200 && z.norm() != 0.0)) {
        return None;
    }
    Some(aberth_c64(&coeffs, init, 500))
}

fn scaled_to_f64(c: &BigInt, shift: usize) -> f64 {
    if shift == 0 {
        c.to_f64().unwrap_or(0.0)
    } else {
        (c >> shift).to_f64().unwrap_or(0.0)
    }
}

/// Newton correction `p(z)/p'(z)` evaluated through the reversed polynomial
/// when `|z| > 1` to keep intermediate values bounded.
fn newton_ratio(coeffs: &[Complex64], z: Complex64) -> Option<Complex64> {
    let n = coeffs.len() - 1;
    if z.norm() <= 1.0 {
        let (mut p, mut d) = (Complex64::zero(), Complex64::zero());
        for c in coeffs.iter().rev() {
            d = d * z + p;
            p = p * z + c;
        }
        if d == Complex64::zero() {
            return None;
        }
        Some(p / d)
    } else {
        let w = z.inv();
        let (mut r, mut dr) = (Complex64::zero(), Complex64::zero());
        for c in coeffs.iter() {
            dr = dr * w + r;
            r = r * w + c;
        }
        if r == Complex64::zero() {
            return Some(Complex64::zero());
        }
        // p(z) = z^n r(w), p'(z) = z^(n-1) (n r(w) - w r'(w))
        let den = Complex64::new(n as f64, 0.0) - w * dr / r;
        if den == Complex64::zero() {
            return None;
        }
        Some(z / den)
    }
}

/// Aberth–Ehrlich iteration on complex `f64` coefficients from the given
/// starting points.
pub fn aberth_c64(coeffs: &[Complex64], mut z: Vec<Complex64>, max_iter: usize) -> Vec<Complex64> {
    let n = z.len();
    let mut done = vec![false; n];
    for _ in 0..max_iter {
        let mut moving = false;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let Some(ratio) = newton_ratio(coeffs, z[i]) else {
                let bump = Complex64::new(1e-8, 1e-8) * (1.0 + z[i].norm());
                z[i] += bump;
                moving = true;
                continue;
            };
            let mut s = Complex64::zero();
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d != Complex64::zero() {
                        s += d.inv();
                    }
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                continue;
            }
            z[i] -= w;
            if w.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                done[i] = true;
            } else {
                moving = true;
            }
        }
        if !moving {
            break;
        }
    }
    z
}

/// Roots of a complex `f64` polynomial (constant term first), approximate.
pub fn roots_c64(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.len() > 1 && c.last().map_or(false, |x| x.norm() == 0.0) {
        c.pop();
    }
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![-c[0] / c[1]];
    }
    if n == 2 {
        let disc = (c[1] * c[1] - c[2] * c[0] * 4.0).sqrt();
        let q = if (c[1].conj() * disc).re >= 0.0 { -(c[1] + disc) * 0.5 } else { -(c[1] - disc) * 0.5 };
        if q.norm() == 0.0 {
            return vec![Complex64::zero(), Complex64::zero()];
        }
        return vec![q / c[2], c[0] / q];
    }
    let log_a: Vec<f64> = c.iter().map(|x| if x.norm() == 0.0 { f64::NEG_INFINITY } else { x.norm().log2() }).collect();
    let init = initial_points(&log_a)
        .into_iter()
        .map(|(lr, ang)| Complex64::from_polar(if lr.is_finite() { lr.exp2() } else { 1e-30 }, ang))
        .collect();
    aberth_c64(&c, init, 500)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    fn ip(cs: &[i64]) -> IntPoly {
        Poly::from_i64s(cs)
    }

    #[test]
    fn unit_roots() {
        let r = approx_roots(&ip(&[1, 0, 1]), 1e-10).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|e| !e.real && e.re().abs() < 1e-10 && (e.im().abs() - 1.0).abs() < 1e-10));
        assert!(r.iter().all(|e| e.ball.rad <= 1e-10));
    }

    #[test]
    fn golden_ratio() {
        let r = approx_roots(&ip(&[-1, -1, 1]), 1e-10).unwrap();
        assert!(r.iter().all(|e| e.real));
        assert!((r[0].re() + 0.6180339887498949).abs() < 1e-10);
        assert!((r[1].re() - 1.618033988749895).abs() < 1e-10);
    }

    #[test]
    fn unit_circle_pair() {
        let r = approx_roots(&ip(&[2, -1, 2]), 1e-10).unwrap();
        for e in &r {
            assert!((e.approx().norm() - 1.0).abs() < 1e-10);
            assert!((e.re() - 0.25).abs() < 1e-10);
        }
    }

    #[test]
    fn multiplicities() {
        // (x-1)^3 (x^2+1)
        let p = &ip(&[-1, 1]).pow(3) * &ip(&[1, 0, 1]);
        let r = approx_roots(&p, 1e-12).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r.iter().map(|e| e.multiplicity).sum::<u32>(), 5);
        let one = r.iter().find(|e| e.real).unwrap();
        assert_eq!(one.multiplicity, 3);
    }

    #[test]
    fn clustered_and_wide() {
        // Wilkinson-like polynomial with roots 1..12
        let mut p = ip(&[1]);
        for k in 1..=12 {
            p = &p * &ip(&[-k, 1]);
        }
        let r = approx_roots(&p, 1e-12).unwrap();
        assert_eq!(r.len(), 12);
        for (k, e) in r.iter().enumerate() {
            assert!(e.real);
            assert!((e.re() - (k + 1) as f64).abs() < 1e-12);
        }
        // huge and tiny roots together
        let q = &ip(&[-1, 1_000_000_000_000]) * &ip(&[-1_000_000_000_000, 1]);
        let r = approx_roots(&q, 1e-20).unwrap();
        assert!((r[0].re() - 1e-12).abs() < 1e-24);
        assert!((r[1].re() - 1e12).abs() < 1e-6);
    }

    #[test]
    fn complex_f64_roots() {
        let c = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let r = roots_c64(&c);
        assert_eq!(r.len(), 3);
        for z in r {
            assert!((z.powu(3) + 1.0).norm() < 1e-12);
        }
    }
}
