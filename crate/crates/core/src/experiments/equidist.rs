//! Empirical discrepancy between point sets and reference measures.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebraic::AlgebraicNumber;
use crate::dynamics::RationalMap;
use crate::error::{invalid, Result};
use crate::julia::sample_invariant_measure;

const ROTATIONS: usize = 1024;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Reference {
    /// Uniform measure on the unit circle, compared in angle.
    CircleUniform,
    /// `dx / (π √(4 - x²))` on `[-2, 2]`.
    Arcsine,
    /// `dx / (π (1 + x²))` on the real line.
    Cauchy,
    /// A second sample, compared on both coordinates.
    Sampled {
        seed: u64,
        #[serde(skip)]
        samples: Vec<Complex64>,
    },
}

impl Reference {
    pub fn name(&self) -> &'static str {
        match self {
            Reference::CircleUniform => "circle-uniform",
            Reference::Arcsine => "arcsine",
            Reference::Cauchy => "cauchy",
            Reference::Sampled { .. } => "sampled",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscrepancyReport {
    pub sample_size: usize,
    pub ks: f64,
    pub w1: f64,
    pub reference: Reference,
    /// Best rotation, in turns, for the circle reference.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotation: Option<f64>,
}

/// All conjugates of the given algebraic numbers, as floating point values.
pub fn conjugate_points(points: &[AlgebraicNumber]) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    for a in points {
        for r in a.conjugates(1e-12)? {
            for _ in 0..r.multiplicity {
                out.push(r.approx());
            }
        }
    }
    Ok(out)
}

fn arcsine_cdf(x: f64) -> f64 {
    0.5 + (x / 2.0).clamp(-1.0, 1.0).asin() / PI
}

/// Antiderivative of the arcsine quantile `2 sin(π(u - 1/2))`.
fn arcsine_quantile_integral(u: f64) -> f64 {
    -2.0 / PI * (PI * (u - 0.5)).cos()
}

fn cauchy_cdf(x: f64) -> f64 {
    0.5 + x.atan() / PI
}

fn angle_turns(z: Complex64) -> f64 {
    let t = z.im.atan2(z.re) / (2.0 * PI);
    if t < 0.0 {
        t + 1.0
    } else {
        t
    }
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// One-sample KS distance of sorted values `u` in `[0, 1]` from uniform.
fn ks_uniform(u: &[f64]) -> f64 {
    let n = u.len() as f64;
    u.iter()
        .enumerate()
        .map(|(i, &v)| (v - i as f64 / n).max((i + 1) as f64 / n - v))
        .fold(0.0, f64::max)
}

/// `∫ |v - u| du` over `[a, b]`.
fn abs_integral(v: f64, a: f64, b: f64) -> f64 {
    if v <= a {
        ((a + b) / 2.0 - v) * (b - a)
    } else if v >= b {
        (v - (a + b) / 2.0) * (b - a)
    } else {
        ((v - a).powi(2) + (b - v).powi(2)) / 2.0
    }
}

/// W1 between sorted values in `[0, 1]` and the uniform measure.
fn w1_uniform(u: &[f64]) -> f64 {
    let n = u.len() as f64;
    u.iter().enumerate().map(|(i, &v)| abs_integral(v, i as f64 / n, (i + 1) as f64 / n)).sum()
}

/// W1 between sorted reals and the arcsine law, through quantiles.
fn w1_arcsine(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let q = arcsine_quantile_integral;
    x.iter()
        .enumerate()
        .map(|(i, &v)| {
            let (a, b) = (i as f64 / n, (i + 1) as f64 / n);
            let m = arcsine_cdf(v).clamp(a, b);
            v * (m - a) - (q(m) - q(a)) + (q(b) - q(m)) - v * (b - m)
        })
        .sum()
}

/// Two-sample KS distance of sorted values.
fn ks_two(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// `∫ |F_a - F_b|` for sorted samples.
fn w1_two(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut xs: Vec<f64> = a.iter().chain(b).copied().collect();
    xs.sort_by(f64::total_cmp);
    let (mut i, mut j, mut acc) = (0, 0, 0.0);
    for w in xs.windows(2) {
        while i < a.len() && a[i] <= w[0] {
            i += 1;
        }
        while j < b.len() && b[j] <= w[0] {
            j += 1;
        }
        acc += (i as f64 / na - j as f64 / nb).abs() * (w[1] - w[0]);
    }
    acc
}

/// KS and W1 distances between the points and the reference measure.
pub fn equidistribution_report(points: &[Complex64], reference: &Reference) -> Result<DiscrepancyReport> {
    if points.is_empty() {
        return invalid("equidistribution needs at least one point");
    }
    if points.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return invalid("points must be finite");
    }
    let mut rotation = None;
    let (ks, w1) = match reference {
        Reference::CircleUniform => {
            let t: Vec<f64> = points.iter().map(|&z| angle_turns(z)).collect();
            let mut best = (f64::INFINITY, 0.0, 0.0);
            for r in 0..ROTATIONS {
                let shift = r as f64 / ROTATIONS as f64;
                let u = sorted(t.iter().map(|v| (v - shift).rem_euclid(1.0)).collect());
                let ks = ks_uniform(&u);
                if ks < best.0 {
                    best = (ks, w1_uniform(&u), shift);
                }
            }
            rotation = Some(best.2);
            (best.0, best.1)
        }
        Reference::Arcsine => {
            let x = sorted(points.iter().map(|z| z.re).collect());
            let u: Vec<f64> = x.iter().map(|&v| arcsine_cdf(v)).collect();
            (ks_uniform(&u), w1_arcsine(&x))
        }
        Reference::Cauchy => {
            let u = sorted(points.iter().map(|z| cauchy_cdf(z.re)).collect());
            (ks_uniform(&u), w1_uniform(&u))
        }
        Reference::Sampled { samples, .. } => {
            if samples.is_empty() {
                return invalid("the reference sample is empty");
            }
            let re_a = sorted(points.iter().map(|z| z.re).collect());
            let re_b = sorted(samples.iter().map(|z| z.re).collect());
            let im_a = sorted(points.iter().map(|z| z.im).collect());
            let im_b = sorted(samples.iter().map(|z| z.im).collect());
            (ks_two(&re_a, &re_b).max(ks_two(&im_a, &im_b)), w1_two(&re_a, &re_b) + w1_two(&im_a, &im_b))
        }
    };
    Ok(DiscrepancyReport { sample_size: points.len(), ks, w1, reference: reference.clone(), rotation })
}

/// `(x, empirical CDF, reference CDF)` at every sorted sample coordinate.
/// The circle uses angles in turns, sampled references use real parts.
pub fn discrepancy_curve(points: &[Complex64], reference: &Reference) -> Vec<[f64; 3]> {
    let n = points.len() as f64;
    let coord: Box<dyn Fn(Complex64) -> f64> = match reference {
        Reference::CircleUniform => Box::new(angle_turns),
        _ => Box::new(|z: Complex64| z.re),
    };
    let xs = sorted(points.iter().map(|&z| coord(z)).collect());
    let ref_sorted = match reference {
        Reference::Sampled { samples, .. } => sorted(samples.iter().map(|z| z.re).collect()),
        _ => Vec::new(),
    };
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let r = match reference {
                Reference::CircleUniform => x,
                Reference::Arcsine => arcsine_cdf(x),
                Reference::Cauchy => cauchy_cdf(x),
                Reference::Sampled { .. } => {
                    ref_sorted.partition_point(|&v| v <= x) as f64 / ref_sorted.len().max(1) as f64
                }
            };
            [x, (i + 1) as f64 / n, r]
        })
        .collect()
}

/// Evaluates `f` in floating point; `None` at poles.
pub fn eval_c64(f: &RationalMap, z: Complex64) -> Option<Complex64> {
    let ev = |p: &crate::Poly<crate::quad::QuadElem>| {
        p.coeffs().iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| {
            let (re, im) = c.to_complex_f64();
            acc * z + Complex64::new(re, im)
        })
    };
    let q = ev(f.ratfunc().den());
    (q.norm() > 0.0).then(|| ev(f.ratfunc().num()) / q)
}

/// KS distance between a sample of the canonical measure and the image
/// under `f` of an independent sample; small when the sampler respects
/// `f_* μ = μ`.
pub fn pushforward_check(f: &RationalMap, n: usize, seed: u64) -> Result<DiscrepancyReport> {
    let a = sample_invariant_measure(f, n, seed)?;
    let b = sample_invariant_measure(f, n, seed.wrapping_add(1))?;
    let image: Vec<Complex64> = b.iter().filter_map(|&z| eval_c64(f, z)).collect();
    equidistribution_report(&image, &Reference::Sampled { seed, samples: a })
}
