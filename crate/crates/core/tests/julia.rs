use htdyn::dynamics::RationalMap;
use htdyn::julia::{
    all_preimages_real, certify_reality, chordal_distance, classify_quadratic, find_nonreal_repelling,
    sample_invariant_measure, verify_certificate, verify_invariant_intervals, IntervalSystem, JuliaVerdict,
    QuadraticVerdict,
};
use htdyn::quad::QuadElem;
use htdyn::Rational;
use num_bigint::BigInt;
use num_complex::Complex64;
use std::f64::consts::PI;

const CAP: u64 = 1 << 12;

fn map(s: &str) -> RationalMap {
    RationalMap::parse(s).unwrap()
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn ks(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn preimage_reality() {
    assert!(all_preimages_real(&map("x^2-2"), &rat(0, 1)).unwrap());
    assert!(!all_preimages_real(&map("x^2"), &rat(-1, 1)).unwrap());
    assert!(all_preimages_real(&map("(x^2-1)/(2x)"), &rat(2, 1)).unwrap());
}

#[test]
fn invariant_intervals() {
    let s = IntervalSystem::single(rat(-2, 1), rat(2, 1)).unwrap();
    assert!(verify_invariant_intervals(&map("x^2-2"), &s).unwrap().holds);

    let s = IntervalSystem::single(rat(-1, 1), rat(1, 1)).unwrap();
    let t = verify_invariant_intervals(&map("x^2"), &s).unwrap();
    assert!(!t.holds && t.failure.is_some());

    let s = IntervalSystem::single(rat(-3, 1), rat(3, 1)).unwrap();
    assert!(verify_invariant_intervals(&map("x^2-3"), &s).unwrap().holds);

    assert!(IntervalSystem::single(rat(1, 1), rat(0, 1)).is_err());
}

#[test]
fn nonreal_repelling_points() {
    let w = find_nonreal_repelling(&map("x^2"), 2, CAP).unwrap().expect("witness");
    assert_eq!(w.period, 2);
    let z = w.point.approx();
    assert!((z.norm() - 1.0).abs() < 1e-12 && (z.re + 0.5).abs() < 1e-12);
    assert!(w.multiplier.abs2_lo <= 16.0 + 1e-9 && 16.0 - 1e-9 <= w.multiplier.abs2_hi);

    // The only 2-cycle of x^2-1 is {0, -1}; the first non-real cycle comes later.
    assert!(find_nonreal_repelling(&map("x^2-1"), 2, CAP).unwrap().is_none());
    let w = find_nonreal_repelling(&map("x^2-1"), 4, CAP).unwrap().expect("witness");
    assert!(!w.point.is_real() && w.multiplier.abs2_lo > 1.0);

    assert!(find_nonreal_repelling(&map("x^2-2"), 4, CAP).unwrap().is_none());
}

#[test]
fn reality_certificates() {
    let cert = certify_reality(&map("x^2-5/2"), 4).unwrap();
    match &cert.verdict {
        JuliaVerdict::Real { system, anchor, .. } => {
            let iv = &system.intervals()[0];
            assert_eq!((iv.lo.clone(), iv.hi.clone()), (rat(-5, 2), rat(5, 2)));
            assert!((anchor.approx().re - (1.0 + 11f64.sqrt()) / 2.0).abs() < 1e-12);
        }
        other => panic!("{other:?}"),
    }
    assert!(verify_certificate(&cert).unwrap());

    let cert = certify_reality(&map("x^2-1"), 4).unwrap();
    assert!(cert.is_nonreal());
    assert!(verify_certificate(&cert).unwrap());

    let cert = certify_reality(&map("(x^2-1)/(2x)"), 4).unwrap();
    match &cert.verdict {
        JuliaVerdict::Inconclusive { samples, .. } => assert!(samples.iter().all(|s| s.all_real)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn quadratic_family() {
    assert!(classify_quadratic(&QuadElem::rational(rat(2, 1))).unwrap().is_real());
    assert!(classify_quadratic(&QuadElem::rational(rat(5, 2))).unwrap().is_real());
    let r = classify_quadratic(&QuadElem::rational(rat(1, 1))).unwrap();
    match r.verdict {
        QuadraticVerdict::NonReal { witness, identity_checked, .. } => {
            let w = witness.approx();
            assert!(w.re.abs() < 1e-14);
            assert!((w.im.abs() - ((5f64.sqrt() - 1.0) / 2.0).sqrt()).abs() < 1e-14);
            assert!(identity_checked);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn circle_samples() {
    let s = sample_invariant_measure(&map("x^2"), 5000, 1).unwrap();
    assert!(s.iter().all(|z| (z.norm() - 1.0).abs() <= 1e-6));
    let args: Vec<f64> = s.iter().map(|z| z.arg().rem_euclid(2.0 * PI) / (2.0 * PI)).collect();
    assert!(ks(args, |t| t) <= 0.05);
}

#[test]
fn interval_samples() {
    let s = sample_invariant_measure(&map("x^2-2"), 100_000, 3).unwrap();
    assert!(s.iter().all(|z| z.im.abs() <= 1e-9 && z.re.abs() <= 2.0 + 1e-9));
    let d = ks(s.iter().map(|z| z.re).collect(), |x| 0.5 + (x / 2.0).clamp(-1.0, 1.0).asin() / PI);
    assert!(d <= 0.05, "{d}");

    let s = sample_invariant_measure(&map("(x^2-1)/(2x)"), 100_000, 3).unwrap();
    assert!(s.iter().all(|z| z.im.abs() <= 1e-9));
    let d = ks(s.iter().map(|z| z.re).collect(), |x| 0.5 + x.atan() / PI);
    assert!(d <= 0.05, "{d}");
}

#[test]
fn sampling_is_deterministic() {
    let a = sample_invariant_measure(&map("x^2-1"), 200, 42).unwrap();
    let b = sample_invariant_measure(&map("x^2-1"), 200, 42).unwrap();
    assert_eq!(a, b);
}

#[test]
fn chordal_metric() {
    assert_eq!(chordal_distance(Some(Complex64::new(0.0, 0.0)), None), 1.0);
    let z = Some(Complex64::new(0.3, -2.0));
    assert_eq!(chordal_distance(z, z), 0.0);
    let d = chordal_distance(Some(Complex64::new(1.0, 0.0)), Some(Complex64::new(-1.0, 0.0)));
    assert!((d - 1.0).abs() < 1e-15);
    assert_eq!(chordal_distance(None, None), 0.0);
}
