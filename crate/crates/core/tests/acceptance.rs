//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use htdyn::algebraic::AlgebraicNumber;
use htdyn::dynamics::{canonical_height, chebyshev, conjugate_map, verify_preperiodic, Point, RationalMap};
use htdyn::experiments::{
    bogomolov_classify, conjugate_points, enumerate_totally_real_preperiodic, equidistribution_report,
    pushforward_check, salem_bridge, salem_check, schinzel_search, small_height_sequence, Reference, Trichotomy,
};
use htdyn::heights::{height_algebraic, height_rational};
use htdyn::julia::{certify_reality, classify_quadratic, verify_certificate, QuadraticVerdict};
use htdyn::parse::parse_poly;
use htdyn::quad::QuadElem;
use htdyn::Rational;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn map(s: &str) -> RationalMap {
    RationalMap::parse(s).expect("map literal")
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T: std::fmt::Debug>(r: htdyn::Result<T>) -> Result<T, String> {
    r.map_err(|err| err.to_string())
}

const LOG_PHI_HALF: f64 = 0.2406059125298694;

fn schinzel() -> Check {
    let r = e(schinzel_search(2, 5, None))?;
    let diff = (r.height.value - 0.2406059125).abs();
    ensure(diff <= 1e-8, || format!("height {} off by {diff:.2e}", r.height.value))?;
    ensure(r.witness.to_string() == "x^2-x-1", || format!("witness {}", r.witness))?;
    Ok(format!("min height {:.10} at {}", r.height.value, r.witness))
}

fn power_map() -> Check {
    let f = map("x^2");
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let p: i64 = rng.gen_range(-1_000_000..=1_000_000);
        let q: i64 = rng.gen_range(1..=1_000_000);
        let r = rat(p, q);
        let h = e(canonical_height(&f, &Point::rational(r.clone()), 1e-9))?;
        worst = worst.max((h.value - height_rational(&r).value).abs());
    }
    ensure(worst <= 2e-9, || format!("max deviation {worst:.2e}"))?;
    Ok(format!("max deviation {worst:.2e} over 50 rationals"))
}

fn chebyshev_identity() -> Check {
    let phi = e(Point::parse("(1+sqrt(5))/2"))?;
    let zs: Vec<(Point, Point, f64)> = vec![
        (Point::int(2), Point::rational(rat(5, 2)), 2f64.ln()),
        (Point::int(3), Point::rational(rat(10, 3)), 3f64.ln()),
        (Point::rational(rat(1, 2)), Point::rational(rat(5, 2)), 2f64.ln()),
        (Point::rational(rat(5, 3)), Point::rational(rat(34, 15)), 5f64.ln()),
        (phi, e(Point::parse("sqrt(5)"))?, LOG_PHI_HALF),
    ];
    let mut worst = 0.0f64;
    for d in 2..=4 {
        let t = e(RationalMap::polynomial(&e(chebyshev(d))?))?;
        for (_, w, hz) in &zs {
            let h = e(canonical_height(&t, w, 1e-9))?;
            worst = worst.max((h.value - 2.0 * hz).abs());
        }
    }
    ensure(worst <= 1e-6, || format!("max deviation {worst:.2e}"))?;
    Ok(format!("max deviation {worst:.2e} over 15 pairs"))
}

fn sequences() -> Check {
    let mut last = Vec::new();
    for c in ["x^2-2", "x^2-5/2", "x^2-3"] {
        let s = e(small_height_sequence(&map(c), &rat(1, 2), 6, 1e-9))?;
        for r in &s {
            ensure(r.totally_real && r.real_roots == 1 << r.n && r.defining_degree == 1 << r.n, || {
                format!("{c}: n = {} has {} real roots", r.n, r.real_roots)
            })?;
            ensure(r.consistent(), || {
                format!("{c}: n = {} height {} vs {}", r.n, r.canonical_height, r.expected)
            })?;
        }
        let h6 = s[5].canonical_height.value;
        ensure(h6 < 0.02, || format!("{c}: ĥ(γ₆) = {h6}"))?;
        last.push(format!("{h6:.5}"));
    }
    Ok(format!("ĥ(γ₆) = {}", last.join(", ")))
}

fn quadratic_classification() -> Check {
    for (n, d) in [(-1, 1), (0, 1), (1, 1), (3, 2), (2, 1), (5, 2), (3, 1)] {
        let c = QuadElem::rational(rat(n, d));
        let r = e(classify_quadratic(&c))?;
        let want_real = n >= 2 * d;
        ensure(r.is_real() == want_real, || format!("c = {n}/{d}: real = {}", r.is_real()))?;
    }
    let r = e(classify_quadratic(&QuadElem::rational(rat(1, 1))))?;
    let QuadraticVerdict::NonReal { witness, .. } = &r.verdict else {
        return Err("c = 1 gave no witness".into());
    };
    let w = witness.approx();
    let target = (1.0 - 5f64.sqrt()) / 2.0;
    ensure(!witness.is_real() && ((w * w).re - target).abs() < 1e-12 && (w * w).im.abs() < 1e-12, || {
        format!("witness {w}")
    })?;
    let v = e(htdyn::dynamics::is_preperiodic(&map("x^2-1"), &Point::Algebraic(witness.clone())))?;
    ensure(v.is_preperiodic() && v.identity_checked, || "witness not certified preperiodic".into())?;
    Ok("real exactly for c >= 2; c = 1 witness is non-real and preperiodic".into())
}

fn trichotomy() -> Check {
    let r = e(bogomolov_classify(&map("x^2-2"), 4))?;
    match &r.verdict {
        Trichotomy::BogomolovFails { sequence, .. } if !sequence.is_empty() => {}
        other => return Err(format!("x^2-2: {}", verdict_name(other))),
    }
    let r = e(bogomolov_classify(&map("x^2-1"), 4))?;
    match &r.verdict {
        Trichotomy::BogomolovHolds { certificate, .. } => {
            let ok = match &certificate.verdict {
                htdyn::julia::JuliaVerdict::NonReal { witness } => {
                    !witness.point.is_real() && witness.multiplier.abs2_lo > 1.0
                }
                _ => false,
            };
            ensure(ok, || "x^2-1: witness is not a non-real repelling point".into())?;
        }
        other => return Err(format!("x^2-1: {}", verdict_name(other))),
    }
    let f = map("x^2-sqrt(5)");
    let r = e(bogomolov_classify(&f, 4))?;
    match &r.verdict {
        Trichotomy::BogomolovHolds { conjugate, .. } => {
            ensure(conjugate.to_string() == conjugate_map(&f).to_string(), || {
                format!("x^2-sqrt(5): witness map {conjugate}")
            })?;
        }
        other => return Err(format!("x^2-sqrt(5): {}", verdict_name(other))),
    }
    Ok("x^2-2 fails, x^2-1 holds, x^2-sqrt(5) holds via x^2+sqrt(5)".into())
}

fn verdict_name(t: &Trichotomy) -> &'static str {
    match t {
        Trichotomy::BogomolovHolds { .. } => "BogomolovHolds",
        Trichotomy::BogomolovFails { .. } => "BogomolovFails",
        Trichotomy::Inconclusive { .. } => "Inconclusive",
    }
}

fn enumeration() -> Check {
    let f = map("x^2-2");
    let r = e(enumerate_totally_real_preperiodic(&f, 2, None))?;
    ensure(!r.partial, || "enumeration was cut short".into())?;
    ensure(r.points.len() == 13, || format!("{} points", r.points.len()))?;
    for p in &r.points {
        let ok = e(verify_preperiodic(&f, &Point::algebraic(p.point.clone()), p.tail, p.period))?;
        ensure(ok && p.identity_checked, || format!("{} not re-verified", p.point))?;
    }
    // 2cos(2πk/n) of degree at most 2.
    let mut oracle: Vec<f64> = Vec::new();
    for n in 1..=12u32 {
        let units: Vec<u32> = (0..n).filter(|k| num_integer::gcd(*k, n) == 1).collect();
        if units.len() > 4 {
            continue;
        }
        for k in units {
            let v = 2.0 * (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos();
            if !oracle.iter().any(|o| (o - v).abs() < 1e-9) {
                oracle.push(v);
            }
        }
    }
    oracle.sort_by(f64::total_cmp);
    let mut got: Vec<f64> = r.points.iter().map(|p| p.point.approx().re).collect();
    got.sort_by(f64::total_cmp);
    ensure(got.len() == oracle.len() && got.iter().zip(&oracle).all(|(a, b)| (a - b).abs() < 1e-9), || {
        format!("values {got:?} differ from {oracle:?}")
    })?;
    Ok("13 points, all re-verified, matching ζ+1/ζ".into())
}

fn galois() -> Check {
    let f = map("x^2-sqrt(5)");
    let g = conjugate_map(&f);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    let part = |rng: &mut ChaCha8Rng| rat(rng.gen_range(-10..=10), rng.gen_range(1..=10));
    for _ in 0..20 {
        let a = e(QuadElem::new(5, part(&mut rng), part(&mut rng)))?;
        let h1 = e(canonical_height(&f, &Point::Quad(a.clone()), 1e-7))?;
        let h2 = e(canonical_height(&g, &Point::Quad(a.conj()), 1e-7))?;
        worst = worst.max((h1.value - h2.value).abs());
    }
    ensure(worst <= 2e-6, || format!("max deviation {worst:.2e}"))?;
    Ok(format!("max deviation {worst:.2e} over 20 points"))
}

fn ks_at(f: &str, eps: Rational, reference: Reference) -> Result<(f64, f64), String> {
    let s = e(small_height_sequence(&map(f), &eps, 6, 1e-6))?;
    let ks = |n: usize| -> Result<f64, String> {
        let pts = e(conjugate_points(&[s[n - 1].gamma.clone()]))?;
        Ok(e(equidistribution_report(&pts, &reference))?.ks)
    };
    Ok((ks(2)?, ks(6)?))
}

fn equidistribution() -> Check {
    let (a2, a6) = ks_at("x^2-2", rat(1, 2), Reference::Arcsine)?;
    ensure(a6 < a2, || format!("arcsine KS {a6} at n = 6 vs {a2} at n = 2"))?;
    let (c2, c6) = ks_at("(x^2-1)/(2x)", rat(2, 1), Reference::Cauchy)?;
    ensure(c6 < c2, || format!("Cauchy KS {c6} at n = 6 vs {c2} at n = 2"))?;
    let p = e(pushforward_check(&map("x^2-2"), 100_000, 0))?;
    ensure(p.ks <= 0.02, || format!("pushforward KS {}", p.ks))?;
    Ok(format!("arcsine {a2:.4} -> {a6:.4}, Cauchy {c2:.4} -> {c6:.4}, pushforward {:.4}", p.ks))
}

fn salem() -> Check {
    let p = e(parse_poly("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1"))?;
    let r = e(salem_check(&p))?;
    ensure(r.is_salem, || format!("rejected: {:?}", r.reason))?;
    let root = r.root_approx.unwrap_or(0.0);
    let h = r.height.as_ref().map(|h| h.value).unwrap_or(0.0);
    ensure((root - 1.17628).abs() <= 1e-4, || format!("root {root}"))?;
    ensure((h - 0.0162357).abs() <= 1e-6, || format!("height {h}"))?;
    let alpha: AlgebraicNumber = r.root.clone().ok_or("no root")?;
    let b = e(salem_bridge(&alpha, 1e-9))?;
    ensure(b.totally_real && b.beta_degree == 5, || format!("β degree {} totally real {}", b.beta_degree, b.totally_real))?;
    ensure(b.difference <= 1e-5, || format!("|ĥ(β) - 2h(α)| = {:.2e}", b.difference))?;
    let direct = e(height_algebraic(&alpha, 1e-9))?;
    ensure((2.0 * direct.value - 0.0324714).abs() <= 1e-6, || format!("2h(α) = {}", 2.0 * direct.value))?;
    Ok(format!("root {root:.6}, h {h:.7}, ĥ(β) {:.7}", b.canonical_height.value))
}

fn certificates() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut real, mut nonreal) = (0, 0);
    let mut attempts = 0;
    while real + nonreal < 100 {
        attempts += 1;
        if attempts > 400 {
            return Err(format!("only {} certificates emitted", real + nonreal));
        }
        let c = rat(rng.gen_range(-12..=16), rng.gen_range(1..=4));
        let f = e(RationalMap::quadratic(&QuadElem::rational(c.clone())))?;
        let cert = e(certify_reality(&f, 4))?;
        if !(cert.is_real() || cert.is_nonreal()) {
            continue;
        }
        let ok = e(verify_certificate(&cert))?;
        ensure(ok, || format!("certificate for c = {c} rejected"))?;
        if cert.is_real() {
            real += 1;
        } else {
            nonreal += 1;
        }
    }
    ensure(real > 0 && nonreal > 0, || format!("{real} real, {nonreal} non-real"))?;
    Ok(format!("{real} Real and {nonreal} NonReal certificates re-verified"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check, u64); 11] = [
        ("schinzel bound", schinzel, 10),
        ("power map height", power_map, 5),
        ("chebyshev identity", chebyshev_identity, 30),
        ("small-height sequences", sequences, 120),
        ("quadratic classification", quadratic_classification, 60),
        ("trichotomy classifier", trichotomy, 120),
        ("preperiodic enumeration", enumeration, 120),
        ("galois invariance", galois, 60),
        ("equidistribution trend", equidistribution, 180),
        ("salem bridge", salem, 30),
        ("certificate soundness", certificates, 120),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let late = took > Duration::from_secs(*limit);
        match out {
            Ok(msg) if !late => println!("PASS {:>2} {name}: {msg} ({:.2} s)", i + 1, took.as_secs_f64()),
            Ok(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} but took {:.2} s, limit {limit} s", i + 1, took.as_secs_f64());
            }
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} ({:.2} s)", i + 1, took.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

