use htdyn::algebraic::{AlgebraicNumber, Rect, Selector};
use htdyn::dynamics::RationalMap;
use htdyn::experiments::{
    approx_common_point, bogomolov_classify, conjugate_points, enumerate_totally_real_preperiodic,
    equidistribution_report, northcott_box, salem_bridge, salem_check, schinzel_search, small_height_sequence,
    trace_polynomial, Reference, Trichotomy,
};
use htdyn::parse::parse_poly;
use htdyn::quad::quad;
use htdyn::{IntPoly, Rational};
use num_bigint::BigInt;

const LN2: f64 = std::f64::consts::LN_2;

fn map(s: &str) -> RationalMap {
    RationalMap::parse(s).unwrap()
}

fn p(s: &str) -> IntPoly {
    parse_poly(s).unwrap()
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn schinzel_boxes() {
    let r = schinzel_search(2, 5, None).unwrap();
    assert!((r.height.value - 0.24060591252980172).abs() <= 1e-12);
    assert_eq!(r.witness, p("x^2-x-1"));
    assert!(!r.partial);

    let r = schinzel_search(1, 5, None).unwrap();
    assert!((r.height.value - LN2).abs() <= 1e-15);
    assert_eq!(r.witness, p("x-2"));

    let r = schinzel_search(2, 1, None).unwrap();
    assert_eq!(r.witness, p("x^2-x-1"));

    let r = schinzel_search(3, 3, Some(10)).unwrap();
    assert!(r.partial && r.examined <= 10);
    assert!(schinzel_search(5, 1, None).is_err());
}

#[test]
fn halving_sequences() {
    let cases = [("x^2-3", rat(1, 2), 1.0525676977775774), ("(x^2-1)/(2x)", rat(2, 1), 0.8047189562170502)];
    for (f, eps, h0) in cases {
        let s = small_height_sequence(&map(f), &eps, 5, 1e-10).unwrap();
        assert_eq!(s.len(), 5);
        for r in &s {
            assert!(r.totally_real && r.consistent(), "{f}: n = {}", r.n);
            let want = h0 / f64::from(1u32 << r.n);
            assert!((r.canonical_height.value - want).abs() <= 1e-9, "{f}: n = {}", r.n);
        }
    }
    let s = small_height_sequence(&map("x^2-3"), &rat(1, 2), 1, 1e-10).unwrap();
    assert!((s[0].gamma.approx().re - 3.5f64.sqrt()).abs() < 1e-14);
    assert_eq!(s[0].degree, 2);

    // 2 is preperiodic for x^2-2.
    assert!(small_height_sequence(&map("x^2-2"), &rat(2, 1), 3, 1e-9).is_err());
}

fn verdict(f: &str) -> &'static str {
    match bogomolov_classify(&map(f), 4).unwrap().verdict {
        Trichotomy::BogomolovHolds { .. } => "holds",
        Trichotomy::BogomolovFails { .. } => "fails",
        Trichotomy::Inconclusive { .. } => "inconclusive",
    }
}

#[test]
fn classifier() {
    assert_eq!(verdict("x^2-2"), "fails");
    assert_eq!(verdict("x^2-3"), "fails");
    assert_eq!(verdict("x^2-1"), "holds");
    assert_eq!(verdict("x^2+1"), "holds");
    assert_eq!(verdict("x^2-sqrt(5)"), "holds");
    assert_eq!(verdict("(x^2-1)/(2x)"), "inconclusive");
}

fn values(f: &str, deg: usize) -> Vec<f64> {
    let r = enumerate_totally_real_preperiodic(&map(f), deg, None).unwrap();
    assert!(!r.partial);
    r.points.iter().map(|q| q.point.approx().re).collect()
}

#[test]
fn preperiodic_enumerations() {
    assert_eq!(values("x^2", 2), vec![-1.0, 0.0, 1.0]);
    assert_eq!(values("x^2-3", 1), vec![-2.0, -1.0, 1.0, 2.0]);
    assert_eq!(values("x^2-2", 1), vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
    assert_eq!(values("x^2-2", 2).len(), 13);
}

#[test]
fn northcott_boxes() {
    let b = northcott_box(&map("x^2-2"), 2).unwrap();
    assert_eq!(b.len(), 3);
    assert_eq!(b[2], BigInt::from(1));
    assert!(b[0] >= BigInt::from(2) && b[1] >= BigInt::from(2));
}

#[test]
fn salem_numbers() {
    let r = salem_check(&p("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1")).unwrap();
    assert!(r.is_salem);
    assert!((r.root_approx.unwrap() - 1.1762808182599176).abs() < 1e-12);
    assert!((r.height.unwrap().value - 0.016235761200773814).abs() < 1e-12);

    for s in ["x^2-x-1", "x^2-3", "x^4+1", "x^4-x^3-5x^2-x+1"] {
        assert!(!salem_check(&p(s)).unwrap().is_salem, "{s}");
    }
    let r = salem_check(&p("x^4-x^3-x^2-x+1")).unwrap();
    assert!(r.is_salem);
    assert!((r.root_approx.unwrap() - 1.7220838057390422).abs() < 1e-12);

    assert_eq!(trace_polynomial(&p("x^4-x^3-x^2-x+1")).unwrap(), p("x^2-x-3"));
}

#[test]
fn salem_bridges() {
    let r = salem_check(&p("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1")).unwrap();
    let b = salem_bridge(&r.root.unwrap(), 1e-10).unwrap();
    assert!(b.totally_real && b.consistent);
    assert_eq!(b.beta_degree, 5);
    assert!((b.canonical_height.value - 0.032471522401547628).abs() <= 1e-9);

    let phi = AlgebraicNumber::from_poly_root(&p("x^2-x-1"), Selector::Interval(rat(1, 1), rat(2, 1))).unwrap();
    assert!(salem_bridge(&phi, 1e-9).is_err());
}

#[test]
fn common_points() {
    let c = approx_common_point(5, (&rat(0, 1), &rat(1, 1)), (&rat(2, 1), &rat(3, 1))).unwrap();
    let (x, y) = (c.to_complex_f64().0, c.conj().to_complex_f64().0);
    assert!(0.0 < x && x < 1.0 && 2.0 < y && y < 3.0);
    assert_eq!(c, quad(5, (3, 2), (-1, 2)));

    for d in [2, 5] {
        let c = approx_common_point(d, (&rat(0, 1), &rat(1, 1)), (&rat(0, 1), &rat(1, 1))).unwrap();
        for v in [c.to_complex_f64().0, c.conj().to_complex_f64().0] {
            assert!(0.0 < v && v < 1.0);
        }
    }
    assert!(approx_common_point(4, (&rat(0, 1), &rat(1, 1)), (&rat(0, 1), &rat(1, 1))).is_err());
    assert!(approx_common_point(-1, (&rat(0, 1), &rat(1, 1)), (&rat(0, 1), &rat(1, 1))).is_err());
}

#[test]
fn root_of_unity_spacing() {
    let r = Rect { re_lo: rat(99, 100), re_hi: rat(101, 100), im_lo: rat(0, 1), im_hi: rat(2, 10) };
    let z = AlgebraicNumber::from_poly_root(&p("x^32+1"), Selector::Rect(r)).unwrap();
    let pts = conjugate_points(&[z]).unwrap();
    assert_eq!(pts.len(), 32);
    let rep = equidistribution_report(&pts, &Reference::CircleUniform).unwrap();
    // Equal spacing: half a gap once rotated, up to the rotation grid.
    assert!(rep.ks <= 1.0 / 64.0 + 1.0 / 1024.0, "{}", rep.ks);
    assert!(rep.w1 <= 1.0 / 32.0, "{}", rep.w1);
}

#[test]
fn arcsine_trend() {
    let s = small_height_sequence(&map("x^2-2"), &rat(1, 2), 6, 1e-6).unwrap();
    let ks = |n: usize| {
        let pts = conjugate_points(&[s[n - 1].gamma.clone()]).unwrap();
        equidistribution_report(&pts, &Reference::Arcsine).unwrap().ks
    };
    let (k2, k6) = (ks(2), ks(6));
    assert!(k6 < k2, "{k6} vs {k2}");
    assert!(k6 < 0.1);
}
