use htdyn::dynamics::{canonical_height, evaluate, Point, RationalMap};
use htdyn::experiments::{approx_common_point, equidistribution_report, Reference};
use htdyn::heights::height_rational;
use htdyn::quad::QuadElem;
use htdyn::sturm::{count_real_roots, isolate_real_roots};
use htdyn::{IntPoly, Rational};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn poly(max_deg: usize) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-9i64..=9, 1..=max_deg + 1).prop_map(|cs| IntPoly::from_i64s(&cs))
}

fn nonconstant(max_deg: usize) -> impl Strategy<Value = IntPoly> {
    poly(max_deg).prop_filter("positive degree", |p| !p.is_zero() && p.deg() > 0)
}

fn rational() -> impl Strategy<Value = Rational> {
    (-500i64..=500, 1i64..=500).prop_map(|(n, d)| rat(n, d))
}

fn quad_elem() -> impl Strategy<Value = QuadElem> {
    (prop::sample::select(vec![-3i64, -1, 2, 3, 5, 7]), rational(), rational())
        .prop_map(|(d, a, b)| QuadElem::new(d, a, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_laws(a in poly(4), b in poly(4), c in poly(4)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) - &b, a);
    }

    #[test]
    fn division_reconstructs(a in poly(6), b in nonconstant(3)) {
        let (a, b) = (a.to_rat(), b.to_rat());
        let (q, r) = a.div_rem(&b);
        prop_assert!(r.is_zero() || r.deg() < b.deg());
        prop_assert_eq!(&(&q * &b) + &r, a);
    }

    #[test]
    fn resultant_is_multiplicative(a in nonconstant(3), b in nonconstant(3), c in nonconstant(3)) {
        let ab = (&a * &b).resultant(&c).unwrap();
        let split = a.resultant(&c).unwrap() * b.resultant(&c).unwrap();
        prop_assert_eq!(ab, split);
    }

    #[test]
    fn squarefree_part_keeps_real_roots(a in nonconstant(3), b in nonconstant(2)) {
        // b^2 repeats every root of b.
        let p = &a * &(&b * &b);
        let s = p.squarefree_part().unwrap();
        prop_assert!(s.is_squarefree());
        prop_assert!(s.divides(&p));
        let n = count_real_roots(&s).unwrap();
        prop_assert_eq!(isolate_real_roots(&s).unwrap().len(), n);
        prop_assert!(n <= s.deg());
        let sb = b.squarefree_part().unwrap();
        prop_assert!(count_real_roots(&sb).unwrap() <= n);
    }

    #[test]
    fn isolating_intervals_are_disjoint(p in nonconstant(6)) {
        let s = p.squarefree_part().unwrap();
        let ivs = isolate_real_roots(&s).unwrap();
        for w in ivs.windows(2) {
            prop_assert!(w[0].1 <= w[1].0);
        }
        for (lo, hi) in &ivs {
            prop_assert!(lo < hi);
            prop_assert!(s.sign_at(lo) * s.sign_at(hi) <= 0);
        }
    }

    #[test]
    fn height_is_inversion_invariant(r in rational()) {
        prop_assume!(!r.is_zero());
        prop_assert_eq!(height_rational(&r).value, height_rational(&(Rational::one() / &r)).value);
    }

    #[test]
    fn quadratic_field_laws(x in quad_elem(), y in quad_elem()) {
        let y = y.in_field(x.d());
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        if !x.norm().is_zero() {
            prop_assert_eq!(&x * &x.inv().unwrap(), QuadElem::rational(Rational::one()).in_field(x.d()));
        }
    }

    #[test]
    fn permuting_points_keeps_discrepancy(
        xs in prop::collection::vec(-1.99f64..1.99, 4..40),
        seed in any::<u64>(),
    ) {
        let pts: Vec<Complex64> = xs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let mut shuffled = pts.clone();
        let n = shuffled.len();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s >> 33) as usize % (i + 1));
        }
        let a = equidistribution_report(&pts, &Reference::Arcsine).unwrap();
        let b = equidistribution_report(&shuffled, &Reference::Arcsine).unwrap();
        prop_assert_eq!(a.ks, b.ks);
        prop_assert!((a.w1 - b.w1).abs() <= 1e-12);
        prop_assert!(a.ks > 0.0 && a.ks <= 1.0);
    }

    #[test]
    fn common_point_lands_in_both_intervals(
        d in prop::sample::select(vec![2i64, 3, 5, 6, 7]),
        a in -20i64..20, wa in 1i64..8,
        b in -20i64..20, wb in 1i64..8,
    ) {
        let (l1, h1) = (rat(a, 4), rat(a + wa, 4));
        let (l2, h2) = (rat(b, 4), rat(b + wb, 4));
        let c = approx_common_point(d, (&l1, &h1), (&l2, &h2)).unwrap();
        let inside = |e: &QuadElem, lo: &Rational, hi: &Rational| {
            // Exact sign tests: a + b√d against each endpoint.
            let below = QuadElem::rational(lo.clone()).in_field(d);
            let above = QuadElem::rational(hi.clone()).in_field(d);
            positive(&(e - &below)) && positive(&(&above - e))
        };
        prop_assert!(inside(&c, &l1, &h1));
        prop_assert!(inside(&c.conj(), &l2, &h2));
    }
}

/// Whether `a + b√d > 0` for `d > 0`, decided exactly.
fn positive(e: &QuadElem) -> bool {
    let (a, b) = (e.a().clone(), e.b().clone());
    let d = Rational::from_integer(BigInt::from(e.d()));
    let zero = Rational::zero();
    match (a > zero, b > zero) {
        (true, true) => true,
        (false, false) => false,
        (true, false) => &a * &a > &b * &b * &d,
        (false, true) => &b * &b * &d > &a * &a,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn power_map_height_is_weil_height(r in rational()) {
        let f = RationalMap::parse("x^2").unwrap();
        let h = canonical_height(&f, &Point::rational(r.clone()), 1e-9).unwrap();
        prop_assert!((h.value - height_rational(&r).value).abs() <= 1e-9);
    }

    #[test]
    fn canonical_height_scales_along_orbits(c in -4i64..=4, cd in 1i64..=3, x in rational()) {
        let f = RationalMap::quadratic(&QuadElem::rational(rat(c, cd))).unwrap();
        let p = Point::rational(x);
        let y = evaluate(&f, &p).unwrap();
        let hx = canonical_height(&f, &p, 1e-9).unwrap();
        let hy = canonical_height(&f, &y, 1e-9).unwrap();
        prop_assert!((hy.value - 2.0 * hx.value).abs() <= 2.0 * hx.err + hy.err + 1e-12,
            "{} vs 2 * {}", hy.value, hx.value);
        prop_assert!(hx.value >= -hx.err);
    }

    #[test]
    fn canonical_height_is_galois_invariant(a in rational(), b in rational()) {
        let x = QuadElem::new(5, a, b).unwrap();
        let f = RationalMap::parse("x^2-sqrt(5)").unwrap();
        let g = htdyn::dynamics::conjugate_map(&f);
        let a = canonical_height(&f, &Point::Quad(x.clone()), 1e-8).unwrap();
        let b = canonical_height(&g, &Point::Quad(x.conj()), 1e-8).unwrap();
        prop_assert!((a.value - b.value).abs() <= a.err + b.err + 1e-12);
    }
}
