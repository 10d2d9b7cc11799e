use htdyn::algebraic::{AlgebraicNumber, Rect, Selector};
use htdyn::parse::parse_poly;
use htdyn::quad::{quad, QuadElem};
use htdyn::ratfunc::IntRatFunc;
use htdyn::{IntPoly, Rational};
use num_bigint::BigInt;

fn p(s: &str) -> IntPoly {
    parse_poly(s).unwrap()
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn root(s: &str, lo: (i64, i64), hi: (i64, i64)) -> AlgebraicNumber {
    AlgebraicNumber::from_poly_root(&p(s), Selector::Interval(rat(lo.0, lo.1), rat(hi.0, hi.1))).unwrap()
}

fn sqrt2() -> AlgebraicNumber {
    root("x^2-2", (1, 1), (2, 1))
}

fn phi() -> AlgebraicNumber {
    root("x^2-x-1", (1, 1), (2, 1))
}

fn i() -> AlgebraicNumber {
    let r = Rect { re_lo: rat(-1, 1), re_hi: rat(1, 1), im_lo: rat(0, 1), im_hi: rat(2, 1) };
    AlgebraicNumber::from_poly_root(&p("x^2+1"), Selector::Rect(r)).unwrap()
}

const PHI: f64 = 1.618033988749895;

#[test]
fn construction() {
    assert!((sqrt2().approx().re - 2f64.sqrt()).abs() < 1e-14);
    assert!((phi().approx().re - PHI).abs() < 1e-14);
    let z = i().approx();
    assert!(z.re.abs() < 1e-14 && (z.im - 1.0).abs() < 1e-14);
    assert!(!i().is_real());
    // Two roots in the selector.
    assert!(AlgebraicNumber::from_poly_root(&p("x^2-2"), Selector::Interval(rat(-2, 1), rat(2, 1))).is_err());
    // No root in the selector.
    assert!(AlgebraicNumber::from_poly_root(&p("x^2-2"), Selector::Interval(rat(2, 1), rat(3, 1))).is_err());
}

#[test]
fn minimal_polynomials() {
    assert_eq!(root("x^4-4x^2+4", (1, 1), (2, 1)).minimal_polynomial().unwrap(), p("x^2-2"));
    assert_eq!(root("(x^2-2)*(x^2-3)", (13, 10), (3, 2)).minimal_polynomial().unwrap(), p("x^2-2"));
    assert_eq!(phi().minimal_polynomial().unwrap(), p("x^2-x-1"));
    assert_eq!(phi().degree().unwrap(), 2);
}

#[test]
fn total_reality() {
    assert!(sqrt2().is_totally_real().unwrap());
    assert!(!root("x^3-2", (1, 1), (2, 1)).is_totally_real().unwrap());
    assert!(root("x^3-3x+1", (0, 1), (1, 1)).is_totally_real().unwrap());
}

#[test]
fn conjugate_sets() {
    let mut c: Vec<f64> = phi().conjugates(1e-12).unwrap().iter().map(|r| r.re()).collect();
    c.sort_by(f64::total_cmp);
    assert!((c[0] + 1.0 / PHI).abs() < 1e-12 && (c[1] - PHI).abs() < 1e-12);

    let mut c: Vec<f64> = i().conjugates(1e-12).unwrap().iter().map(|r| r.im()).collect();
    c.sort_by(f64::total_cmp);
    assert!((c[0] + 1.0).abs() < 1e-12 && (c[1] - 1.0).abs() < 1e-12);

    let c = AlgebraicNumber::from_rational(&rat(5, 2)).conjugates(1e-12).unwrap();
    assert_eq!(c.len(), 1);
    assert!((c[0].re() - 2.5).abs() < 1e-12);
}

#[test]
fn field_operations() {
    let s = sqrt2();
    assert!(s.add(&s.neg()).unwrap().is_zero());
    assert_eq!(s.mul(&s).unwrap().as_rational(), Some(rat(2, 1)));

    let sum = phi().add(&phi().inv().unwrap()).unwrap();
    assert!(sum.eq_exact(&root("x^2-5", (2, 1), (3, 1))).unwrap());

    let q = phi().div(&sqrt2()).unwrap();
    assert!((q.approx().re - PHI / 2f64.sqrt()).abs() < 1e-12);
    assert!(AlgebraicNumber::from_int(0).inv().is_err());
}

fn map(num: &str, den: &[i64]) -> IntRatFunc {
    IntRatFunc::new(p(num), IntPoly::from_i64s(den)).unwrap()
}

#[test]
fn maps_on_numbers() {
    let f = map("x^2-2", &[1]);
    assert!(sqrt2().apply_map(&f).unwrap().unwrap().is_zero());
    let y = phi().apply_map(&f).unwrap().unwrap();
    assert!(y.eq_exact(&phi().inv().unwrap()).unwrap());
    assert!((y.approx().re - 0.6180339887498949).abs() < 1e-14);

    let g = map("x^2-1", &[0, 2]);
    assert!(AlgebraicNumber::from_int(1).apply_map(&g).unwrap().unwrap().is_zero());
    assert!(AlgebraicNumber::from_int(0).apply_map(&g).unwrap().is_none());
}

#[test]
fn quadratic_elements() {
    let s5 = AlgebraicNumber::from_quad(&QuadElem::sqrt(5).unwrap()).unwrap();
    assert!(s5.eq_exact(&root("x^2-5", (2, 1), (3, 1))).unwrap());

    let c = AlgebraicNumber::from_quad(&quad(5, (3, 2), (-1, 2))).unwrap();
    assert!((c.approx().re - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-14);
    assert_eq!(c.minimal_polynomial().unwrap(), p("x^2-3x+1"));

    let im = AlgebraicNumber::from_quad(&QuadElem::sqrt(-1).unwrap()).unwrap();
    assert!(im.eq_exact(&i()).unwrap());

    assert_eq!(c.to_quad(5).unwrap(), Some(quad(5, (3, 2), (-1, 2))));
}
