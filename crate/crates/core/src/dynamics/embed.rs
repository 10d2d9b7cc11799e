//! Numeric embeddings of polynomials over `Q(√D)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::ball::ComplexBall;
use crate::poly::{IntPoly, Poly};
use crate::quad::QuadElem;

/// A polynomial with ball coefficients, constant term first.
#[derive(Clone, Debug)]
pub struct BallPoly(pub Vec<ComplexBall>);

impl BallPoly {
    /// Embed `p`, applying the Galois conjugation first when `conj` is set.
    pub fn from_quad_poly(p: &Poly<QuadElem>, conj: bool, prec: u32) -> Self {
        BallPoly(
            p.coeffs()
                .iter()
                .map(|c| ComplexBall::from_quad(&if conj { c.conj() } else { c.clone() }, prec))
                .collect(),
        )
    }

    pub fn from_int_poly(p: &IntPoly, prec: u32) -> Self {
        BallPoly(p.coeffs().iter().map(|c| ComplexBall::from_rational(&c.clone().into(), prec)).collect())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        BallPoly(self.0.iter().map(|c| c.with_prec(prec)).collect())
    }

    pub fn eval(&self, z: &ComplexBall) -> ComplexBall {
        let mut acc = ComplexBall::zero(z.prec());
        for c in self.0.iter().rev() {
            acc = acc.mul(z).add(c);
        }
        acc
    }
}

/// Primitive integer polynomial proportional to `p`, whose coefficients
/// must all be rational.
pub(crate) fn to_int_poly(p: &Poly<QuadElem>) -> IntPoly {
    let rs: Vec<_> = p.coeffs().iter().map(|c| c.to_rational().expect("rational coefficients")).collect();
    let l = rs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let out = Poly::new(rs.iter().map(|c| (c * &l).to_integer()).collect());
    if out.is_zero() {
        return out;
    }
    let out = out.primitive();
    if out.lead().is_negative() {
        -out
    } else {
        out
    }
}
