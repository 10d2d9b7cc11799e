//! Exact arithmetic for heights and dynamics of rational maps on the
//! projective line.

pub mod algebraic;
pub mod ball;
pub mod bigfloat;
pub mod dynamics;
pub mod experiments;
pub mod error;
pub mod factor;
pub mod heights;
pub mod julia;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod quad;
pub mod ratfunc;
pub mod ring;
pub mod roots;
pub mod scalar;
pub mod sturm;

pub use bigfloat::BigFloat;
pub use error::{Error, Result};
pub use poly::{IntPoly, Poly, RatPoly};

pub type Rational = num_rational::BigRational;
