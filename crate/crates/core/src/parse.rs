//! Text formats for polynomials, maps and points.
//!
//! Expressions use `x`, rational or decimal numbers, `sqrt(n)` literals,
//! `i` for `sqrt(-1)`, the operators `+ - * / ^` and parentheses.
//! Multiplication may be written by juxtaposition (`3x^2`, `2sqrt(5)`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{IntPoly, Poly};
use crate::quad::{is_valid_discriminant, split_square, QuadElem};
use crate::ratfunc::RatFunc;

type QPoly = Poly<QuadElem>;

fn perr<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse(msg.into()))
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    X,
    I,
    Sqrt,
    Op(char),
    Open,
    Close,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            let text: String = cs[start..i].iter().collect();
            out.push(Tok::Num(decimal(&text)?));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let word: String = cs[start..i].iter().collect();
            out.push(match word.as_str() {
                "x" => Tok::X,
                "i" => Tok::I,
                "sqrt" => Tok::Sqrt,
                _ => return perr(format!("unknown name `{word}`")),
            });
        } else {
            out.push(match c {
                '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
                '(' => Tok::Open,
                ')' => Tok::Close,
                '−' => Tok::Op('-'),
                _ => return perr(format!("unexpected character `{c}`")),
            });
            i += 1;
        }
    }
    Ok(out)
}

fn decimal(text: &str) -> Result<BigRational> {
    let (int, frac) = match text.split_once('.') {
        Some((a, b)) => (a, b),
        None => (text, ""),
    };
    if int.is_empty() && frac.is_empty() || frac.contains('.') {
        return perr(format!("malformed number `{text}`"));
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = digits.parse().map_err(|_| Error::Parse(format!("malformed number `{text}`")))?;
    Ok(BigRational::new(n, num_traits::pow(BigInt::from(10), frac.len())))
}

/// A rational function value during parsing, kept as an unreduced pair.
#[derive(Clone)]
struct Val {
    num: QPoly,
    den: QPoly,
}

impl Val {
    fn constant(c: QuadElem) -> Self {
        Val { num: Poly::constant(c), den: Poly::one() }
    }

    fn as_constant(&self) -> Option<QuadElem> {
        (self.num.deg() == 0 && self.den.deg() == 0).then(|| self.num.coeff(0) / &self.den.coeff(0))
    }
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    field: i64,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.next() {
            Some(ref got) if *got == t => Ok(()),
            got => perr(format!("expected {t:?}, found {got:?}")),
        }
    }

    fn join_field(&mut self, d: i64) -> Result<()> {
        if self.field != 0 && self.field != d {
            return perr(format!("mixed fields Q(sqrt {}) and Q(sqrt {d})", self.field));
        }
        self.field = d;
        Ok(())
    }

    fn expr(&mut self) -> Result<Val> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            let a = &acc.num * &rhs.den;
            let b = &rhs.num * &acc.den;
            acc = Val { num: if c == '+' { &a + &b } else { &a - &b }, den: &acc.den * &rhs.den };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Val> {
        let mut acc = self.unary()?;
        loop {
            let div = match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    false
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    true
                }
                Some(Tok::Num(_) | Tok::X | Tok::I | Tok::Sqrt | Tok::Open) => false,
                _ => return Ok(acc),
            };
            let rhs = self.unary()?;
            acc = if div {
                if rhs.num.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Val { num: &acc.num * &rhs.den, den: &acc.den * &rhs.num }
            } else {
                Val { num: &acc.num * &rhs.num, den: &acc.den * &rhs.den }
            };
        }
    }

    fn unary(&mut self) -> Result<Val> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                let v = self.unary()?;
                Ok(Val { num: -v.num, den: v.den })
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Val> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Op('^')) {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(&Tok::Op('-')) {
            self.pos += 1;
            true
        } else {
            false
        };
        let e = match self.next() {
            Some(Tok::Num(n)) if n.is_integer() => n.to_integer().to_u32().filter(|&e| e <= 4096),
            _ => None,
        };
        let Some(e) = e else {
            return perr("exponent must be a small nonnegative integer");
        };
        let (num, den) = (base.num.pow(e), base.den.pow(e));
        if neg {
            if num.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Val { num: den, den: num })
        } else {
            Ok(Val { num, den })
        }
    }

    fn atom(&mut self) -> Result<Val> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(Val::constant(QuadElem::rational(n))),
            Some(Tok::X) => Ok(Val { num: Poly::x(), den: Poly::one() }),
            Some(Tok::I) => {
                self.join_field(-1)?;
                Ok(Val::constant(QuadElem::sqrt(-1)?))
            }
            Some(Tok::Open) => {
                let v = self.expr()?;
                self.expect(Tok::Close)?;
                Ok(v)
            }
            Some(Tok::Sqrt) => {
                self.expect(Tok::Open)?;
                let arg = self.expr()?;
                self.expect(Tok::Close)?;
                let r = match arg.as_constant().and_then(|c| c.to_rational()) {
                    Some(r) => r,
                    None => return perr("sqrt takes a rational constant"),
                };
                let v = self.sqrt_rational(&r)?;
                Ok(Val::constant(v))
            }
            t => perr(format!("unexpected token {t:?}")),
        }
    }

    fn sqrt_rational(&mut self, r: &BigRational) -> Result<QuadElem> {
        if r.is_zero() {
            return Ok(QuadElem::zero());
        }
        // sqrt(p/q) = sqrt(p q) / q
        let q = r.denom();
        let (s, core) = split_square(&(r.numer() * q));
        let coef = BigRational::new(s, q.clone());
        if core.is_one() {
            return Ok(QuadElem::rational(coef));
        }
        let d = match core.to_i64() {
            Some(d) if is_valid_discriminant(d) => d,
            _ => return perr(format!("cannot take sqrt({r}): squarefree part out of range")),
        };
        self.join_field(d)?;
        QuadElem::new(d, BigRational::zero(), coef)
    }
}

/// Parse an expression in `x` into a reduced rational function and the
/// discriminant of its coefficient field (`0` for `Q`).
pub fn parse_ratfunc(s: &str) -> Result<(RatFunc<QuadElem>, i64)> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return perr("empty expression");
    }
    let mut p = Parser { toks, pos: 0, field: 0 };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return perr(format!("trailing input at token {}", p.pos));
    }
    if v.den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let d = p.field;
    let attach = |q: &QPoly| q.map(|c| if d != 0 { c.clone().in_field(d) } else { c.clone() });
    let f = RatFunc::new(attach(&v.num), attach(&v.den))?;
    Ok((f, d))
}

/// Parse a constant expression into an element of `Q` or `Q(√D)`.
pub fn parse_constant(s: &str) -> Result<QuadElem> {
    let (f, _) = parse_ratfunc(s)?;
    if f.degree() != 0 {
        return perr(format!("`{s}` is not a constant"));
    }
    Ok(f.num().coeff(0))
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    match parse_constant(s)?.to_rational() {
        Some(r) => Ok(r),
        None => perr(format!("`{s}` is not rational")),
    }
}

/// Parse a polynomial with rational coefficients into its primitive
/// integer form (positive leading coefficient).
pub fn parse_poly(s: &str) -> Result<IntPoly> {
    let (f, _) = parse_ratfunc(s)?;
    if !f.is_polynomial() {
        return perr(format!("`{s}` is not a polynomial"));
    }
    let scale = f.den().coeff(0);
    let mut cs = Vec::new();
    for c in f.num().coeffs() {
        match (c.clone() / &scale).to_rational() {
            Some(r) => cs.push(r),
            None => return perr(format!("`{s}` has irrational coefficients")),
        }
    }
    let l = cs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let p = IntPoly::new(cs.iter().map(|c| (c * &l).to_integer()).collect());
    if p.is_zero() {
        return Ok(p);
    }
    let p = p.primitive();
    Ok(if p.lead().is_negative() { -p } else { p })
}

/// Split `s` at top-level commas (outside parentheses).
pub fn split_args(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}
