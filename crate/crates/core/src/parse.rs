//! Polynomial expressions: integers, variables such as `x3` or `r1`, the
//! operators `+ - * ^` and parentheses. No implicit multiplication.

use num_bigint::BigInt;

use crate::algebra::{CoeffElem, Mode, XPolynomial};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    /// Variable name (letters) and its 1-based index, with source offset.
    Var { name: String, index: usize, offset: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow { base: Box<Expr>, exp: i64, offset: usize },
}

fn err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse { offset, message: message.into() }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.eat(b'*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let offset = self.pos;
        let neg = self.eat(b'-');
        self.skip_ws();
        let at = self.pos;
        let exp: i64 = self
            .digits()
            .ok_or_else(|| err(at, "expected an integer exponent"))?
            .parse()
            .map_err(|_| err(offset, "exponent too large"))?;
        Ok(Expr::Pow { base: Box::new(base), exp: if neg { -exp } else { exp }, offset })
    }

    fn atom(&mut self) -> Result<Expr> {
        let offset = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(err(self.pos, "expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.digits().expect("digit").parse().expect("digits"))),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii").to_string();
                let at = self.pos;
                let index = self
                    .digits()
                    .ok_or_else(|| err(at, format!("expected an index after '{name}'")))?
                    .parse()
                    .map_err(|_| err(offset, "index too large"))?;
                Ok(Expr::Var { name, index, offset })
            }
            Some(c) => Err(err(offset, format!("unexpected character '{}'", c as char))),
            None => Err(err(offset, "unexpected end of input")),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(err(p.pos, format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(e)
}

/// Interprets expressions in some ring.
pub trait Evaluator {
    type Value: Clone;

    fn integer(&self, k: &BigInt) -> Self::Value;
    fn variable(&self, name: &str, index: usize, offset: usize) -> Result<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    /// Multiplicative inverse, if the value is a unit.
    fn inverse(&self, a: &Self::Value, offset: usize) -> Result<Self::Value>;

    fn eval(&self, e: &Expr) -> Result<Self::Value> {
        Ok(match e {
            Expr::Int(k) => self.integer(k),
            Expr::Var { name, index, offset } => self.variable(name, *index, *offset)?,
            Expr::Neg(a) => self.sub(&self.integer(&BigInt::from(0)), &self.eval(a)?),
            Expr::Add(a, b) => self.add(&self.eval(a)?, &self.eval(b)?),
            Expr::Sub(a, b) => self.sub(&self.eval(a)?, &self.eval(b)?),
            Expr::Mul(a, b) => self.mul(&self.eval(a)?, &self.eval(b)?),
            Expr::Pow { base, exp, offset } => {
                let mut b = self.eval(base)?;
                if *exp < 0 {
                    b = self.inverse(&b, *offset)?;
                }
                let mut out = self.integer(&BigInt::from(1));
                for _ in 0..exp.unsigned_abs() {
                    out = self.mul(&out, &b);
                }
                out
            }
        })
    }
}

/// Evaluates into `XPolynomial`s with `d` generators `x_j` and `n` parameters `r_i`.
pub struct PolyContext {
    pub mode: Mode,
    pub d: usize,
    pub n: usize,
}

impl Evaluator for PolyContext {
    type Value = XPolynomial;

    fn integer(&self, k: &BigInt) -> XPolynomial {
        XPolynomial::constant(CoeffElem::constant(self.mode, self.n, k.clone()), self.d)
    }

    fn variable(&self, name: &str, index: usize, offset: usize) -> Result<XPolynomial> {
        match name {
            "x" if (1..=self.d).contains(&index) => Ok(XPolynomial::var(self.mode, self.d, self.n, index - 1)),
            "r" if (1..=self.n).contains(&index) => {
                Ok(XPolynomial::constant(CoeffElem::var(self.mode, self.n, index - 1), self.d))
            }
            _ => Err(err(offset, format!("unknown generator {name}{index}"))),
        }
    }

    fn add(&self, a: &XPolynomial, b: &XPolynomial) -> XPolynomial {
        a + b
    }

    fn sub(&self, a: &XPolynomial, b: &XPolynomial) -> XPolynomial {
        a - b
    }

    fn mul(&self, a: &XPolynomial, b: &XPolynomial) -> XPolynomial {
        a * b
    }

    fn inverse(&self, a: &XPolynomial, offset: usize) -> Result<XPolynomial> {
        let c = match a.terms().next() {
            Some((m, c)) if a.num_terms() == 1 && m.degree() == 0 => c.clone(),
            _ => return Err(err(offset, "negative powers are only allowed for parameter monomials")),
        };
        let inv = c.inverse().map_err(|e| err(offset, e.to_string()))?;
        Ok(XPolynomial::constant(inv, self.d))
    }
}

pub fn parse_polynomial(src: &str, mode: Mode, d: usize, n: usize) -> Result<XPolynomial> {
    PolyContext { mode, d, n }.eval(&parse_expr(src)?)
}
