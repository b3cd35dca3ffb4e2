use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::{json, Value};

use super::{CoeffElem, Mode};
use crate::error::{Error, Result};
use crate::fan::ConeRef;

/// Exponent vector of a monomial in `x_1..x_d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct XMonomial(pub Vec<u32>);

impl XMonomial {
    pub fn one(d: usize) -> Self {
        XMonomial(vec![0; d])
    }

    pub fn var(d: usize, j: usize) -> Self {
        let mut e = vec![0; d];
        e[j] = 1;
        XMonomial(e)
    }

    /// The squarefree monomial `x(gamma)`.
    pub fn of_cone(d: usize, gamma: &ConeRef) -> Self {
        let mut e = vec![0; d];
        for &j in gamma.rays() {
            e[j] = 1;
        }
        XMonomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn support(&self) -> ConeRef {
        ConeRef::new(self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(j, _)| j).collect())
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.iter().all(|&e| e <= 1)
    }

    pub fn mul(&self, other: &XMonomial) -> XMonomial {
        XMonomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Divides by `x_j`; the exponent must be positive.
    pub fn without_one(&self, j: usize) -> XMonomial {
        let mut e = self.0.clone();
        e[j] -= 1;
        XMonomial(e)
    }
}

impl fmt::Display for XMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, &e)| if e == 1 { format!("x{}", j + 1) } else { format!("x{}^{}", j + 1, e) })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A polynomial in `x_1..x_d` with coefficients in the parameter ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct XPolynomial {
    mode: Mode,
    d: usize,
    n: usize,
    terms: BTreeMap<XMonomial, CoeffElem>,
}

impl XPolynomial {
    pub fn zero(mode: Mode, d: usize, n: usize) -> Self {
        XPolynomial { mode, d, n, terms: BTreeMap::new() }
    }

    pub fn one(mode: Mode, d: usize, n: usize) -> Self {
        Self::constant(CoeffElem::one(mode, n), d)
    }

    pub fn constant(c: CoeffElem, d: usize) -> Self {
        Self::term(XMonomial::one(d), c)
    }

    pub fn term(mono: XMonomial, c: CoeffElem) -> Self {
        let mut out = Self::zero(c.mode(), mono.0.len(), c.nvars());
        out.add_term(mono, c);
        out
    }

    pub fn var(mode: Mode, d: usize, n: usize, j: usize) -> Self {
        Self::term(XMonomial::var(d, j), CoeffElem::one(mode, n))
    }

    pub fn monomial(mode: Mode, n: usize, mono: XMonomial) -> Self {
        Self::term(mono, CoeffElem::one(mode, n))
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn num_x(&self) -> usize {
        self.d
    }

    pub fn num_r(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&XMonomial, &CoeffElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, mono: &XMonomial) -> CoeffElem {
        self.terms.get(mono).cloned().unwrap_or_else(|| CoeffElem::zero(self.mode, self.n))
    }

    pub fn x_degree(&self) -> u32 {
        self.terms.keys().map(XMonomial::degree).max().unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, mono: XMonomial, c: CoeffElem) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.mode != other.mode {
            return Err(Error::ModeMismatch { left: self.mode, right: other.mode });
        }
        if self.d != other.d || self.n != other.n {
            return Err(Error::Dimension { expected: self.d, found: other.d });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = Self::zero(self.mode, self.d, self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &CoeffElem) -> Self {
        let mut out = Self::zero(self.mode, self.d, self.n);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        let mut out = Self::zero(self.mode, self.d, self.n);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a.scale(k));
        }
        out
    }

    pub fn mul_monomial(&self, mono: &XMonomial) -> Self {
        let mut out = Self::zero(self.mode, self.d, self.n);
        for (m, a) in &self.terms {
            out.add_term(m.mul(mono), a.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.mode, self.d, self.n);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Homogeneous components for the grading `deg x_j = deg r_i = 1`.
    pub fn graded_parts(&self) -> BTreeMap<i64, XPolynomial> {
        let mut out: BTreeMap<i64, XPolynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            for (rd, part) in c.graded_parts() {
                out.entry(rd + m.degree() as i64)
                    .or_insert_with(|| Self::zero(self.mode, self.d, self.n))
                    .add_term(m.clone(), part);
            }
        }
        out
    }

    pub fn homogeneous_degree(&self) -> Option<i64> {
        let parts = self.graded_parts();
        match parts.len() {
            1 => parts.keys().next().copied(),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.terms.iter().map(|(m, c)| json!([m.0, c.to_json()])).collect())
    }

    pub fn from_json(v: &Value, mode: Mode, d: usize, n: usize) -> Result<Self> {
        let bad = |msg: &str| Error::input("polynomial", msg.to_string());
        let arr = v.as_array().ok_or_else(|| bad("expected an array of [exponents, coefficient] pairs"))?;
        let mut out = Self::zero(mode, d, n);
        for term in arr {
            let pair = term.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("expected a pair"))?;
            let exps = pair[0]
                .as_array()
                .ok_or_else(|| bad("exponents must be an array"))?
                .iter()
                .map(|x| x.as_u64().and_then(|e| u32::try_from(e).ok()).ok_or_else(|| bad("bad exponent")))
                .collect::<Result<Vec<_>>>()?;
            if exps.len() != d {
                return Err(Error::Dimension { expected: d, found: exps.len() });
            }
            let c = CoeffElem::from_json(&pair[1], mode, n)?;
            out.add_term(XMonomial(exps), c);
        }
        Ok(out)
    }
}

impl fmt::Display for XPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            // a single signed term is printed without parentheses
            let neg = c.num_terms() == 1 && c.terms().all(|(_, k)| k.is_negative());
            let abs = if neg { -c } else { c.clone() };
            let body = match (abs.num_terms(), m.degree()) {
                (1, 0) => abs.to_string(),
                (1, _) if abs.is_one() => m.to_string(),
                (1, _) => format!("{abs}*{m}"),
                (_, 0) => format!("({abs})"),
                (_, _) => format!("({abs})*{m}"),
            };
            if first {
                write!(f, "{}{body}", if neg { "-" } else { "" })?;
            } else {
                write!(f, " {} {body}", if neg { "-" } else { "+" })?;
            }
            first = false;
        }
        Ok(())
    }
}

impl Neg for &XPolynomial {
    type Output = XPolynomial;

    fn neg(self) -> XPolynomial {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }
}

impl Add for &XPolynomial {
    type Output = XPolynomial;

    fn add(self, rhs: &XPolynomial) -> XPolynomial {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &XPolynomial {
    type Output = XPolynomial;

    fn sub(self, rhs: &XPolynomial) -> XPolynomial {
        self.checked_add(&-rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for &XPolynomial {
    type Output = XPolynomial;

    fn mul(self, rhs: &XPolynomial) -> XPolynomial {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(j: usize) -> XPolynomial {
        XPolynomial::var(Mode::Additive, 3, 2, j)
    }

    #[test]
    fn examples() {
        assert_eq!(&x(0) * &x(1), &x(1) * &x(0));
        let one = XPolynomial::one(Mode::Additive, 3, 2);
        let r1 = XPolynomial::constant(CoeffElem::var(Mode::Additive, 2, 0), 3);
        let p = &x(0) - &r1;
        assert_eq!(&p * &one, p);
        let sq = (&one - &x(0)).pow(2);
        let expected = &(&one - &x(0).scale_int(&2.into())) + &x(0).pow(2);
        assert_eq!(sq, expected);
        assert_eq!(sq.to_string(), "x1^2 - 2*x1 + 1");
    }

    #[test]
    fn grading() {
        let r1 = XPolynomial::constant(CoeffElem::var(Mode::Additive, 2, 0), 3);
        let p = &x(0) - &r1;
        assert_eq!(p.homogeneous_degree(), Some(1));
        let q = &(&x(1) * &x(2)) + &(&r1 * &x(0));
        assert_eq!((&p * &q).homogeneous_degree(), Some(3));
        assert_eq!((&p + &q).homogeneous_degree(), None);
    }
}
