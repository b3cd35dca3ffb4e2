use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::Mode;
use crate::error::{Error, Result};

/// An element of `Z[r_1^±1, .., r_n^±1]`: a map from exponent vectors to
/// nonzero integers. Additive-mode elements never carry negative exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoeffElem {
    mode: Mode,
    nvars: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl CoeffElem {
    pub fn zero(mode: Mode, nvars: usize) -> Self {
        CoeffElem { mode, nvars, terms: BTreeMap::new() }
    }

    pub fn one(mode: Mode, nvars: usize) -> Self {
        Self::constant(mode, nvars, BigInt::one())
    }

    pub fn constant(mode: Mode, nvars: usize, c: impl Into<BigInt>) -> Self {
        let mut out = Self::zero(mode, nvars);
        out.add_term(vec![0; nvars], c.into());
        out
    }

    pub fn monomial(mode: Mode, exps: Vec<i64>, c: impl Into<BigInt>) -> Result<Self> {
        if mode == Mode::Additive && exps.iter().any(|&e| e < 0) {
            return Err(Error::ModeViolation(format!("negative exponent {exps:?} in additive mode")));
        }
        let mut out = Self::zero(mode, exps.len());
        out.add_term(exps, c.into());
        Ok(out)
    }

    /// The parameter `r_i` (0-based `i`).
    pub fn var(mode: Mode, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(mode, e, 1).expect("nonnegative exponent")
    }

    /// `r_u = sum a_i r_i`.
    pub fn r_u_additive(coords: &[BigInt]) -> Self {
        let n = coords.len();
        let mut out = Self::zero(Mode::Additive, n);
        for (i, a) in coords.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            out.add_term(e, a.clone());
        }
        out
    }

    /// `r_u = prod r_i^{a_i}`.
    pub fn r_u_multiplicative(coords: &[BigInt]) -> Result<Self> {
        let exps = coords
            .iter()
            .map(|a| a.to_i64().ok_or_else(|| Error::ModeViolation(format!("exponent {a} out of range"))))
            .collect::<Result<Vec<_>>>()?;
        Self::monomial(Mode::Multiplicative, exps, 1)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&vec![0; self.nvars]).is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The integer value if this is a constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => self.terms.get(&vec![0; self.nvars]).cloned(),
            _ => None,
        }
    }

    /// Coefficient of `r^exps`.
    pub fn coeff(&self, exps: &[i64]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub(crate) fn add_term(&mut self, exps: Vec<i64>, c: BigInt) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.mode != other.mode {
            return Err(Error::ModeMismatch { left: self.mode, right: other.mode });
        }
        if self.nvars != other.nvars {
            return Err(Error::Dimension { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = Self::zero(self.mode, self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = Self::zero(self.mode, self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.mode, self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Inverse of a unit; only signed Laurent monomials are units here.
    pub fn inverse(&self) -> Result<Self> {
        if self.mode != Mode::Multiplicative && self.as_constant().is_none() {
            return Err(Error::ModeViolation("only constants are invertible in additive mode".into()));
        }
        match self.terms.iter().next() {
            Some((e, c)) if self.terms.len() == 1 && (c.is_one() || (-c).is_one()) => {
                Self::monomial(self.mode, e.iter().map(|x| -x).collect(), c.clone())
            }
            _ => Err(Error::ModeViolation(format!("{self} is not a unit"))),
        }
    }

    /// Total degree in the `r_i` when homogeneous (additive grading).
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<i64>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Splits into homogeneous pieces keyed by total degree.
    pub fn graded_parts(&self) -> BTreeMap<i64, CoeffElem> {
        let mut out: BTreeMap<i64, CoeffElem> = BTreeMap::new();
        for (e, c) in &self.terms {
            out.entry(e.iter().sum())
                .or_insert_with(|| Self::zero(self.mode, self.nvars))
                .add_term(e.clone(), c.clone());
        }
        out
    }

    /// Evaluates at rational values of the `r_i` (nonzero where a negative
    /// exponent occurs).
    pub fn evaluate(&self, values: &[BigRational]) -> Result<BigRational> {
        if values.len() != self.nvars {
            return Err(Error::Dimension { expected: self.nvars, found: values.len() });
        }
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (v, &k) in values.iter().zip(e) {
                if k < 0 && v.is_zero() {
                    return Err(Error::Specialization("negative power of zero".into()));
                }
                t *= num_traits::pow::Pow::pow(v, k as i32);
            }
            total += t;
        }
        Ok(total)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.terms.iter().map(|(e, c)| json!([e, c.to_string()])).collect())
    }

    pub fn from_json(v: &Value, mode: Mode, nvars: usize) -> Result<Self> {
        let bad = |msg: &str| Error::input("coefficient", msg.to_string());
        let arr = v.as_array().ok_or_else(|| bad("expected an array of [exponents, coefficient] pairs"))?;
        let mut out = Self::zero(mode, nvars);
        for term in arr {
            let pair = term.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("expected a pair"))?;
            let exps = pair[0]
                .as_array()
                .ok_or_else(|| bad("exponents must be an array"))?
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| bad("exponents must be integers")))
                .collect::<Result<Vec<_>>>()?;
            if exps.len() != nvars {
                return Err(Error::Dimension { expected: nvars, found: exps.len() });
            }
            let c: BigInt = pair[1]
                .as_str()
                .ok_or_else(|| bad("coefficients are decimal strings"))?
                .parse()
                .map_err(|_| bad("malformed integer"))?;
            let mono = Self::monomial(mode, exps, c)?;
            out = out.checked_add(&mono)?;
        }
        Ok(out)
    }
}

impl fmt::Display for CoeffElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest degree first reads more naturally
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| if x == 1 { format!("r{}", i + 1) } else { format!("r{}^{}", i + 1, x) })
                .collect();
            let (neg, mag) = (c.is_negative(), c.abs());
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Neg for &CoeffElem {
    type Output = CoeffElem;

    fn neg(self) -> CoeffElem {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }
}

// Operator forms panic on mixed modes; use the checked_* methods when the
// operands come from untrusted input.
impl Add for &CoeffElem {
    type Output = CoeffElem;

    fn add(self, rhs: &CoeffElem) -> CoeffElem {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &CoeffElem {
    type Output = CoeffElem;

    fn sub(self, rhs: &CoeffElem) -> CoeffElem {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for &CoeffElem {
    type Output = CoeffElem;

    fn mul(self, rhs: &CoeffElem) -> CoeffElem {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(i: usize) -> CoeffElem {
        CoeffElem::var(Mode::Additive, 2, i)
    }

    #[test]
    fn arithmetic_examples() {
        assert!((&r(0) + &-&r(0)).is_zero());
        assert_eq!(&r(0) * &r(1), &r(1) * &r(0));
        let one = CoeffElem::one(Mode::Additive, 2);
        let lhs = &(&one - &r(0)) * &(&one + &r(0));
        assert_eq!(lhs, &one - &r(0).pow(2));
        assert_eq!(lhs.to_string(), "-r1^2 + 1");
    }

    #[test]
    fn r_u_forms() {
        let a: Vec<BigInt> = vec![2.into(), (-1).into()];
        assert_eq!(CoeffElem::r_u_additive(&a), &r(0).scale(&2.into()) - &r(1));
        assert!(CoeffElem::r_u_additive(&[0.into(), 0.into()]).is_zero());
        let m = CoeffElem::r_u_multiplicative(&[(-1).into(), 2.into()]).unwrap();
        assert_eq!(m.to_string(), "r1^-1*r2^2");
        assert!(CoeffElem::r_u_multiplicative(&[0.into(), 0.into()]).unwrap().is_one());
        assert_eq!(CoeffElem::r_u_multiplicative(&[1.into(), 0.into()]).unwrap().to_string(), "r1");
    }

    #[test]
    fn modes_do_not_mix() {
        let a = CoeffElem::one(Mode::Additive, 1);
        let m = CoeffElem::one(Mode::Multiplicative, 1);
        assert!(matches!(a.checked_add(&m), Err(Error::ModeMismatch { .. })));
        assert!(matches!(CoeffElem::monomial(Mode::Additive, vec![-1], 1), Err(Error::ModeViolation(_))));
    }

    #[test]
    fn laurent_inverse() {
        let m = CoeffElem::monomial(Mode::Multiplicative, vec![2, -1], -1).unwrap();
        assert!((&m * &m.inverse().unwrap()).is_one());
        let two = CoeffElem::constant(Mode::Multiplicative, 2, 2);
        assert!(two.inverse().is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = CoeffElem::monomial(Mode::Multiplicative, vec![2, -1], -7).unwrap();
        let p = &m + &CoeffElem::one(Mode::Multiplicative, 2);
        assert_eq!(CoeffElem::from_json(&p.to_json(), Mode::Multiplicative, 2).unwrap(), p);
    }
}
