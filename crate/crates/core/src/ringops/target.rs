//! Coefficient targets for specializing the parameters: the integers, or
//! `Z[t_1..t_s]/(t_1^{e_1}, .., t_s^{e_s})`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::algebra::{CoeffElem, Mode};
use crate::error::{Error, Result};
use crate::parse::{self, Evaluator};

/// Element of a truncated polynomial ring; with no variables, an integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncPoly {
    caps: Vec<u32>,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl TruncPoly {
    pub fn zero(caps: &[u32]) -> Self {
        TruncPoly { caps: caps.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(caps: &[u32], k: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(caps);
        p.add_term(vec![0; caps.len()], k.into());
        p
    }

    /// `t_i` (0-based).
    pub fn var(caps: &[u32], i: usize) -> Self {
        let mut e = vec![0; caps.len()];
        e[i] = 1;
        let mut p = Self::zero(caps);
        p.add_term(e, BigInt::one());
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() || e.iter().zip(&self.caps).any(|(x, cap)| x >= cap) {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn constant_term(&self) -> BigInt {
        self.terms.get(&vec![0; self.caps.len()]).cloned().unwrap_or_default()
    }

    /// The integer value when there are no `t` terms.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => self.terms.get(&vec![0; self.caps.len()]).cloned(),
            _ => None,
        }
    }

    pub fn coeff(&self, e: &[u32]) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn is_unit(&self) -> bool {
        self.constant_term().abs().is_one()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        TruncPoly { caps: self.caps.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.caps);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.iter().zip(eb).map(|(a, b)| a + b).collect(), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(&self.caps, 1), |acc, _| acc.mul(self))
    }

    /// Inverse of `c (1 + N)` with `c = ±1` and `N` nilpotent.
    pub fn inverse(&self) -> Result<Self> {
        let c = self.constant_term();
        if !c.abs().is_one() {
            return Err(Error::Specialization(format!("{self} is not a unit")));
        }
        let one = Self::constant(&self.caps, 1);
        let nil = self.mul(&Self::constant(&self.caps, c.clone())).sub(&one);
        let mut out = one.clone();
        let mut power = one;
        loop {
            power = power.mul(&nil.neg());
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
        }
        Ok(out.mul(&Self::constant(&self.caps, c)))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.terms.iter().map(|(e, c)| json!([e, c.to_string()])).collect())
    }
}

impl fmt::Display for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| if x == 1 { format!("t{}", i + 1) } else { format!("t{}^{}", i + 1, x) })
                .collect();
            let sign = if c.is_negative() { "-" } else { "+" };
            match k {
                0 if c.is_negative() => write!(f, "-")?,
                0 => {}
                _ => write!(f, " {sign} ")?,
            }
            let mag = c.abs();
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

struct TruncContext<'a> {
    caps: &'a [u32],
}

impl Evaluator for TruncContext<'_> {
    type Value = TruncPoly;

    fn integer(&self, k: &BigInt) -> TruncPoly {
        TruncPoly::constant(self.caps, k.clone())
    }

    fn variable(&self, name: &str, index: usize, offset: usize) -> Result<TruncPoly> {
        if name == "t" && (1..=self.caps.len()).contains(&index) {
            Ok(TruncPoly::var(self.caps, index - 1))
        } else {
            Err(Error::Parse { offset, message: format!("unknown variable {name}{index} (declare t-variables with 'mod')") })
        }
    }

    fn add(&self, a: &TruncPoly, b: &TruncPoly) -> TruncPoly {
        a.add(b)
    }

    fn sub(&self, a: &TruncPoly, b: &TruncPoly) -> TruncPoly {
        a.sub(b)
    }

    fn mul(&self, a: &TruncPoly, b: &TruncPoly) -> TruncPoly {
        a.mul(b)
    }

    fn inverse(&self, a: &TruncPoly, offset: usize) -> Result<TruncPoly> {
        a.inverse().map_err(|e| Error::Parse { offset, message: e.to_string() })
    }
}

/// Values for `r_1..r_n` in a truncated ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializationTarget {
    pub caps: Vec<u32>,
    pub assignment: Vec<TruncPoly>,
}

impl SpecializationTarget {
    pub fn integers(values: &[i64]) -> Self {
        SpecializationTarget { caps: vec![], assignment: values.iter().map(|&v| TruncPoly::constant(&[], v)).collect() }
    }

    /// Every `r_i` set to the same integer.
    pub fn all(n: usize, value: i64) -> Self {
        Self::integers(&vec![value; n])
    }

    pub fn truncated(caps: Vec<u32>, assignment: Vec<TruncPoly>) -> Result<Self> {
        if assignment.iter().any(|v| v.caps != caps) {
            return Err(Error::Specialization("values live in a different ring".into()));
        }
        Ok(SpecializationTarget { caps, assignment })
    }

    /// Parses `r=0`, `r1=1,r2=-1`, or `r1=2*t1,r2=0 mod t1^2`.
    pub fn parse(spec: &str, n: usize) -> Result<Self> {
        let (values, modulus) = match spec.find("mod") {
            Some(k) => (&spec[..k], Some(&spec[k + 3..])),
            None => (spec, None),
        };
        let mut caps = Vec::new();
        if let Some(m) = modulus {
            for part in m.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                let bad = || Error::Specialization(format!("bad truncation '{part}' (expected tK^E)"));
                let rest = part.strip_prefix('t').ok_or_else(bad)?;
                let (idx, exp) = rest.split_once('^').ok_or_else(bad)?;
                let idx: usize = idx.trim().parse().map_err(|_| bad())?;
                let exp: u32 = exp.trim().parse().map_err(|_| bad())?;
                if idx == 0 || exp == 0 {
                    return Err(bad());
                }
                if caps.len() < idx {
                    caps.resize(idx, u32::MAX);
                }
                caps[idx - 1] = exp;
            }
            if caps.contains(&u32::MAX) {
                return Err(Error::Specialization("every t-variable up to the largest index needs a cap".into()));
            }
        }
        let ctx = TruncContext { caps: &caps };
        let mut assignment: Vec<Option<TruncPoly>> = vec![None; n];
        for part in values.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (lhs, rhs) =
                part.split_once('=').ok_or_else(|| Error::Specialization(format!("expected r=value, found '{part}'")))?;
            let value = ctx.eval(&parse::parse_expr(rhs)?)?;
            let lhs = lhs.trim();
            if lhs == "r" {
                assignment.iter_mut().for_each(|a| *a = Some(value.clone()));
                continue;
            }
            let i: usize = lhs
                .strip_prefix('r')
                .and_then(|s| s.parse().ok())
                .filter(|i| (1..=n).contains(i))
                .ok_or_else(|| Error::Specialization(format!("unknown parameter '{lhs}'")))?;
            assignment[i - 1] = Some(value);
        }
        let assignment = assignment
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::Specialization(format!("no value for r{}", i + 1))))
            .collect::<Result<Vec<_>>>()?;
        Ok(SpecializationTarget { caps, assignment })
    }

    pub fn zero(&self) -> TruncPoly {
        TruncPoly::zero(&self.caps)
    }

    /// Multiplicative values must be units of the target.
    pub fn check_mode(&self, mode: Mode) -> Result<()> {
        if mode == Mode::Multiplicative {
            if let Some((i, v)) = self.assignment.iter().enumerate().find(|(_, v)| !v.is_unit()) {
                return Err(Error::Specialization(format!("r{} = {v} is not invertible", i + 1)));
            }
        }
        Ok(())
    }

    pub fn apply(&self, c: &CoeffElem) -> Result<TruncPoly> {
        if c.nvars() != self.assignment.len() {
            return Err(Error::Dimension { expected: self.assignment.len(), found: c.nvars() });
        }
        self.check_mode(c.mode())?;
        let mut inverses: Vec<Option<TruncPoly>> = vec![None; self.assignment.len()];
        let mut out = self.zero();
        for (e, k) in c.terms() {
            let mut t = TruncPoly::constant(&self.caps, k.clone());
            for (i, &x) in e.iter().enumerate() {
                if x >= 0 {
                    t = t.mul(&self.assignment[i].pow(x as u32));
                } else {
                    if inverses[i].is_none() {
                        inverses[i] = Some(self.assignment[i].inverse()?);
                    }
                    t = t.mul(&inverses[i].as_ref().expect("set above").pow(x.unsigned_abs() as u32));
                }
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "caps": self.caps,
            "assignment": self.assignment.iter().map(TruncPoly::to_json).collect::<Vec<_>>(),
        })
    }
}
