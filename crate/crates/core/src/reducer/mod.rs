//! Reduction of polynomials to the basis `x(tau_1), .., x(tau_m)`.
//!
//! Every monomial is rewritten inside `sigma_i`, where `i` is the first cone
//! containing its support. For `j ∈ sigma_i` let `u` be dual to `v_j` in
//! `sigma_i`; the relation of `u` gives `x_j ≡ E` where every term of `E`
//! is either free of `x_j` with lower x-degree, or contains a ray outside
//! `sigma_i`. Multiplying by the rest of the monomial therefore lowers the
//! degree or pushes the support into a strictly later cone (or out of the
//! fan), so the rewriting terminates.

mod oracle;
mod random;

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::algebra::{CoeffElem, Mode, XMonomial, XPolynomial};
use crate::error::{Error, Result};
use crate::fan::{ConeRef, Fan};
use crate::lattice;
use crate::presentation::relation_for;
use crate::shelling::ShellingData;

pub use oracle::{AdditiveOracle, DegreeRank, MultiplicativeOracle};
pub use random::{random_cone_monomial, random_polynomial, random_specialization};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Coefficients of a ring element on the basis `x(tau_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalForm {
    pub mode: Mode,
    pub basis: Vec<ConeRef>,
    pub coeffs: Vec<CoeffElem>,
}

impl NormalForm {
    pub fn zero(mode: Mode, n: usize, basis: Vec<ConeRef>) -> Self {
        let coeffs = vec![CoeffElem::zero(mode, n); basis.len()];
        NormalForm { mode, basis, coeffs }
    }

    pub fn unit(mode: Mode, n: usize, basis: Vec<ConeRef>, i: usize) -> Self {
        let mut nf = Self::zero(mode, n, basis);
        nf.coeffs[i] = CoeffElem::one(mode, n);
        nf
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(CoeffElem::is_zero)
    }

    pub fn add(&self, other: &NormalForm) -> NormalForm {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        NormalForm { mode: self.mode, basis: self.basis.clone(), coeffs }
    }

    pub fn sub(&self, other: &NormalForm) -> NormalForm {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        NormalForm { mode: self.mode, basis: self.basis.clone(), coeffs }
    }

    pub fn scale(&self, c: &CoeffElem) -> NormalForm {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        NormalForm { mode: self.mode, basis: self.basis.clone(), coeffs }
    }

    /// `sum_i coeffs[i] x(tau_i)` as a polynomial in `d` variables.
    pub fn to_polynomial(&self, d: usize) -> XPolynomial {
        let n = self.coeffs.first().map_or(0, CoeffElem::nvars);
        let mut p = XPolynomial::zero(self.mode, d, n);
        for (tau, c) in self.basis.iter().zip(&self.coeffs) {
            p.add_term(XMonomial::of_cone(d, tau), c.clone());
        }
        p
    }

    pub fn evaluate(&self, values: &[BigRational]) -> Result<Vec<BigRational>> {
        self.coeffs.iter().map(|c| c.evaluate(values)).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "mode": self.mode.name(),
            "basis": self.basis.iter().map(ConeRef::one_based).collect::<Vec<_>>(),
            "coeffs": self.coeffs.iter().map(CoeffElem::to_json).collect::<Vec<_>>(),
            "text": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, n: usize) -> Result<Self> {
        let bad = |m: &str| Error::input("normal form", m.to_string());
        let mode: Mode = v["mode"].as_str().ok_or_else(|| bad("missing mode"))?.parse().map_err(|e: String| bad(&e))?;
        let basis = v["basis"]
            .as_array()
            .ok_or_else(|| bad("missing basis"))?
            .iter()
            .map(|c| {
                c.as_array()
                    .ok_or_else(|| bad("basis entries must be arrays"))?
                    .iter()
                    .map(|j| j.as_u64().filter(|&j| j >= 1).map(|j| j as usize - 1).ok_or_else(|| bad("bad ray index")))
                    .collect::<Result<Vec<_>>>()
                    .map(ConeRef::new)
            })
            .collect::<Result<Vec<_>>>()?;
        let coeffs = v["coeffs"]
            .as_array()
            .ok_or_else(|| bad("missing coeffs"))?
            .iter()
            .map(|c| CoeffElem::from_json(c, mode, n))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() != basis.len() {
            return Err(Error::Dimension { expected: basis.len(), found: coeffs.len() });
        }
        Ok(NormalForm { mode, basis, coeffs })
    }
}

type Rule = Vec<(XMonomial, CoeffElem)>;

/// Rewriting engine for one (fan, order, mode). Results are memoized per
/// monomial; the memo is shared between threads.
pub struct Reducer {
    fan: Fan,
    sd: ShellingData,
    mode: Mode,
    /// `rules[i][j]` rewrites `x_j` inside `sigma_i`.
    rules: Vec<HashMap<usize, Rule>>,
    memo: RwLock<HashMap<XMonomial, Arc<Vec<CoeffElem>>>>,
    budget: u64,
    steps: AtomicU64,
}

impl Reducer {
    pub fn new(fan: &Fan, sd: &ShellingData, mode: Mode) -> Result<Self> {
        Self::with_budget(fan, sd, mode, DEFAULT_BUDGET)
    }

    pub fn with_budget(fan: &Fan, sd: &ShellingData, mode: Mode, budget: u64) -> Result<Self> {
        sd.require_star()?;
        let d = fan.num_rays();
        let mut rules = Vec::with_capacity(sd.len());
        for sigma in &sd.sigma {
            let duals = lattice::dual_basis(&fan.cone_rays(sigma))?;
            let mut by_ray = HashMap::new();
            for (&j, u) in sigma.rays().iter().zip(&duals) {
                let g = relation_for(fan, sd, mode, u)?;
                let c = g.coeff(&XMonomial::var(d, j));
                let sign = c
                    .as_constant()
                    .filter(|k| k.magnitude() == &1u32.into())
                    .ok_or_else(|| Error::Internal(format!("relation for {u} has coefficient {c} on x{}", j + 1)))?;
                let e = &XPolynomial::var(mode, d, fan.dim(), j) - &g.scale_int(&sign);
                by_ray.insert(j, e.terms().map(|(m, c)| (m.clone(), c.clone())).collect());
            }
            rules.push(by_ray);
        }
        Ok(Reducer {
            fan: fan.clone(),
            sd: sd.clone(),
            mode,
            rules,
            memo: RwLock::new(HashMap::new()),
            budget,
            steps: AtomicU64::new(0),
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn shelling(&self) -> &ShellingData {
        &self.sd
    }

    pub fn num_x(&self) -> usize {
        self.fan.num_rays()
    }

    pub fn num_r(&self) -> usize {
        self.fan.dim()
    }

    pub fn basis(&self) -> &[ConeRef] {
        &self.sd.tau
    }

    /// Number of rewriting steps taken so far.
    pub fn steps(&self) -> u64 {
        self.steps.load(Ordering::Relaxed)
    }

    pub fn basis_monomial(&self, i: usize) -> XMonomial {
        XMonomial::of_cone(self.num_x(), &self.sd.tau[i])
    }

    pub fn basis_polynomial(&self, i: usize) -> XPolynomial {
        XPolynomial::monomial(self.mode, self.num_r(), self.basis_monomial(i))
    }

    pub fn zero(&self) -> NormalForm {
        NormalForm::zero(self.mode, self.num_r(), self.sd.tau.clone())
    }

    pub fn unit(&self, i: usize) -> NormalForm {
        NormalForm::unit(self.mode, self.num_r(), self.sd.tau.clone(), i)
    }

    /// Reduces every squarefree cone monomial once, filling the memo.
    pub fn warm_up(&self) -> Result<()> {
        for face in self.fan.all_faces() {
            self.reduce_monomial(&XMonomial::of_cone(self.num_x(), &face))?;
        }
        Ok(())
    }

    pub fn reduce(&self, p: &XPolynomial) -> Result<NormalForm> {
        if p.mode() != self.mode {
            return Err(Error::ModeMismatch { left: self.mode, right: p.mode() });
        }
        if p.num_x() != self.num_x() || p.num_r() != self.num_r() {
            return Err(Error::Dimension { expected: self.num_x(), found: p.num_x() });
        }
        let mut acc = self.zero().coeffs;
        for (m, c) in p.terms() {
            let v = self.reduce_monomial(m)?;
            axpy(&mut acc, c, &v);
        }
        Ok(NormalForm { mode: self.mode, basis: self.sd.tau.clone(), coeffs: acc })
    }

    pub fn reduce_monomial(&self, mono: &XMonomial) -> Result<Arc<Vec<CoeffElem>>> {
        if let Some(v) = self.memo.read().expect("memo lock").get(mono) {
            return Ok(v.clone());
        }
        let steps = self.steps.fetch_add(1, Ordering::Relaxed) + 1;
        if steps > self.budget {
            return Err(Error::BudgetExhausted { budget: self.budget });
        }
        let v = Arc::new(self.rewrite(mono)?);
        self.memo.write().expect("memo lock").insert(mono.clone(), v.clone());
        Ok(v)
    }

    fn rewrite(&self, mono: &XMonomial) -> Result<Vec<CoeffElem>> {
        let mut acc = self.zero().coeffs;
        let gamma = mono.support();
        let Some(i) = self.sd.sigma.iter().position(|s| gamma.is_subset(s)) else {
            return Ok(acc);
        };
        let tau = &self.sd.tau[i];
        if !tau.is_subset(&gamma) {
            return Err(Error::Internal(format!("{gamma} lies in sigma_{} but misses tau_{}", i + 1, i + 1)));
        }
        let j = if mono.is_squarefree() {
            match gamma.difference(tau).rays().last() {
                Some(&p) => p,
                None => {
                    acc[i] = CoeffElem::one(self.mode, self.num_r());
                    return Ok(acc);
                }
            }
        } else {
            mono.0.iter().position(|&e| e >= 2).expect("not squarefree")
        };
        let rest = mono.without_one(j);
        for (m, c) in &self.rules[i][&j] {
            let v = self.reduce_monomial(&m.mul(&rest))?;
            axpy(&mut acc, c, &v);
        }
        Ok(acc)
    }
}

fn axpy(acc: &mut [CoeffElem], c: &CoeffElem, v: &[CoeffElem]) {
    for (a, b) in acc.iter_mut().zip(v) {
        if !b.is_zero() {
            *a = &*a + &(c * b);
        }
    }
}

/// Convenience: `reduce` for a one-off polynomial.
pub fn reduce(fan: &Fan, sd: &ShellingData, p: &XPolynomial) -> Result<NormalForm> {
    Reducer::new(fan, sd, p.mode())?.reduce(p)
}
