//! Ring structure on the free basis: multiplication tables, Betti numbers,
//! the duality pairing and specialization of the parameters.

mod target;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{CoeffElem, Mode, XMonomial};
use crate::error::{Error, Result};
use crate::fan::ConeRef;
use crate::reducer::{NormalForm, Reducer};
use crate::shelling::ShellingData;

pub use target::{SpecializationTarget, TruncPoly};

/// Products `x(tau_i) x(tau_j)` on the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultTable {
    pub mode: Mode,
    pub basis: Vec<ConeRef>,
    pub entries: Vec<Vec<NormalForm>>,
}

pub fn mult_table(red: &Reducer) -> Result<MultTable> {
    red.warm_up()?;
    let m = red.basis().len();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i..m).map(move |j| (i, j))).collect();
    let products = pairs
        .par_iter()
        .map(|&(i, j)| {
            let mono = red.basis_monomial(i).mul(&red.basis_monomial(j));
            let v = red.reduce_monomial(&mono)?;
            Ok(NormalForm { mode: red.mode(), basis: red.basis().to_vec(), coeffs: v.to_vec() })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut entries = vec![vec![red.zero(); m]; m];
    for (&(i, j), nf) in pairs.iter().zip(products) {
        entries[j][i] = nf.clone();
        entries[i][j] = nf;
    }
    Ok(MultTable { mode: red.mode(), basis: red.basis().to_vec(), entries })
}

impl MultTable {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.len()).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// `x(tau_1) = 1` acts as the identity.
    pub fn has_identity(&self) -> bool {
        let first = self.basis.iter().position(ConeRef::is_zero);
        first.is_some_and(|f| (0..self.len()).all(|j| self.entries[f][j].coeffs.iter().enumerate().all(|(l, c)| {
            if l == j {
                c.is_one()
            } else {
                c.is_zero()
            }
        })))
    }

    /// Product of two elements given by coefficient vectors.
    pub fn product(&self, a: &[CoeffElem], b: &[CoeffElem]) -> Vec<CoeffElem> {
        let n = a.first().map_or(0, CoeffElem::nvars);
        let mut out = vec![CoeffElem::zero(self.mode, n); self.len()];
        for (i, ai) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, bj) in b.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let ab = ai * bj;
                for (o, t) in out.iter_mut().zip(&self.entries[i][j].coeffs) {
                    if !t.is_zero() {
                        *o = &*o + &(&ab * t);
                    }
                }
            }
        }
        out
    }

    pub fn is_associative_on(&self, i: usize, j: usize, k: usize) -> bool {
        let left = self.product(&self.entries[i][j].coeffs, &self.unit(k));
        let right = self.product(&self.unit(i), &self.entries[j][k].coeffs);
        left == right
    }

    fn unit(&self, i: usize) -> Vec<CoeffElem> {
        let n = self.entries[0][0].coeffs[0].nvars();
        let mut v = vec![CoeffElem::zero(self.mode, n); self.len()];
        v[i] = CoeffElem::one(self.mode, n);
        v
    }

    /// In additive mode the coefficient of `x(tau_l)` in `x(tau_i) x(tau_j)`
    /// is homogeneous of degree `dim tau_i + dim tau_j - dim tau_l`.
    pub fn grading_ok(&self) -> bool {
        if self.mode != Mode::Additive {
            return true;
        }
        let dims: Vec<i64> = self.basis.iter().map(|t| t.dim() as i64).collect();
        (0..self.len()).all(|i| {
            (0..self.len()).all(|j| {
                self.entries[i][j].coeffs.iter().enumerate().all(|(l, c)| {
                    c.is_zero() || c.homogeneous_degree() == Some(dims[i] + dims[j] - dims[l])
                })
            })
        })
    }

    pub fn specialize(&self, target: &SpecializationTarget) -> Result<SpecializedTable> {
        target.check_mode(self.mode)?;
        let entries = self
            .entries
            .iter()
            .map(|row| row.iter().map(|nf| specialize(nf, target)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(SpecializedTable { mode: self.mode, basis: self.basis.clone(), target: target.clone(), entries })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "mode": self.mode.name(),
            "basis": self.basis.iter().map(ConeRef::one_based).collect::<Vec<_>>(),
            "entries": self.entries.iter().map(|row| row.iter().map(|nf| nf.coeffs.iter().map(CoeffElem::to_json).collect::<Vec<_>>()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn render_text(&self) -> String {
        let labels = basis_labels(&self.basis);
        render(&labels, |i, j| {
            let parts: Vec<String> = self.entries[i][j]
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(l, c)| term_text(&c.to_string(), c.num_terms() > 1, &labels[l]))
                .collect();
            parts_text(parts)
        })
    }
}

fn basis_labels(basis: &[ConeRef]) -> Vec<String> {
    basis.iter().map(|t| format!("x{t}")).collect()
}

fn term_text(coeff: &str, compound: bool, label: &str) -> String {
    match (coeff, compound) {
        ("1", _) => label.to_string(),
        (c, true) => format!("({c})*{label}"),
        (c, false) => format!("{c}*{label}"),
    }
}

fn parts_text(parts: Vec<String>) -> String {
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn render(labels: &[String], cell: impl Fn(usize, usize) -> String) -> String {
    let mut out = String::from("basis:");
    for (i, l) in labels.iter().enumerate() {
        out += &format!(" e{}={l}", i + 1);
    }
    out.push('\n');
    for i in 0..labels.len() {
        for j in i..labels.len() {
            out += &format!("e{} * e{} = {}\n", i + 1, j + 1, cell(i, j));
        }
    }
    out
}

/// A normal form with the parameters substituted.
pub fn specialize(nf: &NormalForm, target: &SpecializationTarget) -> Result<Vec<TruncPoly>> {
    nf.coeffs.iter().map(|c| target.apply(c)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializedTable {
    pub mode: Mode,
    pub basis: Vec<ConeRef>,
    pub target: SpecializationTarget,
    pub entries: Vec<Vec<Vec<TruncPoly>>>,
}

impl SpecializedTable {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn unit(&self, i: usize) -> Vec<TruncPoly> {
        let mut v = vec![self.target.zero(); self.len()];
        v[i] = TruncPoly::constant(&self.target.caps, 1);
        v
    }

    pub fn one(&self) -> Vec<TruncPoly> {
        self.unit(self.basis.iter().position(ConeRef::is_zero).unwrap_or(0))
    }

    pub fn product(&self, a: &[TruncPoly], b: &[TruncPoly]) -> Vec<TruncPoly> {
        let mut out = vec![self.target.zero(); self.len()];
        for (i, ai) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, bj) in b.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let ab = ai.mul(bj);
                for (o, t) in out.iter_mut().zip(&self.entries[i][j]) {
                    *o = o.add(&ab.mul(t));
                }
            }
        }
        out
    }

    pub fn power(&self, a: &[TruncPoly], k: u32) -> Vec<TruncPoly> {
        (0..k).fold(self.one(), |acc, _| self.product(&acc, a))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "mode": self.mode.name(),
            "basis": self.basis.iter().map(ConeRef::one_based).collect::<Vec<_>>(),
            "target": self.target.to_json(),
            "entries": self.entries.iter().map(|row| row.iter().map(|v| v.iter().map(TruncPoly::to_json).collect::<Vec<_>>()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn render_text(&self) -> String {
        let labels = basis_labels(&self.basis);
        render(&labels, |i, j| {
            let parts: Vec<String> = self.entries[i][j]
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(l, c)| term_text(&c.to_string(), c.terms().count() > 1, &labels[l]))
                .collect();
            parts_text(parts)
        })
    }
}

/// `b_{2k} = #{i : dim tau_i = k}` for `k = 0..=n`; odd Betti numbers vanish.
pub fn betti(sd: &ShellingData, n: usize) -> Result<Vec<u64>> {
    sd.require_star()?;
    let mut b = vec![0u64; n + 1];
    for t in &sd.tau {
        b[t.dim()] += 1;
    }
    Ok(b)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DualityReport {
    /// `pairing[i][j]`: coefficient of `x(sigma_m)` in `x(tau_i) x(tau'_j)` at `r = 0`.
    pub pairing: Vec<Vec<i64>>,
    /// `x(tau_i) x(tau'_j) = 0` for all `j < i`.
    pub triangular: bool,
    /// Every diagonal product is `±x(sigma_m)` with nothing else.
    pub unit_diagonal: bool,
    pub diagonal_signs: Vec<i64>,
    pub all_positive: bool,
}

impl DualityReport {
    pub fn ok(&self) -> bool {
        self.triangular && self.unit_diagonal
    }
}

/// Checks the pairing `x(tau_i) x(tau'_j)` at `r = 0` (additive reducer).
pub fn duality_check(red: &Reducer) -> Result<DualityReport> {
    let sd = red.shelling();
    if red.mode() != Mode::Additive {
        return Err(Error::ModeMismatch { left: Mode::Additive, right: red.mode() });
    }
    if !sd.star_prime_ok {
        return Err(Error::UnsupportedFan("duality needs an ordering satisfying (*')".into()));
    }
    let m = sd.len();
    let d = red.num_x();
    let zero = SpecializationTarget::all(red.num_r(), 0);
    let mut report =
        DualityReport { pairing: vec![vec![0; m]; m], triangular: true, unit_diagonal: true, diagonal_signs: vec![], all_positive: true };
    for i in 0..m {
        for j in 0..m {
            let mono = XMonomial::of_cone(d, &sd.tau[i]).mul(&XMonomial::of_cone(d, &sd.tau_prime[j]));
            let v = red.reduce_monomial(&mono)?;
            let vals = v
                .iter()
                .map(|c| zero.apply(c).map(|t| t.as_integer().expect("integer target")))
                .collect::<Result<Vec<BigInt>>>()?;
            let top = vals[m - 1].clone();
            report.pairing[i][j] = i64::try_from(&top).map_err(|_| Error::Internal("pairing overflow".into()))?;
            if j < i && vals.iter().any(|c| !c.is_zero()) {
                report.triangular = false;
            }
            if i == j {
                let rest_zero = vals[..m - 1].iter().all(Zero::is_zero);
                if !(top.abs().is_one() && rest_zero) {
                    report.unit_diagonal = false;
                }
                report.diagonal_signs.push(if top.is_positive() { 1 } else if top.is_negative() { -1 } else { 0 });
            }
        }
    }
    report.all_positive = report.diagonal_signs.iter().all(|&s| s == 1);
    Ok(report)
}
