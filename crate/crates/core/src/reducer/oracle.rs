//! Independent checks of the reducer by plain linear algebra.
//!
//! Additive mode: the linear relations say `r_i = l_i(x)`, so eliminating the
//! parameters identifies `R` with the face ring `Z[x]/SR`, whose degree-`k`
//! part has the face-supported monomials as a basis. Freeness with basis
//! `x(tau_i)` means the images of `x(tau_i) r^a` (`dim tau_i + |a| = k`) form
//! another basis; the oracle checks this and solves for normal forms.
//!
//! Multiplicative mode: the parameters are specialized to nonzero integers
//! and the quotient of `Q[x]` is computed from relation multiples of bounded
//! degree.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::NormalForm;
use crate::algebra::{CoeffElem, Mode, XMonomial, XPolynomial};
use crate::error::{Error, Result};
use crate::fan::{ConeRef, Fan};
use crate::lattice;
use crate::linalg::{self, Rat};
use crate::presentation::{Presentation, Provenance};
use crate::shelling::ShellingData;

type IntPoly = BTreeMap<XMonomial, BigInt>;

/// All exponent vectors of length `len` and total degree `k`.
fn compositions(len: usize, k: u32) -> Vec<Vec<u32>> {
    if len == 0 {
        return if k == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=k).rev() {
        for mut rest in compositions(len - 1, k - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Face-supported monomials of degree exactly `k`.
fn face_monomials(faces: &[ConeRef], d: usize, k: u32) -> Vec<XMonomial> {
    let mut out = Vec::new();
    for f in faces {
        let s = f.dim() as u32;
        if (s == 0) != (k == 0) || s > k {
            continue;
        }
        for extra in compositions(f.dim(), k - s) {
            let mut e = vec![0; d];
            for (&j, x) in f.rays().iter().zip(extra) {
                e[j] = x + 1;
            }
            out.push(XMonomial(e));
        }
    }
    out.sort();
    out
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DegreeRank {
    pub degree: u32,
    /// Rank of the degree-`k` part of the quotient.
    pub quotient_rank: u64,
    /// `sum_i #{r-monomials of degree k - dim tau_i}`.
    pub expected: u64,
    /// The candidate basis is a basis over Q.
    pub nonsingular: bool,
    /// ... and over Z.
    pub unimodular: bool,
}

impl DegreeRank {
    pub fn ok(&self) -> bool {
        self.quotient_rank == self.expected && self.nonsingular && self.unimodular
    }
}

struct DegreeData {
    columns: HashMap<XMonomial, usize>,
    /// `(i, a)`: basis element `i` times `r^a`.
    candidates: Vec<(usize, Vec<u32>)>,
    /// Adjugate and determinant of the candidate matrix (candidates as columns).
    adj: Vec<Vec<BigInt>>,
    det: BigInt,
}

pub struct AdditiveOracle {
    d: usize,
    n: usize,
    faces: Vec<ConeRef>,
    face_set: HashSet<ConeRef>,
    tau: Vec<ConeRef>,
    /// `l_i(x) = sum_j <u_i, v_j> x_j`.
    ell: Vec<IntPoly>,
    cache: Mutex<HashMap<u32, std::result::Result<std::sync::Arc<DegreeData>, DegreeRank>>>,
}

impl AdditiveOracle {
    pub fn new(fan: &Fan, sd: &ShellingData) -> Result<Self> {
        let d = fan.num_rays();
        let ell = sd
            .sigma_m_dual
            .iter()
            .map(|u| {
                let mut p = IntPoly::new();
                for (j, v) in fan.rays().iter().enumerate() {
                    let a = lattice::pairing(u, v)?;
                    if !a.is_zero() {
                        p.insert(XMonomial::var(d, j), a);
                    }
                }
                Ok(p)
            })
            .collect::<Result<Vec<_>>>()?;
        let faces: Vec<ConeRef> = fan.all_faces().into_iter().collect();
        Ok(AdditiveOracle {
            d,
            n: fan.dim(),
            face_set: faces.iter().cloned().collect(),
            faces,
            tau: sd.tau.clone(),
            ell,
            cache: Mutex::new(HashMap::new()),
        })
    }

    fn mul(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        let mut out = IntPoly::new();
        for (ma, ca) in a {
            for (mb, cb) in b {
                let m = ma.mul(mb);
                if !self.face_set.contains(&m.support()) {
                    continue;
                }
                let e = out.entry(m).or_insert_with(BigInt::zero);
                *e += ca * cb;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Image of `x^e r^a` in the face ring.
    fn image(&self, mono: &XMonomial, a: &[u32]) -> IntPoly {
        let mut p = IntPoly::new();
        if self.face_set.contains(&mono.support()) {
            p.insert(mono.clone(), BigInt::one());
        }
        for (l, &k) in self.ell.iter().zip(a) {
            for _ in 0..k {
                p = self.mul(&p, l);
            }
        }
        p
    }

    fn degree_data(&self, k: u32) -> std::result::Result<std::sync::Arc<DegreeData>, DegreeRank> {
        if let Some(v) = self.cache.lock().expect("cache lock").get(&k) {
            return v.clone();
        }
        let v = self.build_degree(k);
        self.cache.lock().expect("cache lock").insert(k, v.clone());
        v
    }

    fn build_degree(&self, k: u32) -> std::result::Result<std::sync::Arc<DegreeData>, DegreeRank> {
        let cols = face_monomials(&self.faces, self.d, k);
        let columns: HashMap<XMonomial, usize> = cols.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut candidates = Vec::new();
        for (i, t) in self.tau.iter().enumerate() {
            if let Some(rest) = k.checked_sub(t.dim() as u32) {
                for a in compositions(self.n, rest) {
                    candidates.push((i, a));
                }
            }
        }
        let mut rank = DegreeRank {
            degree: k,
            quotient_rank: cols.len() as u64,
            expected: candidates.len() as u64,
            nonsingular: false,
            unimodular: false,
        };
        if cols.len() != candidates.len() {
            return Err(rank);
        }
        let size = cols.len();
        let mut matrix = vec![vec![BigInt::zero(); size]; size];
        for (c, (i, a)) in candidates.iter().enumerate() {
            for (m, v) in self.image(&XMonomial::of_cone(self.d, &self.tau[*i]), a) {
                matrix[columns[&m]][c] = v;
            }
        }
        let Some((det, adj)) = linalg::integer_inverse(&matrix) else { return Err(rank) };
        rank.nonsingular = true;
        rank.unimodular = det.abs().is_one();
        if !rank.ok() {
            return Err(rank);
        }
        Ok(std::sync::Arc::new(DegreeData { columns, candidates, adj, det }))
    }

    /// Graded ranks for degrees `0..=max_degree`.
    pub fn rank_report(&self, max_degree: u32) -> Vec<DegreeRank> {
        (0..=max_degree)
            .map(|k| match self.degree_data(k) {
                Ok(data) => {
                    let size = data.candidates.len() as u64;
                    DegreeRank { degree: k, quotient_rank: size, expected: size, nonsingular: true, unimodular: true }
                }
                Err(r) => r,
            })
            .collect()
    }

    /// Expected graded rank from the dimensions of the `tau_i`.
    pub fn expected_rank(&self, k: u32) -> u64 {
        self.tau
            .iter()
            .filter(|t| t.dim() as u32 <= k)
            .map(|t| binomial(self.n as u64 - 1 + (k as u64 - t.dim() as u64), self.n as u64 - 1))
            .sum()
    }

    pub fn normal_form(&self, p: &XPolynomial) -> Result<NormalForm> {
        if p.mode() != Mode::Additive {
            return Err(Error::ModeMismatch { left: Mode::Additive, right: p.mode() });
        }
        let mut nf = NormalForm::zero(Mode::Additive, self.n, self.tau.clone());
        for (k, part) in p.graded_parts() {
            let k = u32::try_from(k).map_err(|_| Error::Internal("negative degree".into()))?;
            let data = self
                .degree_data(k)
                .map_err(|r| Error::FreenessViolation(format!("degree {k}: rank {} vs expected {}", r.quotient_rank, r.expected)))?;
            let mut vec = vec![BigInt::zero(); data.columns.len()];
            for (m, c) in part.terms() {
                for (e, coef) in c.terms() {
                    let a: Vec<u32> = e.iter().map(|&x| x as u32).collect();
                    for (mm, v) in self.image(m, &a) {
                        vec[data.columns[&mm]] += coef * v;
                    }
                }
            }
            for (row, (i, a)) in data.adj.iter().zip(&data.candidates) {
                let num: BigInt = row.iter().zip(&vec).filter(|(_, y)| !y.is_zero()).map(|(x, y)| x * y).sum();
                if num.is_zero() {
                    continue;
                }
                if !(&num % &data.det).is_zero() {
                    return Err(Error::FreenessViolation(format!("non-integral coefficient in degree {k}")));
                }
                let val = num / &data.det;
                let exps = a.iter().map(|&x| x as i64).collect();
                let t = CoeffElem::monomial(Mode::Additive, exps, val)?;
                nf.coeffs[*i] = &nf.coeffs[*i] + &t;
            }
        }
        Ok(nf)
    }
}

/// Row-echelon form built one sparse row at a time. Columns are ordered by
/// their integer keys; a pivot row's leading key is its smallest.
struct Echelon {
    pivots: HashMap<i64, BTreeMap<i64, Rat>>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { pivots: HashMap::new() }
    }

    fn eliminate(&self, row: &mut BTreeMap<i64, Rat>, c: i64) {
        let v = row.remove(&c).expect("entry present");
        for (&cc, pv) in self.pivots[&c].iter().skip(1) {
            let e = row.entry(cc).or_insert_with(Rat::zero);
            *e -= &v * pv;
            if e.is_zero() {
                row.remove(&cc);
            }
        }
    }

    /// Fully reduces `row` against the current pivots.
    fn reduce(&self, mut row: BTreeMap<i64, Rat>) -> BTreeMap<i64, Rat> {
        let mut from = i64::MIN;
        loop {
            let next = row.range(from..).map(|(&c, _)| c).find(|c| self.pivots.contains_key(c));
            let Some(c) = next else { return row };
            self.eliminate(&mut row, c);
            from = c + 1;
        }
    }

    /// Adds a row, reducing only its leading term.
    fn insert(&mut self, mut row: BTreeMap<i64, Rat>) {
        loop {
            let Some((&lead, lv)) = row.iter().next() else { return };
            if self.pivots.contains_key(&lead) {
                self.eliminate(&mut row, lead);
                continue;
            }
            let inv = lv.recip();
            let row = row.into_iter().map(|(c, v)| (c, v * &inv)).collect();
            self.pivots.insert(lead, row);
            return;
        }
    }
}

/// Face-supported monomials with column keys: monomials of degree above
/// `low` get negative keys (higher degree first), low non-basis monomials
/// come next and basis monomials last.
struct Truncation {
    d: usize,
    low: u32,
    degree: u32,
    faces: Vec<ConeRef>,
    face_set: HashSet<ConeRef>,
    rels: Vec<(u32, BTreeMap<XMonomial, Rat>)>,
    by_degree: Vec<Vec<XMonomial>>,
    columns: HashMap<XMonomial, i64>,
    num_low: usize,
    first_basis: i64,
    next_high: i64,
    echelon: Echelon,
}

impl Truncation {
    fn new(fan: &Fan, rels: Vec<BTreeMap<XMonomial, Rat>>, basis: &HashSet<XMonomial>, low: u32) -> Self {
        let d = fan.num_rays();
        let faces: Vec<ConeRef> = fan.all_faces().into_iter().collect();
        let by_degree: Vec<Vec<XMonomial>> = (0..=low).map(|k| face_monomials(&faces, d, k)).collect();
        let mut columns = HashMap::new();
        let mut key = 0;
        for m in by_degree.iter().rev().flatten().filter(|m| !basis.contains(*m)) {
            columns.insert(m.clone(), key);
            key += 1;
        }
        let first_basis = key;
        for m in by_degree.iter().flatten().filter(|m| basis.contains(*m)) {
            columns.insert(m.clone(), key);
            key += 1;
        }
        let rels = rels.into_iter().map(|r| (r.keys().map(XMonomial::degree).max().unwrap_or(0), r)).collect();
        let mut t = Truncation {
            d,
            low,
            degree: low,
            face_set: faces.iter().cloned().collect(),
            faces,
            rels,
            num_low: columns.len(),
            by_degree,
            columns,
            first_basis,
            next_high: -1,
            echelon: Echelon::new(),
        };
        for k in 0..=low {
            t.add_multiples(k);
        }
        t
    }

    /// Relation multiples of total degree exactly `k`.
    fn add_multiples(&mut self, k: u32) {
        let mut rows = Vec::new();
        for (rdeg, rel) in &self.rels {
            let Some(mdeg) = k.checked_sub(*rdeg) else { continue };
            for mult in &self.by_degree[mdeg as usize] {
                let mut row = BTreeMap::new();
                for (m, v) in rel {
                    let prod = m.mul(mult);
                    if self.face_set.contains(&prod.support()) {
                        row.insert(self.columns[&prod], v.clone());
                    }
                }
                rows.push(row);
            }
        }
        for row in rows {
            self.echelon.insert(row);
        }
    }

    fn grow(&mut self) {
        self.degree += 1;
        let fresh = face_monomials(&self.faces, self.d, self.degree);
        for m in &fresh {
            self.columns.insert(m.clone(), self.next_high);
            self.next_high -= 1;
        }
        self.by_degree.push(fresh);
        self.add_multiples(self.degree);
    }

    /// Dimension of the image of the monomials of degree `<= low`.
    fn low_dimension(&self) -> usize {
        self.num_low - self.echelon.pivots.keys().filter(|&&c| c >= 0).count()
    }

    /// Every low non-basis monomial is a pivot.
    fn clean(&self) -> bool {
        (0..self.first_basis).all(|c| self.echelon.pivots.contains_key(&c))
    }
}

pub struct MultiplicativeOracle {
    d: usize,
    values: Vec<Rat>,
    tau: Vec<ConeRef>,
    degree: u32,
    truncation: Truncation,
    /// Quotient dimension at each truncation degree tried.
    pub dimensions: Vec<(u32, usize)>,
}

/// How far the relation degree may exceed the degree of interest.
const MAX_EXTRA_DEGREE: u32 = 12;

impl MultiplicativeOracle {
    /// Builds the quotient at parameter values `values`. Monomials of degree
    /// at most `low = max(min_degree, n)` are reduced modulo relation
    /// multiples of degree at most `D`; `D` grows until every non-basis
    /// monomial of degree `<= low` is eliminated and the dimension of the
    /// image of those monomials is the same for two consecutive `D`.
    pub fn new(fan: &Fan, sd: &ShellingData, values: &[BigInt], min_degree: u32) -> Result<Self> {
        let pres = Presentation::build(fan, sd, Mode::Multiplicative)?;
        let values: Vec<Rat> = values.iter().map(linalg::rat).collect();
        if values.iter().any(Zero::is_zero) {
            return Err(Error::Specialization("parameters must be nonzero".into()));
        }
        let face_set: HashSet<ConeRef> = fan.all_faces().into_iter().collect();
        let rels: Vec<BTreeMap<XMonomial, Rat>> = pres
            .relations
            .iter()
            .filter(|r| matches!(r.source, Provenance::Dual { .. }))
            .map(|r| {
                let mut out = BTreeMap::new();
                for (m, c) in r.poly.terms() {
                    if face_set.contains(&m.support()) {
                        let v = c.evaluate(&values)?;
                        if !v.is_zero() {
                            out.insert(m.clone(), v);
                        }
                    }
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        let basis: HashSet<XMonomial> = sd.tau.iter().map(|t| XMonomial::of_cone(fan.num_rays(), t)).collect();
        let m = sd.len();
        let low = min_degree.max(fan.dim() as u32);
        let mut t = Truncation::new(fan, rels, &basis, low);
        let mut dimensions = Vec::new();
        let mut previous = None;
        loop {
            let dim = t.low_dimension();
            dimensions.push((t.degree, dim));
            if dim < m {
                return Err(Error::FreenessViolation(format!("quotient dimension {dim} < {m} at truncation degree {}", t.degree)));
            }
            if t.clean() && previous == Some(dim) && dim == m {
                return Ok(MultiplicativeOracle { d: fan.num_rays(), values, tau: sd.tau.clone(), degree: t.low, truncation: t, dimensions });
            }
            if t.degree >= low + MAX_EXTRA_DEGREE {
                break;
            }
            previous = Some(dim);
            t.grow();
        }
        Err(Error::FreenessViolation(format!("quotient dimension did not stabilize at {m}: {dimensions:?}")))
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Coefficients of `p` (specialized) on the basis `x(tau_i)`.
    pub fn normal_form(&self, p: &XPolynomial) -> Result<Vec<BigRational>> {
        if p.x_degree() > self.degree {
            return Err(Error::Internal(format!("degree {} exceeds truncation {}", p.x_degree(), self.degree)));
        }
        let mut row = BTreeMap::new();
        for (m, c) in p.terms() {
            if let Some(&col) = self.truncation.columns.get(m) {
                let e = row.entry(col).or_insert_with(Rat::zero);
                *e += c.evaluate(&self.values)?;
            }
        }
        row.retain(|_, v: &mut Rat| !v.is_zero());
        let rest = self.truncation.echelon.reduce(row);
        let mut out = vec![Rat::zero(); self.tau.len()];
        for (i, t) in self.tau.iter().enumerate() {
            if let Some(v) = rest.get(&self.truncation.columns[&XMonomial::of_cone(self.d, t)]) {
                out[i] = v.clone();
            }
        }
        let used: usize = out.iter().filter(|v| !v.is_zero()).count();
        if used != rest.len() {
            return Err(Error::Internal("residual outside the basis".into()));
        }
        Ok(out)
    }
}
