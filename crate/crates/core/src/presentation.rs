//! Generating relations of the ideals defining the additive ring `R(S, Δ)`
//! and the multiplicative ring `𝓡(S, Δ)`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::algebra::{CoeffElem, Mode, XMonomial, XPolynomial};
use crate::error::{Error, Result};
use crate::fan::{ConeRef, Fan};
use crate::lattice::{self, DualVector};
use crate::shelling::ShellingData;

/// Where a relation came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Squarefree monomial of a minimal non-face.
    NonFace(ConeRef),
    /// Linear relation `y_i` (0-based `i`) for the dual vector `u_i`.
    Linear { index: usize, u: DualVector },
    /// Multiplicative relation `z(u)`.
    Dual { u: DualVector },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub poly: XPolynomial,
    pub source: Provenance,
}

impl Relation {
    pub fn is_monomial(&self) -> bool {
        matches!(self.source, Provenance::NonFace(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub mode: Mode,
    pub num_x: usize,
    pub num_r: usize,
    pub relations: Vec<Relation>,
}

impl Presentation {
    pub fn build(fan: &Fan, sd: &ShellingData, mode: Mode) -> Result<Self> {
        match mode {
            Mode::Additive => build_additive(fan, sd),
            Mode::Multiplicative => build_multiplicative(fan, sd),
        }
    }

    pub fn monomial_relations(&self) -> impl Iterator<Item = &Relation> {
        self.relations.iter().filter(|r| r.is_monomial())
    }

    pub fn parameter_relations(&self) -> impl Iterator<Item = &Relation> {
        self.relations.iter().filter(|r| !r.is_monomial())
    }

    pub fn to_json(&self) -> Value {
        let rels: Vec<Value> = self
            .relations
            .iter()
            .map(|r| {
                let (kind, source) = match &r.source {
                    Provenance::NonFace(c) => ("monomial", json!({ "nonface": c.one_based() })),
                    Provenance::Linear { index, u } => ("linear", json!({ "index": index + 1, "u": vec_json(u) })),
                    Provenance::Dual { u } => ("dual", json!({ "u": vec_json(u) })),
                };
                json!({
                    "kind": kind,
                    "source": source,
                    "poly": r.poly.to_json(),
                    "text": r.poly.to_string(),
                })
            })
            .collect();
        json!({
            "mode": self.mode.name(),
            "num_x": self.num_x,
            "num_r": self.num_r,
            "relations": rels,
        })
    }
}

fn vec_json(u: &DualVector) -> Value {
    Value::Array(u.coords().iter().map(|c| json!(c.to_i64().unwrap_or(0))).collect())
}

fn monomial_relations(fan: &Fan, mode: Mode, n: usize) -> Vec<Relation> {
    fan.minimal_nonfaces()
        .into_iter()
        .map(|c| Relation { poly: XPolynomial::monomial(mode, n, XMonomial::of_cone(fan.num_rays(), &c)), source: Provenance::NonFace(c) })
        .collect()
}

pub fn build_additive(fan: &Fan, sd: &ShellingData) -> Result<Presentation> {
    sd.require_star()?;
    let n = fan.dim();
    let mut relations = monomial_relations(fan, Mode::Additive, n);
    for (index, u) in sd.sigma_m_dual.iter().enumerate() {
        relations.push(Relation { poly: relation_for(fan, sd, Mode::Additive, u)?, source: Provenance::Linear { index, u: u.clone() } });
    }
    Ok(Presentation { mode: Mode::Additive, num_x: fan.num_rays(), num_r: n, relations })
}

pub fn build_multiplicative(fan: &Fan, sd: &ShellingData) -> Result<Presentation> {
    sd.require_star()?;
    let n = fan.dim();
    let mut relations = monomial_relations(fan, Mode::Multiplicative, n);
    for u in generating_set(fan)? {
        relations.push(Relation { poly: relation_for(fan, sd, Mode::Multiplicative, &u)?, source: Provenance::Dual { u } });
    }
    Ok(Presentation { mode: Mode::Multiplicative, num_x: fan.num_rays(), num_r: n, relations })
}

/// `±` the dual bases of all maximal cones, without repetitions.
pub fn generating_set(fan: &Fan) -> Result<Vec<DualVector>> {
    let mut set = BTreeSet::new();
    for cone in fan.max_cones() {
        for u in lattice::dual_basis(&fan.cone_rays(cone))? {
            set.insert(u.neg().0);
            set.insert(u.0);
        }
    }
    Ok(set.into_iter().map(DualVector).filter(|u| !u.is_zero()).collect())
}

/// The relation attached to `u ∈ M`: `sum <u,v_j> x_j - r_u` in additive
/// mode, `z(u)` in multiplicative mode.
pub fn relation_for(fan: &Fan, sd: &ShellingData, mode: Mode, u: &DualVector) -> Result<XPolynomial> {
    let d = fan.num_rays();
    let n = fan.dim();
    let coords = sd.coordinates(fan, u)?;
    let pairings = fan.rays().iter().map(|v| lattice::pairing(u, v)).collect::<Result<Vec<BigInt>>>()?;
    match mode {
        Mode::Additive => {
            let mut p = XPolynomial::constant(-&CoeffElem::r_u_additive(&coords), d);
            for (j, a) in pairings.iter().enumerate() {
                p.add_term(XMonomial::var(d, j), CoeffElem::constant(mode, n, a.clone()));
            }
            Ok(p)
        }
        Mode::Multiplicative => {
            let (pos, neg) = split_products(&pairings, n)?;
            let r_u = CoeffElem::r_u_multiplicative(&coords)?;
            Ok(&pos - &neg.scale(&r_u))
        }
    }
}

/// `prod_{a_j>0} (1-x_j)^{a_j}` and `prod_{a_j<0} (1-x_j)^{-a_j}`.
pub(crate) fn split_products(pairings: &[BigInt], n: usize) -> Result<(XPolynomial, XPolynomial)> {
    let d = pairings.len();
    let one = XPolynomial::one(Mode::Multiplicative, d, n);
    let mut pos = one.clone();
    let mut neg = one.clone();
    for (j, a) in pairings.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let k = a.abs().to_u32().ok_or_else(|| Error::Internal(format!("pairing {a} too large")))?;
        let factor = (&one - &XPolynomial::var(Mode::Multiplicative, d, n, j)).pow(k);
        if a.is_positive() {
            pos = &pos * &factor;
        } else {
            neg = &neg * &factor;
        }
    }
    Ok((pos, neg))
}
