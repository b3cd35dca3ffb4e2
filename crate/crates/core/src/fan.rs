//! Simplicial fans given by rays and maximal cones.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{self, LatticeVector, Unimodularity};
use crate::linalg::{self, rat, Constraint, Rat};

/// A cone of the fan, stored as the sorted set of its (0-based) ray indices.
/// The zero cone is the empty set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConeRef(Vec<usize>);

impl ConeRef {
    pub fn new(mut rays: Vec<usize>) -> Self {
        rays.sort_unstable();
        rays.dedup();
        ConeRef(rays)
    }

    pub fn zero() -> Self {
        ConeRef(Vec::new())
    }

    pub fn rays(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, ray: usize) -> bool {
        self.0.binary_search(&ray).is_ok()
    }

    pub fn is_subset(&self, other: &ConeRef) -> bool {
        self.0.iter().all(|r| other.contains(*r))
    }

    pub fn intersection(&self, other: &ConeRef) -> ConeRef {
        ConeRef(self.0.iter().copied().filter(|r| other.contains(*r)).collect())
    }

    pub fn difference(&self, other: &ConeRef) -> ConeRef {
        ConeRef(self.0.iter().copied().filter(|r| !other.contains(*r)).collect())
    }

    pub fn with(&self, ray: usize) -> ConeRef {
        let mut v = self.0.clone();
        v.push(ray);
        ConeRef::new(v)
    }

    pub fn without(&self, ray: usize) -> ConeRef {
        ConeRef(self.0.iter().copied().filter(|&r| r != ray).collect())
    }

    /// 1-based indices, as used in files and messages.
    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|r| r + 1).collect()
    }
}

impl fmt::Display for ConeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.one_based().iter().map(|r| r.to_string()).collect();
        write!(f, "{{{}}}", s.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<LatticeVector>,
    max_cones: Vec<ConeRef>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// Rays are nonzero, primitive, distinct, and each lies on a maximal cone.
    pub rays_ok: bool,
    pub simplicial: bool,
    pub smooth: bool,
    pub pure: bool,
    /// Any two maximal cones meet in a common face.
    pub fan_condition: bool,
    pub complete: bool,
    pub diagnostics: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.rays_ok && self.simplicial && self.smooth && self.pure && self.fan_condition && self.complete
    }
}

impl Fan {
    /// Builds a fan from 0-based cone indices, checking only structure.
    pub fn new(dim: usize, rays: Vec<LatticeVector>, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("dim", "ambient dimension must be at least 1"));
        }
        for (i, v) in rays.iter().enumerate() {
            if v.dim() != dim {
                return Err(Error::input(
                    format!("rays[{}]", i + 1),
                    format!("expected {dim} coordinates, found {}", v.dim()),
                ));
            }
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for (c, idx) in max_cones.into_iter().enumerate() {
            if idx.is_empty() {
                return Err(Error::input(format!("max_cones[{}]", c + 1), "empty cone"));
            }
            for &r in &idx {
                if r >= rays.len() {
                    return Err(Error::input(
                        format!("max_cones[{}]", c + 1),
                        format!("ray index {} out of range 1..={}", r + 1, rays.len()),
                    ));
                }
            }
            let cone = ConeRef::new(idx.clone());
            if cone.dim() != idx.len() {
                return Err(Error::input(format!("max_cones[{}]", c + 1), "repeated ray index"));
            }
            cones.push(cone);
        }
        Ok(Fan { dim, rays, max_cones: cones })
    }

    /// Convenience constructor from small integers and 1-based cone indices.
    pub fn from_one_based(dim: usize, rays: &[Vec<i64>], max_cones: &[Vec<usize>]) -> Result<Self> {
        let rays = rays.iter().map(|r| LatticeVector::from_i64s(r)).collect();
        let mut cones = Vec::new();
        for (c, cone) in max_cones.iter().enumerate() {
            let mut idx = Vec::new();
            for &r in cone {
                if r == 0 {
                    return Err(Error::input(format!("max_cones[{}]", c + 1), "ray indices are 1-based"));
                }
                idx.push(r - 1);
            }
            cones.push(idx);
        }
        Fan::new(dim, rays, cones)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray(&self, j: usize) -> &LatticeVector {
        &self.rays[j]
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[ConeRef] {
        &self.max_cones
    }

    pub fn num_max_cones(&self) -> usize {
        self.max_cones.len()
    }

    pub fn cone_rays(&self, cone: &ConeRef) -> Vec<LatticeVector> {
        cone.rays().iter().map(|&j| self.rays[j].clone()).collect()
    }

    pub fn is_face(&self, cone: &ConeRef) -> bool {
        self.max_cones.iter().any(|s| cone.is_subset(s))
    }

    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport {
            rays_ok: true,
            simplicial: true,
            smooth: true,
            pure: true,
            fan_condition: true,
            complete: true,
            diagnostics: Vec::new(),
        };
        let mut seen = BTreeMap::new();
        for (j, v) in self.rays.iter().enumerate() {
            match lattice::is_primitive(v) {
                Ok(true) => {}
                Ok(false) => {
                    rep.rays_ok = false;
                    rep.diagnostics.push(format!("ray {} = {v} is not primitive", j + 1));
                }
                Err(_) => {
                    rep.rays_ok = false;
                    rep.diagnostics.push(format!("ray {} is the zero vector", j + 1));
                }
            }
            if let Some(prev) = seen.insert(v.clone(), j) {
                rep.rays_ok = false;
                rep.diagnostics.push(format!("rays {} and {} coincide", prev + 1, j + 1));
            }
            if !self.max_cones.iter().any(|c| c.contains(j)) {
                rep.rays_ok = false;
                rep.diagnostics.push(format!("ray {} lies on no maximal cone", j + 1));
            }
        }

        for (c, cone) in self.max_cones.iter().enumerate() {
            if cone.dim() != self.dim {
                rep.pure = false;
                rep.diagnostics.push(format!(
                    "maximal cone {} = {cone} has dimension {} < {}",
                    c + 1,
                    cone.dim(),
                    self.dim
                ));
            }
            match lattice::unimodularity(&self.cone_rays(cone)) {
                Ok(Unimodularity::Unimodular) => {}
                Ok(Unimodularity::NotSaturated { divisors }) => {
                    rep.smooth = false;
                    let d: Vec<String> = divisors.iter().map(|d| d.to_string()).collect();
                    rep.diagnostics.push(format!(
                        "maximal cone {} = {cone} is singular (elementary divisors {})",
                        c + 1,
                        d.join(",")
                    ));
                }
                Ok(Unimodularity::RankDeficient { .. }) | Err(_) => {
                    rep.simplicial = false;
                    rep.smooth = false;
                    rep.diagnostics.push(format!("maximal cone {} = {cone} has dependent rays", c + 1));
                }
            }
        }

        if rep.simplicial {
            for a in 0..self.max_cones.len() {
                for b in a + 1..self.max_cones.len() {
                    if !self.meet_in_common_face(&self.max_cones[a], &self.max_cones[b]) {
                        rep.fan_condition = false;
                        rep.diagnostics.push(format!(
                            "maximal cones {} = {} and {} = {} overlap beyond a common face",
                            a + 1,
                            self.max_cones[a],
                            b + 1,
                            self.max_cones[b]
                        ));
                    }
                }
            }
        } else {
            rep.fan_condition = false;
        }

        if rep.pure {
            let mut walls: BTreeMap<ConeRef, usize> = BTreeMap::new();
            for cone in &self.max_cones {
                for &r in cone.rays() {
                    *walls.entry(cone.without(r)).or_default() += 1;
                }
            }
            for (wall, count) in walls {
                if count != 2 {
                    rep.complete = false;
                    let plural = if count == 1 { "cone" } else { "cones" };
                    rep.diagnostics.push(format!("wall {wall} on {count} {plural}"));
                }
            }
        }
        rep.complete &= rep.pure && rep.fan_condition;
        rep
    }

    /// Whether two simplicial cones intersect exactly in the cone spanned by
    /// their common rays. A point of `a ∩ b` outside that face is searched for
    /// as a feasible point of a small rational linear system.
    fn meet_in_common_face(&self, a: &ConeRef, b: &ConeRef) -> bool {
        let common = a.intersection(b);
        let b_only = b.difference(&common);
        if b_only.is_zero() || a.difference(&common).is_zero() {
            // one maximal cone contains the other
            return false;
        }
        let nvars = a.dim() + b.dim();
        let mut cs = Vec::new();
        for k in 0..self.dim {
            let mut coeffs = Vec::with_capacity(nvars);
            coeffs.extend(a.rays().iter().map(|&j| rat(&self.rays[j].0[k])));
            coeffs.extend(b.rays().iter().map(|&j| -rat(&self.rays[j].0[k])));
            cs.push(Constraint { coeffs, rhs: Rat::zero(), equality: true });
        }
        for t in 0..nvars {
            let coeffs = (0..nvars).map(|s| if s == t { Rat::one() } else { Rat::zero() }).collect();
            cs.push(Constraint { coeffs, rhs: Rat::zero(), equality: false });
        }
        let coeffs = (0..nvars)
            .map(|s| {
                if s >= a.dim() && !common.contains(b.rays()[s - a.dim()]) {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            })
            .collect();
        cs.push(Constraint { coeffs, rhs: Rat::one(), equality: true });
        !linalg::feasible(&cs)
    }

    /// Every cone of the fan, including the zero cone.
    pub fn all_faces(&self) -> BTreeSet<ConeRef> {
        let mut out = BTreeSet::new();
        for cone in &self.max_cones {
            let r = cone.rays();
            for mask in 0u64..(1u64 << r.len()) {
                let sub = (0..r.len()).filter(|&i| mask >> i & 1 == 1).map(|i| r[i]).collect();
                out.insert(ConeRef(sub));
            }
        }
        out
    }

    /// Inclusion-minimal ray sets spanning no cone.
    pub fn minimal_nonfaces(&self) -> BTreeSet<ConeRef> {
        let faces: HashSet<ConeRef> = self.all_faces().into_iter().collect();
        let d = self.rays.len();
        let mut out = BTreeSet::new();
        let mut level: Vec<ConeRef> = faces.iter().filter(|f| f.dim() == 1).cloned().collect();
        for _size in 2..=(self.dim + 1).min(d) {
            let mut next = BTreeSet::new();
            for f in &level {
                let last = *f.rays().last().unwrap();
                for j in last + 1..d {
                    let cand = f.with(j);
                    // all facets of a candidate must be faces
                    if cand.rays().iter().all(|&r| faces.contains(&cand.without(r))) {
                        if faces.contains(&cand) {
                            next.insert(cand);
                        } else {
                            out.insert(cand);
                        }
                    }
                }
            }
            level = next.into_iter().collect();
        }
        out
    }

    /// Adjacency between maximal cones sharing a wall (n-1 common rays).
    pub fn wall_graph(&self) -> Vec<Vec<usize>> {
        let m = self.max_cones.len();
        let mut adj = vec![Vec::new(); m];
        for a in 0..m {
            for b in a + 1..m {
                let common = self.max_cones[a].intersection(&self.max_cones[b]);
                if common.dim() + 1 == self.dim
                    && self.max_cones[a].dim() == self.dim
                    && self.max_cones[b].dim() == self.dim
                {
                    adj[a].push(b);
                    adj[b].push(a);
                }
            }
        }
        adj
    }

    /// Requires a valid (smooth, complete) fan.
    pub fn ensure_valid(&self) -> Result<()> {
        let rep = self.validate();
        if rep.is_valid() {
            Ok(())
        } else {
            Err(Error::UnsupportedFan(rep.diagnostics.join("; ")))
        }
    }
}
