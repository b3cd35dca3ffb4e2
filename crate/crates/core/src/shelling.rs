//! Orderings of the maximal cones satisfying the shelling conditions
//! (*) `tau_i ⊆ sigma_j ⇒ i ≤ j` and (*') `tau'_i ⊆ sigma_j ⇒ j ≤ i`.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{ConeRef, Fan};
use crate::lattice::{self, DualVector};

/// An ordering of the maximal cones together with the derived faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShellingData {
    /// `order[i]` is the index (into `fan.max_cones()`) of `sigma_{i+1}`.
    pub order: Vec<usize>,
    /// The maximal cones in order.
    pub sigma: Vec<ConeRef>,
    pub tau: Vec<ConeRef>,
    pub tau_prime: Vec<ConeRef>,
    pub star_ok: bool,
    pub star_prime_ok: bool,
    /// Dual basis to the rays of the last cone, in increasing ray order.
    pub sigma_m_dual: Vec<DualVector>,
}

impl ShellingData {
    pub fn new(fan: &Fan, order: &[usize]) -> Result<Self> {
        check_permutation(order, fan.num_max_cones())?;
        let tau = compute_tau(fan, order);
        let tau_prime = compute_tau_prime(fan, order, &tau);
        let star_ok = check_star(fan, order, &tau);
        let star_prime_ok = check_star_prime(fan, order, &tau_prime);
        let sigma: Vec<ConeRef> = order.iter().map(|&c| fan.max_cones()[c].clone()).collect();
        let last = sigma.last().ok_or_else(|| Error::UnsupportedFan("fan has no maximal cones".into()))?;
        let sigma_m_dual = lattice::dual_basis(&fan.cone_rays(last))?;
        Ok(ShellingData { order: order.to_vec(), sigma, tau, tau_prime, star_ok, star_prime_ok, sigma_m_dual })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The order as 1-based maximal-cone indices, as written to files.
    pub fn order_one_based(&self) -> Vec<usize> {
        self.order.iter().map(|c| c + 1).collect()
    }

    /// Coordinates `a_i = <u, w_i>` of `u = sum a_i u_i` with respect to the
    /// dual basis of the last cone (`w_i` its rays).
    pub fn coordinates(&self, fan: &Fan, u: &DualVector) -> Result<Vec<BigInt>> {
        let last = self.sigma.last().expect("nonempty order");
        last.rays().iter().map(|&j| lattice::pairing(u, fan.ray(j))).collect()
    }

    pub fn require_star(&self) -> Result<()> {
        if self.star_ok {
            Ok(())
        } else {
            Err(Error::UnsupportedFan("ordering does not satisfy (*)".into()))
        }
    }
}

fn check_permutation(order: &[usize], m: usize) -> Result<()> {
    let mut seen = vec![false; m];
    if order.len() != m {
        return Err(Error::input("order", format!("expected {m} entries, found {}", order.len())));
    }
    for (pos, &c) in order.iter().enumerate() {
        if c >= m || seen[c] {
            return Err(Error::input(format!("order[{}]", pos + 1), "not a permutation of the maximal cones"));
        }
        seen[c] = true;
    }
    Ok(())
}

fn adjacent(fan: &Fan, a: &ConeRef, b: &ConeRef) -> bool {
    a.intersection(b).dim() + 1 == fan.dim()
}

/// `tau_i` is `sigma_i` intersected with every later cone sharing a wall with it.
pub fn compute_tau(fan: &Fan, order: &[usize]) -> Vec<ConeRef> {
    let cones = fan.max_cones();
    (0..order.len())
        .map(|i| {
            let si = &cones[order[i]];
            order[i + 1..]
                .iter()
                .map(|&c| &cones[c])
                .filter(|sj| adjacent(fan, si, sj))
                .fold(si.clone(), |acc, sj| acc.intersection(sj))
        })
        .collect()
}

pub fn check_star(fan: &Fan, order: &[usize], tau: &[ConeRef]) -> bool {
    let cones = fan.max_cones();
    (0..order.len()).all(|i| (0..i).all(|j| !tau[i].is_subset(&cones[order[j]])))
}

pub fn compute_tau_prime(fan: &Fan, order: &[usize], tau: &[ConeRef]) -> Vec<ConeRef> {
    order.iter().zip(tau).map(|(&c, t)| fan.max_cones()[c].difference(t)).collect()
}

pub fn check_star_prime(fan: &Fan, order: &[usize], tau_prime: &[ConeRef]) -> bool {
    let cones = fan.max_cones();
    (0..order.len()).all(|i| (i + 1..order.len()).all(|j| !tau_prime[i].is_subset(&cones[order[j]])))
}

/// The unique `i` with `tau_i ⊆ gamma ⊆ sigma_i`: the first cone containing `gamma`.
pub fn locate_interval(gamma: &ConeRef, sd: &ShellingData) -> Result<usize> {
    let i = sd
        .sigma
        .iter()
        .position(|s| gamma.is_subset(s))
        .ok_or_else(|| Error::input("cone", format!("{gamma} is not a cone of the fan")))?;
    if !sd.tau[i].is_subset(gamma) {
        return Err(Error::Internal(format!("{gamma} lies in sigma_{} but does not contain tau_{}", i + 1, i + 1)));
    }
    Ok(i)
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub require_star_prime: bool,
    pub seed: u64,
    /// Random linear functionals tried before backtracking.
    pub heuristic_tries: usize,
    /// Backtracking budget; exceeding it yields an inconclusive result.
    pub node_limit: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { require_star_prime: true, seed: 0, heuristic_tries: 64, node_limit: 1_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMethod {
    /// The cones in the order the fan lists them.
    Listed,
    Heuristic,
    Backtracking,
}

pub fn find_shelling(fan: &Fan, opts: &SearchOptions) -> Result<(ShellingData, SearchMethod)> {
    fan.ensure_valid()?;
    let accept = |sd: &ShellingData| sd.star_ok && (!opts.require_star_prime || sd.star_prime_ok);

    let listed: Vec<usize> = (0..fan.num_max_cones()).collect();
    let sd = ShellingData::new(fan, &listed)?;
    if accept(&sd) {
        return Ok((sd, SearchMethod::Listed));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let centers: Vec<Vec<BigInt>> = fan
        .max_cones()
        .iter()
        .map(|c| {
            (0..fan.dim()).map(|k| c.rays().iter().map(|&j| fan.ray(j).0[k].clone()).sum()).collect()
        })
        .collect();
    for _ in 0..opts.heuristic_tries {
        let w: Vec<i64> = (0..fan.dim()).map(|_| rng.gen_range(-1000..=1000)).collect();
        let score = |c: usize| -> BigInt { centers[c].iter().zip(&w).map(|(x, &y)| x * y).sum() };
        let mut order: Vec<usize> = (0..fan.num_max_cones()).collect();
        order.sort_by(|&a, &b| score(b).cmp(&score(a)).then(a.cmp(&b)));
        for candidate in [order.clone(), order.into_iter().rev().collect()] {
            let sd = ShellingData::new(fan, &candidate)?;
            if accept(&sd) {
                return Ok((sd, SearchMethod::Heuristic));
            }
        }
    }

    let mut search = Backtrack::new(fan, opts.require_star_prime, opts.node_limit, Some(1));
    search.run();
    if let Some(order) = search.found.pop() {
        let sd = ShellingData::new(fan, &order)?;
        if !accept(&sd) {
            return Err(Error::Internal("backtracking produced an order failing re-verification".into()));
        }
        return Ok((sd, SearchMethod::Backtracking));
    }
    if search.exhausted_budget {
        Err(Error::SearchInconclusive { nodes: search.nodes })
    } else {
        let what = if opts.require_star_prime { "(*) and (*')" } else { "(*)" };
        Err(Error::OrderNotFound(format!("exhaustive search: no ordering satisfies {what}")))
    }
}

/// All orderings passing (*) (and (*') if requested), found by incremental
/// backtracking. `None` when the node limit was hit.
pub fn enumerate_orders(fan: &Fan, require_star_prime: bool, node_limit: u64) -> Option<Vec<Vec<usize>>> {
    let mut search = Backtrack::new(fan, require_star_prime, node_limit, None);
    search.run();
    if search.exhausted_budget {
        None
    } else {
        search.found.sort();
        Some(search.found)
    }
}

/// Builds orders from the back: when `sigma_i` is placed every later cone is
/// known, so `tau_i` is final and both conditions can be checked at once.
struct Backtrack<'a> {
    fan: &'a Fan,
    require_star_prime: bool,
    node_limit: u64,
    max_results: Option<usize>,
    adjacency: Vec<Vec<usize>>,
    nodes: u64,
    exhausted_budget: bool,
    found: Vec<Vec<usize>>,
}

impl<'a> Backtrack<'a> {
    fn new(fan: &'a Fan, require_star_prime: bool, node_limit: u64, max_results: Option<usize>) -> Self {
        Backtrack {
            fan,
            require_star_prime,
            node_limit,
            max_results,
            adjacency: fan.wall_graph(),
            nodes: 0,
            exhausted_budget: false,
            found: Vec::new(),
        }
    }

    fn run(&mut self) {
        let m = self.fan.num_max_cones();
        let mut placed = vec![false; m];
        let mut suffix = Vec::with_capacity(m);
        self.extend(&mut placed, &mut suffix);
    }

    fn done(&self) -> bool {
        self.exhausted_budget || self.max_results.is_some_and(|k| self.found.len() >= k)
    }

    fn extend(&mut self, placed: &mut Vec<bool>, suffix: &mut Vec<usize>) {
        let cones = self.fan.max_cones();
        let m = cones.len();
        if suffix.len() == m {
            self.found.push(suffix.iter().rev().copied().collect());
            return;
        }
        for c in 0..m {
            if placed[c] || self.done() {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.node_limit {
                self.exhausted_budget = true;
                return;
            }
            let sigma = &cones[c];
            let tau = self.adjacency[c]
                .iter()
                .filter(|&&o| placed[o])
                .fold(sigma.clone(), |acc, &o| acc.intersection(&cones[o]));
            let star = (0..m).all(|o| o == c || placed[o] || !tau.is_subset(&cones[o]));
            if !star {
                continue;
            }
            if self.require_star_prime {
                let tau_prime = sigma.difference(&tau);
                if (0..m).any(|o| placed[o] && tau_prime.is_subset(&cones[o])) {
                    continue;
                }
            }
            placed[c] = true;
            suffix.push(c);
            self.extend(placed, suffix);
            suffix.pop();
            placed[c] = false;
        }
    }
}

/// Every permutation of the maximal cones, checked directly.
pub fn brute_force_orders(fan: &Fan, require_star_prime: bool) -> Vec<Vec<usize>> {
    let m = fan.num_max_cones();
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..m).collect();
    permutations(&mut perm, 0, &mut |order| {
        let tau = compute_tau(fan, order);
        let mut ok = check_star(fan, order, &tau);
        if ok && require_star_prime {
            ok = check_star_prime(fan, order, &compute_tau_prime(fan, order, &tau));
        }
        if ok {
            out.push(order.to_vec());
        }
    });
    out.sort();
    out
}

fn permutations(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}
