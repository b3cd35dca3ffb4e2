//! Random inputs for property checks.

use num_bigint::BigInt;
use rand::Rng;

use crate::algebra::{CoeffElem, Mode, XMonomial, XPolynomial};
use crate::fan::Fan;

fn nonzero_small<R: Rng>(rng: &mut R, bound: i64) -> i64 {
    loop {
        let k = rng.gen_range(-bound..=bound);
        if k != 0 {
            return k;
        }
    }
}

/// A monomial of degree at most `max_deg` supported in a random maximal cone.
pub fn random_cone_monomial<R: Rng>(rng: &mut R, fan: &Fan, max_deg: u32) -> XMonomial {
    let cone = &fan.max_cones()[rng.gen_range(0..fan.num_max_cones())];
    let mut e = vec![0; fan.num_rays()];
    let deg = rng.gen_range(0..=max_deg);
    for _ in 0..deg {
        e[cone.rays()[rng.gen_range(0..cone.dim())]] += 1;
    }
    XMonomial(e)
}

fn random_coeff<R: Rng>(rng: &mut R, mode: Mode, n: usize, max_r_deg: u32) -> CoeffElem {
    let mut c = CoeffElem::zero(mode, n);
    for _ in 0..rng.gen_range(1..=2) {
        let mut e = vec![0i64; n];
        for _ in 0..rng.gen_range(0..=max_r_deg) {
            let i = rng.gen_range(0..n);
            let step = if mode == Mode::Multiplicative && rng.gen_bool(0.5) { -1 } else { 1 };
            e[i] += step;
        }
        let t = CoeffElem::monomial(mode, e, nonzero_small(rng, 3)).expect("mode-compatible exponents");
        c = &c + &t;
    }
    c
}

/// A random polynomial with x-degree at most `max_x_deg` and r-degree at most
/// `max_r_deg` (in absolute value per term). Half of the monomials are drawn
/// inside a maximal cone so that they survive the monomial relations.
pub fn random_polynomial<R: Rng>(
    rng: &mut R,
    fan: &Fan,
    mode: Mode,
    max_x_deg: u32,
    max_r_deg: u32,
    num_terms: usize,
) -> XPolynomial {
    let (d, n) = (fan.num_rays(), fan.dim());
    let mut p = XPolynomial::zero(mode, d, n);
    for _ in 0..num_terms {
        let mono = if rng.gen_bool(0.5) {
            random_cone_monomial(rng, fan, max_x_deg)
        } else {
            let mut e = vec![0; d];
            for _ in 0..rng.gen_range(0..=max_x_deg) {
                e[rng.gen_range(0..d)] += 1;
            }
            XMonomial(e)
        };
        p.add_term(mono, random_coeff(rng, mode, n, max_r_deg));
    }
    p
}

/// Nonzero integers in `[-3, 3]` for the parameters.
pub fn random_specialization<R: Rng>(rng: &mut R, n: usize) -> Vec<BigInt> {
    (0..n).map(|_| BigInt::from(nonzero_small(rng, 3))).collect()
}
