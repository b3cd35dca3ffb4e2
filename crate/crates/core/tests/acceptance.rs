//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::path::PathBuf;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use toric_bundle::catalog;
use toric_bundle::reducer::{random_polynomial, random_specialization, AdditiveOracle, MultiplicativeOracle};
use toric_bundle::ringops::{self, SpecializationTarget, TruncPoly};
use toric_bundle::shelling::{self, SearchOptions};
use toric_bundle::{Fan, Mode, Reducer, ShellingData, XMonomial, XPolynomial};

/// Random polynomials compared against the oracles, per fan and mode.
const ORACLE_SAMPLES: usize = 100;
const MAX_X_DEGREE: u32 = 4;
const MAX_R_DEGREE: u32 = 2;
/// Random parameter values for the multiplicative freeness check.
const FREENESS_SPECIALIZATIONS: usize = 5;
const ASSOCIATIVITY_TRIPLES: usize = 50;
/// Additive graded ranks are checked in degrees `0..=n + EXTRA_DEGREES`.
const EXTRA_DEGREES: u32 = 3;
/// Per-criterion time budget in seconds. Overruns are reported but do not
/// fail the run, since timings depend on the machine and build profile.
const TIME_BUDGET_SECS: f64 = 10.0;

type Outcome = Result<String, String>;

fn shelled(name: &str) -> (Fan, ShellingData) {
    let fan = catalog::fan(name).expect("catalog fan");
    let (sd, _) = shelling::find_shelling(&fan, &SearchOptions::default()).expect("shelling order");
    (fan, sd)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn freeness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut summary = Vec::new();
    for name in catalog::names() {
        let (fan, sd) = shelled(name);
        let oracle = AdditiveOracle::new(&fan, &sd).map_err(|e| e.to_string())?;
        let n = fan.dim() as u32;
        for r in oracle.rank_report(n + EXTRA_DEGREES) {
            ensure(r.ok() && r.expected == oracle.expected_rank(r.degree), || format!("{name}: additive degree {r:?}"))?;
        }
        for _ in 0..FREENESS_SPECIALIZATIONS {
            let values = random_specialization(&mut rng, fan.dim());
            let o = MultiplicativeOracle::new(&fan, &sd, &values, 0).map_err(|e| format!("{name}: {e}"))?;
            let (deg, dim) = *o.dimensions.last().expect("at least one degree");
            ensure(dim == sd.len(), || format!("{name}: multiplicative dimension {dim}"))?;
            summary.push(deg);
        }
    }
    Ok(format!(
        "graded ranks match in degrees 0..n+{EXTRA_DEGREES}; multiplicative quotients stable at m (truncation up to degree {})",
        summary.iter().max().unwrap_or(&0)
    ))
}

fn oracle_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut count = 0;
    for name in catalog::names() {
        let (fan, sd) = shelled(name);
        let add = Reducer::new(&fan, &sd, Mode::Additive).map_err(|e| e.to_string())?;
        let add_oracle = AdditiveOracle::new(&fan, &sd).map_err(|e| e.to_string())?;
        let mult = Reducer::new(&fan, &sd, Mode::Multiplicative).map_err(|e| e.to_string())?;
        let values = random_specialization(&mut rng, fan.dim());
        let mult_oracle = MultiplicativeOracle::new(&fan, &sd, &values, MAX_X_DEGREE).map_err(|e| e.to_string())?;
        for _ in 0..ORACLE_SAMPLES {
            let terms = rng.gen_range(1..=4);
            let p = random_polynomial(&mut rng, &fan, Mode::Additive, MAX_X_DEGREE, MAX_R_DEGREE, terms);
            let a = add.reduce(&p).map_err(|e| e.to_string())?;
            let b = add_oracle.normal_form(&p).map_err(|e| e.to_string())?;
            ensure(a == b, || format!("{name} additive: {p}"))?;
            let p = random_polynomial(&mut rng, &fan, Mode::Multiplicative, MAX_X_DEGREE, MAX_R_DEGREE, terms);
            let a = mult.reduce(&p).map_err(|e| e.to_string())?.evaluate(mult_oracle.values()).map_err(|e| e.to_string())?;
            let b = mult_oracle.normal_form(&p).map_err(|e| e.to_string())?;
            ensure(a == b, || format!("{name} multiplicative: {p}"))?;
            count += 2;
        }
    }
    Ok(format!("{count} random polynomials agree exactly"))
}

fn betti_numbers() -> Outcome {
    let expected: &[(&str, &[u64])] = &[
        ("p2", &[1, 1, 1]),
        ("p3", &[1, 1, 1, 1]),
        ("p1xp1", &[1, 2, 1]),
        ("hirzebruch_0", &[1, 2, 1]),
        ("hirzebruch_1", &[1, 2, 1]),
        ("hirzebruch_2", &[1, 2, 1]),
        ("hirzebruch_3", &[1, 2, 1]),
        ("bl_p2", &[1, 2, 1]),
    ];
    for (name, want) in expected {
        let (fan, sd) = shelled(name);
        let b = ringops::betti(&sd, fan.dim()).map_err(|e| e.to_string())?;
        ensure(b == *want, || format!("{name}: {b:?}"))?;
    }
    for name in catalog::names() {
        let (fan, sd) = shelled(name);
        let b = ringops::betti(&sd, fan.dim()).map_err(|e| e.to_string())?;
        ensure(b.iter().sum::<u64>() == sd.len() as u64, || format!("{name}: sum {b:?}"))?;
        ensure(b[0] == 1 && b[fan.dim()] == 1, || format!("{name}: ends {b:?}"))?;
        // the additive table at r = 0 is graded: basis degrees give the same counts
        let red = Reducer::new(&fan, &sd, Mode::Additive).map_err(|e| e.to_string())?;
        let table = ringops::mult_table(&red).map_err(|e| e.to_string())?;
        ensure(table.grading_ok(), || format!("{name}: grading"))?;
    }
    Ok("Betti sequences as expected; sum = m, b_0 = b_2n = 1".into())
}

fn k_theory_of_projective_space() -> Outcome {
    for (name, big_n) in [("p1", 1u32), ("p2", 2), ("p3", 3)] {
        let (fan, sd) = shelled(name);
        let red = Reducer::new(&fan, &sd, Mode::Multiplicative).map_err(|e| e.to_string())?;
        let table = ringops::mult_table(&red).map_err(|e| e.to_string())?;
        let ones = SpecializationTarget::all(fan.dim(), 1);
        let st = table.specialize(&ones).map_err(|e| e.to_string())?;
        let z_index = sd.tau.iter().position(|t| t.dim() == 1).ok_or("no degree-one basis element")?;
        let z = st.unit(z_index);
        for j in 0..fan.num_rays() {
            let xj = red.reduce(&XPolynomial::var(Mode::Multiplicative, fan.num_rays(), fan.dim(), j)).map_err(|e| e.to_string())?;
            let xj = ringops::specialize(&xj, &ones).map_err(|e| e.to_string())?;
            ensure(xj == z, || format!("{name}: x{} differs from z at r = 1", j + 1))?;
        }
        ensure(st.power(&z, big_n + 1).iter().all(TruncPoly::is_zero), || format!("{name}: z^(N+1) != 0"))?;
        let rows: Vec<Vec<BigRational>> = (0..=big_n)
            .map(|k| st.power(&z, k).iter().map(|c| BigRational::from_integer(c.as_integer().expect("integer"))).collect())
            .collect();
        let det = toric_bundle::linalg::determinant(&rows);
        ensure(rows.len() == sd.len() && det.abs().is_one(), || format!("{name}: powers of z do not form a basis"))?;
    }
    Ok("K(P^N) = Z[z]/z^(N+1) for N = 1, 2, 3".into())
}

fn duality() -> Outcome {
    let mut signs = Vec::new();
    for name in catalog::names() {
        let (fan, sd) = shelled(name);
        ensure(sd.star_prime_ok, || format!("{name}: order lacks (*')"))?;
        let red = Reducer::new(&fan, &sd, Mode::Additive).map_err(|e| e.to_string())?;
        let rep = ringops::duality_check(&red).map_err(|e| e.to_string())?;
        ensure(rep.ok(), || format!("{name}: {rep:?}"))?;
        signs.push(format!("{name}:{}", if rep.all_positive { "+" } else { "mixed" }));
    }
    Ok(format!("triangular with unit diagonal; signs {}", signs.join(" ")))
}

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/hirzebruch.json")
}

/// Coefficient of `t x_fiber` in `x_fiber^2` for the P^1 bundle over P^1
/// with `r_1 = s t`, `t^2 = 0`, and the graded ranks of that ring.
fn bundle_square(s: i64) -> Result<(i64, Vec<usize>, Vec<usize>), String> {
    let (fan, sd) = shelled("p1");
    let red = Reducer::new(&fan, &sd, Mode::Additive).map_err(|e| e.to_string())?;
    let fiber = sd.tau.iter().position(|t| t.dim() == 1).ok_or("no fiber class")?;
    let sq = red.reduce_monomial(&red.basis_monomial(fiber).mul(&red.basis_monomial(fiber))).map_err(|e| e.to_string())?;
    let caps = vec![2];
    let target = SpecializationTarget::truncated(caps.clone(), vec![TruncPoly::var(&caps, 0).mul(&TruncPoly::constant(&caps, s))])
        .map_err(|e| e.to_string())?;
    let vals: Vec<TruncPoly> = sq.iter().map(|c| target.apply(c)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    ensure(vals[0].is_zero() && vals[fiber].constant_term().is_zero(), || "unexpected square".into())?;
    let coeff = i64::try_from(&vals[fiber].coeff(&[1])).map_err(|e| e.to_string())?;
    // basis {1, x_f} over {1, t}: degrees dim(tau) + deg(t^k)
    let mut ranks = vec![0; 3];
    for t in &sd.tau {
        for k in 0..2 {
            ranks[t.dim() + k] += 1;
        }
    }
    Ok((coeff, ranks, sd.order_one_based()))
}

/// `D_f^2 = c * D_1 D_f` on the Hirzebruch fan at r = 0, computed by the oracle.
fn direct_square(a: i64, fiber_ray: usize) -> Result<i64, String> {
    let (fan, sd) = shelled(&format!("hirzebruch_{a}"));
    let oracle = AdditiveOracle::new(&fan, &sd).map_err(|e| e.to_string())?;
    let red = Reducer::new(&fan, &sd, Mode::Additive).map_err(|e| e.to_string())?;
    let top = |mono: XMonomial| -> Result<BigInt, String> {
        let p = XPolynomial::monomial(Mode::Additive, 2, mono);
        let nf = oracle.normal_form(&p).map_err(|e| e.to_string())?;
        ensure(nf == red.reduce(&p).map_err(|e| e.to_string())?, || "oracle and reducer disagree".into())?;
        let at_zero = nf.evaluate(&[BigRational::zero(), BigRational::zero()]).map_err(|e| e.to_string())?;
        Ok(at_zero[sd.len() - 1].to_integer())
    };
    let x = |j: usize| XMonomial::var(4, j);
    let square = top(x(fiber_ray).mul(&x(fiber_ray)))?;
    let mixed = top(x(0).mul(&x(fiber_ray)))?;
    ensure(!mixed.is_zero() && (&square % &mixed).is_zero(), || "mixed term does not divide".into())?;
    i64::try_from(&(square / mixed)).map_err(|e| e.to_string())
}

fn hirzebruch() -> Outcome {
    let mut entries = Vec::new();
    for a in 0..=3i64 {
        let (plus, ranks, order) = bundle_square(a)?;
        let (minus, _, _) = bundle_square(-a)?;
        ensure(plus.abs() == a && minus == -plus, || format!("a={a}: bundle coefficient {plus}"))?;
        ensure(ranks == vec![1, 2, 1], || format!("a={a}: bundle ranks {ranks:?}"))?;
        let (fan, sd) = shelled(&format!("hirzebruch_{a}"));
        let b = ringops::betti(&sd, fan.dim()).map_err(|e| e.to_string())?;
        ensure(b == vec![1, 2, 1], || format!("a={a}: direct ranks {b:?}"))?;
        let d2 = direct_square(a, 1)?;
        let d4 = direct_square(a, 3)?;
        ensure(d2.abs() == a && d4.abs() == a, || format!("a={a}: direct {d2} {d4}"))?;
        entries.push(json!({
            "a": a,
            "bundle_order": order,
            "bundle_coefficient": plus,
            "direct_d2": d2,
            "direct_d4": d4,
        }));
    }
    let computed = Value::Array(entries);
    let path = golden_path();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, serde_json::to_string_pretty(&computed).expect("json") + "\n").map_err(|e| e.to_string())?;
    }
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let golden: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    ensure(golden == computed, || format!("differs from golden file: {computed}"))?;
    Ok("|coefficient| = a for a = 0..3, ranks (1,2,1), signs match the golden file".into())
}

fn algebra_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for name in catalog::names() {
        let (fan, sd) = shelled(name);
        for mode in [Mode::Additive, Mode::Multiplicative] {
            let red = Reducer::new(&fan, &sd, mode).map_err(|e| e.to_string())?;
            let t = ringops::mult_table(&red).map_err(|e| e.to_string())?;
            ensure(t.is_symmetric() && t.has_identity(), || format!("{name} {mode:?}: not symmetric"))?;
            let m = t.len();
            for _ in 0..ASSOCIATIVITY_TRIPLES {
                let (i, j, k) = (rng.gen_range(0..m), rng.gen_range(0..m), rng.gen_range(0..m));
                ensure(t.is_associative_on(i, j, k), || format!("{name} {mode:?}: ({i},{j},{k})"))?;
            }
        }
    }
    Ok(format!("tables symmetric, {ASSOCIATIVITY_TRIPLES} associative triples per fan and mode"))
}

fn shelling_orders() -> Outcome {
    let mut methods = Vec::new();
    for name in catalog::names() {
        let fan = catalog::fan(name).map_err(|e| e.to_string())?;
        let (sd, method) = shelling::find_shelling(&fan, &SearchOptions::default()).map_err(|e| format!("{name}: {e}"))?;
        ensure(sd.star_ok && sd.star_prime_ok, || format!("{name}: conditions fail"))?;
        if !catalog::is_projective(name) {
            methods.push(format!("{name} via {method:?}"));
        }
    }
    let fan = catalog::fan("p1xp1").map_err(|e| e.to_string())?;
    for both in [false, true] {
        let mut fast = shelling::enumerate_orders(&fan, both, u64::MAX).ok_or("enumeration hit its limit")?;
        let mut brute = shelling::brute_force_orders(&fan, both);
        fast.sort();
        brute.sort();
        ensure(fast == brute, || format!("incremental {} vs brute force {}", fast.len(), brute.len()))?;
    }
    let count = shelling::brute_force_orders(&fan, false).len();
    Ok(format!("all catalog fans shell with (*) and (*') ({}); P1xP1: incremental and brute-force enumeration agree ({count} of 24 orders satisfy (*))", methods.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("freeness and graded rank", freeness),
        ("reducer agrees with oracles", oracle_agreement),
        ("Betti numbers at r = 0", betti_numbers),
        ("K-theory of P^N at r = 1", k_theory_of_projective_space),
        ("duality pairing", duality),
        ("Hirzebruch cross-check", hirzebruch),
        ("symmetry and associativity", algebra_laws),
        ("shelling orders", shelling_orders),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        let slow = if secs > TIME_BUDGET_SECS { " (over time budget)" } else { "" };
        match outcome {
            Ok(detail) => println!("PASS [{}] {name}: {detail} [{secs:.2}s{slow}]", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name}: {why} [{secs:.2}s]", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
