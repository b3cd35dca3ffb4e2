use num_bigint::BigInt;
use proptest::prelude::*;
use toric_bundle::catalog;
use toric_bundle::lattice::{self, LatticeVector};
use toric_bundle::shelling::{self, ShellingData};
use toric_bundle::Fan;

fn det3(m: &[[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn relabeled(fan: &Fan, ray_perm: &[usize], cone_perm: &[usize]) -> Fan {
    let mut rays = vec![vec![]; fan.num_rays()];
    for (old, &new) in ray_perm.iter().enumerate() {
        rays[new] = fan.ray(old).coords().iter().map(|x| i64::try_from(x).unwrap()).collect::<Vec<_>>();
    }
    let cones: Vec<Vec<usize>> =
        cone_perm.iter().map(|&c| fan.max_cones()[c].rays().iter().map(|&j| ray_perm[j] + 1).collect()).collect();
    Fan::from_one_based(fan.dim(), &rays, &cones).unwrap()
}

fn catalog_fan() -> impl Strategy<Value = Fan> {
    let names: Vec<&'static str> = catalog::names().collect();
    prop::sample::select(names).prop_map(|n| catalog::fan(n).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn unimodularity_matches_determinant(m in prop::array::uniform3(prop::array::uniform3(-3i64..4))) {
        let vs: Vec<LatticeVector> = m.iter().map(|r| LatticeVector::from_i64s(r)).collect();
        prop_assert_eq!(lattice::is_unimodular(&vs).unwrap(), det3(&m).abs() == 1);
        if det3(&m).abs() == 1 {
            let duals = lattice::dual_basis(&vs).unwrap();
            for (i, u) in duals.iter().enumerate() {
                for (j, v) in vs.iter().enumerate() {
                    prop_assert_eq!(lattice::pairing(u, v).unwrap(), BigInt::from((i == j) as i64));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn validation_ignores_labels(fan in catalog_fan(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut rp: Vec<usize> = (0..fan.num_rays()).collect();
        let mut cp: Vec<usize> = (0..fan.num_max_cones()).collect();
        rp.shuffle(&mut rng);
        cp.shuffle(&mut rng);
        let other = relabeled(&fan, &rp, &cp);
        prop_assert!(other.validate().is_valid());
        prop_assert_eq!(other.minimal_nonfaces().len(), fan.minimal_nonfaces().len());
        // dropping a cone always breaks completeness
        let cones: Vec<Vec<usize>> = other.max_cones()[1..].iter().map(|c| c.one_based()).collect();
        let rays: Vec<Vec<i64>> = other.rays().iter().map(|v| v.coords().iter().map(|x| i64::try_from(x).unwrap()).collect()).collect();
        let partial = Fan::from_one_based(other.dim(), &rays, &cones).unwrap();
        prop_assert!(!partial.validate().complete);
    }

    #[test]
    fn found_orders_pass_reverification(fan in catalog_fan(), seed in any::<u64>(), both in any::<bool>()) {
        let opts = shelling::SearchOptions { require_star_prime: both, seed, ..Default::default() };
        let (sd, _) = shelling::find_shelling(&fan, &opts).unwrap();
        let again = ShellingData::new(&fan, &sd.order).unwrap();
        prop_assert!(again.star_ok && (!both || again.star_prime_ok));
    }
}

#[test]
fn star_prime_is_star_of_reversed_order_exhaustively() {
    for name in catalog::names() {
        let fan = catalog::fan(name).unwrap();
        if fan.num_max_cones() > 8 {
            continue;
        }
        let star: Vec<Vec<usize>> = shelling::brute_force_orders(&fan, false);
        let mut all = Vec::new();
        let m = fan.num_max_cones();
        let mut perm: Vec<usize> = (0..m).collect();
        heap_permutations(&mut perm, m, &mut all);
        for order in all {
            let sd = ShellingData::new(&fan, &order).unwrap();
            let rev: Vec<usize> = order.iter().rev().copied().collect();
            let rsd = ShellingData::new(&fan, &rev).unwrap();
            assert_eq!(sd.star_ok, rsd.star_prime_ok, "{name} {order:?}");
            assert_eq!(sd.star_ok, star.contains(&order));
        }
    }
}

fn heap_permutations(a: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..k {
        heap_permutations(a, k - 1, out);
        let j = if k.is_multiple_of(2) { i } else { 0 };
        a.swap(j, k - 1);
    }
}
