mod common;

use matfact::canonical::{check_well_partitioned, companion_sum, cyclic_vector, rcf, vwp_reduce, well_partition};
use matfact::selftest::random_unit_det;
use matfact::two_factor::random_invertible;
use matfact::Mat;
use proptest::prelude::*;

fn structured(f: &matfact::Field, n: usize, seed: u64) -> Mat {
    random_unit_det(f, n, None, &mut common::rng(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rcf_transform_and_chain(fi in 0usize..7, n in 1usize..7, seed in any::<u64>(), blocky in any::<bool>()) {
        let f = common::field(fi);
        let m = if blocky { structured(&f, n, seed) } else { common::random_mat(&f, n, n, &mut common::rng(seed)) };
        let r = rcf(&m).unwrap();
        let p = &r.transform;
        prop_assert_eq!(p.inverse().unwrap().mul(&m).mul(p), companion_sum(&f, &r.invariant_factors));
        for w in r.invariant_factors.windows(2) {
            prop_assert!(w[0].divides(&w[1]));
        }
        // invariant factors are a similarity invariant
        let q = random_invertible(&f, n, &mut common::rng(seed ^ 1));
        prop_assert_eq!(rcf(&m.conj(&q)).unwrap().invariant_factors, r.invariant_factors.clone());
        // cyclic vector exists exactly when the minimal polynomial has degree n
        let cyclic = m.minpoly().degree() == n;
        prop_assert_eq!(cyclic, r.invariant_factors.len() == 1);
        prop_assert_eq!(cyclic_vector(&m, seed).is_some(), cyclic);
        if let Some(v) = cyclic_vector(&m, seed) {
            prop_assert_eq!(m.krylov(&v, n).rank(), n);
        }
    }

    #[test]
    fn vwp_reduction_conjugates(fi in 0usize..7, n in 1usize..7, seed in any::<u64>()) {
        let f = common::field(fi);
        let mut r = common::rng(seed);
        // N ⊕ I_k with k ≥ n, disguised: at least half the cells are 1-cells at 1
        let a = random_unit_det(&f, n, None, &mut r);
        let one = f.one();
        let m = Mat::dsum2(&a, &Mat::identity(&f, n));
        let q = random_invertible(&f, 2 * n, &mut r);
        let m = m.conj(&q);
        let red = vwp_reduce(&m, &one).unwrap();
        prop_assert!(red.r >= red.q);
        prop_assert_eq!(m.conj(&red.transform), red.reduced(&f, &one));
        if let matfact::canonical::ReducedBlock::VeryWell { p_list, q_list } = &red.block {
            prop_assert_eq!(check_well_partitioned(p_list, q_list), Some(true));
        }
    }

    #[test]
    fn well_partition_conditions(fi in 0usize..7, n in 2usize..7, seed in any::<u64>()) {
        let f = common::field(fi);
        let m = structured(&f, n, seed);
        if let Ok(wp) = well_partition(&m, seed) {
            prop_assert!(check_well_partitioned(&wp.p_list, &wp.q_list).is_some());
            prop_assert_eq!(m.conj(&wp.transform), wp.matrix(&f));
        }
    }
}
