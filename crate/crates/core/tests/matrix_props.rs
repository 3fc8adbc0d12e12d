mod common;

use matfact::two_factor::random_invertible;
use matfact::{Error, Mat};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn det_is_norm_of_charpoly(fi in 0usize..7, n in 1usize..6, seed in any::<u64>()) {
        let f = common::field(fi);
        let m = common::random_mat(&f, n, n, &mut common::rng(seed));
        prop_assert_eq!(m.det().unwrap(), m.charpoly().unwrap().norm());
    }

    #[test]
    fn charpoly_is_a_similarity_invariant(fi in 0usize..7, n in 1usize..6, seed in any::<u64>()) {
        let f = common::field(fi);
        let mut r = common::rng(seed);
        let m = common::random_mat(&f, n, n, &mut r);
        let p = random_invertible(&f, n, &mut r);
        prop_assert_eq!(m.conj(&p).charpoly().unwrap(), m.charpoly().unwrap());
        if !f.is_finite() {
            prop_assert_eq!(m.charpoly_berkowitz(), m.charpoly_hessenberg());
        }
    }

    #[test]
    fn jordan_cells_fill_the_generalized_eigenspace(fi in 0usize..7, seed in any::<u64>()) {
        let f = common::field(fi);
        let mut r = common::rng(seed);
        let beta = f.random_nonzero(&mut r, 2);
        // a few cells at β next to a random block, disguised
        let mut blocks = vec![];
        for _ in 0..2 {
            let d = rand::Rng::gen_range(&mut r, 1..=3);
            blocks.push(Mat::jordan_cell(&f, &beta, d));
        }
        blocks.push(common::random_mat(&f, 2, 2, &mut r));
        let m = Mat::dsum(&blocks);
        let n = m.rows();
        let m = m.conj(&random_invertible(&f, n, &mut r));
        let cells = m.jordan_cell_counts(&beta).unwrap();
        let shifted = m.add_scalar(&f.neg(&beta)).pow(n);
        prop_assert_eq!(cells.iter().sum::<usize>(), n - shifted.rank());
    }

    #[test]
    fn sylvester_solution_satisfies(fi in 0usize..7, a in 1usize..4, b in 1usize..4, seed in any::<u64>()) {
        let f = common::field(fi);
        let mut r = common::rng(seed);
        let ma = common::random_mat(&f, a, a, &mut r);
        let mb = common::random_mat(&f, b, b, &mut r);
        let c = common::random_mat(&f, a, b, &mut r);
        match Mat::sylvester_solve(&ma, &mb, &c) {
            Ok(x) => prop_assert_eq!(ma.mul(&x).sub(&x.mul(&mb)), c),
            Err(e) => prop_assert_eq!(e, Error::NoSolution),
        }
    }

    #[test]
    fn inverse_and_solve(fi in 0usize..7, n in 1usize..6, seed in any::<u64>()) {
        let f = common::field(fi);
        let mut r = common::rng(seed);
        let m = random_invertible(&f, n, &mut r);
        prop_assert!(m.mul(&m.inverse().unwrap()).is_identity());
        let b = common::random_mat(&f, n, 1, &mut r);
        prop_assert_eq!(m.mul(&m.solve(&b).unwrap()), b);
        prop_assert_eq!(m.rank() + m.kernel().cols(), n);
    }
}
