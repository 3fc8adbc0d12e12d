mod common;

use matfact::poly::CoprimeSplit;
use matfact::{Mat, Poly};
use proptest::prelude::*;

fn random_monic(f: &matfact::Field, d: usize, r: &mut rand_chacha::ChaCha8Rng) -> Poly {
    let mut cs: Vec<_> = (0..d).map(|_| f.random(r, 4)).collect();
    cs.push(f.one());
    Poly::new(f, cs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn reciprocal_is_an_involution(fi in 0usize..7, d in 1usize..7, seed in any::<u64>()) {
        let f = common::field(fi);
        let mut r = common::rng(seed);
        let mut p = random_monic(&f, d, &mut r);
        if f.is_zero(&p.coeff(0)) {
            p = p.add(&Poly::one(&f));
        }
        prop_assume!(!f.is_zero(&p.coeff(0)));
        let (once, _) = p.reciprocal().unwrap();
        let (twice, _) = once.reciprocal().unwrap();
        prop_assert_eq!(twice, p.monic());
    }

    #[test]
    fn norm_is_multiplicative(fi in 0usize..7, a in 1usize..4, b in 1usize..4, seed in any::<u64>()) {
        let f = common::field(fi);
        let mut r = common::rng(seed);
        let ma = common::random_mat(&f, a, a, &mut r);
        let mb = common::random_mat(&f, b, b, &mut r);
        let sum = Mat::dsum2(&ma, &mb);
        let (na, nb) = (ma.charpoly().unwrap().norm(), mb.charpoly().unwrap().norm());
        prop_assert_eq!(sum.charpoly().unwrap().norm(), f.mul(&na, &nb));
        prop_assert_eq!(na, ma.det().unwrap());
        prop_assert_eq!(nb, mb.det().unwrap());
    }

    #[test]
    fn symmetrized_lift_evaluates(fi in 0usize..7, d in 1usize..5, seed in any::<u64>()) {
        let f = common::field(fi);
        let mut r = common::rng(seed);
        let p = random_monic(&f, d, &mut r);
        let dd = f.random_nonzero(&mut r, 4);
        let lift = p.symmetrized_lift(&dd).unwrap();
        prop_assert_eq!(lift.degree(), 2 * d);
        for _ in 0..50 {
            let x = f.random_nonzero(&mut r, 6);
            let inner = f.add(&x, &f.div(&dd, &x).unwrap());
            let want = f.mul(&f.pow(&x, d as i64), &p.eval(&inner));
            prop_assert_eq!(lift.eval(&x), want);
        }
    }

    #[test]
    fn avoid_roots_avoids(fi in 1usize..7, d in 2usize..6, seed in any::<u64>()) {
        let f = common::field(fi);
        let mut r = common::rng(seed);
        let norm = f.random_nonzero(&mut r, 4);
        let forbidden: Vec<_> = (0..3).map(|_| f.random(&mut r, 4)).collect();
        if let Ok(p) = Poly::avoid_roots(&f, d, &norm, &forbidden) {
            prop_assert!(p.is_monic() && p.degree() == d);
            prop_assert_eq!(p.norm(), norm);
            for x in &forbidden {
                prop_assert!(!f.is_zero(&p.eval(x)));
            }
        } else {
            // only possible when every unit is forbidden, i.e. tiny fields
            prop_assert!(f.size().is_some_and(|q| q <= 4));
        }
    }

    #[test]
    fn coprime_split_reconstructs(fi in 0usize..7, d in 1usize..7, seed in any::<u64>()) {
        let f = common::field(fi);
        let mut r = common::rng(seed);
        let base = random_monic(&f, d.div_ceil(2), &mut r);
        let p = base.mul(&random_monic(&f, d / 2 + 1, &mut r)).mul(&base);
        match p.coprime_split(seed) {
            CoprimeSplit::Factors(parts) => {
                let mut prod = Poly::one(&f);
                for (i, (g, e)) in parts.iter().enumerate() {
                    prod = prod.mul(&g.pow(*e));
                    for (h, _) in &parts[i + 1..] {
                        prop_assert_eq!(g.gcd(h).degree(), 0);
                    }
                }
                prop_assert_eq!(prod, p);
            }
            CoprimeSplit::Indeterminate => prop_assert!(!f.is_finite()),
        }
    }
}
