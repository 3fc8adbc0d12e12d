mod common;

use matfact::adjacency::Mode;
use matfact::oracle::{enumerate_gl, OracleTable};
use matfact::two_factor::{
    build_two_involutions, classify_two, mixed_feasible, mixed_pair, random_invertible, two_unipotents, Orientation,
    TwoFactorResult, TwoKind,
};
use matfact::{Field, Mat};
use proptest::prelude::*;
use rand::Rng;

fn random_involution(f: &Field, n: usize, r: &mut rand_chacha::ChaCha8Rng) -> Mat {
    let a = r.gen_range(0..=n);
    let d = Mat::dsum2(&Mat::identity(f, a), &Mat::scalar(f, n - a, &f.from_i64(-1)));
    d.conj(&random_invertible(f, n, r))
}

fn random_u2(f: &Field, n: usize, r: &mut rand_chacha::ChaCha8Rng) -> Mat {
    let j = r.gen_range(0..=n / 2);
    let mut parts = vec![Mat::identity(f, n - 2 * j)];
    parts.extend((0..j).map(|_| Mat::jordan_cell(f, &f.one(), 2)));
    Mat::dsum(&parts).conj(&random_invertible(f, n, r))
}

fn check(res: &TwoFactorResult, m: &Mat) -> Result<(), TestCaseError> {
    res.verify().map_err(|e| TestCaseError::fail(format!("{e:?}")))?;
    prop_assert_eq!(&res.f1.mul(&res.f2), m);
    prop_assert!(res.ann1.annihilates(&res.f1) && res.ann2.annihilates(&res.f2));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn involution_products_refactor(fi in 0usize..7, n in 1usize..7, seed in any::<u64>()) {
        let f = common::field(fi);
        let mut r = common::rng(seed);
        let m = random_involution(&f, n, &mut r).mul(&random_involution(&f, n, &mut r));
        prop_assert!(classify_two(&m, TwoKind::II).holds);
        check(&build_two_involutions(&m).unwrap(), &m)?;
    }

    #[test]
    fn unipotent_products_refactor(fi in 0usize..7, n in 1usize..7, seed in any::<u64>()) {
        let f = common::field(fi);
        let mut r = common::rng(seed);
        let m = random_u2(&f, n, &mut r).mul(&random_u2(&f, n, &mut r));
        prop_assert!(classify_two(&m, TwoKind::UU).holds);
        prop_assert!(classify_two(&m, TwoKind::II).holds);
        check(&two_unipotents(&m, seed).unwrap(), &m)?;
    }

    #[test]
    fn mixed_pairs_when_feasible(fi in 0usize..7, n in 1usize..6, seed in any::<u64>()) {
        let f = common::field(fi);
        let mut r = common::rng(seed);
        let m = random_involution(&f, n, &mut r).mul(&random_u2(&f, n, &mut r));
        if mixed_feasible(&m) {
            for o in [Orientation::SU, Orientation::US] {
                let res = mixed_pair(&m, o, seed).unwrap();
                check(&res, &m)?;
                let kinds = (res.ann1.mode(&f), res.ann2.mode(&f));
                if f.characteristic() != 2 {
                    let want = match o {
                        Orientation::SU => (Some(Mode::Involution), Some(Mode::Unipotent)),
                        Orientation::US => (Some(Mode::Unipotent), Some(Mode::Involution)),
                    };
                    prop_assert_eq!(kinds, want);
                }
            }
        }
    }
}

#[test]
fn uu_implies_ii_on_gl2_f3() {
    let f = Field::prime(3).unwrap();
    for m in enumerate_gl(2, &f).unwrap() {
        if classify_two(&m, TwoKind::UU).holds {
            assert!(classify_two(&m, TwoKind::II).holds, "{:?}", m.to_json());
        }
    }
}

#[test]
fn mixed_feasibility_is_sound() {
    for (p, n) in [(3, 2), (5, 2), (2, 3)] {
        let f = Field::prime(p).unwrap();
        let table = OracleTable::new(&f, n).unwrap();
        let iu = [Mode::Involution, Mode::Unipotent];
        for m in enumerate_gl(n, &f).unwrap() {
            if mixed_feasible(&m) {
                assert!(table.contains(&m, &iu).unwrap(), "GF({p}) {:?}", m.to_json());
            }
        }
    }
}
