mod common;

use matfact::{Field, Order};
use proptest::prelude::*;

#[test]
fn axioms_exhaustive_small() {
    for p in [2, 3] {
        let f = Field::prime(p).unwrap();
        let els = f.elements();
        for a in &els {
            for b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in &els {
                    assert_eq!(f.add(&f.add(a, b), c), f.add(a, &f.add(b, c)));
                    assert_eq!(f.mul(&f.mul(a, b), c), f.mul(a, &f.mul(b, c)));
                    assert_eq!(f.mul(a, &f.add(b, c)), f.add(&f.mul(a, b), &f.mul(a, c)));
                }
            }
            assert!(f.is_zero(&f.add(a, &f.neg(a))));
            if !f.is_zero(a) {
                assert!(f.is_one(&f.mul(a, &f.inv(a).unwrap())));
            }
        }
    }
}

#[test]
fn render_parse_every_element() {
    for f in common::fields().into_iter().filter(|f| f.is_finite()) {
        for a in f.elements() {
            assert_eq!(f.parse(&f.render(&a)).unwrap(), a);
        }
    }
}

#[test]
fn rational_orders() {
    let q = Field::rationals();
    assert_eq!(q.elt_order(&q.from_i64(-1)).unwrap(), Order::Finite(2));
    assert_eq!(q.elt_order(&q.from_i64(2)).unwrap(), Order::Infinite);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn order_is_exact(fi in 0usize..6, seed in any::<u64>()) {
        let f = common::field(fi);
        let mut r = common::rng(seed);
        let a = f.random_nonzero(&mut r, 3);
        let Order::Finite(m) = f.elt_order(&a).unwrap() else { panic!("finite field") };
        prop_assert!(f.is_one(&f.pow_u(&a, m as u128)));
        for k in 1..m {
            prop_assert!(!f.is_one(&f.pow_u(&a, k as u128)));
        }
    }

    #[test]
    fn field_axioms_random(fi in 0usize..7, seed in any::<u64>()) {
        let f = common::field(fi);
        let mut r = common::rng(seed);
        let (a, b, c) = (f.random(&mut r, 9), f.random(&mut r, 9), f.random(&mut r, 9));
        prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        prop_assert_eq!(f.parse(&f.render(&a)).unwrap(), a.clone());
        if !f.is_zero(&b) {
            prop_assert_eq!(f.mul(&f.div(&a, &b).unwrap(), &b), a);
        }
    }
}
