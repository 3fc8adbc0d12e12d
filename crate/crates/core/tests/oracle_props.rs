use std::collections::BTreeSet;

use matfact::adjacency::Mode;
use matfact::oracle::{
    class_reduction, decide, enumerate_gl, enumerate_quadratic, from_key, key, Annihilator, Key, OracleTable, Verdict,
};
use matfact::pipelines::parse_pattern;
use matfact::two_factor::{classify_two, TwoKind};
use matfact::{Field, Mat};

const I: Mode = Mode::Involution;
const U: Mode = Mode::Unipotent;

fn closed(table: &OracleTable, set: &BTreeSet<Key>, group: &[Mat]) -> bool {
    let (f, n) = (table.field(), table.n());
    set.iter().all(|k| {
        let m = from_key(f, n, k);
        set.contains(&key(&m.transpose())) && group.iter().all(|g| set.contains(&key(&m.conj(g))))
    })
}

#[test]
fn sets_are_closed_under_conjugation_and_transpose() {
    for (p, n) in [(2, 2), (3, 2), (5, 2), (2, 3)] {
        let f = Field::prime(p).unwrap();
        let table = OracleTable::new(&f, n).unwrap();
        let group = enumerate_gl(n, &f).unwrap();
        for kinds in [vec![I], vec![U], vec![I, I], vec![U, U], vec![I, U], vec![I, I, U]] {
            let set = table.product_set(&kinds);
            assert!(closed(&table, &set, &group), "GF({p}) n={n} {kinds:?}");
        }
    }
}

#[test]
fn enumeration_is_deterministic() {
    let f = Field::prime(3).unwrap();
    let a: Vec<Key> = enumerate_quadratic(2, &f, Annihilator::Involution).unwrap().iter().map(key).collect();
    let b: Vec<Key> = enumerate_quadratic(2, &f, Annihilator::Involution).unwrap().iter().map(key).collect();
    assert_eq!(a, b);
    let f2 = Field::prime(2).unwrap();
    assert_eq!(enumerate_quadratic(2, &f2, Annihilator::Involution).unwrap().len(), 4);
    assert_eq!(enumerate_gl(2, &f2).unwrap().len(), 6);
}

#[test]
fn two_factor_classification_is_exact() {
    for (p, n) in [(2, 2), (3, 2), (5, 2), (2, 3)] {
        let f = Field::prime(p).unwrap();
        let table = OracleTable::new(&f, n).unwrap();
        for m in enumerate_gl(n, &f).unwrap() {
            assert_eq!(classify_two(&m, TwoKind::II).holds, table.contains(&m, &[I, I]).unwrap());
            assert_eq!(classify_two(&m, TwoKind::UU).holds, table.contains(&m, &[U, U]).unwrap());
        }
    }
}

#[test]
fn identity_is_in_every_pattern() {
    let f = Field::prime(3).unwrap();
    let table = OracleTable::new(&f, 2).unwrap();
    let id = Mat::identity(&f, 2);
    for p in ["III", "IIU", "IUU", "UUU", "IIII", "IUIU", "UUUU"] {
        assert!(table.contains(&id, &parse_pattern(p).unwrap()).unwrap());
    }
    assert_eq!(table.length(&id, I, 4).unwrap(), Some(0));
}

#[test]
fn length_never_grows_under_augmentation() {
    for (p, n) in [(3, 1), (5, 1), (7, 1), (2, 2), (3, 2)] {
        let f = Field::prime(p).unwrap();
        let small = OracleTable::new(&f, n).unwrap();
        let big = OracleTable::new(&f, n + 1).unwrap();
        for mode in [I, U] {
            let before_all = small.lengths(mode, 8);
            let after_all = big.lengths(mode, 8);
            for a in enumerate_gl(n, &f).unwrap() {
                let up = Mat::dsum2(&a, &Mat::identity(&f, 1));
                let before = before_all.get(&key(&a)).copied();
                assert_eq!(before, small.length(&a, mode, 8).unwrap());
                let after = after_all.get(&key(&up)).copied();
                match (before, after) {
                    (Some(b), Some(c)) => assert!(c <= b, "GF({p}) {:?}", a.to_json()),
                    (Some(_), None) => panic!("augmentation lost membership"),
                    _ => {}
                }
            }
        }
    }
}

#[test]
fn class_reduction_matches_enumeration_on_scalars() {
    for (p, n) in [(3, 2), (5, 2), (7, 2), (3, 3), (2, 3)] {
        let f = Field::prime(p).unwrap();
        let table = OracleTable::new(&f, n).unwrap();
        for a in f.elements().into_iter().filter(|a| !f.is_zero(a)) {
            let m = Mat::scalar(&f, n, &a);
            for pat in ["III", "IIU", "IUI", "IUU", "UUU", "II", "UU", "I", "U"] {
                let kinds: Vec<Mode> = pat.chars().map(|c| Mode::from_letter(c).unwrap()).collect();
                let truth = table.contains(&m, &kinds).unwrap();
                let want = if truth { Verdict::Member } else { Verdict::NonMember };
                assert_eq!(class_reduction(&m, &kinds), want, "GF({p}) n={n} {a:?} {pat}");
            }
        }
    }
}

#[test]
fn reduction_above_budget_is_honest() {
    let f = Field::prime(7).unwrap();
    let two = Mat::scalar(&f, 3, &f.from_i64(2));
    assert_eq!(decide(&two, &[I, I, I], None).unwrap().verdict, Verdict::NonMember);
    // scalar length-3 queries always repeat a kind, so the reduction decides them
    for kinds in [[U, U, U], [I, I, U], [I, U, U]] {
        assert_ne!(decide(&two, &kinds, None).unwrap().verdict, Verdict::Unknown);
    }
    let nonscalar = Mat::dsum2(&Mat::scalar(&f, 2, &f.from_i64(2)), &Mat::identity(&f, 1));
    assert_eq!(decide(&nonscalar, &[I, I, I], None).unwrap().verdict, Verdict::Unknown);
}
