//! Random inputs shared by the integration tests and the `selftest` command.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::field::{Field, Scalar};
use crate::matrix::Mat;
use crate::poly::Poly;

/// Bound on entries of generated rational matrices.
pub const RATIONAL_BOUND: i64 = 3;

fn random_part<R: Rng>(f: &Field, size: usize, rng: &mut R) -> Mat {
    let unit = |rng: &mut R| {
        if f.is_finite() {
            f.random_nonzero(rng, 1)
        } else if rng.gen_bool(0.5) {
            f.one()
        } else {
            f.from_i64(-1)
        }
    };
    match rng.gen_range(0..4) {
        0 => Mat::scalar(f, size, &unit(rng)),
        1 => Mat::jordan_cell(f, &unit(rng), size),
        _ => {
            let mut cs: Vec<Scalar> = (0..size).map(|_| f.random(rng, 2)).collect();
            cs[0] = unit(rng);
            cs.push(f.one());
            Mat::companion(&Poly::new(f, cs)).expect("monic")
        }
    }
}

/// Adds c times column j to column i and the inverse row move, keeping the
/// similarity class; rational entries stay within the bound.
fn shuffle<R: Rng>(m: &mut Mat, rounds: usize, rng: &mut R) {
    let f = m.field().clone();
    let n = m.rows();
    if n < 2 {
        return;
    }
    for _ in 0..rounds {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = if f.is_finite() { f.random_nonzero(rng, 1) } else { f.from_i64(if rng.gen_bool(0.5) { 1 } else { -1 }) };
        // E = I + c·e_j e_iᵀ acting as E·M·E^{-1}
        let mut e = Mat::identity(&f, n);
        e.set(j, i, c.clone());
        let mut ei = Mat::identity(&f, n);
        ei.set(j, i, f.neg(&c));
        let next = e.mul(m).mul(&ei);
        if !f.is_finite() && !within_bound(&next) {
            continue;
        }
        *m = next;
    }
}

fn within_bound(m: &Mat) -> bool {
    let f = m.field();
    m.entries().iter().all(|x| {
        (-RATIONAL_BOUND..=RATIONAL_BOUND).any(|k| *x == f.from_i64(k))
    })
}

/// A random n×n matrix of determinant ±1 (exactly `det` when given). Half of
/// the draws are block-structured with repeated eigenvalues and Jordan cells,
/// then disguised by random similarities.
pub fn random_unit_det<R: Rng>(f: &Field, n: usize, det: Option<&Scalar>, rng: &mut R) -> Mat {
    let one = f.one();
    let m1 = f.from_i64(-1);
    loop {
        let want = det.cloned().unwrap_or_else(|| if rng.gen_bool(0.5) { one.clone() } else { m1.clone() });
        let mut m = if f.is_finite() && rng.gen_bool(0.5) {
            let mut m = crate::two_factor::random_invertible(f, n, rng);
            let d = m.det().expect("square");
            let c = f.div(&want, &d).expect("invertible");
            for j in 0..n {
                let v = f.mul(m.at(0, j), &c);
                m.set(0, j, v);
            }
            m
        } else {
            let mut sizes = vec![];
            let mut left = n;
            while left > 0 {
                let s = rng.gen_range(1..=left.min(3));
                sizes.push(s);
                left -= s;
            }
            sizes.shuffle(rng);
            let parts: Vec<Mat> = sizes.iter().map(|&s| random_part(f, s, rng)).collect();
            let mut m = Mat::dsum(&parts);
            if m.det().ok() != Some(want.clone()) {
                if !f.is_finite() {
                    continue;
                }
                let d = m.det().expect("square");
                let c = f.div(&want, &d).expect("invertible");
                for j in 0..n {
                    let v = f.mul(m.at(0, j), &c);
                    m.set(0, j, v);
                }
            }
            shuffle(&mut m, 3 * n, rng);
            m
        };
        if !f.is_finite() && !within_bound(&m) {
            continue;
        }
        if m.det().ok() == Some(want.clone()) {
            if f.is_finite() {
                shuffle(&mut m, n, rng);
            }
            return m;
        }
    }
}

/// A ⊕ αI_q-shaped inputs: one or two companion blocks next to a scalar
/// block, determinant ±1 (or `det`), disguised by a random similarity. These
/// reach the branches of the augmented theorems that depend on the order of α.
pub fn random_scalar_heavy<R: Rng>(f: &Field, q: usize, det: Option<&Scalar>, rng: &mut R) -> Mat {
    loop {
        let alpha = if f.is_finite() { f.random_nonzero(rng, 1) } else { f.from_i64(*[2, -2, 3].choose(rng).unwrap()) };
        let blocks = rng.gen_range(1..=2);
        let mut parts = vec![];
        for _ in 0..blocks {
            let d = rng.gen_range(1..=3);
            let mut cs: Vec<Scalar> = (0..d).map(|_| f.random(rng, 2)).collect();
            cs[0] = f.random_nonzero(rng, 2);
            cs.push(f.one());
            parts.push(Mat::companion(&Poly::new(f, cs)).expect("monic"));
        }
        parts.push(Mat::scalar(f, q, &alpha));
        let mut m = Mat::dsum(&parts);
        let d = m.det().expect("square");
        let want = det.cloned().unwrap_or_else(|| if rng.gen_bool(0.5) { f.one() } else { f.from_i64(-1) });
        // rescale the first companion's constant term
        let c = match f.div(&want, &d) {
            Ok(c) => c,
            Err(_) => continue,
        };
        let k = parts[0].rows();
        let v = f.mul(m.at(0, k - 1), &c);
        m.set(0, k - 1, v);
        if m.det().ok() != Some(want) {
            continue;
        }
        let n = m.rows();
        shuffle(&mut m, 2 * n, rng);
        return m;
    }
}
