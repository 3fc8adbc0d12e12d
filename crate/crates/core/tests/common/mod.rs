#![allow(dead_code)]

use matfact::{Field, Mat};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// GF(2), GF(3), GF(5), GF(7), GF(9) = F3[t]/(t²+1), GF(8) = F2[t]/(t³+t+1), Q.
pub fn fields() -> Vec<Field> {
    vec![
        Field::prime(2).unwrap(),
        Field::prime(3).unwrap(),
        Field::prime(5).unwrap(),
        Field::prime(7).unwrap(),
        Field::extension(3, vec![1, 0, 1]).unwrap(),
        Field::extension(2, vec![1, 1, 0, 1]).unwrap(),
        Field::rationals(),
    ]
}

pub fn field(i: usize) -> Field {
    let fs = fields();
    fs[i % fs.len()].clone()
}

pub fn random_mat(f: &Field, rows: usize, cols: usize, r: &mut ChaCha8Rng) -> Mat {
    Mat::from_rows(f, (0..rows).map(|_| (0..cols).map(|_| f.random(r, 3)).collect()).collect())
}
