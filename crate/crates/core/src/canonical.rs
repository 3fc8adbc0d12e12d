//! Rational canonical form with explicit transforms, cyclic vectors and the
//! well-partitioned reductions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::Mat;
use crate::poly::{CoprimeSplit, Poly};

/// Invariant factors q_1 | q_2 | ... | q_s and P with P^{-1}·M·P = ⊕ C(q_i).
#[derive(Debug, Clone)]
pub struct Rcf {
    pub invariant_factors: Vec<Poly>,
    pub transform: Mat,
}

impl Rcf {
    pub fn form(&self, field: &Field) -> Mat {
        companion_sum(field, &self.invariant_factors)
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors.len() <= 1
    }

    pub fn to_json(&self) -> Value {
        json!({
            "invariant_factors": self.invariant_factors.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
            "transform": self.transform.to_json(),
        })
    }
}

/// ⊕ C(p_i) over the given polynomials (the empty sum is 0×0).
pub fn companion_sum(field: &Field, polys: &[Poly]) -> Mat {
    let blocks: Vec<Mat> = polys.iter().map(|p| Mat::companion(p).expect("monic")).collect();
    Mat::direct_sum(field, &blocks).expect("one field")
}

/// Splits lcm(x, y) = u·w with u | x, w | y and gcd(u, w) = 1.
fn coprime_lcm_split(x: &Poly, y: &Poly) -> (Poly, Poly) {
    let g = x.gcd(y);
    let y_excess = y.div_exact(&g);
    // part of y built from the primes where y has the larger exponent
    let mut rest = y.clone();
    loop {
        let h = rest.gcd(&y_excess);
        if h.degree() == 0 {
            break;
        }
        rest = rest.div_exact(&h);
    }
    let w = y.div_exact(&rest).monic();
    let u = x.lcm(y).div_exact(&w).monic();
    (u, w)
}

/// A vector whose minimal polynomial equals the minimal polynomial of `m`.
pub fn maximal_vector(m: &Mat) -> (Mat, Poly) {
    let f = m.field();
    let n = m.rows();
    let mut v = Mat::unit_vector(f, n, 0);
    let mut mu = m.vector_minpoly(&v);
    for i in 1..n {
        if mu.degree() == n {
            break;
        }
        let w = Mat::unit_vector(f, n, i);
        let nu = m.vector_minpoly(&w);
        if mu.divides(&nu) && nu.degree() <= mu.degree() {
            continue;
        }
        if nu.divides(&mu) {
            continue;
        }
        let (a, b) = coprime_lcm_split(&mu, &nu);
        let va = m.eval_poly(&mu.div_exact(&a)).mul(&v);
        let wb = m.eval_poly(&nu.div_exact(&b)).mul(&w);
        v = va.add(&wb);
        mu = a.mul(&b);
    }
    (v, mu)
}

/// Rational canonical form by cyclic-chain extraction: the largest invariant
/// factor is split off first and ends up last.
pub fn rcf(m: &Mat) -> Result<Rcf> {
    let r = rcf_chain(m)?;
    debug_assert!(check_rcf(m, &r));
    Ok(r)
}

fn rcf_chain(m: &Mat) -> Result<Rcf> {
    if !m.is_square() {
        return Err(Error::NotSquare);
    }
    let f = m.field().clone();
    let n = m.rows();
    if n == 0 {
        return Ok(Rcf { invariant_factors: vec![], transform: Mat::identity(&f, 0) });
    }
    let (v, mu) = maximal_vector(m);
    let d = mu.degree();
    let k = m.krylov(&v, d);
    if d == n {
        return Ok(Rcf { invariant_factors: vec![mu], transform: k });
    }
    // functional with f(M^i v) = δ_{i, d-1}; its Krylov annihilator is an
    // invariant complement of span K
    let kt = k.transpose();
    let ft = kt.solve(&Mat::unit_vector(&f, d, d - 1)).expect("Krylov basis has full rank");
    let mut rows = Vec::with_capacity(d);
    let mut cur = ft.transpose();
    for _ in 0..d {
        rows.push(cur.clone());
        cur = cur.mul(m);
    }
    let fmat = Mat::vstack(&f, &rows);
    let w = fmat.kernel();
    let restricted = w.solve(&m.mul(&w)).expect("complement is invariant");
    let inner = rcf_chain(&restricted)?;
    let mut factors = inner.invariant_factors;
    factors.push(mu);
    let transform = Mat::hstack(&f, &[w.mul(&inner.transform), k]);
    Ok(Rcf { invariant_factors: factors, transform })
}

/// Re-checks an RCF against its matrix: the conjugated matrix is the
/// companion sum and the factors form a divisibility chain.
pub fn check_rcf(m: &Mat, r: &Rcf) -> bool {
    let f = m.field();
    let chain = r.invariant_factors.windows(2).all(|w| w[0].divides(&w[1]));
    let Ok(inv) = r.transform.inverse() else { return false };
    chain && inv.mul(m).mul(&r.transform) == r.form(f)
}

/// Q with Q^{-1}·a·Q = b, or None when a and b are not similar.
pub fn similarity(a: &Mat, b: &Mat) -> Result<Option<Mat>> {
    let ra = rcf(a)?;
    let rb = rcf(b)?;
    if ra.invariant_factors != rb.invariant_factors {
        return Ok(None);
    }
    Ok(Some(ra.transform.mul(&rb.transform.inverse()?)))
}

pub fn are_similar(a: &Mat, b: &Mat) -> bool {
    match (rcf(a), rcf(b)) {
        (Ok(x), Ok(y)) => x.invariant_factors == y.invariant_factors,
        _ => false,
    }
}

pub fn is_cyclic(m: &Mat) -> bool {
    m.is_square() && maximal_vector(m).1.degree() == m.rows()
}

fn krylov_full(m: &Mat, v: &Mat) -> bool {
    m.krylov(v, m.rows()).rank() == m.rows()
}

/// A cyclic vector: standard basis vectors first, then sums of two of
/// them, then seeded random vectors. `None` when the matrix is not cyclic.
pub fn cyclic_vector(m: &Mat, seed: u64) -> Option<Mat> {
    if !is_cyclic(m) {
        return None;
    }
    let f = m.field();
    let n = m.rows();
    if n == 0 {
        return Some(Mat::zeros(f, 0, 1));
    }
    for i in 0..n {
        let v = Mat::unit_vector(f, n, i);
        if krylov_full(m, &v) {
            return Some(v);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let v = Mat::unit_vector(f, n, i).add(&Mat::unit_vector(f, n, j));
            if krylov_full(m, &v) {
                return Some(v);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v = Mat::column(f, (0..n).map(|_| f.random(&mut rng, 3)).collect());
        if krylov_full(m, &v) {
            return Some(v);
        }
    }
}

/// Basis (as columns) of the kernel of p(M).
pub fn poly_kernel(m: &Mat, p: &Poly) -> Mat {
    m.eval_poly(p).kernel()
}

/// Splits M along χ_M = g·h with g, h coprime: returns T and the two blocks
/// with T^{-1}·M·T = A ⊕ B, χ_A = g, χ_B = h.
pub fn coprime_block_split(m: &Mat, g: &Poly, h: &Poly) -> (Mat, Mat, Mat) {
    let f = m.field();
    let ka = poly_kernel(m, g);
    let kb = poly_kernel(m, h);
    let t = Mat::hstack(f, &[ka.clone(), kb.clone()]);
    let a = ka.solve(&m.mul(&ka)).expect("invariant subspace");
    let b = kb.solve(&m.mul(&kb)).expect("invariant subspace");
    (t, a, b)
}

/// Well-partitioned data: M = C(p_1) ⊕ ... ⊕ C(p_r) ⊕ C(q_1) ⊕ ... ⊕ C(q_s).
#[derive(Debug, Clone)]
pub struct WellPartition {
    pub p_list: Vec<Poly>,
    pub q_list: Vec<Poly>,
    /// T with T^{-1}·(input)·T equal to the companion sum.
    pub transform: Mat,
    pub very_well: bool,
}

impl WellPartition {
    pub fn matrix(&self, field: &Field) -> Mat {
        let all: Vec<Poly> = self.p_list.iter().chain(&self.q_list).cloned().collect();
        companion_sum(field, &all)
    }

    pub fn block_degrees(&self) -> (Vec<usize>, Vec<usize>) {
        (self.p_list.iter().map(|p| p.degree()).collect(), self.q_list.iter().map(|p| p.degree()).collect())
    }
}

/// The four defining conditions of a well-partitioned sum, plus whether it is
/// very-well-partitioned.
pub fn check_well_partitioned(p_list: &[Poly], q_list: &[Poly]) -> Option<bool> {
    if p_list.is_empty() || q_list.is_empty() {
        return None;
    }
    if p_list.iter().chain(q_list).any(|p| !p.is_monic() || p.degree() == 0) {
        return None;
    }
    if p_list.iter().skip(1).any(|p| p.degree() < 2) {
        return None;
    }
    if q_list[..q_list.len() - 1].iter().any(|q| q.degree() < 2) {
        return None;
    }
    for p in p_list {
        for q in q_list {
            if p.gcd(q).degree() > 0 {
                return None;
            }
        }
    }
    let deg1 = (p_list[0].degree() == 1) as usize + (q_list[q_list.len() - 1].degree() == 1) as usize;
    Some(deg1 <= 1)
}

fn eigenvalues_in_field(chi: &Poly) -> Vec<Scalar> {
    chi.roots()
}

/// Similarity to a well-partitioned matrix for M with at most one size-1
/// Jordan cell per eigenvalue and χ_M not an irreducible power.
pub fn well_partition(m: &Mat, seed: u64) -> Result<WellPartition> {
    if !m.is_square() {
        return Err(Error::NotSquare);
    }
    let f = m.field().clone();
    let chi = m.charpoly()?;
    let pieces = match chi.coprime_split(seed) {
        CoprimeSplit::Indeterminate => return Err(Error::Indeterminate),
        CoprimeSplit::Factors(v) => v,
    };
    if pieces.len() < 2 {
        return Err(Error::HypothesisFailed("characteristic polynomial is an irreducible power".into()));
    }
    for lam in eigenvalues_in_field(&chi) {
        let ones = m.jordan_cell_counts(&lam)?.iter().filter(|&&s| s == 1).count();
        if ones > 1 {
            return Err(Error::HypothesisFailed(format!("several size-1 cells at {}", f.show(&lam))));
        }
    }
    // the primary part seen by e_1 goes first, so block-diagonal inputs keep their order
    let first = m.vector_minpoly(&Mat::unit_vector(&f, m.rows(), 0));
    let (g0, e0) = pieces.iter().find(|(g, _)| first.gcd(g).degree() > 0).unwrap_or(&pieces[0]);
    let g = g0.pow(*e0);
    let h = chi.div_exact(&g);
    let (t, a, b) = coprime_block_split(m, &g, &h);
    let ra = rcf(&a)?;
    let rb = rcf(&b)?;
    let p_list = ra.invariant_factors.clone();
    let mut q_list = rb.invariant_factors.clone();
    q_list.reverse();
    // companion order: A's factors ascending, then B's descending
    let nb = rb.transform.cols();
    let rev_b = Mat::block_permutation(
        &f,
        &rb.invariant_factors.iter().map(|p| p.degree()).collect::<Vec<_>>(),
        &(0..rb.invariant_factors.len()).rev().collect::<Vec<_>>(),
    );
    let tb = rb.transform.mul(&rev_b);
    debug_assert_eq!(tb.cols(), nb);
    let transform = t.mul(&Mat::dsum2(&ra.transform, &tb));
    let very_well = check_well_partitioned(&p_list, &q_list)
        .ok_or_else(|| Error::VerificationFailed("well-partition conditions".into()))?;
    Ok(WellPartition { p_list, q_list, transform, very_well })
}

/// The shape of N in the reduction M ~ N ⊕ αI_q ⊕ βI_r.
#[derive(Debug, Clone)]
pub enum ReducedBlock {
    Void,
    /// N - βI nilpotent (and q = 0); N given as a companion sum.
    Unipotent(Vec<Poly>),
    /// N very-well-partitioned.
    VeryWell { p_list: Vec<Poly>, q_list: Vec<Poly> },
}

#[derive(Debug, Clone)]
pub struct VwpReduction {
    pub block: ReducedBlock,
    pub alpha: Scalar,
    pub q: usize,
    pub r: usize,
    /// T with T^{-1}·M·T = N ⊕ αI_q ⊕ βI_r.
    pub transform: Mat,
}

impl VwpReduction {
    pub fn n_matrix(&self, field: &Field) -> Mat {
        match &self.block {
            ReducedBlock::Void => Mat::zeros(field, 0, 0),
            ReducedBlock::Unipotent(ps) => companion_sum(field, ps),
            ReducedBlock::VeryWell { p_list, q_list } => {
                let all: Vec<Poly> = p_list.iter().chain(q_list).cloned().collect();
                companion_sum(field, &all)
            }
        }
    }

    pub fn reduced(&self, field: &Field, beta: &Scalar) -> Mat {
        Mat::dsum(&[
            self.n_matrix(field),
            Mat::scalar(field, self.q, &self.alpha),
            Mat::scalar(field, self.r, beta),
        ])
    }
}

/// M ~ N ⊕ αI_q ⊕ βI_r with r ≥ q, for invertible M having at least n/2
/// Jordan cells of size 1 at β.
pub fn vwp_reduce(m: &Mat, beta: &Scalar) -> Result<VwpReduction> {
    if !m.is_square() {
        return Err(Error::NotSquare);
    }
    let f = m.field().clone();
    let n = m.rows();
    if f.is_zero(beta) || !m.is_invertible() {
        return Err(Error::PreconditionViolated("invertible matrix and nonzero beta required".into()));
    }
    let ones = m.jordan_cell_counts(beta)?.iter().filter(|&&s| s == 1).count();
    if 2 * ones < n {
        return Err(Error::PreconditionViolated(format!("only {ones} size-1 cells at beta")));
    }
    let chi = m.charpoly()?;
    let lin = Poly::linear(&f, beta);
    let mut e = 0;
    let mut rest = chi.clone();
    while lin.divides(&rest) && rest.degree() > 0 {
        rest = rest.div_exact(&lin);
        e += 1;
    }
    let (t, a, b) = coprime_block_split(m, &lin.pow(e), &rest);
    let ra = rcf(&a)?;
    let rb = rcf(&b)?;
    let a_big: Vec<Poly> = ra.invariant_factors.iter().filter(|p| p.degree() >= 2).cloned().collect();
    let m_ones = ra.invariant_factors.len() - a_big.len();
    let b_big: Vec<Poly> = rb.invariant_factors.iter().filter(|p| p.degree() >= 2).cloned().collect();
    let b_lin: Vec<Poly> = rb.invariant_factors.iter().filter(|p| p.degree() == 1).cloned().collect();
    let q0 = b_lin.len();
    let alpha0 = b_lin.first().map(|p| f.neg(&p.coeff(0)));
    // companion blocks in the order they sit after the RCF transforms:
    // A: ones first (ascending chain), then the big ones; likewise for B.
    let sizes_a: Vec<usize> = ra.invariant_factors.iter().map(|p| p.degree()).collect();
    let sizes_b: Vec<usize> = rb.invariant_factors.iter().map(|p| p.degree()).collect();
    let base = t.mul(&Mat::dsum2(&ra.transform, &rb.transform));
    let na = sizes_a.len();
    // global block indices: A blocks 0..na, B blocks na..
    let a_ones: Vec<usize> = (0..m_ones).collect();
    let a_bigs: Vec<usize> = (m_ones..na).collect();
    let b_lins: Vec<usize> = (na..na + q0).collect();
    let b_bigs: Vec<usize> = (na + q0..na + sizes_b.len()).collect();
    let all_sizes: Vec<usize> = sizes_a.iter().chain(&sizes_b).copied().collect();
    let one = f.one();
    let (block, alpha, q, r, order) = if rest.degree() == 0 {
        // β is the only eigenvalue
        if a_big.is_empty() {
            (ReducedBlock::Void, one.clone(), 0, m_ones, a_ones.clone())
        } else {
            let order: Vec<usize> = a_bigs.iter().chain(&a_ones).copied().collect();
            (ReducedBlock::Unipotent(a_big.clone()), one.clone(), 0, m_ones, order)
        }
    } else {
        let alpha = alpha0.clone().unwrap_or_else(|| one.clone());
        match (a_big.is_empty(), b_big.is_empty()) {
            (false, false) => {
                let order: Vec<usize> =
                    a_bigs.iter().chain(&b_bigs).chain(&b_lins).chain(&a_ones).copied().collect();
                (ReducedBlock::VeryWell { p_list: a_big.clone(), q_list: b_big.clone() }, alpha, q0, m_ones, order)
            }
            (true, false) => {
                // one size-1 β-cell joins B' as the degree-1 head
                let mut order = vec![a_ones[0]];
                order.extend(b_bigs.iter().chain(&b_lins).chain(&a_ones[1..]));
                (
                    ReducedBlock::VeryWell { p_list: vec![lin.clone()], q_list: b_big.clone() },
                    alpha,
                    q0,
                    m_ones - 1,
                    order,
                )
            }
            (false, true) => {
                // one α-cell joins A' as the degree-1 tail
                let mut order: Vec<usize> = a_bigs.clone();
                order.extend(b_lins.iter().chain(&a_ones));
                let tail = Poly::linear(&f, &alpha);
                (
                    ReducedBlock::VeryWell { p_list: a_big.clone(), q_list: vec![tail] },
                    alpha,
                    q0 - 1,
                    m_ones,
                    order,
                )
            }
            (true, true) => {
                let order: Vec<usize> = b_lins.iter().chain(&a_ones).copied().collect();
                (ReducedBlock::Void, alpha, q0, m_ones, order)
            }
        }
    };
    let perm = Mat::block_permutation(&f, &all_sizes, &order);
    let transform = base.mul(&perm);
    let out = VwpReduction { block, alpha, q, r, transform };
    debug_assert!(out.r >= out.q);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rcf_examples() {
        let q = Field::rationals();
        let r = rcf(&Mat::from_i64(&q, &[&[1, 0], &[0, 2]])).unwrap();
        assert_eq!(r.invariant_factors, vec![Poly::from_i64s(&q, &[2, -3, 1])]);
        let r = rcf(&Mat::identity(&q, 2)).unwrap();
        assert_eq!(r.invariant_factors, vec![Poly::from_i64s(&q, &[-1, 1]); 2]);
        let m = Mat::dsum2(&Mat::jordan_cell(&q, &q.zero(), 2), &Mat::jordan_cell(&q, &q.zero(), 1));
        let r = rcf(&m).unwrap();
        assert_eq!(r.invariant_factors, vec![Poly::t(&q), Poly::monomial(&q, 2)]);
        assert!(check_rcf(&m, &r));
    }

    #[test]
    fn cyclic_vectors() {
        let q = Field::rationals();
        let c = Mat::companion(&Poly::from_i64s(&q, &[1, -3, 1])).unwrap();
        assert_eq!(cyclic_vector(&c, 0).unwrap(), Mat::unit_vector(&q, 2, 0));
        assert!(cyclic_vector(&Mat::identity(&q, 2), 0).is_none());
    }

    #[test]
    fn well_partition_examples() {
        let f = Field::prime(7).unwrap();
        let m = Mat::from_i64(&f, &[&[2, 0], &[0, 3]]);
        let wp = well_partition(&m, 0).unwrap();
        assert_eq!(wp.p_list, vec![Poly::linear(&f, &f.from_i64(2))]);
        assert_eq!(wp.q_list, vec![Poly::linear(&f, &f.from_i64(3))]);
        assert_eq!(m.conj(&wp.transform), wp.matrix(&f));
        assert!(matches!(well_partition(&Mat::identity(&f, 2), 0), Err(Error::HypothesisFailed(_))));
        let q = Field::rationals();
        let c = Mat::companion(&Poly::from_i64s(&q, &[1, 0, 1]).pow(2)).unwrap();
        assert!(matches!(well_partition(&c, 0), Err(Error::HypothesisFailed(_))));
    }

    #[test]
    fn vwp_examples() {
        let q = Field::rationals();
        let one = q.one();
        let red = vwp_reduce(&Mat::identity(&q, 4), &one).unwrap();
        assert!(matches!(red.block, ReducedBlock::Void));
        assert_eq!((red.q, red.r), (0, 4));
        let m = Mat::from_i64(&q, &[&[2, 0], &[0, 1]]);
        let red = vwp_reduce(&m, &one).unwrap();
        assert!(matches!(red.block, ReducedBlock::Void));
        assert_eq!((red.q, red.r, red.alpha.clone()), (1, 1, q.from_i64(2)));
        let m = Mat::dsum2(&Mat::companion(&Poly::from_i64s(&q, &[1, -3, 1])).unwrap(), &Mat::identity(&q, 2));
        let red = vwp_reduce(&m, &one).unwrap();
        match &red.block {
            ReducedBlock::VeryWell { p_list, q_list } => {
                assert_eq!(p_list, &vec![Poly::linear(&q, &one)]);
                assert_eq!(q_list, &vec![Poly::from_i64s(&q, &[1, -3, 1])]);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!((red.q, red.r), (0, 1));
        assert_eq!(m.conj(&red.transform), red.reduced(&q, &one));
    }
}
