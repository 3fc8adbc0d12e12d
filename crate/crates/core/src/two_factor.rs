//! Products of two quadratic matrices: the classification of products of two
//! involutions or two U₂-matrices, and explicit constructions for those and
//! for the mixed involution-times-U₂ families used downstream.
//!
//! Every construction works one invariant factor at a time on the rational
//! canonical form and is verified before it is returned.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adjacency::{companion_basis, Mode, QuadAnnihilator};
use crate::canonical::{is_cyclic, rcf};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::Mat;
use crate::poly::Poly;

const ATTEMPTS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoKind {
    II,
    UU,
}

/// Verdict of [`classify_two`] with a short human-readable reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub holds: bool,
    pub reason: String,
}

/// Jordan cells C_size(eigenvalue), optionally annotated with pairs of cell
/// indices whose eigenvalues multiply to a prescribed product.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSpec {
    pub cells: Vec<(Scalar, usize)>,
    pub pairing: Vec<(usize, usize, Scalar)>,
}

impl CellSpec {
    pub fn new(cells: Vec<(Scalar, usize)>) -> Self {
        CellSpec { cells, pairing: Vec::new() }
    }

    pub fn check_pairing(&self, field: &Field) -> bool {
        self.pairing.iter().all(|(i, j, prod)| match (self.cells.get(*i), self.cells.get(*j)) {
            (Some((a, da)), Some((b, db))) => da == db && field.mul(a, b) == *prod,
            _ => false,
        })
    }

    pub fn matrix(&self, field: &Field) -> Mat {
        Mat::dsum(&self.cells.iter().map(|(a, d)| Mat::jordan_cell(field, a, *d)).collect::<Vec<_>>())
    }
}

/// F1·F2 = M with both factors quadratic; `transform` is the RCF transform
/// of M (P^{-1}·M·P is the companion sum of its invariant factors).
#[derive(Debug, Clone)]
pub struct TwoFactorResult {
    pub f1: Mat,
    pub f2: Mat,
    pub ann1: QuadAnnihilator,
    pub ann2: QuadAnnihilator,
    pub m: Mat,
    pub transform: Mat,
}

impl TwoFactorResult {
    pub fn verify(&self) -> Result<()> {
        if self.f1.mul(&self.f2) != self.m {
            return Err(Error::VerificationFailed("two-factor product".into()));
        }
        if !self.ann1.annihilates(&self.f1) || !self.ann2.annihilates(&self.f2) {
            return Err(Error::VerificationFailed("two-factor annihilators".into()));
        }
        Ok(())
    }

    /// The same product with the factors in the other order:
    /// M = (F1·F2·F1^{-1})·F1.
    pub fn swapped(&self) -> Result<TwoFactorResult> {
        let g = self.f1.mul(&self.f2).mul(&self.f1.inverse()?);
        let r = TwoFactorResult {
            f1: g,
            f2: self.f1.clone(),
            ann1: self.ann2.clone(),
            ann2: self.ann1.clone(),
            m: self.m.clone(),
            transform: self.transform.clone(),
        };
        r.verify()?;
        Ok(r)
    }
}

fn minus_one(f: &Field) -> Scalar {
    f.from_i64(-1)
}

/// Multiplicity of (t - a) in p.
fn multiplicity(p: &Poly, a: &Scalar) -> usize {
    let lin = Poly::linear(p.field(), a);
    let mut k = 0;
    let mut cur = p.clone();
    while !cur.is_zero() && lin.divides(&cur) {
        cur = cur.div_exact(&lin);
        k += 1;
    }
    k
}

/// r with q = t^D·r(t + d/t) for deg q = 2D, if it exists.
pub fn desymmetrize(q: &Poly, d: &Scalar) -> Option<Poly> {
    let f = q.field();
    if q.degree() % 2 == 1 || !q.is_monic() {
        return None;
    }
    let big = q.degree() / 2;
    let base = Poly::new(f, vec![d.clone(), f.zero(), f.one()]);
    let mut rest = q.clone();
    let mut r = vec![f.zero(); big + 1];
    for j in (0..=big).rev() {
        let c = rest.coeff(big + j);
        if !f.is_zero(&c) {
            let term = Poly::monomial(f, big - j).mul(&base.pow(j)).scale(&c);
            rest = rest.sub(&term);
        }
        r[j] = c;
    }
    if rest.is_zero() {
        Some(Poly::new(f, r))
    } else {
        None
    }
}

fn self_reciprocal(q: &Poly) -> bool {
    q.degree() == 0 || q.is_self_reciprocal()
}

/// Theorem-level criterion for products of two involutions / two U₂-matrices.
pub fn classify_two(m: &Mat, kind: TwoKind) -> Classification {
    let no = |r: &str| Classification { holds: false, reason: r.to_string() };
    if !m.is_square() || !m.is_invertible() {
        return no("not invertible");
    }
    let Ok(r) = rcf(m) else { return no("canonical form failed") };
    if let Some(q) = r.invariant_factors.iter().find(|q| !self_reciprocal(q)) {
        return no(&format!("invariant factor {} is not self-reciprocal", q));
    }
    if kind == TwoKind::UU && m.field().characteristic() != 2 {
        let cells = m.jordan_cell_counts(&minus_one(m.field())).unwrap_or_default();
        if cells.iter().any(|c| c % 2 == 1) {
            return no("odd Jordan cell at -1");
        }
    }
    Classification { holds: true, reason: "similar to its inverse".into() }
}

/// σ with σ(M^j v) = M^{-j} v; σ and σ·M are involutions when χ_M is
/// self-reciprocal.
pub fn sigma_involution(m: &Mat, v: &Mat) -> Result<Mat> {
    let n = m.rows();
    let p = m.krylov(v, n);
    if p.rank() < n {
        return Err(Error::NotCyclic);
    }
    if !self_reciprocal(&m.charpoly()?) {
        return Err(Error::NotSelfReciprocal);
    }
    let q = m.inverse()?.krylov(v, n);
    let sigma = q.mul(&p.inverse()?);
    let sm = sigma.mul(m);
    if !sigma.mul(&sigma).is_identity() || !sm.mul(&sm).is_identity() {
        return Err(Error::VerificationFailed("σ is not an involution".into()));
    }
    Ok(sigma)
}

/// Pair (F1, F2) for one companion block C(q), conjugated so that the
/// product is exactly C(q).
type BlockPair = (Mat, Mat);

fn to_companion(f1: Mat, f2: Mat, q: &Poly) -> Result<BlockPair> {
    let prod = f1.mul(&f2);
    if prod.charpoly()? != *q {
        return Err(Error::VerificationFailed(format!("block product has the wrong polynomial for {}", q)));
    }
    let p = companion_basis(&prod).map_err(|_| Error::CyclicityFailed)?;
    let pi = p.inverse()?;
    Ok((pi.mul(&f1).mul(&p), pi.mul(&f2).mul(&p)))
}

fn involution_block(q: &Poly) -> Result<BlockPair> {
    let f = q.field();
    let c = Mat::companion(q)?;
    let s = sigma_involution(&c, &Mat::unit_vector(f, q.degree(), 0))?;
    let sc = s.mul(&c);
    Ok((s, sc))
}

/// U₁ = [[I, B], [0, I]], U₂ = [[I, 0], [C, I]].
fn schur_unipotents(b: &Mat, c: &Mat) -> (Mat, Mat) {
    let f = b.field();
    let (ap, bp) = (b.rows(), b.cols());
    let u1 = Mat::block2(&Mat::identity(f, ap), b, &Mat::zeros(f, bp, ap), &Mat::identity(f, bp));
    let u2 = Mat::block2(&Mat::identity(f, ap), &Mat::zeros(f, ap, bp), c, &Mat::identity(f, bp));
    (u1, u2)
}

fn random_vector(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Mat {
    Mat::column(f, (0..n).map(|_| f.random(rng, 3)).collect())
}

/// Two U₂-matrices whose product is C(q), for q palindromic, or q = (t-1)·q₀
/// with q₀ palindromic.
fn unipotent_block(q: &Poly, seed: u64) -> Result<BlockPair> {
    let f = q.field();
    let one = f.one();
    let n = q.degree();
    if n == 0 {
        let z = Mat::zeros(f, 0, 0);
        return Ok((z.clone(), z));
    }
    let lin = Poly::linear(f, &one);
    let (core, odd) = if n.is_multiple_of(2) && desymmetrize(q, &one).is_some() {
        (q.clone(), false)
    } else if lin.divides(q) {
        (q.div_exact(&lin), true)
    } else {
        return Err(Error::IneligibleCells);
    };
    let big = desymmetrize(&core, &one).ok_or(Error::IneligibleCells)?;
    let d = big.degree();
    let x = Mat::companion(&big.shift(&f.from_i64(2)))?;
    if !odd {
        let (u1, u2) = schur_unipotents(&Mat::identity(f, d), &x);
        return to_companion(u1, u2, q);
    }
    if d == 0 {
        return Ok((Mat::identity(f, 1), Mat::identity(f, 1)));
    }
    let b = Mat::vstack(f, &[Mat::identity(f, d), Mat::zeros(f, 1, d)]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..ATTEMPTS {
        let v = if attempt < d { Mat::unit_vector(f, d, attempt) } else { random_vector(f, d, &mut rng) };
        let c = Mat::hstack(f, &[x.clone(), v]);
        let (u1, u2) = schur_unipotents(&b, &c);
        if is_cyclic(&u1.mul(&u2)) {
            return to_companion(u1, u2, q);
        }
    }
    Err(Error::CyclicityFailed)
}

/// S·U with S = [[I, 0], [C, -I]], U = [[I, I], [0, I]]: χ = t^D·r(t - 1/t).
fn schur_mixed_core(r: &Poly) -> (Mat, Mat) {
    let f = r.field();
    let d = r.degree();
    let c = Mat::companion(r).expect("monic");
    let id = Mat::identity(f, d);
    let s = Mat::block2(&id, &Mat::zeros(f, d, d), &c, &id.neg());
    let u = Mat::block2(&id, &id, &Mat::zeros(f, d, d), &id);
    (s, u)
}

/// One step S ⊕ 1 / [[U, Y], [0, 1]] (or the mirrored 1 ⊕ S form) appending a
/// factor (t - 1) to a cyclic product S·U.
fn extend_by_one(s: &Mat, u: &Mat, rng: &mut ChaCha8Rng) -> Result<(Mat, Mat)> {
    let f = s.field();
    let n = s.rows();
    let one = Mat::identity(f, 1);
    if n == 0 {
        return Ok((one.clone(), one));
    }
    let um = u.add_scalar(&f.from_i64(-1));
    let right = um.kernel();
    let left = um.transpose().kernel();
    for attempt in 0..ATTEMPTS {
        let pick = |basis: &Mat, rng: &mut ChaCha8Rng| -> Mat {
            let k = basis.cols();
            if attempt < k {
                basis.col(attempt)
            } else {
                let coeffs = Mat::column(f, (0..k).map(|_| f.random(rng, 3)).collect());
                basis.mul(&coeffs)
            }
        };
        let y = pick(&right, rng);
        let s2 = Mat::dsum2(s, &one);
        let u2 = Mat::block2(u, &y, &Mat::zeros(f, 1, n), &one);
        if is_cyclic(&s2.mul(&u2)) {
            return Ok((s2, u2));
        }
        let z = pick(&left, rng).transpose();
        let s3 = Mat::dsum2(&one, s);
        let u3 = Mat::block2(&one, &z, &Mat::zeros(f, n, 1), u);
        if is_cyclic(&s3.mul(&u3)) {
            return Ok((s3, u3));
        }
    }
    Err(Error::CyclicityFailed)
}

/// Involution S and U₂-matrix U with S·U ~ C(q), for q whose roots pair up
/// under λ ↦ -1/λ up to an excess (t-1)^e or (t+1)^e with e ≤ 2.
fn mixed_block(q: &Poly, seed: u64) -> Result<BlockPair> {
    let f = q.field();
    let n = q.degree();
    if n == 0 {
        let z = Mat::zeros(f, 0, 0);
        return Ok((z.clone(), z));
    }
    let one = f.one();
    let m1 = minus_one(f);
    let e_plus = multiplicity(q, &one);
    let e_minus = multiplicity(q, &m1);
    let (work, negate, excess) = if e_plus >= e_minus {
        (q.clone(), false, e_plus - e_minus)
    } else {
        // (-1)^n q(-t) swaps the roles of 1 and -1
        let flip = Poly::new(f, vec![f.zero(), m1.clone()]);
        let w = q.compose(&flip);
        let w = if n % 2 == 1 { w.neg() } else { w };
        (w, true, e_minus - e_plus)
    };
    if excess > 2 {
        return Err(Error::IneligibleCells);
    }
    let core = work.div_exact(&Poly::linear_power(f, &one, excess));
    let r = desymmetrize(&core, &m1).ok_or(Error::IneligibleCells)?;
    let (mut s, mut u) = schur_mixed_core(&r);
    if r.degree() > 0 && !is_cyclic(&s.mul(&u)) {
        return Err(Error::CyclicityFailed);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..excess {
        (s, u) = extend_by_one(&s, &u, &mut rng)?;
    }
    if negate {
        s = s.neg();
    }
    to_companion(s, u, q)
}

fn assemble(m: &Mat, modes: (Mode, Mode), block: impl Fn(&Poly, u64) -> Result<BlockPair>, seed: u64) -> Result<TwoFactorResult> {
    let f = m.field().clone();
    let r = rcf(m)?;
    let mut f1s = Vec::new();
    let mut f2s = Vec::new();
    for (i, q) in r.invariant_factors.iter().enumerate() {
        let (a, b) = block(q, seed.wrapping_add(i as u64))?;
        f1s.push(a);
        f2s.push(b);
    }
    let p = &r.transform;
    let pi = p.inverse()?;
    let res = TwoFactorResult {
        f1: p.mul(&Mat::dsum(&f1s)).mul(&pi),
        f2: p.mul(&Mat::dsum(&f2s)).mul(&pi),
        ann1: modes.0.annihilator(&f),
        ann2: modes.1.annihilator(&f),
        m: m.clone(),
        transform: p.clone(),
    };
    res.verify()?;
    Ok(res)
}

/// M = S₁·S₂ with involutions, for M similar to its inverse.
pub fn build_two_involutions(m: &Mat) -> Result<TwoFactorResult> {
    if !classify_two(m, TwoKind::II).holds {
        return Err(Error::NotClassII);
    }
    if m.field().characteristic() == 2 {
        return two_unipotents(m, 0);
    }
    assemble(m, (Mode::Involution, Mode::Involution), |q, _| involution_block(q), 0)
}

/// M = U₁·U₂ with U₂-matrices, for M in the class of Theorem-level criterion.
pub fn two_unipotents(m: &Mat, seed: u64) -> Result<TwoFactorResult> {
    if !classify_two(m, TwoKind::UU).holds {
        return Err(Error::IneligibleCells);
    }
    assemble(m, (Mode::Unipotent, Mode::Unipotent), unipotent_block, seed)
}

/// Two U₂-matrices with product ⊕ cells.
pub fn build_two_unipotents(field: &Field, cells: &CellSpec, seed: u64) -> Result<TwoFactorResult> {
    if !cells.check_pairing(field) {
        return Err(Error::IneligibleCells);
    }
    two_unipotents(&cells.matrix(field), seed)
}

/// Whether every invariant factor fits the mixed construction.
pub fn mixed_feasible(m: &Mat) -> bool {
    let f = m.field();
    if f.characteristic() == 2 {
        return classify_two(m, TwoKind::UU).holds;
    }
    let Ok(r) = rcf(m) else { return false };
    let one = f.one();
    let m1 = minus_one(f);
    r.invariant_factors.iter().all(|q| {
        let (a, b) = (multiplicity(q, &one), multiplicity(q, &m1));
        let (work, excess) = if a >= b {
            (q.clone(), a - b)
        } else {
            let w = q.compose(&Poly::new(f, vec![f.zero(), m1.clone()]));
            (if q.degree() % 2 == 1 { w.neg() } else { w }, b - a)
        };
        excess <= 2 && desymmetrize(&work.div_exact(&Poly::linear_power(f, &one, excess)), &m1).is_some()
    })
}

/// Which side the involution stands on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    SU,
    US,
}

/// One involution and one U₂-matrix with product M.
pub fn mixed_pair(m: &Mat, orientation: Orientation, seed: u64) -> Result<TwoFactorResult> {
    let f = m.field();
    let res = if f.characteristic() == 2 {
        let mut r = two_unipotents(m, seed)?;
        r.ann1 = Mode::Involution.annihilator(f);
        r
    } else {
        if !mixed_feasible(m) {
            return Err(Error::IneligibleCells);
        }
        assemble(m, (Mode::Involution, Mode::Unipotent), mixed_block, seed)?
    };
    match orientation {
        Orientation::SU => Ok(res),
        Orientation::US => res.swapped(),
    }
}

/// Mixed pair with product ⊕ cells.
pub fn build_mixed_pair(field: &Field, cells: &CellSpec, orientation: Orientation, seed: u64) -> Result<TwoFactorResult> {
    if !cells.check_pairing(field) {
        return Err(Error::IneligibleCells);
    }
    mixed_pair(&cells.matrix(field), orientation, seed)
}

/// Whether M is a product of two factors of the given kinds, as far as the
/// constructions here reach (exact for II and UU).
pub fn two_feasible(m: &Mat, modes: (Mode, Mode)) -> bool {
    match modes {
        (Mode::Involution, Mode::Involution) => classify_two(m, TwoKind::II).holds,
        (Mode::Unipotent, Mode::Unipotent) => classify_two(m, TwoKind::UU).holds,
        _ => mixed_feasible(m),
    }
}

/// Dispatch to the constructions by kinds, in the requested order.
pub fn factor_two(m: &Mat, modes: (Mode, Mode), seed: u64) -> Result<TwoFactorResult> {
    match modes {
        (Mode::Involution, Mode::Involution) => build_two_involutions(m),
        (Mode::Unipotent, Mode::Unipotent) => two_unipotents(m, seed),
        (Mode::Involution, Mode::Unipotent) => mixed_pair(m, Orientation::SU, seed),
        (Mode::Unipotent, Mode::Involution) => mixed_pair(m, Orientation::US, seed),
    }
}

/// Random invertible matrix helper for the fallback paths and tests.
pub fn random_invertible(field: &Field, n: usize, rng: &mut impl Rng) -> Mat {
    loop {
        let m = Mat::from_rows(field, (0..n).map(|_| (0..n).map(|_| field.random(rng, 3)).collect()).collect());
        if m.is_invertible() {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn classification_examples() {
        let q = Field::rationals();
        let c = Mat::companion(&Poly::from_i64s(&q, &[1, -3, 1])).unwrap();
        assert!(classify_two(&c, TwoKind::II).holds);
        assert!(!classify_two(&Mat::from_i64(&q, &[&[2]]), TwoKind::II).holds);
        let f = gf(5);
        let m = Mat::from_i64(&f, &[&[-1]]);
        assert!(classify_two(&m, TwoKind::II).holds);
        assert!(!classify_two(&m, TwoKind::UU).holds);
    }

    #[test]
    fn sigma_examples() {
        let q = Field::rationals();
        let c = Mat::companion(&Poly::from_i64s(&q, &[1, -3, 1])).unwrap();
        let s = sigma_involution(&c, &Mat::unit_vector(&q, 2, 0)).unwrap();
        assert_eq!(s, Mat::from_i64(&q, &[&[1, 3], &[0, -1]]));
        assert_eq!(s.mul(&c), Mat::from_i64(&q, &[&[3, 8], &[-1, -3]]));
    }

    #[test]
    fn transvection_two_involutions() {
        let q = Field::rationals();
        let t = Mat::from_i64(&q, &[&[1, 7], &[0, 1]]);
        let r = build_two_involutions(&t).unwrap();
        assert!(r.f1.mul(&r.f1).is_identity());
        let f = gf(3);
        let m = Mat::dsum2(&Mat::jordan_cell(&f, &f.one(), 3), &Mat::identity(&f, 1));
        build_two_involutions(&m).unwrap();
    }

    #[test]
    fn unipotent_pairs() {
        let f = gf(7);
        let j3 = Mat::jordan_cell(&f, &f.one(), 3);
        two_unipotents(&j3, 0).unwrap();
        let cells = CellSpec { cells: vec![(f.from_i64(3), 1), (f.from_i64(5), 1)], pairing: vec![(0, 1, f.one())] };
        build_two_unipotents(&f, &cells, 0).unwrap();
        let m2 = CellSpec::new(vec![(f.from_i64(-1), 2)]);
        build_two_unipotents(&f, &m2, 0).unwrap();
        let odd = CellSpec::new(vec![(f.from_i64(-1), 1)]);
        assert_eq!(build_two_unipotents(&f, &odd, 0).unwrap_err(), Error::IneligibleCells);
    }

    #[test]
    fn mixed_families() {
        for p in [3u64, 5, 7, 11] {
            let f = gf(p);
            for k in 0..6usize {
                for l in 0..6usize {
                    if k.abs_diff(l) > 2 || k + l == 0 {
                        continue;
                    }
                    let mut cells = Vec::new();
                    if k > 0 {
                        cells.push((f.one(), k));
                    }
                    if l > 0 {
                        cells.push((f.from_i64(-1), l));
                    }
                    for o in [Orientation::SU, Orientation::US] {
                        build_mixed_pair(&f, &CellSpec::new(cells.clone()), o, 1).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn mixed_anti_reciprocal_pairs() {
        let f = gf(13);
        // λ = 2, -1/λ = 6; i = 5 cells of size 2; plus an excess C_2(1)
        let cells = vec![(f.from_i64(2), 2), (f.from_i64(6), 2), (f.from_i64(5), 2), (f.one(), 2)];
        build_mixed_pair(&f, &CellSpec::new(cells), Orientation::SU, 0).unwrap();
        let bad = vec![(f.from_i64(5), 1)];
        assert!(build_mixed_pair(&f, &CellSpec::new(bad), Orientation::SU, 0).is_err());
    }

    #[test]
    fn char_two_routes() {
        let f = gf(2);
        let m = Mat::from_i64(&f, &[&[1, 1], &[0, 1]]);
        for modes in [(Mode::Involution, Mode::Involution), (Mode::Unipotent, Mode::Involution), (Mode::Unipotent, Mode::Unipotent)] {
            factor_two(&m, modes, 0).unwrap();
        }
    }

    #[test]
    fn desymmetrize_roundtrip() {
        let f = Field::rationals();
        let r = Poly::from_i64s(&f, &[3, -2, 1]);
        for d in [1, -1] {
            let q = r.symmetrized_lift(&f.from_i64(d)).unwrap();
            assert_eq!(desymmetrize(&q, &f.from_i64(d)).unwrap(), r);
        }
        assert!(desymmetrize(&Poly::from_i64s(&f, &[2, 0, 1]), &f.one()).is_none());
    }
}
