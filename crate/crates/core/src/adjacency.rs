//! Explicit involutions and U₂-matrices S with S·A similar to a prescribed
//! form: companion fits, the well-partitioned adaptation, and the block
//! lemmas on αI ⊕ βI.

use serde_json::{json, Value};

use crate::canonical::{companion_sum, cyclic_vector, is_cyclic, similarity, WellPartition};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::Mat;
use crate::poly::Poly;

/// Which quadratic class a factor belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Involution,
    Unipotent,
}

impl Mode {
    pub fn letter(self) -> char {
        match self {
            Mode::Involution => 'I',
            Mode::Unipotent => 'U',
        }
    }

    pub fn from_letter(c: char) -> Option<Mode> {
        match c {
            'I' => Some(Mode::Involution),
            'U' => Some(Mode::Unipotent),
            _ => None,
        }
    }

    pub fn annihilator(self, field: &Field) -> QuadAnnihilator {
        match self {
            Mode::Involution => QuadAnnihilator::new(field.one(), field.from_i64(-1)),
            Mode::Unipotent => QuadAnnihilator::new(field.one(), field.one()),
        }
    }
}

/// The polynomial (t-γ)(t-δ).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadAnnihilator {
    pub gamma: Scalar,
    pub delta: Scalar,
}

impl QuadAnnihilator {
    pub fn new(gamma: Scalar, delta: Scalar) -> Self {
        QuadAnnihilator { gamma, delta }
    }

    /// The involution kind wins in characteristic 2, where both coincide.
    pub fn mode(&self, field: &Field) -> Option<Mode> {
        let one = field.one();
        let m1 = field.from_i64(-1);
        let (g, d) = (&self.gamma, &self.delta);
        if (*g == one && *d == m1) || (*g == m1 && *d == one) {
            Some(Mode::Involution)
        } else if *g == one && *d == one {
            Some(Mode::Unipotent)
        } else {
            None
        }
    }

    pub fn annihilates(&self, s: &Mat) -> bool {
        let f = s.field();
        let a = s.add_scalar(&f.neg(&self.gamma));
        let b = s.add_scalar(&f.neg(&self.delta));
        a.mul(&b).is_zero()
    }

    pub fn to_json(&self, field: &Field) -> Value {
        json!([field.render(&self.gamma), field.render(&self.delta)])
    }

    pub fn from_json(field: &Field, v: &Value) -> Result<Self> {
        let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::MalformedInput("annihilator must be [γ, δ]".into()))?;
        Ok(QuadAnnihilator::new(field.parse(&arr[0])?, field.parse(&arr[1])?))
    }
}

/// S annihilated by (t-γ)(t-δ) with Q^{-1}·S·A·Q = target.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyCertificate {
    pub s: Mat,
    pub annihilator: QuadAnnihilator,
    pub a: Mat,
    pub target: Mat,
    pub q: Mat,
}

impl AdjacencyCertificate {
    /// Builds the certificate, finding Q by canonical forms.
    pub fn certify(s: Mat, annihilator: QuadAnnihilator, a: Mat, target: Mat) -> Result<Self> {
        let sa = s.mul(&a);
        let q = similarity(&sa, &target)?.ok_or_else(|| Error::VerificationFailed("S·A is not similar to the target".into()))?;
        let c = AdjacencyCertificate { s, annihilator, a, target, q };
        c.verify()?;
        Ok(c)
    }

    pub fn verify(&self) -> Result<()> {
        if !self.annihilator.annihilates(&self.s) {
            return Err(Error::VerificationFailed("annihilator".into()));
        }
        let qi = self.q.inverse().map_err(|_| Error::VerificationFailed("singular similarity".into()))?;
        if qi.mul(&self.s).mul(&self.a).mul(&self.q) != self.target {
            return Err(Error::VerificationFailed("similarity".into()));
        }
        Ok(())
    }

    pub fn mode(&self) -> Option<Mode> {
        self.annihilator.mode(self.s.field())
    }

    /// Same adjacency, read against a new target similar to the old one.
    pub fn retarget(self, target: Mat) -> Result<Self> {
        let r = similarity(&self.target, &target)?.ok_or_else(|| Error::VerificationFailed("retarget to a non-similar matrix".into()))?;
        let c = AdjacencyCertificate { q: self.q.mul(&r), target, ..self };
        c.verify()?;
        Ok(c)
    }

    /// Certificate for R·A·R^{-1}.
    pub fn transport(self, r: &Mat) -> Result<Self> {
        let ri = r.inverse()?;
        let c = AdjacencyCertificate {
            s: r.mul(&self.s).mul(&ri),
            a: r.mul(&self.a).mul(&ri),
            q: r.mul(&self.q),
            annihilator: self.annihilator,
            target: self.target,
        };
        c.verify()?;
        Ok(c)
    }

    /// Certificate for a given matrix similar to the current input.
    pub fn with_input(self, a: &Mat) -> Result<Self> {
        let r = similarity(a, &self.a)?.ok_or_else(|| Error::VerificationFailed("input is not similar".into()))?;
        let mut c = self.transport(&r)?;
        c.a = a.clone();
        Ok(c)
    }

    /// The symmetric relation: an S' with S'·target similar to A.
    pub fn reverse(&self) -> Result<Self> {
        let f = self.s.field();
        let qi = self.q.inverse()?;
        let s_inv = self.s.inverse()?;
        let s2 = qi.mul(&s_inv).mul(&self.q);
        let ann = QuadAnnihilator::new(f.inv(&self.annihilator.gamma)?, f.inv(&self.annihilator.delta)?);
        let c = AdjacencyCertificate { s: s2, annihilator: ann, a: self.target.clone(), target: self.a.clone(), q: qi };
        c.verify()?;
        Ok(c)
    }

    /// Blockwise direct sum of certificates sharing one annihilator.
    pub fn direct_sum(parts: &[AdjacencyCertificate]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::PreconditionViolated("empty direct sum".into()))?;
        if parts.iter().any(|p| p.annihilator != first.annihilator) {
            return Err(Error::PreconditionViolated("annihilators differ".into()));
        }
        let cat = |g: fn(&AdjacencyCertificate) -> &Mat| Mat::dsum(&parts.iter().map(|p| g(p).clone()).collect::<Vec<_>>());
        let c = AdjacencyCertificate {
            s: cat(|p| &p.s),
            a: cat(|p| &p.a),
            target: cat(|p| &p.target),
            q: cat(|p| &p.q),
            annihilator: first.annihilator.clone(),
        };
        c.verify()?;
        Ok(c)
    }

    pub fn to_json(&self) -> Value {
        let f = self.s.field();
        json!({
            "S": self.s.to_json(),
            "annihilator": self.annihilator.to_json(f),
            "A": self.a.to_json(),
            "target": self.target.to_json(),
            "Q": self.q.to_json(),
        })
    }

    pub fn from_json(v: &Value, field: Option<&Field>) -> Result<Self> {
        let get = |k: &str| v.get(k).ok_or_else(|| Error::MalformedInput(format!("missing {k}")));
        let s = Mat::from_json(get("S")?, field)?;
        let f = s.field().clone();
        let c = AdjacencyCertificate {
            annihilator: QuadAnnihilator::from_json(&f, get("annihilator")?)?,
            a: Mat::from_json(get("A")?, Some(&f))?,
            target: Mat::from_json(get("target")?, Some(&f))?,
            q: Mat::from_json(get("Q")?, Some(&f))?,
            s,
        };
        Ok(c)
    }
}

/// P with P^{-1}·M·P = C(χ_M), from a cyclic vector.
pub fn companion_basis(m: &Mat) -> Result<Mat> {
    let v = cyclic_vector(m, 0).ok_or(Error::NotCyclic)?;
    Ok(m.krylov(&v, m.rows()))
}

/// S₀ with S₀·C(r) = C(p) when r and p share the constant term up to the
/// sign `s11`.
fn companion_fit(r: &Poly, p: &Poly, s11: Scalar) -> Result<Mat> {
    let f = r.field();
    let n = r.degree();
    // a_k = -coeff_k(r), b_k = -coeff_k(p)
    let a0 = f.neg(&r.coeff(0));
    let mut s = Mat::identity(f, n);
    s.set(0, 0, s11);
    for i in 1..n {
        let num = f.sub(&f.neg(&p.coeff(i)), &f.neg(&r.coeff(i)));
        s.set(i, 0, f.div(&num, &a0)?);
    }
    Ok(s)
}

/// An involution (or U₂-matrix) S with S·A ~ C(p), for cyclic invertible A.
pub fn cyclic_fit(a: &Mat, p: &Poly, mode: Mode) -> Result<AdjacencyCertificate> {
    let f = a.field().clone();
    let n = a.rows();
    if !a.is_square() {
        return Err(Error::NotSquare);
    }
    if !p.is_monic() || p.degree() != n {
        return Err(Error::PreconditionViolated("target degree must match".into()));
    }
    let det = a.det()?;
    if f.is_zero(&det) {
        return Err(Error::SingularInput);
    }
    if n == 0 {
        let z = Mat::zeros(&f, 0, 0);
        return Ok(AdjacencyCertificate { s: z.clone(), annihilator: mode.annihilator(&f), a: a.clone(), target: z.clone(), q: z });
    }
    let pb = companion_basis(a)?;
    let r = a.charpoly()?;
    let norm = p.norm();
    let target = Mat::companion(p)?;
    let ann = mode.annihilator(&f);
    let s0_to = |q: &Poly, sign: i64| companion_fit(&r, q, f.from_i64(sign));
    let (s, q) = match mode {
        Mode::Unipotent => {
            if norm != det {
                return Err(Error::NormMismatch);
            }
            (pb.mul(&s0_to(p, 1)?).mul(&pb.inverse()?), pb.clone())
        }
        Mode::Involution => {
            if norm == f.neg(&det) {
                (pb.mul(&s0_to(p, -1)?).mul(&pb.inverse()?), pb.clone())
            } else if n % 2 == 1 && norm == det {
                // q(t) = -p(-t) has norm -det A; then (-S)·A ~ -C(q) ~ C(p)
                let minus = Poly::new(&f, vec![f.zero(), f.from_i64(-1)]);
                let q = p.compose(&minus).neg();
                let s = pb.mul(&s0_to(&q, -1)?).mul(&pb.inverse()?).neg();
                let sa = s.mul(a);
                let qm = similarity(&sa, &target)?.ok_or_else(|| Error::VerificationFailed("odd sign trick".into()))?;
                (s, qm)
            } else {
                return Err(Error::NormMismatch);
            }
        }
    };
    let c = AdjacencyCertificate { s, annihilator: ann, a: a.clone(), target, q };
    c.verify()?;
    Ok(c)
}

/// D with det [[tI-A, -D], [t·X·Yᵀ, tI-B]] = p.
///
/// With L = [[I, 0], [XYᵀ, I]] and K = [[A, D], [0, B]] the matrix above is
/// tL - K, so its determinant is χ(L^{-1}K), affine in D.
pub fn polyfit_solve(a: &Mat, b: &Mat, x: &Mat, y: &Mat, p: &Poly) -> Result<Mat> {
    let f = a.field().clone();
    let (n, m) = (a.rows(), b.rows());
    if !a.is_square() || !b.is_square() || x.rows() != m || y.rows() != n || x.cols() != 1 || y.cols() != 1 {
        return Err(Error::ShapeMismatch("polyfit operands".into()));
    }
    if !p.is_monic() || p.degree() != n + m {
        return Err(Error::PreconditionViolated("target degree must be n+m".into()));
    }
    if p.norm() != f.mul(&a.det()?, &b.det()?) {
        return Err(Error::NormMismatch);
    }
    if b.krylov(x, m).rank() < m || a.transpose().krylov(y, n).rank() < n {
        return Err(Error::NotCyclicInput);
    }
    let xyt = x.mul(&y.transpose());
    let eval = |d: &Mat| -> Result<Poly> {
        let k = Mat::block2(a, d, &Mat::zeros(&f, m, n), b);
        let linv = Mat::block2(&Mat::identity(&f, n), &Mat::zeros(&f, n, m), &xyt.neg(), &Mat::identity(&f, m));
        linv.mul(&k).charpoly()
    };
    let base = eval(&Mat::zeros(&f, n, m))?;
    let deg = n + m;
    let mut sys = Mat::zeros(&f, deg, n * m);
    for i in 0..n {
        for j in 0..m {
            let mut e = Mat::zeros(&f, n, m);
            e.set(i, j, f.one());
            let g = eval(&e)?.sub(&base);
            for k in 0..deg {
                sys.set(k, i * m + j, g.coeff(k));
            }
        }
    }
    let gap = p.sub(&base);
    let rhs = Mat::column(&f, (0..deg).map(|k| gap.coeff(k)).collect());
    let sol = sys.solve(&rhs)?;
    let mut d = Mat::zeros(&f, n, m);
    for i in 0..n {
        for j in 0..m {
            d.set(i, j, sol.at(i * m + j, 0).clone());
        }
    }
    if eval(&d)? != *p {
        return Err(Error::VerificationFailed("polynomial fit".into()));
    }
    Ok(d)
}

/// A characteristic list with the subdiagonal scalars read off a matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BqcShape {
    pub characteristic_list: Vec<usize>,
    pub betas: Vec<Scalar>,
}

impl BqcShape {
    /// Reads the β's from M, or None when M does not match the pattern.
    pub fn read(m: &Mat, sizes: &[usize]) -> Option<BqcShape> {
        let f = m.field();
        let n: usize = sizes.iter().sum();
        if !m.is_square() || m.rows() != n || sizes.contains(&0) {
            return None;
        }
        let mut starts = Vec::with_capacity(sizes.len());
        let mut acc = 0;
        for &d in sizes {
            starts.push(acc);
            acc += d;
        }
        let block_of = |i: usize| starts.iter().rposition(|&s| s <= i).unwrap();
        let mut betas = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let (bi, bj) = (block_of(i), block_of(j));
                let v = m.at(i, j);
                if bi == bj {
                    let (li, lj, d) = (i - starts[bi], j - starts[bi], sizes[bi]);
                    if li < d - 1 && lj < d - 1 && li != lj + 1 && !f.is_zero(v) {
                        return None;
                    }
                } else if bi == bj + 1 {
                    let corner = i == starts[bi] + sizes[bi] - 1 && j == starts[bj] + sizes[bj] - 1;
                    if corner {
                        if f.is_zero(v) {
                            return None;
                        }
                        betas.push(v.clone());
                    } else if !f.is_zero(v) {
                        return None;
                    }
                } else if bi > bj + 1 && !f.is_zero(v) {
                    return None;
                }
            }
        }
        Some(BqcShape { characteristic_list: sizes.to_vec(), betas })
    }
}

/// Indices (0-based) of the standard vectors e_{d1} cyclic for M and
/// e_{n-dN+1} cyclic for Mᵀ.
pub fn bqc_cyclic_vectors(m: &Mat, shape: &BqcShape) -> Result<(usize, usize)> {
    let sizes = &shape.characteristic_list;
    let read = BqcShape::read(m, sizes).ok_or(Error::PatternMismatch)?;
    if read.betas != shape.betas {
        return Err(Error::PatternMismatch);
    }
    if !m.is_invertible() {
        return Err(Error::SingularInput);
    }
    let f = m.field();
    let n = m.rows();
    let i = sizes[0] - 1;
    let j = n - sizes[sizes.len() - 1];
    if m.krylov(&Mat::unit_vector(f, n, i), n).rank() < n || m.transpose().krylov(&Mat::unit_vector(f, n, j), n).rank() < n {
        return Err(Error::CyclicityFailed);
    }
    Ok((i, j))
}

/// Q = [[I, X], [0, I]] with Q^{-1}·[[A, C], [0, B]]·Q = A ⊕ B.
pub fn roth_similarity(a: &Mat, b: &Mat, c: &Mat) -> Result<Mat> {
    let f = a.field();
    if a.charpoly()?.gcd(&b.charpoly()?).degree() > 0 {
        return Err(Error::NotCoprime);
    }
    let x = Mat::sylvester_solve(a, b, &c.neg())?;
    let (n, m) = (a.rows(), b.rows());
    let q = Mat::block2(&Mat::identity(f, n), &x, &Mat::zeros(f, m, n), &Mat::identity(f, m));
    let full = Mat::block2(a, c, &Mat::zeros(f, m, n), b);
    if q.inverse()?.mul(&full).mul(&q) != Mat::dsum2(a, b) {
        return Err(Error::VerificationFailed("Roth similarity".into()));
    }
    Ok(q)
}

/// The block lower bidiagonal S of the adaptation: diagonal blocks
/// I_{k-1} ⊕ ε, corner units L below.
fn adaptation_s(field: &Field, sizes: &[usize], eps: &Scalar) -> Mat {
    let n: usize = sizes.iter().sum();
    let mut s = Mat::identity(field, n);
    let mut start = 0;
    for (k, &d) in sizes.iter().enumerate() {
        // a first block of size 1 shares its diagonal entry with the corner
        // of the next block; ε there would break (S-I)(S-εI) = 0
        if k > 0 || d > 1 {
            s.set(start + d - 1, start + d - 1, eps.clone());
        }
        if k > 0 {
            // L_{d, d_prev}: bottom-left of the subdiagonal block
            let prev = sizes[k - 1];
            s.set(start + d - 1, start - prev, field.one());
        }
        start += d;
    }
    s
}

/// Result of the adaptation: the certificate and η = det S.
#[derive(Debug, Clone)]
pub struct Adaptation {
    pub certificate: AdjacencyCertificate,
    pub eta: Scalar,
}

/// S (U₂ or involution) with S·M ~ C(r), M the well-partitioned companion
/// sum of `wp` (the input transform is ignored).
pub fn adapt(wp: &WellPartition, r: &Poly, mode: Mode) -> Result<Adaptation> {
    let (ps, qs) = (&wp.p_list, &wp.q_list);
    let very_well = crate::canonical::check_well_partitioned(ps, qs).ok_or(Error::NotWellPartitioned)?;
    let f = ps[0].field().clone();
    let m = wp.matrix(&f);
    let n = m.rows();
    if !r.is_monic() || r.degree() != n {
        return Err(Error::PreconditionViolated("target degree must match".into()));
    }
    let det_m = m.det()?;
    if f.is_zero(&det_m) {
        return Err(Error::SingularInput);
    }
    let (nd, md) = wp.block_degrees();
    let sizes: Vec<usize> = nd.iter().chain(&md).copied().collect();
    let a: usize = nd.iter().sum();
    let b: usize = md.iter().sum();
    let eps = match mode {
        Mode::Unipotent => f.one(),
        Mode::Involution => f.from_i64(-1),
    };
    let mut s = adaptation_s(&f, &sizes, &eps);
    let ratio = f.div(&r.norm(), &det_m)?;
    let det_s = s.det()?;
    if ratio != det_s {
        match mode {
            Mode::Unipotent => return Err(Error::NormMismatch),
            Mode::Involution => {
                if ratio != f.neg(&det_s) {
                    return Err(Error::NormMismatch);
                }
                if !very_well {
                    return Err(Error::SignUnreachable);
                }
                let pos = if nd[0] > 1 { nd[0] - 1 } else { n - md[md.len() - 1] };
                let v = f.neg(s.at(pos, pos));
                s.set(pos, pos, v);
            }
        }
    }
    let eta = s.det()?;
    let m1 = m.submatrix(0, 0, a, a);
    let m2 = m.submatrix(a, a, b, b);
    let s1 = s.submatrix(0, 0, a, a);
    let s2 = s.submatrix(a, a, b, b);
    // S = N·(S1 ⊕ S2) with N a single transvection
    let nmat = s.mul(&Mat::dsum2(&s1, &s2).inverse()?);
    let (row, col) = (a + md[0] - 1, a - nd[nd.len() - 1]);
    let lambda = nmat.at(row, col).clone();
    let mut check = Mat::identity(&f, n);
    check.set(row, col, lambda.clone());
    if check != nmat || f.is_zero(&lambda) {
        return Err(Error::VerificationFailed("transvection split".into()));
    }
    let sm1 = s1.mul(&m1);
    let sm2 = s2.mul(&m2);
    let sh1 = BqcShape::read(&sm1, &nd).ok_or(Error::PatternMismatch)?;
    let sh2 = BqcShape::read(&sm2, &md).ok_or(Error::PatternMismatch)?;
    let (_, yi) = bqc_cyclic_vectors(&sm1, &sh1)?;
    let (xi, _) = bqc_cyclic_vectors(&sm2, &sh2)?;
    let x = Mat::unit_vector(&f, b, xi).scale(&f.neg(&lambda));
    let y = Mat::unit_vector(&f, a, yi);
    let d = polyfit_solve(&sm1, &sm2, &x, &y, r)?;
    let u = s1.inverse()?.mul(&d);
    let a_u = Mat::block2(&m1, &u, &Mat::zeros(&f, b, a), &m2);
    let sa = s.mul(&a_u);
    if BqcShape::read(&sa, &sizes).is_none() {
        return Err(Error::PatternMismatch);
    }
    // e_{n1} is cyclic for S·A_U
    let kry = sa.krylov(&Mat::unit_vector(&f, n, nd[0] - 1), n);
    if kry.rank() < n {
        return Err(Error::CyclicityFailed);
    }
    let qr = roth_similarity(&m1, &m2, &u)?;
    let qri = qr.inverse()?;
    let cert = AdjacencyCertificate {
        s: qri.mul(&s).mul(&qr),
        annihilator: mode.annihilator(&f),
        a: m,
        target: Mat::companion(r)?,
        q: qri.mul(&kry),
    };
    cert.verify()?;
    Ok(Adaptation { certificate: cert, eta })
}

fn nonzero(f: &Field, xs: &[&Scalar]) -> Result<()> {
    if xs.iter().any(|x| f.is_zero(x)) {
        return Err(Error::ZeroInput);
    }
    Ok(())
}

/// π = αβγδ.
pub fn pi_of(f: &Field, alpha: &Scalar, beta: &Scalar, gamma: &Scalar, delta: &Scalar) -> Scalar {
    f.mul(&f.mul(alpha, beta), &f.mul(gamma, delta))
}

/// S annihilated by (t-γ)(t-δ) with S·(αI_n ⊕ βI_n) ~ C((t-x)^n (t-πx^{-1})^n).
pub fn block_pair_fit(
    field: &Field,
    alpha: &Scalar,
    beta: &Scalar,
    gamma: &Scalar,
    delta: &Scalar,
    x: &Scalar,
    n: usize,
) -> Result<AdjacencyCertificate> {
    let f = field;
    nonzero(f, &[alpha, beta, gamma, delta, x])?;
    if alpha == beta {
        return Err(Error::DegenerateInput("α = β".into()));
    }
    if n == 0 {
        return Err(Error::PreconditionViolated("n must be positive".into()));
    }
    let pi = pi_of(f, alpha, beta, gamma, delta);
    let y = f.div(&pi, x)?;
    let s_poly = Poly::linear_power(f, &f.add(x, &y), n);
    let shift = f.add(&f.mul(delta, beta), &f.mul(alpha, gamma));
    let inner = Mat::companion(&s_poly)?.add_scalar(&f.neg(&shift)).scale(alpha);
    let r = inner.charpoly()?;
    let id = Mat::identity(f, n);
    let z = Mat::zeros(f, n, n);
    let am = Mat::block2(&id.scale(gamma), &z, &id.scale(&f.inv(alpha)?), &id.scale(delta));
    let bm = Mat::block2(&id.scale(alpha), &Mat::companion(&r)?, &z, &id.scale(beta));
    let ab = am.mul(&bm);
    let target_poly = Poly::linear_power(f, x, n).mul(&Poly::linear_power(f, &y, n));
    let target = Mat::companion(&target_poly)?;
    let kry = companion_basis(&ab)?;
    if ab.charpoly()? != target_poly {
        return Err(Error::VerificationFailed("block product polynomial".into()));
    }
    let ka = bm.add_scalar(&f.neg(alpha)).kernel();
    let kb = bm.add_scalar(&f.neg(beta)).kernel();
    let qm = Mat::hstack(f, &[ka, kb]);
    let qi = qm.inverse()?;
    let s = qi.mul(&am).mul(&qm);
    let diag = Mat::dsum2(&Mat::scalar(f, n, alpha), &Mat::scalar(f, n, beta));
    let cert = AdjacencyCertificate {
        s,
        annihilator: QuadAnnihilator::new(gamma.clone(), delta.clone()),
        a: diag,
        target,
        q: qi.mul(&kry),
    };
    cert.verify()?;
    Ok(cert)
}

/// S·(αI_1 ⊕ βI_1) ~ C_1(x) ⊕ C_1(πx^{-1}), needing x² ≠ π.
pub fn c1_basic(field: &Field, alpha: &Scalar, beta: &Scalar, gamma: &Scalar, delta: &Scalar, x: &Scalar) -> Result<AdjacencyCertificate> {
    let f = field;
    let pi = pi_of(f, alpha, beta, gamma, delta);
    if f.mul(x, x) == pi {
        return Err(Error::DegenerateInput("x² = π".into()));
    }
    let y = f.div(&pi, x)?;
    let target = Mat::dsum2(&Mat::scalar(f, 1, x), &Mat::scalar(f, 1, &y));
    block_pair_fit(f, alpha, beta, gamma, delta, x, 1)?.retarget(target)
}

/// S·(αI_2 ⊕ βI_2) ~ C_2(x) ⊕ C_2(πx^{-1}).
pub fn c2_basic(field: &Field, alpha: &Scalar, beta: &Scalar, gamma: &Scalar, delta: &Scalar, x: &Scalar) -> Result<AdjacencyCertificate> {
    let f = field;
    let pi = pi_of(f, alpha, beta, gamma, delta);
    nonzero(f, &[x])?;
    let y = f.div(&pi, x)?;
    let target = Mat::dsum2(&Mat::jordan_cell(f, x, 2), &Mat::jordan_cell(f, &y, 2));
    if *x != y {
        return block_pair_fit(f, alpha, beta, gamma, delta, x, 2)?.retarget(target);
    }
    let one = block_pair_fit(f, alpha, beta, gamma, delta, x, 1)?;
    let twice = AdjacencyCertificate::direct_sum(&[one.clone(), one])?;
    // α ⊕ β ⊕ α ⊕ β back to α ⊕ α ⊕ β ⊕ β
    let p = Mat::permutation(f, &[0, 2, 1, 3]);
    let diag = Mat::dsum2(&Mat::scalar(f, 2, alpha), &Mat::scalar(f, 2, beta));
    let mut c = twice.transport(&p)?;
    if c.a != diag {
        c = c.with_input(&diag)?;
    }
    c.retarget(target)
}

/// Cycle adjacencies: αI_{dn} ⊕ βI_{dn} against 𝒞_{n,2}(π) for d = 2, and
/// against ⊕_k C_1(επ^{-k}) ⊕ C_1(επ^{k+1}) for d = 1.
#[allow(clippy::too_many_arguments)]
pub fn diag_cycle_fit(
    field: &Field,
    alpha: &Scalar,
    beta: &Scalar,
    gamma: &Scalar,
    delta: &Scalar,
    d: usize,
    n: usize,
    eps: i64,
) -> Result<AdjacencyCertificate> {
    let f = field;
    nonzero(f, &[alpha, beta, gamma, delta])?;
    if alpha == beta {
        return Err(Error::DegenerateInput("α = β".into()));
    }
    if n == 0 {
        return Err(Error::PreconditionViolated("n must be positive".into()));
    }
    let pi = pi_of(f, alpha, beta, gamma, delta);
    let e = f.from_i64(eps);
    let mut parts = Vec::with_capacity(n);
    let mut cells = Vec::new();
    match d {
        2 => {
            for k in 0..n as i64 {
                parts.push(c2_basic(f, alpha, beta, gamma, delta, &f.pow(&pi, -k))?);
            }
            for k in -(n as i64 - 1)..=n as i64 {
                cells.push(Mat::jordan_cell(f, &f.pow(&pi, k), 2));
            }
        }
        1 => {
            for k in 0..n as i64 {
                if f.is_one(&f.pow(&pi, 2 * k + 1)) {
                    return Err(Error::OrderObstruction(format!("π^{} = 1", 2 * k + 1)));
                }
                let x = f.mul(&e, &f.pow(&pi, -k));
                parts.push(c1_basic(f, alpha, beta, gamma, delta, &x)?);
                cells.push(Mat::scalar(f, 1, &x));
                cells.push(Mat::scalar(f, 1, &f.mul(&e, &f.pow(&pi, k + 1))));
            }
        }
        _ => return Err(Error::PreconditionViolated("d must be 1 or 2".into())),
    }
    let sum = AdjacencyCertificate::direct_sum(&parts)?;
    let diag = Mat::dsum2(&Mat::scalar(f, d * n, alpha), &Mat::scalar(f, d * n, beta));
    sum.with_input(&diag)?.retarget(Mat::dsum(&cells))
}

/// αI₂ ⊕ iI₁ is i-adjacent to C₁(-i) ⊕ C₂(α).
pub fn skew_pair_adjacency(field: &Field, alpha: &Scalar) -> Result<AdjacencyCertificate> {
    let f = field;
    let i = f.sqrt_minus_one().ok_or(Error::NoSqrtMinusOne)?;
    if f.characteristic() == 2 {
        return Err(Error::CharTwo);
    }
    if f.is_zero(alpha) || *alpha == i {
        return Err(Error::BadAlpha);
    }
    let (o, z, m1) = (f.one(), f.zero(), f.from_i64(-1));
    let s = Mat::from_rows(f, vec![vec![o.clone(), z.clone(), z.clone()], vec![o.clone(), m1, z.clone()], vec![z.clone(), z.clone(), o.clone()]]);
    let a = Mat::from_rows(
        f,
        vec![
            vec![alpha.clone(), z.clone(), z.clone()],
            vec![z.clone(), i.clone(), z.clone()],
            vec![z.clone(), o, alpha.clone()],
        ],
    );
    let sa = s.mul(&a);
    if !is_cyclic(&sa) {
        return Err(Error::VerificationFailed("S·A is not cyclic".into()));
    }
    let mi = f.neg(&i);
    let target = if *alpha == mi {
        Mat::companion(&Poly::linear_power(f, alpha, 3))?
    } else {
        Mat::dsum2(&Mat::scalar(f, 1, &mi), &Mat::jordan_cell(f, alpha, 2))
    };
    let c = AdjacencyCertificate::certify(s, Mode::Involution.annihilator(f), a, target)?;
    let diag = Mat::dsum2(&Mat::scalar(f, 2, alpha), &Mat::scalar(f, 1, &i));
    c.with_input(&diag)
}

/// Certificate for a companion sum: S·(⊕ C(p_i)) ~ ⊕ C(q_i) blockwise by
/// cyclic fits.
pub fn blockwise_cyclic_fit(ps: &[Poly], qs: &[Poly], mode: Mode) -> Result<AdjacencyCertificate> {
    let parts: Vec<AdjacencyCertificate> =
        ps.iter().zip(qs).map(|(p, q)| cyclic_fit(&Mat::companion(p)?, q, mode)).collect::<Result<_>>()?;
    let f = ps.first().ok_or_else(|| Error::PreconditionViolated("no blocks".into()))?.field();
    let c = AdjacencyCertificate::direct_sum(&parts)?;
    debug_assert_eq!(c.a, companion_sum(f, ps));
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{check_well_partitioned, well_partition};

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn cyclic_fit_examples() {
        let f = q();
        let a = Mat::companion(&Poly::from_i64s(&f, &[1, -3, 1])).unwrap();
        let c = cyclic_fit(&a, &Poly::from_i64s(&f, &[-1, 0, 1]), Mode::Involution).unwrap();
        assert_eq!(c.s, Mat::from_i64(&f, &[&[-1, 0], &[3, 1]]));
        assert_eq!(c.s.mul(&a), c.target);
        let c = cyclic_fit(&a, &Poly::from_i64s(&f, &[1, -5, 1]), Mode::Unipotent).unwrap();
        assert_eq!(c.s, Mat::from_i64(&f, &[&[1, 0], &[-2, 1]]));
        assert_eq!(c.s.mul(&a), c.target);
        let one = Mat::from_i64(&f, &[&[3]]);
        let c = cyclic_fit(&one, &Poly::from_i64s(&f, &[-3, 1]), Mode::Unipotent).unwrap();
        assert!(c.s.is_identity());
        assert_eq!(cyclic_fit(&a, &Poly::from_i64s(&f, &[1, 0, 1]), Mode::Involution).unwrap_err(), Error::NormMismatch);
    }

    #[test]
    fn cyclic_fit_odd_sign_trick() {
        let f = Field::prime(7).unwrap();
        let a = Mat::companion(&Poly::from_i64s(&f, &[3, 1, 0, 1])).unwrap();
        // same norm as det A, odd degree
        let p = Poly::from_i64s(&f, &[3, 5, 2, 1]);
        assert_eq!(p.norm(), a.det().unwrap());
        let c = cyclic_fit(&a, &p, Mode::Involution).unwrap();
        assert!(c.s.mul(&c.s).is_identity());
    }

    #[test]
    fn polyfit_examples() {
        let f = q();
        let one = Mat::from_i64(&f, &[&[1]]);
        let d = polyfit_solve(&Mat::from_i64(&f, &[&[2]]), &Mat::from_i64(&f, &[&[3]]), &one, &one, &Poly::from_i64s(&f, &[6, 0, 1])).unwrap();
        assert_eq!(d, Mat::from_i64(&f, &[&[5]]));
        let d = polyfit_solve(&Mat::from_i64(&f, &[&[2]]), &Mat::from_i64(&f, &[&[3]]), &one, &one, &Poly::from_i64s(&f, &[6, -5, 1])).unwrap();
        assert!(d.is_zero());
        let pa = Poly::from_i64s(&f, &[1, -3, 1]);
        let target = Poly::from_i64s(&f, &[-1, 1]).mul(&pa).add(&Poly::from_i64s(&f, &[0, 1]));
        let a = Mat::companion(&pa).unwrap();
        let y = Mat::unit_vector(&f, 2, 1);
        polyfit_solve(&a, &one, &one, &y, &target).unwrap();
    }

    #[test]
    fn roth_examples() {
        let f = q();
        let qm = roth_similarity(&Mat::from_i64(&f, &[&[1]]), &Mat::from_i64(&f, &[&[2]]), &Mat::from_i64(&f, &[&[1]])).unwrap();
        assert_eq!(qm, Mat::from_i64(&f, &[&[1, 1], &[0, 1]]));
        let qm = roth_similarity(&Mat::from_i64(&f, &[&[1]]), &Mat::from_i64(&f, &[&[2]]), &Mat::from_i64(&f, &[&[0]])).unwrap();
        assert!(qm.is_identity());
        assert_eq!(
            roth_similarity(&Mat::from_i64(&f, &[&[1]]), &Mat::from_i64(&f, &[&[1]]), &Mat::from_i64(&f, &[&[0]])).unwrap_err(),
            Error::NotCoprime
        );
    }

    #[test]
    fn bqc_two_by_two() {
        let f = Field::prime(5).unwrap();
        let m = Mat::from_i64(&f, &[&[1, 3], &[2, 4]]);
        let sh = BqcShape::read(&m, &[1, 1]).unwrap();
        assert_eq!(bqc_cyclic_vectors(&m, &sh).unwrap(), (0, 1));
        let bad = Mat::from_i64(&f, &[&[1, 3], &[0, 4]]);
        assert!(BqcShape::read(&bad, &[1, 1]).is_none());
    }

    #[test]
    fn adapt_diagonal_pair() {
        let f = Field::prime(7).unwrap();
        let m = Mat::from_i64(&f, &[&[2, 0], &[0, 3]]);
        let wp = well_partition(&m, 0).unwrap();
        let r = Poly::from_i64s(&f, &[-1, 1]).mul(&Poly::from_i64s(&f, &[-6, 1]));
        let ad = adapt(&wp, &r, Mode::Unipotent).unwrap();
        let u = &ad.certificate.s;
        assert!(u.add_scalar(&f.from_i64(-1)).pow(2).is_zero());
        assert_eq!(ad.certificate.target, Mat::companion(&r).unwrap());
    }

    #[test]
    fn adapt_sign_flip() {
        let f = Field::prime(5).unwrap();
        let ps = vec![Poly::from_i64s(&f, &[1, 1, 1])];
        let qs = vec![Poly::from_i64s(&f, &[2, 0, 1]), Poly::from_i64s(&f, &[-3, 1])];
        assert_eq!(check_well_partitioned(&ps, &qs), Some(true));
        let wp = WellPartition { p_list: ps, q_list: qs, transform: Mat::identity(&f, 5), very_well: true };
        let det = wp.matrix(&f).det().unwrap();
        for sign in [1, -1] {
            let norm = f.mul(&det, &f.from_i64(sign));
            // t^5 + t + c with N = norm: c = -norm
            let r = Poly::new(&f, vec![f.neg(&norm), f.one(), f.zero(), f.zero(), f.zero(), f.one()]);
            let ad = adapt(&wp, &r, Mode::Involution).unwrap();
            assert_eq!(ad.eta, f.from_i64(sign));
            assert!(ad.certificate.s.mul(&ad.certificate.s).is_identity());
        }
    }

    #[test]
    fn block_pair_examples() {
        let f = Field::prime(7).unwrap();
        let e = |v| f.from_i64(v);
        let c = block_pair_fit(&f, &e(2), &e(3), &e(1), &e(1), &e(1), 1).unwrap();
        let target = Poly::from_i64s(&f, &[-1, 1]).mul(&Poly::from_i64s(&f, &[-6, 1]));
        assert_eq!(c.target, Mat::companion(&target).unwrap());
        c1_basic(&f, &e(2), &e(3), &e(1), &e(-1), &e(2)).unwrap();
        // x² = π triggers the permutation branch: π = 6, x = ... need x² = 6: none in GF(7)
        let f5 = Field::prime(5).unwrap();
        let e5 = |v| f5.from_i64(v);
        // α=2, β=2^{-1}·4 ... π = αβ = 4 = 2²
        let c = c2_basic(&f5, &e5(1), &e5(4), &e5(1), &e5(1), &e5(2)).unwrap();
        assert_eq!(c.a, Mat::dsum2(&Mat::scalar(&f5, 2, &e5(1)), &Mat::scalar(&f5, 2, &e5(4))));
        c2_basic(&f5, &e5(1), &e5(2), &e5(1), &e5(1), &e5(1)).unwrap();
    }

    #[test]
    fn cycle_fits() {
        let f = Field::prime(7).unwrap();
        let e = |v| f.from_i64(v);
        diag_cycle_fit(&f, &e(2), &e(1), &e(1), &e(1), 2, 2, 1).unwrap();
        // π = 6 has order 2: π^1 ≠ 1, π^3 ≠ 1
        diag_cycle_fit(&f, &e(6), &e(1), &e(1), &e(1), 1, 2, -1).unwrap();
        assert!(matches!(diag_cycle_fit(&f, &e(2), &e(4), &e(1), &e(1), 1, 1, 1), Err(Error::OrderObstruction(_))));
    }

    #[test]
    fn skew_pair_examples() {
        let f = Field::prime(5).unwrap();
        let c = skew_pair_adjacency(&f, &f.one()).unwrap();
        let chi = c.s.mul(&c.a).charpoly().unwrap();
        assert_eq!(chi, Poly::linear_power(&f, &f.one(), 2).mul(&Poly::from_i64s(&f, &[2, 1])));
        let f13 = Field::prime(13).unwrap();
        skew_pair_adjacency(&f13, &f13.from_i64(3)).unwrap();
        assert_eq!(skew_pair_adjacency(&f, &f.from_i64(2)).unwrap_err(), Error::BadAlpha);
        assert_eq!(skew_pair_adjacency(&Field::prime(7).unwrap(), &f.one()).unwrap_err(), Error::NoSqrtMinusOne);
    }

    #[test]
    fn reverse_roundtrip() {
        let f = q();
        let a = Mat::companion(&Poly::from_i64s(&f, &[1, -3, 1])).unwrap();
        let c = cyclic_fit(&a, &Poly::from_i64s(&f, &[-1, 0, 1]), Mode::Involution).unwrap();
        let r = c.reverse().unwrap();
        assert_eq!(r.reverse().unwrap().target, c.target);
        let js = c.to_json();
        assert_eq!(AdjacencyCertificate::from_json(&js, None).unwrap(), c);
    }
}
