//! Dense exact matrices.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Field, FieldDescriptor, Scalar};
use crate::poly::Poly;

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.field.show(self.at(i, j))).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form with the pivot columns.
pub struct Echelon {
    pub matrix: Mat,
    pub pivots: Vec<usize>,
}

/// Which single-entry corner matrix of §2.1 shape: top-right, bottom-right
/// or bottom-left.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corner {
    H,
    K,
    L,
}

impl Mat {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Mat {
        Mat { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Mat {
        Mat::scalar(field, n, &field.one())
    }

    pub fn scalar(field: &Field, n: usize, a: &Scalar) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, a.clone());
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Scalar>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat { field: field.clone(), rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(field: &Field, rows: &[&[i64]]) -> Mat {
        Mat::from_rows(field, rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect())
    }

    pub fn column(field: &Field, v: Vec<Scalar>) -> Mat {
        let n = v.len();
        Mat { field: field.clone(), rows: n, cols: 1, data: v }
    }

    /// Standard basis column e_i (0-based index).
    pub fn unit_vector(field: &Field, n: usize, i: usize) -> Mat {
        let mut v = Mat::zeros(field, n, 1);
        v.set(i, 0, field.one());
        v
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    fn check_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare)
        }
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "product shape mismatch");
        let f = &self.field;
        let mut out = Mat::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        Mat {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Mat {
        self.scale(&self.field.from_i64(-1))
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        let f = &self.field;
        Mat { field: f.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| f.mul(a, c)).collect() }
    }

    /// self + c·I
    pub fn add_scalar(&self, c: &Scalar) -> Mat {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let v = self.field.add(m.at(i, i), c);
            m.set(i, i, v);
        }
        m
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j).clone());
            }
        }
        t
    }

    pub fn pow(&self, e: usize) -> Mat {
        let mut r = Mat::identity(&self.field, self.rows);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| self.field.is_zero(a))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Mat::identity(&self.field, self.rows)
    }

    pub fn submatrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Mat {
        let mut m = Mat::zeros(&self.field, nr, nc);
        for i in 0..nr {
            for j in 0..nc {
                m.set(i, j, self.at(r0 + i, c0 + j).clone());
            }
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.at(i, j).clone());
            }
        }
    }

    pub fn col(&self, j: usize) -> Mat {
        self.submatrix(0, j, self.rows, 1)
    }

    /// Horizontal concatenation of equal-height matrices.
    pub fn hstack(field: &Field, parts: &[Mat]) -> Mat {
        let rows = parts.first().map_or(0, |m| m.rows);
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let mut c = 0;
        for m in parts {
            assert_eq!(m.rows, rows);
            out.set_block(0, c, m);
            c += m.cols;
        }
        out
    }

    pub fn vstack(field: &Field, parts: &[Mat]) -> Mat {
        let cols = parts.first().map_or(0, |m| m.cols);
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let mut r = 0;
        for m in parts {
            assert_eq!(m.cols, cols);
            out.set_block(r, 0, m);
            r += m.rows;
        }
        out
    }

    /// [[a, b], [c, d]] from blocks.
    pub fn block2(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
        let f = a.field.clone();
        let top = Mat::hstack(&f, &[a.clone(), b.clone()]);
        let bottom = Mat::hstack(&f, &[c.clone(), d.clone()]);
        Mat::vstack(&f, &[top, bottom])
    }

    /// Block-diagonal assembly; the empty sum is the 0×0 matrix.
    pub fn direct_sum(field: &Field, blocks: &[Mat]) -> Result<Mat> {
        if blocks.iter().any(|b| b.field != *field) {
            return Err(Error::FieldMismatch);
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        Ok(out)
    }

    /// Direct sum of same-field blocks (panics on mismatch).
    pub fn dsum(blocks: &[Mat]) -> Mat {
        let f = blocks.first().expect("nonempty direct sum").field.clone();
        Mat::direct_sum(&f, blocks).expect("same field")
    }

    pub fn dsum2(a: &Mat, b: &Mat) -> Mat {
        Mat::dsum(&[a.clone(), b.clone()])
    }

    /// Permutation matrix P with P·e_j = e_{perm[j]}.
    pub fn permutation(field: &Field, perm: &[usize]) -> Mat {
        let n = perm.len();
        let mut p = Mat::zeros(field, n, n);
        for (j, &i) in perm.iter().enumerate() {
            p.set(i, j, field.one());
        }
        p
    }

    /// Permutation P reordering the diagonal blocks of a block-diagonal matrix
    /// with the given sizes: P^{-1}·(⊕ B_i)·P = ⊕ B_{order[k]}.
    pub fn block_permutation(field: &Field, sizes: &[usize], order: &[usize]) -> Mat {
        let mut starts = Vec::with_capacity(sizes.len());
        let mut s = 0;
        for &d in sizes {
            starts.push(s);
            s += d;
        }
        let mut perm = Vec::with_capacity(s);
        for &b in order {
            for i in 0..sizes[b] {
                perm.push(starts[b] + i);
            }
        }
        Mat::permutation(field, &perm)
    }

    /// Corner unit of shape n×p: H top-right, K bottom-right, L bottom-left.
    pub fn corner(field: &Field, n: usize, p: usize, which: Corner) -> Mat {
        let mut m = Mat::zeros(field, n, p);
        match which {
            Corner::H => m.set(0, p - 1, field.one()),
            Corner::K => m.set(n - 1, p - 1, field.one()),
            Corner::L => m.set(n - 1, 0, field.one()),
        }
        m
    }

    /// Companion matrix: ones on the subdiagonal, last column a_0..a_(n-1)
    /// where p = t^n - Σ a_k t^k.
    pub fn companion(p: &Poly) -> Result<Mat> {
        if !p.is_monic() {
            return Err(Error::NotMonic);
        }
        let f = p.field();
        let n = p.degree();
        let mut c = Mat::zeros(f, n, n);
        for i in 1..n {
            c.set(i, i - 1, f.one());
        }
        for k in 0..n {
            c.set(k, n - 1, f.neg(&p.coeff(k)));
        }
        Ok(c)
    }

    /// C_d(α) = C((t - α)^d).
    pub fn jordan_cell(field: &Field, a: &Scalar, d: usize) -> Mat {
        Mat::companion(&Poly::linear_power(field, a, d)).expect("monic")
    }

    /// Reduced row echelon form, pivoting on the first nonzero entry.
    pub fn echelon(&self) -> Echelon {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !f.is_zero(m.at(i, c))) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.at(r, c)).unwrap();
            for j in c..m.cols {
                let v = f.mul(m.at(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.at(i, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.at(i, j), &f.mul(&factor, m.at(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    pub fn det(&self) -> Result<Scalar> {
        let n = self.check_square()?;
        let f = &self.field;
        let mut m = self.clone();
        let mut det = f.one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !f.is_zero(m.at(i, c))) else {
                return Ok(f.zero());
            };
            if pr != c {
                for j in 0..n {
                    m.data.swap(pr * n + j, c * n + j);
                }
                det = f.neg(&det);
            }
            let piv = m.at(c, c).clone();
            det = f.mul(&det, &piv);
            let inv = f.inv(&piv).unwrap();
            for i in c + 1..n {
                let factor = f.mul(m.at(i, c), &inv);
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(m.at(i, j), &f.mul(&factor, m.at(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<Mat> {
        let n = self.check_square()?;
        let aug = Mat::hstack(&self.field, &[self.clone(), Mat::identity(&self.field, n)]);
        let e = aug.echelon();
        if e.pivots.len() < n || (n > 0 && e.pivots[n - 1] != n - 1) {
            return Err(Error::SingularInput);
        }
        Ok(e.matrix.submatrix(0, n, n, n))
    }

    /// Columns forming a basis of the right kernel (free variables set to 1
    /// in turn, in column order).
    pub fn kernel(&self) -> Mat {
        let f = &self.field;
        let e = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !e.pivots.contains(c)).collect();
        let mut basis = Mat::zeros(f, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            basis.set(fc, k, f.one());
            for (r, &pc) in e.pivots.iter().enumerate() {
                basis.set(pc, k, f.neg(e.matrix.at(r, fc)));
            }
        }
        basis
    }

    /// One solution X of self·X = B (free variables zero), or NoSolution.
    pub fn solve(&self, b: &Mat) -> Result<Mat> {
        if b.rows != self.rows {
            return Err(Error::ShapeMismatch("right-hand side height".into()));
        }
        let f = &self.field;
        let aug = Mat::hstack(f, &[self.clone(), b.clone()]);
        let e = aug.echelon();
        if e.pivots.iter().any(|&c| c >= self.cols) {
            return Err(Error::NoSolution);
        }
        let mut x = Mat::zeros(f, self.cols, b.cols);
        for (r, &pc) in e.pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, e.matrix.at(r, self.cols + j).clone());
            }
        }
        Ok(x)
    }

    /// det(tI - M). Hessenberg reduction over finite fields, the
    /// division-free Berkowitz recurrence over the rationals.
    pub fn charpoly(&self) -> Result<Poly> {
        self.check_square()?;
        if self.field.is_finite() {
            Ok(self.charpoly_hessenberg())
        } else {
            Ok(self.charpoly_berkowitz())
        }
    }

    pub fn charpoly_hessenberg(&self) -> Poly {
        let f = &self.field;
        let n = self.rows;
        let mut h = self.clone();
        for c in 0..n.saturating_sub(2) {
            let Some(pr) = (c + 1..n).find(|&i| !f.is_zero(h.at(i, c))) else {
                continue;
            };
            if pr != c + 1 {
                // swap rows and columns pr <-> c+1
                for j in 0..n {
                    h.data.swap(pr * n + j, (c + 1) * n + j);
                }
                for i in 0..n {
                    h.data.swap(i * n + pr, i * n + c + 1);
                }
            }
            let inv = f.inv(h.at(c + 1, c)).unwrap();
            for i in c + 2..n {
                let u = f.mul(h.at(i, c), &inv);
                if f.is_zero(&u) {
                    continue;
                }
                // row_i -= u row_{c+1}; col_{c+1} += u col_i
                for j in 0..n {
                    let v = f.sub(h.at(i, j), &f.mul(&u, h.at(c + 1, j)));
                    h.set(i, j, v);
                }
                for r in 0..n {
                    let v = f.add(h.at(r, c + 1), &f.mul(&u, h.at(r, i)));
                    h.set(r, c + 1, v);
                }
            }
        }
        let mut ps: Vec<Poly> = vec![Poly::one(f)];
        for m in 0..n {
            let lin = Poly::new(f, vec![f.neg(h.at(m, m)), f.one()]);
            let mut pm = lin.mul(&ps[m]);
            let mut prod = f.one();
            for i in (0..m).rev() {
                prod = f.mul(&prod, h.at(i + 1, i));
                let coef = f.mul(h.at(i, m), &prod);
                if !f.is_zero(&coef) {
                    pm = pm.sub(&ps[i].scale(&coef));
                }
            }
            ps.push(pm);
        }
        ps.pop().unwrap()
    }

    pub fn charpoly_berkowitz(&self) -> Poly {
        let f = &self.field;
        let n = self.rows;
        if n == 0 {
            return Poly::one(f);
        }
        // coefficient vectors high-to-low
        let mut c: Vec<Scalar> = vec![f.one(), f.neg(self.at(0, 0))];
        for r in 1..n {
            let msub = self.submatrix(0, 0, r, r);
            let row = self.submatrix(r, 0, 1, r);
            let mut s = self.submatrix(0, r, r, 1);
            let mut v = vec![f.one(), f.neg(self.at(r, r))];
            for _ in 0..r {
                v.push(f.neg(row.mul(&s).at(0, 0)));
                s = msub.mul(&s);
            }
            let mut nc = vec![f.zero(); r + 2];
            for (i, slot) in nc.iter_mut().enumerate() {
                for j in 0..=i.min(r) {
                    if i - j < v.len() {
                        *slot = f.add(slot, &f.mul(&v[i - j], &c[j]));
                    }
                }
            }
            c = nc;
        }
        c.reverse();
        Poly::new(f, c)
    }

    /// Evaluate a polynomial at this square matrix.
    pub fn eval_poly(&self, p: &Poly) -> Mat {
        let f = &self.field;
        let n = self.rows;
        let mut acc = Mat::zeros(f, n, n);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self).add_scalar(c);
        }
        acc
    }

    /// Sizes of the Jordan cells at β (descending), from the ranks of (M-βI)^j.
    pub fn jordan_cell_counts(&self, beta: &Scalar) -> Result<Vec<usize>> {
        let n = self.check_square()?;
        let f = &self.field;
        let shifted = self.add_scalar(&f.neg(beta));
        let mut ranks = vec![n];
        let mut pw = Mat::identity(f, n);
        for _ in 0..n {
            pw = pw.mul(&shifted);
            let r = pw.rank();
            ranks.push(r);
            if r == *ranks.get(ranks.len() - 2).unwrap() {
                break;
            }
        }
        // number of cells of size ≥ j is rank_{j-1} - rank_j
        let ge = |j: usize| -> usize {
            let a = ranks.get(j - 1).copied().unwrap_or(*ranks.last().unwrap());
            let b = ranks.get(j).copied().unwrap_or(*ranks.last().unwrap());
            a - b
        };
        let mut sizes = Vec::new();
        for j in (1..=n).rev() {
            let exact = ge(j) - if j < n { ge(j + 1) } else { 0 };
            for _ in 0..exact {
                sizes.push(j);
            }
        }
        Ok(sizes)
    }

    /// Columns v, Mv, ..., M^(k-1) v.
    pub fn krylov(&self, v: &Mat, k: usize) -> Mat {
        let mut cols = Vec::with_capacity(k);
        let mut cur = v.clone();
        for _ in 0..k {
            cols.push(cur.clone());
            cur = self.mul(&cur);
        }
        Mat::hstack(&self.field, &cols)
    }

    /// Monic minimal polynomial of the vector v with respect to self.
    pub fn vector_minpoly(&self, v: &Mat) -> Poly {
        let f = &self.field;
        let n = self.rows;
        let mut cols: Vec<Mat> = vec![v.clone()];
        loop {
            let k = cols.len();
            let basis = Mat::hstack(f, &cols);
            if k > n || basis.rank() < k {
                // last column depends on the previous ones
                let prev = Mat::hstack(f, &cols[..k - 1]);
                let coeffs = if k == 1 {
                    Mat::zeros(f, 0, 1)
                } else {
                    prev.solve(&cols[k - 1]).expect("dependent column")
                };
                let mut cs: Vec<Scalar> = (0..k - 1).map(|i| f.neg(coeffs.at(i, 0))).collect();
                cs.push(f.one());
                return Poly::new(f, cs);
            }
            let next = self.mul(&cols[k - 1]);
            cols.push(next);
        }
    }

    /// Minimal polynomial of the matrix.
    pub fn minpoly(&self) -> Poly {
        let f = &self.field;
        let n = self.rows;
        let mut m = Poly::one(f);
        for i in 0..n {
            m = m.lcm(&self.vector_minpoly(&Mat::unit_vector(f, n, i)));
        }
        m
    }

    /// Solve A X - X B = C (shapes n×n, m×m, n×m) as a linear system in the
    /// nm entries of X, returning the free-variables-zero solution.
    pub fn sylvester_solve(a: &Mat, b: &Mat, c: &Mat) -> Result<Mat> {
        let (n, m) = (a.rows, b.rows);
        if !a.is_square() || !b.is_square() || c.rows != n || c.cols != m {
            return Err(Error::ShapeMismatch("sylvester operands".into()));
        }
        let f = &a.field;
        let idx = |i: usize, j: usize| i * m + j;
        let mut sys = Mat::zeros(f, n * m, n * m);
        let mut rhs = Mat::zeros(f, n * m, 1);
        for i in 0..n {
            for j in 0..m {
                let row = idx(i, j);
                // (AX)_{ij} = Σ_k a_ik x_kj
                for k in 0..n {
                    let v = f.add(sys.at(row, idx(k, j)), a.at(i, k));
                    sys.set(row, idx(k, j), v);
                }
                // (XB)_{ij} = Σ_k x_ik b_kj
                for k in 0..m {
                    let v = f.sub(sys.at(row, idx(i, k)), b.at(k, j));
                    sys.set(row, idx(i, k), v);
                }
                rhs.set(row, 0, c.at(i, j).clone());
            }
        }
        let x = sys.solve(&rhs)?;
        let mut out = Mat::zeros(f, n, m);
        for i in 0..n {
            for j in 0..m {
                out.set(i, j, x.at(idx(i, j), 0).clone());
            }
        }
        Ok(out)
    }

    /// Conjugate: Q^{-1}·self·Q.
    pub fn conj(&self, q: &Mat) -> Mat {
        q.inverse().expect("invertible conjugator").mul(self).mul(q)
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = (0..self.rows)
            .map(|i| Value::Array((0..self.cols).map(|j| self.field.render(self.at(i, j))).collect()))
            .collect();
        json!({"field": self.field.descriptor(), "rows": rows})
    }

    /// Parse {"field": descriptor, "rows": [[...]]}; a supplied field must match.
    pub fn from_json(v: &Value, expected: Option<&Field>) -> Result<Mat> {
        let bad = |m: &str| Error::MalformedInput(m.to_string());
        let desc: FieldDescriptor = serde_json::from_value(v.get("field").cloned().ok_or_else(|| bad("missing field"))?)
            .map_err(|e| bad(&format!("field descriptor: {e}")))?;
        let field = match expected {
            Some(f) => {
                if *f.descriptor() != desc {
                    return Err(Error::MalformedInput("FieldMismatch".into()));
                }
                f.clone()
            }
            None => Field::new(desc)?,
        };
        let rows = v.get("rows").and_then(|r| r.as_array()).ok_or_else(|| bad("missing rows"))?;
        let mut out = Vec::with_capacity(rows.len());
        for r in rows {
            let r = r.as_array().ok_or_else(|| bad("row must be an array"))?;
            out.push(r.iter().map(|x| field.parse(x)).collect::<Result<Vec<_>>>()?);
        }
        let width = out.first().map_or(0, |r| r.len());
        if out.iter().any(|r| r.len() != width) {
            return Err(bad("ragged rows"));
        }
        Ok(Mat::from_rows(&field, out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn companion_layout() {
        let q = Field::rationals();
        let c = Mat::companion(&Poly::from_i64s(&q, &[1, -3, 1])).unwrap();
        assert_eq!(c, Mat::from_i64(&q, &[&[0, -1], &[1, 3]]));
        assert_eq!(Mat::jordan_cell(&q, &q.one(), 2), Mat::from_i64(&q, &[&[0, -1], &[1, 2]]));
        assert_eq!(Mat::jordan_cell(&q, &q.from_i64(5), 1), Mat::from_i64(&q, &[&[5]]));
        assert_eq!(Mat::companion(&Poly::from_i64s(&q, &[1, 2])).unwrap_err(), Error::NotMonic);
    }

    #[test]
    fn charpoly_examples() {
        let q = Field::rationals();
        let p = Poly::from_i64s(&q, &[1, -3, 1]);
        assert_eq!(Mat::companion(&p).unwrap().charpoly().unwrap(), p);
        assert_eq!(Mat::identity(&q, 2).charpoly().unwrap(), Poly::from_i64s(&q, &[1, -2, 1]));
        let f7 = Field::prime(7).unwrap();
        let d = Mat::from_i64(&f7, &[&[2, 0], &[0, 3]]);
        assert_eq!(d.charpoly().unwrap(), Poly::from_i64s(&f7, &[6, 2, 1]));
        assert_eq!(Mat::from_i64(&q, &[&[1, 2]]).charpoly().unwrap_err(), Error::NotSquare);
    }

    #[test]
    fn jordan_counts() {
        let q = Field::rationals();
        let one = q.one();
        assert_eq!(Mat::identity(&q, 3).jordan_cell_counts(&one).unwrap(), vec![1, 1, 1]);
        let m = Mat::dsum2(&Mat::jordan_cell(&q, &one, 3), &Mat::jordan_cell(&q, &one, 1));
        assert_eq!(m.jordan_cell_counts(&one).unwrap(), vec![3, 1]);
        let p = Poly::linear_power(&q, &one, 2).mul(&Poly::linear(&q, &q.from_i64(2)));
        assert_eq!(Mat::companion(&p).unwrap().jordan_cell_counts(&one).unwrap(), vec![2]);
    }

    #[test]
    fn sylvester_examples() {
        let q = Field::rationals();
        let x = Mat::sylvester_solve(&Mat::from_i64(&q, &[&[1]]), &Mat::from_i64(&q, &[&[2]]), &Mat::from_i64(&q, &[&[5]]))
            .unwrap();
        assert_eq!(x, Mat::from_i64(&q, &[&[-5]]));
        let one = Mat::from_i64(&q, &[&[1]]);
        assert_eq!(Mat::sylvester_solve(&one, &one, &one).unwrap_err(), Error::NoSolution);
        let z = Mat::sylvester_solve(&one, &one, &Mat::zeros(&q, 1, 1)).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn direct_sum_and_permutation() {
        let q = Field::rationals();
        let d = Mat::direct_sum(&q, &[Mat::from_i64(&q, &[&[2]]), Mat::identity(&q, 1)]).unwrap();
        assert_eq!(d, Mat::from_i64(&q, &[&[2, 0], &[0, 1]]));
        assert_eq!(Mat::direct_sum(&q, &[]).unwrap().rows(), 0);
        let (a, b) = (q.from_i64(2), q.from_i64(3));
        let inter = Mat::dsum(&[
            Mat::scalar(&q, 1, &a),
            Mat::scalar(&q, 1, &b),
            Mat::scalar(&q, 1, &a),
            Mat::scalar(&q, 1, &b),
        ]);
        let p = Mat::block_permutation(&q, &[1, 1, 1, 1], &[0, 2, 1, 3]);
        assert_eq!(inter.conj(&p), Mat::dsum2(&Mat::scalar(&q, 2, &a), &Mat::scalar(&q, 2, &b)));
        let f5 = Field::prime(5).unwrap();
        assert!(Mat::direct_sum(&q, &[Mat::identity(&f5, 1)]).is_err());
    }

    #[test]
    fn kernel_and_inverse() {
        let f = Field::prime(5).unwrap();
        let m = Mat::from_i64(&f, &[&[1, 2, 3], &[0, 1, 4]]);
        let k = m.kernel();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        let a = Mat::from_i64(&f, &[&[1, 2], &[3, 4]]);
        assert!(a.mul(&a.inverse().unwrap()).is_identity());
        assert_eq!(Mat::from_i64(&f, &[&[1, 2], &[2, 4]]).inverse().unwrap_err(), Error::SingularInput);
    }

    #[test]
    fn corner_units() {
        let f = Field::prime(3).unwrap();
        assert_eq!(Mat::corner(&f, 2, 3, Corner::H), Mat::from_i64(&f, &[&[0, 0, 1], &[0, 0, 0]]));
        assert_eq!(Mat::corner(&f, 2, 3, Corner::K), Mat::from_i64(&f, &[&[0, 0, 0], &[0, 0, 1]]));
        assert_eq!(Mat::corner(&f, 2, 3, Corner::L), Mat::from_i64(&f, &[&[0, 0, 0], &[1, 0, 0]]));
    }
}
