//! Dense univariate polynomials over an exact field, coefficients low to high.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::arith::factorize;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if self.field.is_zero(c) {
                continue;
            }
            let s = self.field.show(c);
            let (neg, body) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = body == "1";
            match i {
                0 => write!(f, "{body}")?,
                _ => {
                    if !unit {
                        write!(f, "{body}")?;
                    }
                    if i == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Outcome of [`Poly::coprime_split`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoprimeSplit {
    /// Pairwise coprime monic factors with multiplicities. Over finite fields
    /// every factor is irreducible; over the rationals factors are only
    /// guaranteed irreducible when the split has a single entry.
    Factors(Vec<(Poly, usize)>),
    /// The rational method cannot decide whether the input is a power of
    /// one irreducible polynomial.
    Indeterminate,
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Scalar>) -> Poly {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn from_i64s(field: &Field, cs: &[i64]) -> Poly {
        Poly::new(field, cs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: &Field) -> Poly {
        Poly::new(field, vec![])
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, field.one())
    }

    pub fn constant(field: &Field, c: Scalar) -> Poly {
        Poly::new(field, vec![c])
    }

    /// The indeterminate t.
    pub fn t(field: &Field) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    /// t - a
    pub fn linear(field: &Field, a: &Scalar) -> Poly {
        Poly::new(field, vec![field.neg(a), field.one()])
    }

    /// (t - a)^d
    pub fn linear_power(field: &Field, a: &Scalar, d: usize) -> Poly {
        Poly::linear(field, a).pow(d)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of t^i (zero past the degree).
    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0 (check [`Poly::is_zero`] first).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.field.is_one(&self.lead())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.field.is_one(&self.coeffs[0])
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(&self.lead()).unwrap();
        self.scale(&inv)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.add(&self.coeff(i), &other.coeff(i))).collect())
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|a| f.neg(a)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut r = Poly::one(&self.field);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let f = &self.field;
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.coeffs.len() < d.coeffs.len() {
            return (Poly::zero(f), self.clone());
        }
        let dd = d.degree();
        let inv = f.inv(&d.lead()).unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![f.zero(); self.coeffs.len() - dd];
        for i in (0..q.len()).rev() {
            let c = f.mul(&r[i + dd], &inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                r[i + j] = f.sub(&r[i + j], &f.mul(&c, dj));
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Poly::new(f, q), Poly::new(f, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Quotient when `d` is known to divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd (zero when both inputs vanish).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        self.mul(other).div_exact(&self.gcd(other)).monic()
    }

    /// Monic g = gcd(a, b) with u·a + v·b = g.
    pub fn gcd_bezout(a: &Poly, b: &Poly) -> Result<(Poly, Poly, Poly)> {
        let f = &a.field;
        if a.is_zero() && b.is_zero() {
            return Err(Error::BothZero);
        }
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let inv = f.inv(&r0.lead())?;
        Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let f = &self.field;
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    }

    /// self(g(t))
    pub fn compose(&self, g: &Poly) -> Poly {
        let mut acc = Poly::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Poly::constant(&self.field, c.clone()));
        }
        acc
    }

    /// self(t + c)
    pub fn shift(&self, c: &Scalar) -> Poly {
        let g = Poly::new(&self.field, vec![c.clone(), self.field.one()]);
        self.compose(&g)
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        Poly::new(
            f,
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| f.mul(c, &f.from_i64(i as i64))).collect(),
        )
    }

    /// Norm and trace: writing p = t^n - Σ a_k t^k, norm = (-1)^(n-1) a_0 and
    /// trace = a_(n-1).
    pub fn norm_trace(&self) -> Result<(Scalar, Scalar)> {
        if !self.is_monic() {
            return Err(Error::NotMonic);
        }
        if self.degree() == 0 {
            return Err(Error::ConstantInput);
        }
        let f = &self.field;
        let n = self.degree();
        let a0 = f.neg(&self.coeff(0));
        let norm = if n % 2 == 1 { a0 } else { f.neg(&a0) };
        Ok((norm, f.neg(&self.coeff(n - 1))))
    }

    pub fn norm(&self) -> Scalar {
        self.norm_trace().expect("norm of a monic nonconstant polynomial").0
    }

    /// Normalized reciprocal t^deg p(1/t) / p(0), and whether it equals p.
    pub fn reciprocal(&self) -> Result<(Poly, bool)> {
        if self.is_zero() || self.field.is_zero(&self.coeffs[0]) {
            return Err(Error::ZeroConstantTerm);
        }
        let mut rev = self.coeffs.clone();
        rev.reverse();
        let r = Poly::new(&self.field, rev).monic();
        let same = r == self.monic();
        Ok((r, same))
    }

    pub fn is_self_reciprocal(&self) -> bool {
        self.reciprocal().map(|(_, s)| s).unwrap_or(false)
    }

    /// t^n · r(t + d/t) for r of degree n: a monic polynomial of degree 2n.
    pub fn symmetrized_lift(&self, d: &Scalar) -> Result<Poly> {
        let f = &self.field;
        if !self.is_monic() {
            return Err(Error::NotMonic);
        }
        if f.is_zero(d) {
            return Err(Error::ZeroD);
        }
        let n = self.degree();
        // t^2 + d
        let base = Poly::new(f, vec![d.clone(), f.zero(), f.one()]);
        let mut acc = Poly::zero(f);
        let mut pw = Poly::one(f);
        for j in 0..=n {
            let term = pw.mul(&Poly::monomial(f, n - j)).scale(&self.coeff(j));
            acc = acc.add(&term);
            pw = pw.mul(&base);
        }
        Ok(acc)
    }

    /// c·t^k with c = 1.
    pub fn monomial(field: &Field, k: usize) -> Poly {
        let mut cs = vec![field.zero(); k + 1];
        cs[k] = field.one();
        Poly::new(field, cs)
    }

    /// First monic polynomial of degree n ≥ 2 with the given norm and no root
    /// in `forbidden`, scanning middle coefficients over the canonical scalar
    /// sequence in growing boxes, lexicographically inside each box.
    pub fn avoid_roots(field: &Field, n: usize, norm: &Scalar, forbidden: &[Scalar]) -> Result<Poly> {
        if n < 2 {
            return Err(Error::PreconditionViolated("degree must be at least 2".into()));
        }
        if field.is_zero(norm) {
            return Err(Error::ZeroInput);
        }
        // p = t^n + ... + c0 with (-1)^(n-1)·(-c0) = norm, i.e. c0 = (-1)^n norm
        let c0 = if n.is_multiple_of(2) { norm.clone() } else { field.neg(norm) };
        let m = n - 1;
        let cap = field.size().unwrap_or(u64::MAX);
        let mut bound: u64 = 1;
        loop {
            let mut idx = vec![0u64; m];
            loop {
                if bound == 1 || idx.iter().any(|&i| i + 1 == bound) {
                    let mut cs = vec![c0.clone()];
                    cs.extend(idx.iter().map(|&i| field.canonical(i).unwrap()));
                    cs.push(field.one());
                    let p = Poly::new(field, cs);
                    if forbidden.iter().all(|x| !field.is_zero(&p.eval(x))) {
                        return Ok(p);
                    }
                }
                if !odometer(&mut idx, bound) {
                    break;
                }
            }
            if bound >= cap {
                return Err(Error::PreconditionViolated("no root-avoiding polynomial exists".into()));
            }
            bound += 1;
        }
    }

    /// Yun's squarefree decomposition: pairs (s_i, i) with p = lead·Π s_i^i,
    /// each s_i squarefree, monic and nonconstant, pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, usize)> {
        let f = &self.field;
        let p = self.monic();
        if p.degree() == 0 {
            return vec![];
        }
        let ch = f.characteristic();
        let d = p.derivative();
        if d.is_zero() {
            // p = g(t^ch) = h^ch with h the ch-th root
            let h = p.pth_root();
            return h
                .squarefree_decomposition()
                .into_iter()
                .map(|(s, i)| (s, i * ch as usize))
                .collect();
        }
        let mut out = Vec::new();
        let mut c = p.gcd(&d);
        let mut w = p.div_exact(&c);
        let mut i = 1;
        while w.degree() > 0 {
            let y = w.gcd(&c);
            let z = w.div_exact(&y);
            if z.degree() > 0 {
                out.push((z.monic(), i));
            }
            i += 1;
            w = y;
            c = c.div_exact(&w);
        }
        if c.degree() > 0 {
            // remaining part is a ch-th power
            let h = c.pth_root();
            for (s, j) in h.squarefree_decomposition() {
                out.push((s, j * ch as usize));
            }
            out = merge_multiplicities(out);
        }
        out.sort_by_key(|(s, i)| (*i, s.degree()));
        out
    }

    /// For p(t) = g(t^ch) over a finite field, the polynomial whose ch-th power is p.
    fn pth_root(&self) -> Poly {
        let f = &self.field;
        let ch = f.characteristic() as usize;
        let q = f.size().unwrap();
        // a^(1/ch) = a^(q/ch) in GF(q)
        let e = (q / ch as u64) as u128;
        let cs = (0..=self.degree() / ch).map(|j| f.pow_u(&self.coeff(j * ch), e)).collect();
        Poly::new(f, cs)
    }

    /// self^e mod m
    pub fn pow_mod(&self, mut e: u128, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut r = Poly::one(&self.field).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        r
    }

    /// Irreducible factorization over a finite field (monic factors with
    /// multiplicity, sorted by degree then coefficients).
    pub fn factor_finite(&self, seed: u64) -> Vec<(Poly, usize)> {
        assert!(self.field.is_finite());
        let mut out = Vec::new();
        for (s, mult) in self.squarefree_decomposition() {
            for (d, g) in s.distinct_degree() {
                for irr in g.equal_degree(d, seed) {
                    out.push((irr, mult));
                }
            }
        }
        let f = &self.field;
        out.sort_by(|(a, i), (b, j)| {
            (a.degree(), coeff_key(f, a), *i).cmp(&(b.degree(), coeff_key(f, b), *j))
        });
        out
    }

    fn distinct_degree(&self) -> Vec<(usize, Poly)> {
        let f = &self.field;
        let q = f.size().unwrap() as u128;
        let mut out = Vec::new();
        let mut rest = self.clone();
        let x = Poly::t(f);
        let mut h = x.clone();
        let mut d = 0;
        while rest.degree() > 0 {
            d += 1;
            if 2 * d > rest.degree() {
                out.push((rest.degree(), rest.clone()));
                break;
            }
            h = h.pow_mod(q, &rest);
            let g = h.sub(&x).gcd(&rest);
            if g.degree() > 0 {
                rest = rest.div_exact(&g);
                h = h.rem(&rest);
                out.push((d, g));
            }
        }
        out
    }

    /// Splits a squarefree product of degree-d irreducibles (Cantor-Zassenhaus;
    /// trace map in characteristic 2).
    fn equal_degree(&self, d: usize, seed: u64) -> Vec<Poly> {
        let f = &self.field;
        if self.degree() == d {
            return vec![self.monic()];
        }
        let q = f.size().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let n = self.degree();
            let a = Poly::new(f, (0..n).map(|_| f.random(&mut rng, 0)).collect());
            if a.degree() == 0 {
                continue;
            }
            let b = if f.characteristic() == 2 {
                // trace: a + a^2 + ... + a^(2^(k d - 1)) with q = 2^k
                let kd = (q.trailing_zeros() as usize) * d;
                let mut acc = a.clone();
                let mut cur = a.clone();
                for _ in 1..kd {
                    cur = cur.mul(&cur).rem(self);
                    acc = acc.add(&cur);
                }
                acc
            } else {
                // a^((q^d - 1)/2) = (a^(1+q+...+q^(d-1)))^((q-1)/2)
                let mut prod = Poly::one(f);
                let mut cur = a.clone();
                for _ in 0..d {
                    prod = prod.mul(&cur).rem(self);
                    cur = cur.pow_mod(q as u128, self);
                }
                prod.pow_mod(((q - 1) / 2) as u128, self).sub(&Poly::one(f))
            };
            let g = b.gcd(self);
            if g.degree() > 0 && g.degree() < n {
                let mut left = g.equal_degree(d, seed.wrapping_add(1));
                left.extend(self.div_exact(&g).equal_degree(d, seed.wrapping_add(2)));
                return left;
            }
        }
    }

    /// Distinct roots in the field. Finite fields: complete. Rationals: the
    /// rational root test (leading and constant coefficients must fit in u64
    /// after clearing denominators; otherwise only roots found by that test).
    pub fn roots(&self) -> Vec<Scalar> {
        let f = &self.field;
        if self.degree() == 0 {
            return vec![];
        }
        if f.is_finite() {
            let mut out: Vec<Scalar> = self
                .factor_finite(0)
                .into_iter()
                .filter(|(g, _)| g.degree() == 1)
                .map(|(g, _)| f.neg(&g.coeff(0)))
                .collect();
            out.sort_by_key(|a| f.index(a));
            return out;
        }
        rational_roots(self)
    }

    /// Coprime splitting; see [`CoprimeSplit`].
    pub fn coprime_split(&self, seed: u64) -> CoprimeSplit {
        let f = &self.field;
        if f.is_finite() {
            return CoprimeSplit::Factors(self.factor_finite(seed));
        }
        let mut pieces: Vec<(Poly, usize)> = Vec::new();
        for (s, mult) in self.squarefree_decomposition() {
            let mut rest = s.clone();
            for r in rational_roots(&s) {
                let lin = Poly::linear(f, &r);
                rest = rest.div_exact(&lin);
                pieces.push((lin, mult));
            }
            if rest.degree() > 0 {
                pieces.push((rest, mult));
            }
        }
        if pieces.len() == 1 {
            let (g, _) = &pieces[0];
            // rootless of degree ≤ 3 is irreducible
            if g.degree() > 3 {
                return CoprimeSplit::Indeterminate;
            }
        }
        CoprimeSplit::Factors(pieces)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(|c| self.field.render(c)).collect())
    }

    pub fn from_json(field: &Field, v: &Value) -> Result<Poly> {
        let arr = v.as_array().ok_or_else(|| Error::MalformedInput("polynomial must be an array".into()))?;
        let cs = arr.iter().map(|c| field.parse(c)).collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(field, cs))
    }
}

/// Advances `idx` through [0, bound)^len in lexicographic order, the first
/// position most significant. Returns false after the last tuple.
fn odometer(idx: &mut [u64], bound: u64) -> bool {
    for pos in (0..idx.len()).rev() {
        idx[pos] += 1;
        if idx[pos] < bound {
            return true;
        }
        idx[pos] = 0;
    }
    false
}

fn coeff_key(f: &Field, p: &Poly) -> Vec<u64> {
    p.coeffs.iter().rev().map(|c| f.index(c)).collect()
}

fn merge_multiplicities(v: Vec<(Poly, usize)>) -> Vec<(Poly, usize)> {
    // combine factors sharing a multiplicity (they are coprime)
    let mut out: Vec<(Poly, usize)> = Vec::new();
    for (s, i) in v {
        match out.iter_mut().find(|(_, j)| *j == i) {
            Some((t, _)) => *t = t.mul(&s),
            None => out.push((s, i)),
        }
    }
    out
}

fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let cur = ds.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            ds.extend(cur.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}

fn rational_roots(p: &Poly) -> Vec<Scalar> {
    let f = p.field();
    let mut out = Vec::new();
    // clear denominators
    let mut l = BigInt::one();
    for c in p.coeffs() {
        if let Scalar::Q(r) = c {
            l = l.lcm(r.denom());
        }
    }
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| match c {
            Scalar::Q(r) => (r * num_rational::BigRational::from_integer(l.clone())).to_integer(),
            _ => unreachable!(),
        })
        .collect();
    // strip zero roots
    let lowest = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if lowest > 0 {
        out.push(f.zero());
    }
    let ints = &ints[lowest..];
    if ints.len() < 2 {
        return out;
    }
    let (a0, an) = (ints[0].abs(), ints[ints.len() - 1].abs());
    let (Some(a0), Some(an)) = (a0.to_u64(), an.to_u64()) else {
        return out;
    };
    if a0 > 1 << 40 || an > 1 << 40 {
        return out;
    }
    let (d0, dn) = (divisors(a0), divisors(an));
    let mut cands = Vec::new();
    for a in &d0 {
        for b in &dn {
            for s in [1i64, -1] {
                let x = f.from_ratio(&(BigInt::from(*a) * s), &BigInt::from(*b)).unwrap();
                if !cands.contains(&x) {
                    cands.push(x);
                }
            }
        }
    }
    for x in cands {
        if f.is_zero(&p.eval(&x)) {
            out.push(x);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn bezout_examples() {
        let f = q();
        let (g, u, v) = Poly::gcd_bezout(&Poly::from_i64s(&f, &[-1, 1]), &Poly::from_i64s(&f, &[1, 1])).unwrap();
        assert!(g.is_one());
        let half = f.from_ratio(&BigInt::from(1), &BigInt::from(2)).unwrap();
        assert_eq!(u, Poly::constant(&f, f.neg(&half)));
        assert_eq!(v, Poly::constant(&f, half));
        let a = Poly::from_i64s(&f, &[1, -2, 1]);
        let b = Poly::from_i64s(&f, &[-1, 1]);
        assert_eq!(Poly::gcd_bezout(&a, &b).unwrap().0, b);
        let f3 = Field::prime(3).unwrap();
        let (g, u, v) = Poly::gcd_bezout(&Poly::from_i64s(&f3, &[1, 0, 1]), &Poly::from_i64s(&f3, &[-1, 0, 1])).unwrap();
        assert!(g.is_one());
        let chk = u.mul(&Poly::from_i64s(&f3, &[1, 0, 1])).add(&v.mul(&Poly::from_i64s(&f3, &[-1, 0, 1])));
        assert!(chk.is_one());
        assert_eq!(Poly::gcd_bezout(&Poly::zero(&f), &Poly::zero(&f)).unwrap_err(), Error::BothZero);
    }

    #[test]
    fn norm_and_trace() {
        let f = q();
        let (n, t) = Poly::from_i64s(&f, &[1, -2, 1]).norm_trace().unwrap();
        assert_eq!((n, t), (f.one(), f.from_i64(2)));
        let (n, t) = Poly::linear(&f, &f.from_i64(5)).norm_trace().unwrap();
        assert_eq!((n, t), (f.from_i64(5), f.from_i64(5)));
        assert_eq!(Poly::from_i64s(&f, &[1, 2]).norm_trace().unwrap_err(), Error::NotMonic);
        assert_eq!(Poly::one(&f).norm_trace().unwrap_err(), Error::ConstantInput);
    }

    #[test]
    fn reciprocals() {
        let f = q();
        let p = Poly::from_i64s(&f, &[1, -3, 1]);
        assert_eq!(p.reciprocal().unwrap(), (p.clone(), true));
        let (r, s) = Poly::from_i64s(&f, &[-2, 1]).reciprocal().unwrap();
        assert!(!s);
        assert_eq!(r.coeff(0), f.from_ratio(&BigInt::from(-1), &BigInt::from(2)).unwrap());
        assert!(Poly::linear_power(&f, &f.one(), 4).is_self_reciprocal());
        assert_eq!(Poly::from_i64s(&f, &[0, 1]).reciprocal().unwrap_err(), Error::ZeroConstantTerm);
    }

    #[test]
    fn lift_examples() {
        let f = Field::prime(7).unwrap();
        let s = f.from_i64(3);
        let r = Poly::linear(&f, &s);
        assert_eq!(r.symmetrized_lift(&f.one()).unwrap(), Poly::new(&f, vec![f.one(), f.neg(&s), f.one()]));
        // x = 2, pi = 6: (t - (x + pi/x)) lifts to (t - x)(t - pi/x)
        let (x, pi) = (f.from_i64(2), f.from_i64(6));
        let y = f.div(&pi, &x).unwrap();
        let r = Poly::linear(&f, &f.add(&x, &y));
        assert_eq!(r.symmetrized_lift(&pi).unwrap(), Poly::linear(&f, &x).mul(&Poly::linear(&f, &y)));
        let g = q();
        assert_eq!(Poly::monomial(&g, 2).symmetrized_lift(&g.one()).unwrap(), Poly::from_i64s(&g, &[1, 0, 1]).pow(2));
        assert_eq!(r.symmetrized_lift(&f.zero()).unwrap_err(), Error::ZeroD);
    }

    #[test]
    fn avoid_roots_examples() {
        let f = q();
        let p = Poly::avoid_roots(&f, 2, &f.one(), &[f.one()]).unwrap();
        assert_eq!(p, Poly::from_i64s(&f, &[1, 0, 1]));
        let f3 = Field::prime(3).unwrap();
        let p = Poly::avoid_roots(&f3, 2, &f3.one(), &[f3.one(), f3.from_i64(2)]).unwrap();
        assert_eq!(p, Poly::from_i64s(&f3, &[1, 0, 1]));
        let f2 = Field::prime(2).unwrap();
        let p = Poly::avoid_roots(&f2, 3, &f2.one(), &[f2.one()]).unwrap();
        assert_eq!(p.norm(), f2.one());
        assert!(!f2.is_zero(&p.eval(&f2.one())));
    }

    #[test]
    fn factor_examples() {
        let f3 = Field::prime(3).unwrap();
        let p = Poly::from_i64s(&f3, &[-1, 1]).pow(2).mul(&Poly::from_i64s(&f3, &[1, 1]));
        assert_eq!(
            p.coprime_split(0),
            CoprimeSplit::Factors(vec![(Poly::from_i64s(&f3, &[1, 1]), 1), (Poly::from_i64s(&f3, &[2, 1]), 2)])
        );
        let f2 = Field::prime(2).unwrap();
        let g = Poly::from_i64s(&f2, &[1, 1, 1]);
        assert_eq!(g.pow(2).coprime_split(0), CoprimeSplit::Factors(vec![(g, 2)]));
        let f = q();
        let h = Poly::from_i64s(&f, &[1, 0, 1]);
        assert_eq!(h.coprime_split(0), CoprimeSplit::Factors(vec![(h.clone(), 1)]));
        assert_eq!(h.pow(2).mul(&h).coprime_split(0), CoprimeSplit::Factors(vec![(h.clone(), 3)]));
        // quartic without rational roots: undecidable by the rational method
        assert_eq!(Poly::from_i64s(&f, &[2, 0, 0, 0, 1]).coprime_split(0), CoprimeSplit::Indeterminate);
    }

    #[test]
    fn factor_reconstructs_over_extension() {
        let f = Field::extension(2, vec![1, 1, 1]).unwrap();
        let mut p = Poly::one(&f);
        for i in 1..4 {
            p = p.mul(&Poly::linear(&f, &f.element(i)));
        }
        let p = p.mul(&p).mul(&Poly::from_i64s(&f, &[1, 1, 0, 1]));
        let fac = p.factor_finite(0);
        let mut back = Poly::one(&f);
        for (g, m) in &fac {
            back = back.mul(&g.pow(*m));
        }
        assert_eq!(back, p);
    }
}
