//! Exhaustive ground truth over small GL_n(F_q), with a similarity-class
//! fallback for scalar matrices beyond the enumeration budget.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::adjacency::Mode;
use crate::canonical::are_similar;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::Mat;
use crate::pipelines::pattern_string;

/// Hard cap on q^(n²) for `enumerate_quadratic`.
pub const ENUM_BOUND: u128 = 100_000_000;

/// Largest q^(n²) for which `decide` builds a table on its own; above this
/// it switches to the class reduction.
pub const TABLE_BUDGET: u128 = 1 << 20;

/// Matrix entries as field indices, row-major.
pub type Key = Vec<u64>;

/// Which quadratic polynomial the elements must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Annihilator {
    /// S² = I
    Involution,
    /// (U - I)² = 0
    Unipotent,
}

impl From<Mode> for Annihilator {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Involution => Annihilator::Involution,
            Mode::Unipotent => Annihilator::Unipotent,
        }
    }
}

fn annihilates(m: &Mat, a: Annihilator) -> bool {
    match a {
        Annihilator::Involution => m.mul(m).is_identity(),
        Annihilator::Unipotent => {
            let f = m.field().clone();
            let d = m.add_scalar(&f.neg(&f.one()));
            d.mul(&d).is_zero()
        }
    }
}

fn space_size(field: &Field, n: usize) -> Result<u128> {
    let q = field.size().ok_or(Error::TooLarge)? as u128;
    let mut total: u128 = 1;
    for _ in 0..n * n {
        total = total.checked_mul(q).ok_or(Error::TooLarge)?;
        if total > ENUM_BOUND {
            return Err(Error::TooLarge);
        }
    }
    Ok(total)
}

/// Whether `decide` would enumerate GL_n over this field itself.
pub fn within_budget(field: &Field, n: usize) -> bool {
    space_size(field, n).map(|s| s <= TABLE_BUDGET).unwrap_or(false)
}

pub fn key(m: &Mat) -> Key {
    let f = m.field();
    m.entries().iter().map(|x| f.index(x)).collect()
}

pub fn from_key(field: &Field, n: usize, k: &[u64]) -> Mat {
    let rows = (0..n)
        .map(|i| (0..n).map(|j| field.element(k[i * n + j])).collect())
        .collect();
    Mat::from_rows(field, rows)
}

/// Every n×n matrix over the finite field, in row-major lexicographic order,
/// that passes `keep`. Workers split on the leading entry; concatenating
/// their outputs in lead order gives the canonical order.
fn scan<F>(field: &Field, n: usize, keep: F) -> Result<Vec<Mat>>
where
    F: Fn(&Mat) -> bool + Sync,
{
    space_size(field, n)?;
    if n == 0 {
        return Ok(vec![Mat::identity(field, 0)]);
    }
    let q = field.size().expect("finite");
    let cells = n * n;
    let tail: u64 = q.pow((cells - 1) as u32);
    let parts: Vec<Vec<Mat>> = (0..q)
        .into_par_iter()
        .map(|lead| {
            let mut out = vec![];
            let mut digits = vec![0u64; cells];
            digits[0] = lead;
            for idx in 0..tail {
                let mut r = idx;
                for d in digits[1..].iter_mut().rev() {
                    *d = r % q;
                    r /= q;
                }
                let m = from_key(field, n, &digits);
                if keep(&m) {
                    out.push(m);
                }
            }
            out
        })
        .collect();
    Ok(parts.into_iter().flatten().collect())
}

/// All elements of GL_n(F_q) annihilated by the given quadratic.
pub fn enumerate_quadratic(n: usize, field: &Field, annihilator: Annihilator) -> Result<Vec<Mat>> {
    scan(field, n, |m| m.is_invertible() && annihilates(m, annihilator))
}

/// All of GL_n(F_q).
pub fn enumerate_gl(n: usize, field: &Field) -> Result<Vec<Mat>> {
    scan(field, n, |m| m.is_invertible())
}

/// The involutions and U₂-matrices of one GL_n(F_q).
#[derive(Debug, Clone)]
pub struct OracleTable {
    field: Field,
    n: usize,
    involutions: Vec<Mat>,
    unipotents: Vec<Mat>,
}

impl OracleTable {
    pub fn new(field: &Field, n: usize) -> Result<OracleTable> {
        Ok(OracleTable {
            field: field.clone(),
            n,
            involutions: enumerate_quadratic(n, field, Annihilator::Involution)?,
            unipotents: enumerate_quadratic(n, field, Annihilator::Unipotent)?,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn elements(&self, mode: Mode) -> &[Mat] {
        match mode {
            Mode::Involution => &self.involutions,
            Mode::Unipotent => &self.unipotents,
        }
    }

    fn covers(&self, m: &Mat) -> Result<()> {
        if m.field() != &self.field || !m.is_square() || m.rows() != self.n {
            return Err(Error::TableMismatch);
        }
        Ok(())
    }

    /// Products S₁⋯S_k with S_i of the given kinds, as a set of keys.
    pub fn product_set(&self, kinds: &[Mode]) -> BTreeSet<Key> {
        let mut cur: BTreeSet<Key> = BTreeSet::from([key(&Mat::identity(&self.field, self.n))]);
        for &k in kinds {
            cur = self.extend(&cur, k);
        }
        cur
    }

    fn extend(&self, set: &BTreeSet<Key>, kind: Mode) -> BTreeSet<Key> {
        let els = self.elements(kind);
        let left: Vec<&Key> = set.iter().collect();
        left.par_iter()
            .flat_map_iter(|k| {
                let a = from_key(&self.field, self.n, k);
                els.iter().map(move |s| key(&a.mul(s)))
            })
            .collect::<Vec<_>>()
            .into_iter()
            .collect()
    }

    /// Whether M is a product matching `kinds`, by meet in the middle.
    pub fn contains(&self, m: &Mat, kinds: &[Mode]) -> Result<bool> {
        self.covers(m)?;
        if !m.is_invertible() {
            return Ok(false);
        }
        let h = kinds.len().div_ceil(2);
        let left = self.product_set(&kinds[..h]);
        let right = self.product_set(&kinds[h..]);
        Ok(right.iter().any(|k| {
            let b = from_key(&self.field, self.n, k);
            let need = m.mul(&b.inverse().expect("invertible"));
            left.contains(&key(&need))
        }))
    }

    /// Fewest factors of one kind with product M (0 for the identity),
    /// `None` if none up to `max_len`.
    pub fn length(&self, m: &Mat, mode: Mode, max_len: usize) -> Result<Option<usize>> {
        self.covers(m)?;
        let target = key(m);
        let mut cur: BTreeSet<Key> = BTreeSet::from([key(&Mat::identity(&self.field, self.n))]);
        for len in 0..=max_len {
            if cur.contains(&target) {
                return Ok(Some(len));
            }
            if len < max_len {
                let next = self.extend(&cur, mode);
                if next == cur {
                    break;
                }
                cur = next;
            }
        }
        Ok(None)
    }

    /// ℓ for every element reachable with at most `max_len` factors of one
    /// kind, by breadth-first search from the identity.
    pub fn lengths(&self, mode: Mode, max_len: usize) -> BTreeMap<Key, usize> {
        let mut seen = BTreeMap::from([(key(&Mat::identity(&self.field, self.n)), 0)]);
        let mut frontier: BTreeSet<Key> = seen.keys().cloned().collect();
        for len in 1..=max_len {
            let next: BTreeSet<Key> = self.extend(&frontier, mode).into_iter().filter(|k| !seen.contains_key(k)).collect();
            if next.is_empty() {
                break;
            }
            for k in &next {
                seen.insert(k.clone(), len);
            }
            frontier = next;
        }
        seen
    }

    /// Member counts for every I/U pattern of length 1..=max_len. Prefix
    /// sets are shared between patterns.
    pub fn pattern_counts(&self, max_len: usize) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        let mut layer: Vec<(Vec<Mode>, BTreeSet<Key>)> =
            vec![(vec![], BTreeSet::from([key(&Mat::identity(&self.field, self.n))]))];
        for _ in 0..max_len {
            let mut next = vec![];
            for (p, set) in &layer {
                for k in [Mode::Involution, Mode::Unipotent] {
                    let mut q = p.clone();
                    q.push(k);
                    let s = self.extend(set, k);
                    out.insert(pattern_string(&q), s.len());
                    next.push((q, s));
                }
            }
            layer = next;
        }
        out
    }

    pub fn to_json(&self, max_len: usize) -> Value {
        let group = enumerate_gl(self.n, &self.field).map(|v| v.len()).unwrap_or(0);
        json!({
            "field": self.field.name(),
            "n": self.n,
            "group_order": group,
            "involutions": self.involutions.len(),
            "unipotents": self.unipotents.len(),
            "patterns": self.pattern_counts(max_len),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Member,
    NonMember,
    Unknown,
}

impl Verdict {
    fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Member
        } else {
            Verdict::NonMember
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Member => "member",
            Verdict::NonMember => "non-member",
            Verdict::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exhaustive,
    ClassReduction,
    None,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exhaustive => "exhaustive",
            Method::ClassReduction => "class-reduction",
            Method::None => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Membership {
    pub verdict: Verdict,
    pub method: Method,
}

/// M ∈ pattern, using `table` when given, building one when the space is
/// within `TABLE_BUDGET`, and the class reduction otherwise.
pub fn decide(m: &Mat, kinds: &[Mode], table: Option<&OracleTable>) -> Result<Membership> {
    if !m.is_square() {
        return Err(Error::NotSquare);
    }
    if let Some(t) = table {
        let v = t.contains(m, kinds)?;
        return Ok(Membership { verdict: Verdict::from_bool(v), method: Method::Exhaustive });
    }
    let n = m.rows();
    if within_budget(m.field(), n) {
        let t = OracleTable::new(m.field(), n)?;
        let v = t.contains(m, kinds)?;
        return Ok(Membership { verdict: Verdict::from_bool(v), method: Method::Exhaustive });
    }
    let verdict = class_reduction(m, kinds);
    let method = if verdict == Verdict::Unknown { Method::None } else { Method::ClassReduction };
    Ok(Membership { verdict, method })
}

/// Representatives of the conjugacy classes of one kind.
pub fn class_representatives(field: &Field, n: usize, mode: Mode) -> Vec<Mat> {
    let one = field.one();
    let j2 = Mat::jordan_cell(field, &one, 2);
    let unipotent = |j: usize| {
        let mut parts = vec![Mat::identity(field, n - 2 * j)];
        parts.extend(std::iter::repeat_n(j2.clone(), j));
        Mat::dsum(&parts)
    };
    if mode == Mode::Unipotent || field.characteristic() == 2 {
        return (0..=n / 2).map(unipotent).collect();
    }
    let m1 = field.neg(&one);
    (0..=n)
        .map(|a| Mat::dsum(&[Mat::identity(field, a), Mat::scalar(field, n - a, &m1)]))
        .collect()
}

fn is_scalar_matrix(m: &Mat) -> Option<Scalar> {
    if m.rows() == 0 {
        return None;
    }
    let a = m.at(0, 0).clone();
    (m.sub(&Mat::scalar(m.field(), m.rows(), &a)).is_zero()).then_some(a)
}

/// Exact tests for one and two factors. Two involutions: similar to the
/// inverse. Two U₂-matrices: additionally every Jordan cell at -1 has even
/// size (char ≠ 2). Mixed pairs have no test here.
fn short_membership(m: &Mat, kinds: &[Mode]) -> Option<bool> {
    let f = m.field().clone();
    let Ok(inv) = m.inverse() else { return Some(false) };
    match kinds {
        [] => Some(m.is_identity()),
        [k] => Some(annihilates(m, (*k).into())),
        [a, b] if a == b => {
            let mut ok = are_similar(m, &inv);
            if ok && *a == Mode::Unipotent && f.characteristic() != 2 {
                let cells = m.jordan_cell_counts(&f.neg(&f.one())).ok()?;
                ok = cells.iter().all(|c| c % 2 == 0);
            }
            Some(ok)
        }
        _ => None,
    }
}

/// Conjugacy-invariant reduction. For scalar M = αI and a length-3 pattern
/// (which always repeats a kind, and whose order does not matter up to
/// conjugacy), M = S·X with S in the repeated pair class and X of the other
/// kind, and the class of M·X⁻¹ depends only on the class of X.
pub fn class_reduction(m: &Mat, kinds: &[Mode]) -> Verdict {
    if !m.is_square() || !m.is_invertible() {
        return Verdict::NonMember;
    }
    if let Some(b) = short_membership(m, kinds) {
        return Verdict::from_bool(b);
    }
    if kinds.len() != 3 || is_scalar_matrix(m).is_none() {
        return Verdict::Unknown;
    }
    let ni = kinds.iter().filter(|&&k| k == Mode::Involution).count();
    let (pair, other) = if ni >= 2 {
        (Mode::Involution, if ni == 3 { Mode::Involution } else { Mode::Unipotent })
    } else {
        (Mode::Unipotent, if ni == 0 { Mode::Unipotent } else { Mode::Involution })
    };
    let f = m.field();
    let mut unknown = false;
    for x in class_representatives(f, m.rows(), other) {
        let rest = m.mul(&x.inverse().expect("invertible"));
        match short_membership(&rest, &[pair, pair]) {
            Some(true) => return Verdict::Member,
            Some(false) => {}
            None => unknown = true,
        }
    }
    if unknown {
        Verdict::Unknown
    } else {
        Verdict::NonMember
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipelines::parse_pattern;

    #[test]
    fn small_counts() {
        let f2 = Field::prime(2).unwrap();
        let f3 = Field::prime(3).unwrap();
        assert_eq!(enumerate_quadratic(2, &f2, Annihilator::Involution).unwrap().len(), 4);
        assert_eq!(enumerate_quadratic(2, &f3, Annihilator::Involution).unwrap().len(), 14);
        assert_eq!(enumerate_quadratic(2, &f3, Annihilator::Unipotent).unwrap().len(), 9);
        assert_eq!(enumerate_gl(2, &f3).unwrap().len(), 48);
    }

    #[test]
    fn order_is_lexicographic() {
        let f3 = Field::prime(3).unwrap();
        let keys: Vec<Key> = enumerate_gl(2, &f3).unwrap().iter().map(key).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn bound_enforced() {
        let f11 = Field::prime(11).unwrap();
        assert!(matches!(enumerate_quadratic(3, &f11, Annihilator::Involution), Err(Error::TooLarge)));
        assert!(matches!(enumerate_quadratic(1, &Field::rationals(), Annihilator::Involution), Err(Error::TooLarge)));
    }

    #[test]
    fn scalar_seven() {
        let f7 = Field::prime(7).unwrap();
        let m = Mat::scalar(&f7, 3, &f7.from_i64(2));
        let r = decide(&m, &parse_pattern("III").unwrap(), None).unwrap();
        assert_eq!(r, Membership { verdict: Verdict::NonMember, method: Method::ClassReduction });
        let r = decide(&m, &parse_pattern("IIUU").unwrap(), None).unwrap();
        assert_eq!(r.verdict, Verdict::Unknown);
    }

    #[test]
    fn mismatch() {
        let f3 = Field::prime(3).unwrap();
        let t = OracleTable::new(&f3, 2).unwrap();
        let m = Mat::identity(&f3, 3);
        assert!(matches!(t.contains(&m, &[Mode::Involution]), Err(Error::TableMismatch)));
    }
}
