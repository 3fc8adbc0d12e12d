//! Exact fields: the rationals, prime fields GF(p) and extensions GF(p^k).

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::{factorize, is_prime, mul_mod, pow_mod};
use crate::error::{Error, Result};

/// Largest supported finite field order (fits multiplicative orders in a u64).
pub const MAX_FIELD_ORDER: u64 = 1 << 62;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FieldDescriptor {
    #[serde(rename = "Q")]
    Rationals,
    #[serde(rename = "Fp")]
    Prime { p: u64 },
    /// `modulus` is monic of degree `k`, coefficients low-to-high.
    #[serde(rename = "Fq")]
    Extension { p: u64, k: usize, modulus: Vec<u64> },
}

/// A field element in canonical form. Elements carry no field reference;
/// every operation goes through the owning [`Field`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Q(BigRational),
    P(u64),
    E(Vec<u64>),
}

/// Multiplicative order of a field element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    Infinite,
}

#[derive(Debug)]
struct Inner {
    desc: FieldDescriptor,
    p: u64,
    k: usize,
    modulus: Vec<u64>,
    size: Option<u64>,
}

/// Cheaply clonable handle to an immutable field context.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.desc == other.0.desc
    }
}
impl Eq for Field {}

impl Field {
    pub fn new(desc: FieldDescriptor) -> Result<Field> {
        let inner = match &desc {
            FieldDescriptor::Rationals => Inner {
                desc: desc.clone(),
                p: 0,
                k: 1,
                modulus: vec![],
                size: None,
            },
            FieldDescriptor::Prime { p } => {
                if !is_prime(*p) {
                    return Err(Error::CompositeModulus(*p));
                }
                if *p > MAX_FIELD_ORDER {
                    return Err(Error::FieldTooLarge(format!("p = {p}")));
                }
                Inner {
                    desc: desc.clone(),
                    p: *p,
                    k: 1,
                    modulus: vec![],
                    size: Some(*p),
                }
            }
            FieldDescriptor::Extension { p, k, modulus } => {
                if !is_prime(*p) {
                    return Err(Error::CompositeModulus(*p));
                }
                if *k < 2 || modulus.len() != k + 1 || modulus[*k] != 1 {
                    return Err(Error::MalformedInput(
                        "extension modulus must be monic of degree k".into(),
                    ));
                }
                if modulus.iter().any(|&c| c >= *p) {
                    return Err(Error::MalformedInput("modulus coefficient out of range".into()));
                }
                let mut size: u64 = 1;
                for _ in 0..*k {
                    size = size
                        .checked_mul(*p)
                        .filter(|&s| s <= MAX_FIELD_ORDER)
                        .ok_or_else(|| Error::FieldTooLarge(format!("{p}^{k}")))?;
                }
                if !rabin_irreducible(modulus, *p) {
                    return Err(Error::ReducibleModulus);
                }
                Inner {
                    desc: desc.clone(),
                    p: *p,
                    k: *k,
                    modulus: modulus.clone(),
                    size: Some(size),
                }
            }
        };
        Ok(Field(Arc::new(inner)))
    }

    pub fn rationals() -> Field {
        Field::new(FieldDescriptor::Rationals).expect("rationals")
    }

    pub fn prime(p: u64) -> Result<Field> {
        Field::new(FieldDescriptor::Prime { p })
    }

    pub fn extension(p: u64, modulus: Vec<u64>) -> Result<Field> {
        let k = modulus.len().saturating_sub(1);
        Field::new(FieldDescriptor::Extension { p, k, modulus })
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.0.desc
    }

    pub fn name(&self) -> String {
        match &self.0.desc {
            FieldDescriptor::Rationals => "Q".into(),
            FieldDescriptor::Prime { p } => format!("GF({p})"),
            FieldDescriptor::Extension { p, k, .. } => format!("GF({p}^{k})"),
        }
    }

    /// 0 for the rationals.
    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    /// Number of elements, `None` for the rationals.
    pub fn size(&self) -> Option<u64> {
        self.0.size
    }

    pub fn is_finite(&self) -> bool {
        self.0.size.is_some()
    }

    pub fn zero(&self) -> Scalar {
        match &self.0.desc {
            FieldDescriptor::Rationals => Scalar::Q(BigRational::zero()),
            FieldDescriptor::Prime { .. } => Scalar::P(0),
            FieldDescriptor::Extension { .. } => Scalar::E(vec![0; self.0.k]),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match &self.0.desc {
            FieldDescriptor::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            FieldDescriptor::Prime { p } => Scalar::P(reduce_i64(n, *p)),
            FieldDescriptor::Extension { p, .. } => {
                let mut v = vec![0; self.0.k];
                v[0] = reduce_i64(n, *p);
                Scalar::E(v)
            }
        }
    }

    /// Rational number a/b mapped into the field; `None` when b vanishes.
    pub fn from_ratio(&self, a: &BigInt, b: &BigInt) -> Option<Scalar> {
        match &self.0.desc {
            FieldDescriptor::Rationals => {
                if b.is_zero() {
                    None
                } else {
                    Some(Scalar::Q(BigRational::new(a.clone(), b.clone())))
                }
            }
            _ => {
                let p = BigInt::from(self.0.p);
                let an = a.mod_floor(&p).to_i64()?;
                let bn = b.mod_floor(&p).to_i64()?;
                let bs = self.from_i64(bn);
                if self.is_zero(&bs) {
                    return None;
                }
                self.div(&self.from_i64(an), &bs).ok()
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Q(r) => r.is_zero(),
            Scalar::P(v) => *v == 0,
            Scalar::E(v) => v.iter().all(|&c| c == 0),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x + y),
            (Scalar::P(x), Scalar::P(y)) => Scalar::P((x + y) % self.0.p),
            (Scalar::E(x), Scalar::E(y)) => {
                Scalar::E(x.iter().zip(y).map(|(u, v)| (u + v) % self.0.p).collect())
            }
            _ => panic!("scalar kinds differ"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        let p = self.0.p;
        match a {
            Scalar::Q(x) => Scalar::Q(-x),
            Scalar::P(x) => Scalar::P((p - x) % p),
            Scalar::E(x) => Scalar::E(x.iter().map(|u| (p - u) % p).collect()),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x * y),
            (Scalar::P(x), Scalar::P(y)) => Scalar::P(mul_mod(*x, *y, self.0.p)),
            (Scalar::E(x), Scalar::E(y)) => Scalar::E(self.ext_mul(x, y)),
            _ => panic!("scalar kinds differ"),
        }
    }

    fn ext_mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let p = self.0.p;
        let k = self.0.k;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &u) in x.iter().enumerate() {
            if u == 0 {
                continue;
            }
            for (j, &v) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(u, v, p)) % p;
            }
        }
        let m = &self.0.modulus;
        for d in (k..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for j in 0..k {
                let sub = mul_mod(c, m[j], p);
                prod[d - k + j] = (prod[d - k + j] + p - sub) % p;
            }
        }
        prod.truncate(k);
        prod
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if self.is_zero(a) {
            return Err(Error::ZeroInput);
        }
        Ok(match a {
            Scalar::Q(x) => Scalar::Q(x.recip()),
            Scalar::P(x) => Scalar::P(pow_mod(*x, (self.0.p - 2) as u128, self.0.p)),
            Scalar::E(_) => self.pow_u(a, (self.0.size.unwrap() - 2) as u128),
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow_u(&self, a: &Scalar, mut e: u128) -> Scalar {
        let mut base = a.clone();
        let mut r = self.one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        r
    }

    /// Integer power; negative exponents invert (zero base panics there).
    pub fn pow(&self, a: &Scalar, e: i64) -> Scalar {
        if e >= 0 {
            self.pow_u(a, e as u128)
        } else {
            let inv = self.inv(a).expect("negative power of zero");
            self.pow_u(&inv, e.unsigned_abs() as u128)
        }
    }

    /// Element with the given enumeration index (finite fields only):
    /// base-p digits of the index are the coefficients, low to high.
    pub fn element(&self, index: u64) -> Scalar {
        match &self.0.desc {
            FieldDescriptor::Rationals => panic!("rationals are not enumerable by index"),
            FieldDescriptor::Prime { p } => Scalar::P(index % p),
            FieldDescriptor::Extension { p, .. } => {
                let mut v = vec![0; self.0.k];
                let mut n = index;
                for c in v.iter_mut() {
                    *c = n % p;
                    n /= p;
                }
                Scalar::E(v)
            }
        }
    }

    /// Inverse of [`Field::element`].
    pub fn index(&self, a: &Scalar) -> u64 {
        match a {
            Scalar::P(v) => *v,
            Scalar::E(v) => v.iter().rev().fold(0u64, |acc, &c| acc * self.0.p + c),
            Scalar::Q(_) => panic!("rationals have no index"),
        }
    }

    /// The canonical scalar sequence used by every deterministic search:
    /// 0, 1, -1, 2, -2, ... over the rationals, index order over finite fields.
    /// `None` once a finite field is exhausted.
    pub fn canonical(&self, n: u64) -> Option<Scalar> {
        match self.0.size {
            None => {
                let m = n.div_ceil(2) as i64;
                Some(self.from_i64(if n % 2 == 1 { m } else { -m }))
            }
            Some(q) => (n < q).then(|| self.element(n)),
        }
    }

    /// All elements of a finite field in index order.
    pub fn elements(&self) -> Vec<Scalar> {
        let q = self.0.size.expect("finite field");
        (0..q).map(|i| self.element(i)).collect()
    }

    /// Multiplicative order of a nonzero element.
    pub fn elt_order(&self, a: &Scalar) -> Result<Order> {
        if self.is_zero(a) {
            return Err(Error::ZeroInput);
        }
        match self.0.size {
            None => {
                if self.is_one(a) {
                    Ok(Order::Finite(1))
                } else if *a == self.from_i64(-1) {
                    Ok(Order::Finite(2))
                } else {
                    Ok(Order::Infinite)
                }
            }
            Some(q) => {
                let mut m = q - 1;
                for (r, e) in factorize(q - 1) {
                    for _ in 0..e {
                        if self.is_one(&self.pow_u(a, (m / r) as u128)) {
                            m /= r;
                        } else {
                            break;
                        }
                    }
                }
                Ok(Order::Finite(m))
            }
        }
    }

    /// Finite order as an option, convenient for case analysis.
    pub fn order_of(&self, a: &Scalar) -> Option<u64> {
        match self.elt_order(a) {
            Ok(Order::Finite(m)) => Some(m),
            _ => None,
        }
    }

    /// A square root of -1, choosing the least index; 1 in characteristic 2.
    pub fn sqrt_minus_one(&self) -> Option<Scalar> {
        let q = self.0.size?;
        if self.0.p == 2 {
            return Some(self.one());
        }
        if q % 4 != 1 {
            return None;
        }
        let minus_one = self.from_i64(-1);
        let mut idx = 2;
        let nonresidue = loop {
            let h = self.element(idx);
            if self.pow_u(&h, ((q - 1) / 2) as u128) == minus_one {
                break h;
            }
            idx += 1;
        };
        let i = self.pow_u(&nonresidue, ((q - 1) / 4) as u128);
        let j = self.neg(&i);
        Some(if self.index(&i) <= self.index(&j) { i } else { j })
    }

    pub fn render(&self, a: &Scalar) -> Value {
        match a {
            Scalar::Q(r) => {
                if r.is_integer() {
                    Value::String(r.numer().to_string())
                } else {
                    Value::String(format!("{}/{}", r.numer(), r.denom()))
                }
            }
            Scalar::P(v) => Value::String(v.to_string()),
            Scalar::E(v) => Value::Array(v.iter().map(|&c| Value::from(c)).collect()),
        }
    }

    /// Compact human-readable form.
    pub fn show(&self, a: &Scalar) -> String {
        match self.render(a) {
            Value::String(s) => s,
            other => other.to_string(),
        }
    }

    pub fn parse(&self, v: &Value) -> Result<Scalar> {
        let bad = |msg: &str| Error::MalformedInput(format!("{msg}: {v}"));
        match &self.0.desc {
            FieldDescriptor::Extension { p, k, .. } => {
                let arr = match v {
                    Value::Array(a) => a,
                    _ => return Err(bad("expected coefficient array")),
                };
                if arr.len() != *k {
                    return Err(bad("wrong coefficient count"));
                }
                let mut out = Vec::with_capacity(*k);
                for c in arr {
                    let n = match c {
                        Value::Number(n) => n.as_u64(),
                        Value::String(s) => s.trim().parse::<u64>().ok(),
                        _ => None,
                    }
                    .ok_or_else(|| bad("bad coefficient"))?;
                    if n >= *p {
                        return Err(bad("coefficient not reduced"));
                    }
                    out.push(n);
                }
                Ok(Scalar::E(out))
            }
            _ => {
                let s = match v {
                    Value::String(s) => s.trim().to_string(),
                    Value::Number(n) => n.to_string(),
                    _ => return Err(bad("expected scalar string")),
                };
                self.parse_str(&s).ok_or_else(|| bad("unparsable scalar"))
            }
        }
    }

    fn parse_str(&self, s: &str) -> Option<Scalar> {
        let (a, b) = match s.split_once('/') {
            Some((a, b)) => (a.trim().parse::<BigInt>().ok()?, b.trim().parse::<BigInt>().ok()?),
            None => (s.parse::<BigInt>().ok()?, BigInt::one()),
        };
        match &self.0.desc {
            FieldDescriptor::Rationals => self.from_ratio(&a, &b),
            FieldDescriptor::Prime { p } => {
                // residues must be given reduced and without a denominator
                if !b.is_one() || a.is_negative() || a >= BigInt::from(*p) {
                    return None;
                }
                Some(Scalar::P(a.to_u64()?))
            }
            FieldDescriptor::Extension { .. } => None,
        }
    }

    /// Uniform random element (finite fields) or an integer in [-bound, bound].
    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> Scalar {
        match self.0.size {
            Some(q) => self.element(rng.gen_range(0..q)),
            None => self.from_i64(rng.gen_range(-bound..=bound)),
        }
    }

    pub fn random_nonzero<R: rand::Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> Scalar {
        loop {
            let a = self.random(rng, bound);
            if !self.is_zero(&a) {
                return a;
            }
        }
    }
}

fn reduce_i64(n: i64, p: u64) -> u64 {
    (n as i128).rem_euclid(p as i128) as u64
}

// --- small polynomial helpers over GF(p), used only for the irreducibility test

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn polymod(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = pow_mod(m[dm], (p - 2) as u128, p);
    while r.len() > dm {
        let d = r.len() - 1;
        let c = mul_mod(r[d], lead_inv, p);
        for j in 0..=dm {
            let s = mul_mod(c, m[j], p);
            r[d - dm + j] = (r[d - dm + j] + p - s) % p;
        }
        r = trim(r);
    }
    r
}

fn polymulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &u) in a.iter().enumerate() {
        for (j, &v) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mul_mod(u, v, p)) % p;
        }
    }
    polymod(&prod, m, p)
}

fn polypowmod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut base = polymod(a, m, p);
    let mut r = vec![1u64];
    while e > 0 {
        if e & 1 == 1 {
            r = polymulmod(&r, &base, m, p);
        }
        base = polymulmod(&base, &base, m, p);
        e >>= 1;
    }
    r
}

fn polygcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = polymod(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin's test: f of degree k is irreducible over GF(p) iff x^(p^k) = x mod f
/// and gcd(x^(p^(k/r)) - x, f) = 1 for every prime r dividing k.
fn rabin_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    let frob = |j: usize| {
        let mut h = vec![0u64, 1];
        for _ in 0..j {
            h = polypowmod(&h, p, f, p);
        }
        h
    };
    let sub_x = |mut h: Vec<u64>| {
        h.resize(h.len().max(2), 0);
        h[1] = (h[1] + p - 1) % p;
        trim(h)
    };
    if !sub_x(frob(k)).is_empty() {
        return false;
    }
    for (r, _) in factorize(k as u64) {
        let g = polygcd(&sub_x(frob(k / r as usize)), f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_errors() {
        assert_eq!(Field::prime(7).unwrap().characteristic(), 7);
        assert_eq!(Field::prime(6).unwrap_err(), Error::CompositeModulus(6));
        assert!(Field::extension(3, vec![1, 0, 1]).is_ok());
        // t^2 - 1 = (t-1)(t+1) over GF(3)
        assert_eq!(Field::extension(3, vec![2, 0, 1]).unwrap_err(), Error::ReducibleModulus);
        // t^4 + t + 1 is irreducible over GF(2); t^4 + 1 is not
        assert!(Field::extension(2, vec![1, 1, 0, 0, 1]).is_ok());
        assert!(Field::extension(2, vec![1, 0, 0, 0, 1]).is_err());
    }

    #[test]
    fn modulus_has_no_root_iff_accepted_degree_two() {
        // degree 2 and 3 moduli are irreducible exactly when rootless
        for p in [2u64, 3, 5] {
            for a in 0..p {
                for b in 0..p {
                    let m = vec![a, b, 1];
                    let rootless = (0..p).all(|x| (a + b * x + x * x) % p != 0);
                    assert_eq!(Field::extension(p, m).is_ok(), rootless);
                }
            }
        }
    }

    #[test]
    fn orders() {
        let f = Field::prime(7).unwrap();
        assert_eq!(f.elt_order(&f.from_i64(3)).unwrap(), Order::Finite(6));
        assert_eq!(f.elt_order(&f.from_i64(2)).unwrap(), Order::Finite(3));
        assert_eq!(f.elt_order(&f.one()).unwrap(), Order::Finite(1));
        assert_eq!(f.elt_order(&f.zero()).unwrap_err(), Error::ZeroInput);
        let q = Field::rationals();
        assert_eq!(q.elt_order(&q.from_i64(2)).unwrap(), Order::Infinite);
        assert_eq!(q.elt_order(&q.from_i64(-1)).unwrap(), Order::Finite(2));
    }

    #[test]
    fn order_matches_power_scan() {
        let f = Field::extension(3, vec![1, 0, 1]).unwrap();
        for a in f.elements().into_iter().skip(1) {
            let mut m = 1;
            let mut x = a.clone();
            while !f.is_one(&x) {
                x = f.mul(&x, &a);
                m += 1;
            }
            assert_eq!(f.elt_order(&a).unwrap(), Order::Finite(m));
        }
    }

    #[test]
    fn square_roots_of_minus_one() {
        let show = |p: u64| Field::prime(p).unwrap().sqrt_minus_one().map(|s| Field::prime(p).unwrap().show(&s));
        assert_eq!(show(5).as_deref(), Some("2"));
        assert_eq!(show(13).as_deref(), Some("5"));
        assert_eq!(show(7), None);
        assert_eq!(show(2).as_deref(), Some("1"));
        let f = Field::extension(3, vec![1, 0, 1]).unwrap();
        let i = f.sqrt_minus_one().unwrap();
        assert_eq!(f.mul(&i, &i), f.from_i64(-1));
        assert!(Field::rationals().sqrt_minus_one().is_none());
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for f in [Field::prime(2).unwrap(), Field::prime(3).unwrap(), Field::extension(2, vec![1, 1, 1]).unwrap()] {
            let els = f.elements();
            for a in &els {
                for b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in &els {
                        assert_eq!(f.mul(a, &f.add(b, c)), f.add(&f.mul(a, b), &f.mul(a, c)));
                        assert_eq!(f.mul(&f.mul(a, b), c), f.mul(a, &f.mul(b, c)));
                    }
                }
                if !f.is_zero(a) {
                    assert!(f.is_one(&f.mul(a, &f.inv(a).unwrap())));
                }
            }
        }
    }

    #[test]
    fn render_parse_roundtrip() {
        let q = Field::rationals();
        let x = q.from_ratio(&BigInt::from(-6), &BigInt::from(4)).unwrap();
        assert_eq!(q.show(&x), "-3/2");
        assert_eq!(q.parse(&q.render(&x)).unwrap(), x);
        let f = Field::extension(5, vec![2, 0, 1]).unwrap();
        for a in f.elements() {
            assert_eq!(f.parse(&f.render(&a)).unwrap(), a);
        }
        let g = Field::prime(7).unwrap();
        assert!(g.parse(&Value::String("9".into())).is_err());
    }

    #[test]
    fn descriptor_json() {
        let d: FieldDescriptor = serde_json::from_str(r#"{"kind":"Fq","p":3,"k":2,"modulus":[1,0,1]}"#).unwrap();
        assert_eq!(d, FieldDescriptor::Extension { p: 3, k: 2, modulus: vec![1, 0, 1] });
        assert_eq!(serde_json::to_string(&FieldDescriptor::Prime { p: 7 }).unwrap(), r#"{"kind":"Fp","p":7}"#);
        assert_eq!(serde_json::to_string(&FieldDescriptor::Rationals).unwrap(), r#"{"kind":"Q"}"#);
    }
}
