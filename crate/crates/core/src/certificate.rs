//! Factorization certificates: ordered quadratic factors whose product is an
//! augmented input A ⊕ μI_k, with a verifier that shares no code with the
//! constructions, and the combinators the pipelines assemble results with.

use serde_json::{json, Value};

use crate::adjacency::{AdjacencyCertificate, Mode, QuadAnnihilator};
use crate::error::{Error, Result};
use crate::field::{Field, FieldDescriptor, Scalar};
use crate::matrix::Mat;
use crate::two_factor::TwoFactorResult;

pub const SCHEMA: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mu {
    One,
    MinusOne,
    I,
}

impl Mu {
    pub fn label(self) -> &'static str {
        match self {
            Mu::One => "1",
            Mu::MinusOne => "-1",
            Mu::I => "i",
        }
    }

    pub fn from_label(s: &str) -> Option<Mu> {
        match s {
            "1" => Some(Mu::One),
            "-1" => Some(Mu::MinusOne),
            "i" => Some(Mu::I),
            _ => None,
        }
    }

    pub fn value(self, field: &Field) -> Result<Scalar> {
        match self {
            Mu::One => Ok(field.one()),
            Mu::MinusOne => Ok(field.from_i64(-1)),
            Mu::I => field.sqrt_minus_one().ok_or(Error::NoSqrtMinusOne),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Augmentation {
    pub mu: Mu,
    pub k: usize,
}

impl Augmentation {
    pub fn none() -> Self {
        Augmentation { mu: Mu::One, k: 0 }
    }

    pub fn apply(&self, a: &Mat) -> Result<Mat> {
        let f = a.field();
        Ok(Mat::dsum2(a, &Mat::scalar(f, self.k, &self.mu.value(f)?)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub matrix: Mat,
    pub annihilator: QuadAnnihilator,
    pub kind: Mode,
}

impl Factor {
    pub fn new(matrix: Mat, kind: Mode) -> Factor {
        let annihilator = kind.annihilator(matrix.field());
        Factor { matrix, annihilator, kind }
    }

    fn conj_by(&self, p: &Mat, pi: &Mat) -> Factor {
        Factor { matrix: p.mul(&self.matrix).mul(pi), annihilator: self.annihilator.clone(), kind: self.kind }
    }
}

/// Ordered factors with their product, plus a transcript of the steps.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub factors: Vec<Factor>,
    pub transcript: Vec<Value>,
}

impl Factorization {
    pub fn kinds(&self) -> Vec<Mode> {
        self.factors.iter().map(|f| f.kind).collect()
    }

    pub fn size(&self) -> usize {
        self.factors.first().map_or(0, |f| f.matrix.rows())
    }

    pub fn product(&self) -> Mat {
        let mut it = self.factors.iter();
        let first = it.next().expect("nonempty factorization").matrix.clone();
        it.fold(first, |acc, f| acc.mul(&f.matrix))
    }

    pub fn note(mut self, step: Value) -> Self {
        self.transcript.push(step);
        self
    }

    /// Identity factors of the given kinds.
    pub fn identity(field: &Field, n: usize, kinds: &[Mode]) -> Factorization {
        Factorization { factors: kinds.iter().map(|&k| Factor::new(Mat::identity(field, n), k)).collect(), transcript: vec![] }
    }

    pub fn from_two(r: &TwoFactorResult) -> Factorization {
        let mode = |a: &QuadAnnihilator| a.mode(r.m.field()).unwrap_or(Mode::Unipotent);
        Factorization {
            factors: vec![
                Factor { matrix: r.f1.clone(), annihilator: r.ann1.clone(), kind: mode(&r.ann1) },
                Factor { matrix: r.f2.clone(), annihilator: r.ann2.clone(), kind: mode(&r.ann2) },
            ],
            transcript: vec![],
        }
    }

    /// P·F·P^{-1} factorwise: a factorization of P·M·P^{-1}.
    pub fn conjugate(&self, p: &Mat) -> Result<Factorization> {
        let pi = p.inverse()?;
        Ok(Factorization { factors: self.factors.iter().map(|f| f.conj_by(p, &pi)).collect(), transcript: self.transcript.clone() })
    }

    /// Blockwise sum of factorizations with identical kind sequences.
    pub fn direct_sum(parts: &[Factorization]) -> Result<Factorization> {
        let parts: Vec<&Factorization> = parts.iter().filter(|p| p.size() > 0).collect();
        let first = parts.first().ok_or_else(|| Error::PreconditionViolated("empty direct sum".into()))?;
        let kinds = first.kinds();
        if parts.iter().any(|p| p.kinds() != kinds) {
            return Err(Error::PreconditionViolated("direct sum of different kind sequences".into()));
        }
        let factors = (0..kinds.len())
            .map(|i| {
                let m = Mat::dsum(&parts.iter().map(|p| p.factors[i].matrix.clone()).collect::<Vec<_>>());
                Factor::new(m, kinds[i])
            })
            .collect();
        let transcript = parts.iter().flat_map(|p| p.transcript.iter().cloned()).collect();
        Ok(Factorization { factors, transcript })
    }

    /// From S·A ~ T (certificate) and a factorization of T, a factorization of
    /// A with S^{-1} in front.
    pub fn prepend_adjacency(cert: &AdjacencyCertificate, rest: &Factorization) -> Result<Factorization> {
        if rest.product() != cert.target {
            return Err(Error::VerificationFailed("factorization does not match the adjacency target".into()));
        }
        let f = cert.s.field();
        let kind = cert.mode().ok_or_else(|| Error::VerificationFailed("adjacency factor is not quadratic".into()))?;
        let qi = cert.q.inverse()?;
        let (g, d) = (f.inv(&cert.annihilator.gamma)?, f.inv(&cert.annihilator.delta)?);
        let lead = Factor { matrix: cert.s.inverse()?, annihilator: QuadAnnihilator::new(g, d), kind };
        let mut factors = vec![lead];
        factors.extend(rest.factors.iter().map(|x| x.conj_by(&cert.q, &qi)));
        Ok(Factorization { factors, transcript: rest.transcript.clone() })
    }

    /// F_i·F_{i+1} = (F_i·F_{i+1}·F_i^{-1})·F_i.
    pub fn swap_adjacent(&mut self, i: usize) -> Result<()> {
        let a = self.factors[i].clone();
        let b = self.factors[i + 1].clone();
        let moved = Factor { matrix: a.matrix.mul(&b.matrix).mul(&a.matrix.inverse()?), annihilator: b.annihilator, kind: b.kind };
        self.factors[i] = moved;
        self.factors[i + 1] = a;
        Ok(())
    }

    /// Same product, factors reordered to the requested kind sequence.
    pub fn reorder(&self, kinds: &[Mode]) -> Result<Factorization> {
        let mut cur = self.clone();
        if cur.factors.len() != kinds.len() {
            return Err(Error::UnsupportedPattern(format!("{} factors for a pattern of length {}", cur.factors.len(), kinds.len())));
        }
        for pos in 0..kinds.len() {
            let Some(j) = (pos..kinds.len()).find(|&j| cur.factors[j].kind == kinds[pos]) else {
                return Err(Error::UnsupportedPattern("kind multiset differs".into()));
            };
            for s in (pos..j).rev() {
                cur.swap_adjacent(s)?;
            }
        }
        Ok(cur)
    }

    /// Relabels factors that satisfy both quadratic relations (identity or
    /// characteristic 2) to reach the requested kinds.
    pub fn relabel(&self, kinds: &[Mode]) -> Result<Factorization> {
        let mut out = self.clone();
        for (f, &k) in out.factors.iter_mut().zip(kinds) {
            if f.kind != k {
                let ann = k.annihilator(f.matrix.field());
                if !ann.annihilates(&f.matrix) {
                    return Err(Error::UnsupportedPattern("factor cannot change kind".into()));
                }
                f.kind = k;
                f.annihilator = ann;
            }
        }
        Ok(out)
    }

    /// Reorders, falling back to relabeling where the multisets differ only
    /// by factors that carry both kinds.
    pub fn arrange(&self, kinds: &[Mode]) -> Result<Factorization> {
        if let Ok(r) = self.reorder(kinds) {
            return Ok(r);
        }
        let f = match self.factors.first() {
            Some(x) => x.matrix.field().clone(),
            None => return Err(Error::UnsupportedPattern("empty".into())),
        };
        let mut relabeled = self.clone();
        let want_u = kinds.iter().filter(|&&k| k == Mode::Unipotent).count();
        let have_u = relabeled.kinds().iter().filter(|&&k| k == Mode::Unipotent).count();
        let target = if have_u < want_u { Mode::Unipotent } else { Mode::Involution };
        let mut need = want_u.abs_diff(have_u);
        for fac in relabeled.factors.iter_mut() {
            if need == 0 {
                break;
            }
            let ann = target.annihilator(&f);
            if fac.kind != target && ann.annihilates(&fac.matrix) {
                fac.kind = target;
                fac.annihilator = ann;
                need -= 1;
            }
        }
        relabeled.reorder(kinds)
    }

    pub fn into_certificate(self, input: Mat, augmentation: Augmentation) -> Result<FactorizationCertificate> {
        let field = input.field().clone();
        let c = FactorizationCertificate { field, input, augmentation, factors: self.factors, transcript: self.transcript };
        match verify(&c) {
            Verdict::Pass => Ok(c),
            Verdict::Fail(r) => Err(Error::VerificationFailed(r.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationCertificate {
    pub field: Field,
    pub input: Mat,
    pub augmentation: Augmentation,
    pub factors: Vec<Factor>,
    pub transcript: Vec<Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailReason {
    FieldMismatch,
    ShapeMismatch,
    AnnihilatorMismatch,
    KindMismatch,
    ProductMismatch,
    NoSqrtMinusOne,
}

impl std::fmt::Display for FailReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(FailReason),
}

// Deliberately plain row-major arithmetic, independent of `Mat::mul`.
type Grid = Vec<Vec<Scalar>>;

fn grid(m: &Mat) -> Grid {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.at(i, j).clone()).collect()).collect()
}

fn grid_mul(f: &Field, a: &Grid, b: &Grid) -> Grid {
    let n = a.len();
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![f.zero(); cols]; n];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut s = f.zero();
            for k in 0..inner {
                s = f.add(&s, &f.mul(&a[i][k], &b[k][j]));
            }
            *cell = s;
        }
    }
    out
}

fn grid_shift(f: &Field, a: &Grid, c: &Scalar) -> Grid {
    a.iter()
        .enumerate()
        .map(|(i, row)| row.iter().enumerate().map(|(j, x)| if i == j { f.sub(x, c) } else { x.clone() }).collect())
        .collect()
}

fn grid_is_zero(f: &Field, a: &Grid) -> bool {
    a.iter().all(|r| r.iter().all(|x| f.is_zero(x)))
}

/// Re-checks every certificate invariant from the raw entries.
pub fn verify(c: &FactorizationCertificate) -> Verdict {
    use FailReason::*;
    let f = &c.field;
    if c.input.field() != f || c.factors.iter().any(|x| x.matrix.field() != f) {
        return Verdict::Fail(FieldMismatch);
    }
    let n = c.input.rows();
    if c.input.cols() != n || c.factors.is_empty() {
        return Verdict::Fail(ShapeMismatch);
    }
    let size = n + c.augmentation.k;
    if c.factors.iter().any(|x| x.matrix.rows() != size || x.matrix.cols() != size) {
        return Verdict::Fail(ShapeMismatch);
    }
    let Ok(mu) = c.augmentation.mu.value(f) else { return Verdict::Fail(NoSqrtMinusOne) };
    let (one, m1) = (f.one(), f.from_i64(-1));
    for x in &c.factors {
        let (g, d) = (&x.annihilator.gamma, &x.annihilator.delta);
        let kind_ok = match x.kind {
            Mode::Involution => (*g == one && *d == m1) || (*g == m1 && *d == one),
            Mode::Unipotent => *g == one && *d == one,
        };
        if !kind_ok {
            return Verdict::Fail(KindMismatch);
        }
        let m = grid(&x.matrix);
        if !grid_is_zero(f, &grid_mul(f, &grid_shift(f, &m, g), &grid_shift(f, &m, d))) {
            return Verdict::Fail(AnnihilatorMismatch);
        }
    }
    let mut prod = grid(&c.factors[0].matrix);
    for x in &c.factors[1..] {
        prod = grid_mul(f, &prod, &grid(&x.matrix));
    }
    for (i, row) in prod.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let want = if i < n && j < n {
                c.input.at(i, j).clone()
            } else if i == j && i >= n {
                mu.clone()
            } else {
                f.zero()
            };
            if *x != want {
                return Verdict::Fail(ProductMismatch);
            }
        }
    }
    Verdict::Pass
}

impl FactorizationCertificate {
    pub fn pattern(&self) -> String {
        self.factors.iter().map(|x| x.kind.letter()).collect()
    }

    pub fn to_json(&self) -> Value {
        let f = &self.field;
        json!({
            "schema": SCHEMA,
            "field": f.descriptor(),
            "input": self.input.to_json(),
            "augmentation": {"mu": self.augmentation.mu.label(), "k": self.augmentation.k},
            "factors": self.factors.iter().map(|x| json!({
                "matrix": x.matrix.to_json(),
                "annihilator": x.annihilator.to_json(f),
                "kind": x.kind.letter().to_string(),
            })).collect::<Vec<_>>(),
            "transcript": self.transcript,
        })
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::MalformedInput(m.to_string());
        let get = |k: &str| v.get(k).ok_or_else(|| bad(&format!("missing {k}")));
        if get("schema")?.as_str() != Some(SCHEMA) {
            return Err(bad("unsupported schema"));
        }
        let desc: FieldDescriptor = serde_json::from_value(get("field")?.clone()).map_err(|e| bad(&format!("field: {e}")))?;
        let field = Field::new(desc)?;
        let input = Mat::from_json(get("input")?, Some(&field))?;
        let aug = get("augmentation")?;
        let mu = aug.get("mu").and_then(Value::as_str).and_then(Mu::from_label).ok_or_else(|| bad("augmentation.mu"))?;
        let k = aug.get("k").and_then(Value::as_u64).ok_or_else(|| bad("augmentation.k"))? as usize;
        let mut factors = Vec::new();
        for (i, x) in get("factors")?.as_array().ok_or_else(|| bad("factors must be an array"))?.iter().enumerate() {
            let at = |m: &str| bad(&format!("factors[{i}]: {m}"));
            let matrix = Mat::from_json(x.get("matrix").ok_or_else(|| at("missing matrix"))?, Some(&field))?;
            let annihilator = QuadAnnihilator::from_json(&field, x.get("annihilator").ok_or_else(|| at("missing annihilator"))?)?;
            let kind = x
                .get("kind")
                .and_then(Value::as_str)
                .and_then(|s| s.chars().next().filter(|_| s.len() == 1))
                .and_then(Mode::from_letter)
                .ok_or_else(|| at("kind must be I or U"))?;
            factors.push(Factor { matrix, annihilator, kind });
        }
        let transcript = get("transcript")?.as_array().ok_or_else(|| bad("transcript must be an array"))?.clone();
        Ok(FactorizationCertificate { field, input, augmentation: Augmentation { mu, k }, factors, transcript })
    }

    /// Parses text, reporting the position of syntax errors.
    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| Error::MalformedInput(format!("line {} column {}: {e}", e.line(), e.column())))?;
        Self::from_json(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity_cert() -> FactorizationCertificate {
        let q = Field::rationals();
        let kinds = [Mode::Involution; 3];
        Factorization::identity(&q, 1, &kinds).into_certificate(Mat::identity(&q, 1), Augmentation::none()).unwrap()
    }

    #[test]
    fn identity_passes() {
        assert_eq!(verify(&identity_cert()), Verdict::Pass);
    }

    #[test]
    fn tampering_detected() {
        let mut c = identity_cert();
        c.factors[1].matrix.set(0, 0, c.field.from_i64(-1));
        assert_eq!(verify(&c), Verdict::Fail(FailReason::ProductMismatch));
        let q = Field::rationals();
        let d = Mat::from_i64(&q, &[&[1, 0], &[0, -1]]);
        let c = FactorizationCertificate {
            field: q.clone(),
            input: d.clone(),
            augmentation: Augmentation::none(),
            factors: vec![Factor::new(d, Mode::Unipotent)],
            transcript: vec![],
        };
        assert_eq!(verify(&c), Verdict::Fail(FailReason::AnnihilatorMismatch));
    }

    #[test]
    fn json_roundtrip_and_errors() {
        let c = identity_cert();
        let text = c.to_string_pretty();
        assert_eq!(FactorizationCertificate::parse(&text).unwrap(), c);
        assert!(matches!(FactorizationCertificate::parse(&text[..text.len() / 2]), Err(Error::MalformedInput(_))));
        let mut v = c.to_json();
        v["factors"][0]["matrix"]["field"] = json!({"kind": "Fp", "p": 5});
        match FactorizationCertificate::from_json(&v) {
            Err(Error::MalformedInput(m)) => assert!(m.contains("FieldMismatch")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reorder_preserves_product() {
        let f = Field::prime(7).unwrap();
        let s = Mat::from_i64(&f, &[&[1, 0], &[3, -1]]);
        let u = Mat::from_i64(&f, &[&[1, 2], &[0, 1]]);
        let t = Mat::from_i64(&f, &[&[0, 1], &[1, 0]]);
        let fac = Factorization {
            factors: vec![Factor::new(s, Mode::Involution), Factor::new(u, Mode::Unipotent), Factor::new(t, Mode::Involution)],
            transcript: vec![],
        };
        let p = fac.product();
        for kinds in [[Mode::Unipotent, Mode::Involution, Mode::Involution], [Mode::Involution, Mode::Involution, Mode::Unipotent]] {
            let r = fac.reorder(&kinds).unwrap();
            assert_eq!(r.product(), p);
            assert_eq!(r.kinds(), kinds);
            r.clone().into_certificate(p.clone(), Augmentation::none()).unwrap();
        }
    }
}
