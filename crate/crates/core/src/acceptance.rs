//! The acceptance suite, shared by the `acceptance` integration test and the
//! `selftest` command. Each criterion returns one report line.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::adjacency::{adapt, AdjacencyCertificate, Mode};
use crate::canonical::{check_well_partitioned, companion_sum, rcf, WellPartition};
use crate::certificate::{self, FactorizationCertificate};
use crate::error::Error;
use crate::field::{Field, Scalar};
use crate::matrix::Mat;
use crate::oracle::{self, OracleTable};
use crate::pipelines::{decompose_length4, parse_pattern, skew_stable3, stable3, SkewVariant};
use crate::poly::Poly;
use crate::selftest::{random_unit_det, RATIONAL_BOUND};
use crate::two_factor::{classify_two, sigma_involution, TwoKind};

/// Failures kept verbatim per criterion; the rest are only counted.
const KEEP: usize = 5;

#[derive(Debug, Clone)]
pub struct Report {
    pub id: u8,
    pub title: &'static str,
    pub runs: usize,
    pub failures: usize,
    pub samples: Vec<String>,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.runs > 0 && self.elapsed <= self.limit
    }

    pub fn line(&self) -> String {
        format!(
            "{} [{}] {}: {}/{} ok, {:.2}s (limit {}s)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.runs - self.failures,
            self.runs,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs()
        )
    }
}

struct Tally {
    runs: usize,
    failures: usize,
    samples: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { runs: 0, failures: 0, samples: vec![] }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.runs += 1;
        if !ok {
            self.failures += 1;
            if self.samples.len() < KEEP {
                self.samples.push(what());
            }
        }
    }

    fn report(self, id: u8, title: &'static str, start: Instant, limit_secs: u64) -> Report {
        Report {
            id,
            title,
            runs: self.runs,
            failures: self.failures,
            samples: self.samples,
            elapsed: start.elapsed(),
            limit: Duration::from_secs(limit_secs),
        }
    }
}

fn gf(p: u64) -> Field {
    Field::prime(p).expect("prime")
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn verified(c: &FactorizationCertificate) -> bool {
    certificate::verify(c) == certificate::Verdict::Pass
}

/// Classification of two-factor products against exhaustive membership on
/// all of GL₂(F₂) and GL₂(F₃).
pub fn classification_vs_oracle() -> Report {
    let start = Instant::now();
    let mut t = Tally::new();
    for p in [2, 3] {
        let f = gf(p);
        let table = OracleTable::new(&f, 2).expect("small table");
        for m in oracle::enumerate_gl(2, &f).expect("small group") {
            for (kind, pat) in [(TwoKind::II, "II"), (TwoKind::UU, "UU")] {
                let theory = classify_two(&m, kind).holds;
                let truth = table.contains(&m, &parse_pattern_any(pat)).expect("covered");
                t.check(theory == truth, || format!("GF({p}) {pat} {}: classify {theory}, oracle {truth}", m.to_json()));
            }
        }
    }
    t.report(1, "two-factor classification vs oracle", start, 10)
}

fn parse_pattern_any(s: &str) -> Vec<Mode> {
    s.chars().map(|c| Mode::from_letter(c).expect("I or U")).collect()
}

/// Every element of GL₂(F₃) under the five length-4 patterns.
pub fn length_four_desk(certs: &mut Vec<FactorizationCertificate>) -> Report {
    let start = Instant::now();
    let mut t = Tally::new();
    let f = gf(3);
    let table = OracleTable::new(&f, 2).expect("small table");
    let uuuu = parse_pattern("UUUU").expect("pattern");
    let group = oracle::enumerate_gl(2, &f).expect("small group");
    let jobs: Vec<(Mat, &str)> = group
        .iter()
        .flat_map(|m| ["IIII", "IIIU", "IIUU", "IUUU", "UUUU"].into_iter().map(move |p| (m.clone(), p)))
        .filter(|(m, p)| *p != "UUUU" || m.det().ok() == Some(f.one()))
        .collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|(m, p)| decompose_length4(m, &parse_pattern(p).expect("pattern"), 0))
        .collect();
    for ((m, p), r) in jobs.iter().zip(results) {
        match r {
            Ok(c) => {
                t.check(verified(&c) && &c.input == m, || format!("{p} {}: certificate rejected", m.to_json()));
                certs.push(c);
            }
            Err(e) => t.check(false, || format!("{p} {}: {e}", m.to_json())),
        }
        if *p == "UUUU" {
            let member = table.contains(m, &uuuu).expect("covered");
            t.check(member, || format!("oracle: {} not in UUUU", m.to_json()));
        }
    }
    t.report(2, "length-4 patterns on GL2(F3)", start, 60)
}

/// stable3 on random determinant ±1 matrices over small fields and Q.
pub fn stable_three(seed: u64, count: usize, certs: &mut Vec<FactorizationCertificate>) -> Report {
    let start = Instant::now();
    let mut t = Tally::new();
    let fields = [gf(2), gf(3), gf(5), gf(7), Field::rationals()];
    for (fi, f) in fields.iter().enumerate() {
        let mut rng = rng_for(seed, 30 + fi as u64);
        let mut jobs = vec![];
        for _ in 0..count {
            let n = rng.gen_range(1..=6);
            let a = random_unit_det(f, n, None, &mut rng);
            let a1 = random_unit_det(f, n, Some(&f.one()), &mut rng);
            for p in ["III", "IIU", "IUU"] {
                jobs.push((a.clone(), p));
            }
            jobs.push((a1, "UUU"));
        }
        let results: Vec<_> = jobs
            .par_iter()
            .map(|(a, p)| stable3(a, &parse_pattern(p).expect("pattern"), 0))
            .collect();
        for ((a, p), r) in jobs.iter().zip(results) {
            match r {
                Ok(c) => {
                    let ok = verified(&c) && &c.input == a && c.augmentation.k == a.rows();
                    t.check(ok, || format!("{} {p} {}: certificate rejected", f.name(), a.to_json()));
                    certs.push(c);
                }
                Err(e) => t.check(false, || format!("{} {p} {}: {e}", f.name(), a.to_json())),
            }
        }
    }
    t.report(3, "stable length-3 patterns", start, 300)
}

/// 2I₃ over F₇: not III (class reduction), but 2I₃ ⊕ I₃ is.
pub fn scalar_witness(certs: &mut Vec<FactorizationCertificate>) -> Report {
    let start = Instant::now();
    let mut t = Tally::new();
    let f = gf(7);
    let two = f.from_i64(2);
    let m = Mat::scalar(&f, 3, &two);
    let iii = parse_pattern("III").expect("pattern");
    match oracle::decide(&m, &iii, None) {
        Ok(r) => t.check(
            r.verdict == oracle::Verdict::NonMember && r.method == oracle::Method::ClassReduction,
            || format!("oracle says {:?}", r),
        ),
        Err(e) => t.check(false, || format!("oracle: {e}")),
    }
    // the same reduction read through classify_two: 2I·X⁻¹ is never II
    for x in oracle::class_representatives(&f, 3, Mode::Involution) {
        let rest = m.mul(&x.inverse().expect("involution"));
        t.check(!classify_two(&rest, TwoKind::II).holds, || format!("classify_two accepts {}", rest.to_json()));
    }
    match stable3(&m, &iii, 0) {
        Ok(c) => {
            let aug = Mat::dsum(&[m.clone(), Mat::identity(&f, 3)]);
            let ok = verified(&c) && c.augmentation.k == 3 && c.factors.len() == 3
                && c.factors.iter().fold(Mat::identity(&f, 6), |acc, x| acc.mul(&x.matrix)) == aug;
            t.check(ok, || "stable3 certificate rejected".into());
            certs.push(c);
        }
        Err(e) => t.check(false, || format!("stable3: {e}")),
    }
    t.report(4, "2I3 over GF(7): not III, but 2I3+I3 is", start, 10)
}

fn random_monic<R: Rng>(f: &Field, d: usize, rng: &mut R) -> Poly {
    let mut cs: Vec<Scalar> = (0..d).map(|_| f.random(rng, 2)).collect();
    cs[0] = f.random_nonzero(rng, 2);
    cs.push(f.one());
    Poly::new(f, cs)
}

fn random_well_partition<R: Rng>(f: &Field, rng: &mut R) -> WellPartition {
    loop {
        let np = rng.gen_range(1..=2);
        let nq = rng.gen_range(1..=2);
        let mut p_list = vec![];
        for i in 0..np {
            let d = if i == 0 { rng.gen_range(1..=3) } else { rng.gen_range(2..=3) };
            p_list.push(random_monic(f, d, rng));
        }
        let mut q_list = vec![];
        for i in 0..nq {
            let d = if i + 1 == nq { rng.gen_range(1..=3) } else { rng.gen_range(2..=3) };
            q_list.push(random_monic(f, d, rng));
        }
        let total: usize = p_list.iter().chain(&q_list).map(|p| p.degree()).sum();
        if total > 8 {
            continue;
        }
        if let Some(very_well) = check_well_partitioned(&p_list, &q_list) {
            let transform = Mat::identity(f, total);
            return WellPartition { p_list, q_list, transform, very_well };
        }
    }
}

/// Monic r of degree n with N(r) = det: r(0) = (-1)^n det.
fn random_with_norm<R: Rng>(f: &Field, n: usize, det: &Scalar, rng: &mut R) -> Poly {
    let mut cs: Vec<Scalar> = (0..n).map(|_| f.random(rng, 2)).collect();
    cs[0] = if n.is_multiple_of(2) { det.clone() } else { f.neg(det) };
    cs.push(f.one());
    Poly::new(f, cs)
}

/// Unipotent adaptation on random well-partitioned matrices over F₅.
pub fn adaptation(seed: u64, count: usize, adj: &mut Vec<AdjacencyCertificate>) -> Report {
    let start = Instant::now();
    let mut t = Tally::new();
    let f = gf(5);
    let mut rng = rng_for(seed, 50);
    let jobs: Vec<(WellPartition, Poly)> = (0..count)
        .map(|_| {
            let wp = random_well_partition(&f, &mut rng);
            let m = wp.matrix(&f);
            let r = random_with_norm(&f, m.rows(), &m.det().expect("square"), &mut rng);
            (wp, r)
        })
        .collect();
    let results: Vec<_> = jobs.par_iter().map(|(wp, r)| adapt(wp, r, Mode::Unipotent)).collect();
    for ((wp, r), res) in jobs.iter().zip(results) {
        let m = wp.matrix(&f);
        let label = || format!("blocks {:?}, r = {}", wp.block_degrees(), r.to_json());
        match res {
            Ok(a) => {
                let u = &a.certificate.s;
                let d = u.sub(&Mat::identity(&f, u.rows()));
                let um = u.mul(&m);
                let cyclic_r = rcf(&um).map(|x| x.invariant_factors == vec![r.clone()]).unwrap_or(false);
                t.check(d.mul(&d).is_zero() && cyclic_r && a.certificate.a == m, || format!("{}: postcondition", label()));
                adj.push(a.certificate);
            }
            Err(e) => t.check(false, || format!("{}: {e}", label())),
        }
    }
    t.report(5, "unipotent adaptation over GF(5)", start, 120)
}

/// The skew variants over F₅ and F₁₃, and their clean failure over F₇.
pub fn skew(seed: u64, count: usize, certs: &mut Vec<FactorizationCertificate>) -> Report {
    let start = Instant::now();
    let mut t = Tally::new();
    let variants = [
        (SkewVariant::MinusU3, "UUU"),
        (SkewVariant::IThree, "III"),
        (SkewVariant::IMixed, "IUU"),
    ];
    for (fi, p) in [5u64, 13].into_iter().enumerate() {
        let f = gf(p);
        let mut rng = rng_for(seed, 60 + fi as u64);
        let mut jobs = vec![];
        for _ in 0..count {
            let n = rng.gen_range(1..=4);
            for (v, pat) in variants {
                // det A · μ^k must be 1 for μ = -1, ±1 for μ = i; k = n
                let mu = v.mu().value(&f).expect("mu");
                let sign = if v == SkewVariant::MinusU3 || rng.gen_bool(0.5) { f.one() } else { f.from_i64(-1) };
                let det = f.div(&sign, &f.pow(&mu, n as i64)).expect("unit");
                let a = random_unit_det(&f, n, Some(&det), &mut rng);
                jobs.push((a, v, pat));
            }
        }
        let results: Vec<_> = jobs
            .par_iter()
            .map(|(a, v, pat)| skew_stable3(a, *v, a.rows(), &parse_pattern(pat).expect("pattern"), 0))
            .collect();
        for ((a, v, pat), r) in jobs.iter().zip(results) {
            match r {
                Ok(c) => {
                    let ok = verified(&c) && &c.input == a && c.augmentation.k == a.rows();
                    t.check(ok, || format!("{} {v:?} {pat} {}: certificate rejected", f.name(), a.to_json()));
                    certs.push(c);
                }
                Err(e) => t.check(false, || format!("{} {v:?} {pat} {}: {e}", f.name(), a.to_json())),
            }
        }
    }
    let f7 = gf(7);
    let mut rng = rng_for(seed, 67);
    for _ in 0..count / 5 {
        let n = rng.gen_range(1..=4);
        let a = random_unit_det(&f7, n, None, &mut rng);
        for (v, pat) in [(SkewVariant::IThree, "III"), (SkewVariant::IMixed, "IUU")] {
            let r = skew_stable3(&a, v, n, &parse_pattern(pat).expect("pattern"), 0);
            t.check(matches!(r, Err(Error::NoSqrtMinusOne)), || format!("GF(7) {v:?}: {:?}", r.err()));
        }
    }
    t.report(6, "skew augmentations over GF(5), GF(13); GF(7) refused", start, 120)
}

fn random_matrix<R: Rng>(f: &Field, n: usize, rng: &mut R) -> Mat {
    let rows = (0..n).map(|_| (0..n).map(|_| f.random(rng, RATIONAL_BOUND)).collect()).collect();
    Mat::from_rows(f, rows)
}

fn rcf_holds(m: &Mat) -> bool {
    let Ok(r) = rcf(m) else { return false };
    let f = m.field();
    let chain = r.invariant_factors.windows(2).all(|w| w[0].divides(&w[1]));
    let monic = r.invariant_factors.iter().all(|q| q.is_monic() && q.degree() > 0);
    let Ok(pi) = r.transform.inverse() else { return false };
    chain && monic && pi.mul(m).mul(&r.transform) == companion_sum(f, &r.invariant_factors)
}

/// det(tI − [[I+BC, B],[C, I]]) = (t−1)^{a−b}·Σ_k c_k (t−1)^{2k} t^{b−k},
/// where χ_{CB} = Σ c_k t^k.
fn schur_holds(b: &Mat, c: &Mat) -> bool {
    let f = b.field().clone();
    let (a, bb) = (b.rows(), b.cols());
    let top = Mat::hstack(&f, &[Mat::identity(&f, a).add(&b.mul(c)), b.clone()]);
    let bottom = Mat::hstack(&f, &[c.clone(), Mat::identity(&f, bb)]);
    let lhs = Mat::vstack(&f, &[top, bottom]).charpoly().expect("square");
    let chi = c.mul(b).charpoly().expect("square");
    let tm1 = Poly::linear(&f, &f.one());
    let t = Poly::t(&f);
    let mut sum = Poly::zero(&f);
    for k in 0..=bb {
        let term = tm1.pow(2 * k).mul(&t.pow(bb - k)).scale(&chi.coeff(k));
        sum = sum.add(&term);
    }
    lhs == tm1.pow(a - bb).mul(&sum)
}

/// All monic polynomials of degree d over a finite field with nonzero
/// constant term.
fn monic_units(f: &Field, d: usize) -> Vec<Poly> {
    let q = f.size().expect("finite");
    let total = q.pow(d as u32);
    (0..total)
        .filter_map(|mut idx| {
            let mut cs = vec![];
            for _ in 0..d {
                cs.push(f.element(idx % q));
                idx /= q;
            }
            cs.push(f.one());
            (!f.is_zero(&cs[0])).then(|| Poly::new(f, cs))
        })
        .collect()
}

/// RCF, the Schur determinant identity and the σ-construction.
pub fn infrastructure(seed: u64, count: usize) -> Report {
    let start = Instant::now();
    let mut t = Tally::new();
    let fields = [gf(2), gf(3), gf(5), gf(7), Field::rationals()];
    for (fi, f) in fields.iter().enumerate() {
        let mut rng = rng_for(seed, 70 + fi as u64);
        let ms: Vec<Mat> = (0..count)
            .map(|i| {
                let n = rng.gen_range(1..=6);
                if i % 2 == 0 {
                    random_matrix(f, n, &mut rng)
                } else {
                    random_unit_det(f, n, None, &mut rng)
                }
            })
            .collect();
        let oks: Vec<bool> = ms.par_iter().map(rcf_holds).collect();
        for (m, ok) in ms.iter().zip(oks) {
            t.check(ok, || format!("rcf {} {}", f.name(), m.to_json()));
        }
    }
    for (fi, f) in [gf(5), Field::rationals()].iter().enumerate() {
        let mut rng = rng_for(seed, 78 + fi as u64);
        for _ in 0..100 {
            let a = rng.gen_range(1..=4);
            let b = rng.gen_range(1..=a);
            let bm = Mat::from_rows(f, (0..a).map(|_| (0..b).map(|_| f.random(&mut rng, RATIONAL_BOUND)).collect()).collect());
            let cm = Mat::from_rows(f, (0..b).map(|_| (0..a).map(|_| f.random(&mut rng, RATIONAL_BOUND)).collect()).collect());
            t.check(schur_holds(&bm, &cm), || format!("schur {} B={} C={}", f.name(), bm.to_json(), cm.to_json()));
        }
    }
    let f3 = gf(3);
    for d in 1..=5 {
        for p in monic_units(&f3, d).into_iter().filter(|p| p.is_self_reciprocal()) {
            let m = Mat::companion(&p).expect("monic");
            let v = Mat::unit_vector(&f3, d, 0);
            let ok = sigma_involution(&m, &v)
                .map(|s| s.mul(&s).is_identity() && s.mul(&m).mul(&s.mul(&m)).is_identity())
                .unwrap_or(false);
            t.check(ok, || format!("sigma for {}", p.to_json()));
        }
    }
    t.report(7, "RCF, Schur identity, sigma construction", start, 180)
}

/// Serialize and parse back every certificate produced above.
pub fn round_trip(certs: &[FactorizationCertificate], adj: &[AdjacencyCertificate]) -> Report {
    let start = Instant::now();
    let mut t = Tally::new();
    for c in certs {
        let text = c.to_string_pretty();
        let ok = FactorizationCertificate::parse(&text).map(|d| &d == c && d.to_string_pretty() == text).unwrap_or(false);
        t.check(ok, || format!("factorization certificate of size {}", c.input.rows()));
    }
    for a in adj {
        let v = a.to_json();
        let ok = AdjacencyCertificate::from_json(&v, None).map(|d| &d == a && d.to_json() == v).unwrap_or(false);
        t.check(ok, || format!("adjacency certificate of size {}", a.s.rows()));
    }
    t.report(8, "certificate round-trip", start, 60)
}

/// Runs all eight criteria; `scale` multiplies the random sample counts
/// (1.0 is the full suite).
pub fn run_all(seed: u64, scale: f64) -> Vec<Report> {
    let n = |base: usize| ((base as f64 * scale).round() as usize).max(1);
    let mut certs = vec![];
    let mut adj = vec![];
    let mut out = vec![
        classification_vs_oracle(),
        length_four_desk(&mut certs),
        stable_three(seed, n(500), &mut certs),
        scalar_witness(&mut certs),
        adaptation(seed, n(200), &mut adj),
        skew(seed, n(100), &mut certs),
        infrastructure(seed, n(500)),
    ];
    out.push(round_trip(&certs, &adj));
    out
}
