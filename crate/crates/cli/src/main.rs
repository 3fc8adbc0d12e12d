use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use matfact::acceptance::run_all;
use matfact::adjacency::Mode;
use matfact::canonical::rcf;
use matfact::certificate::{verify, FactorizationCertificate, Mu, Verdict};
use matfact::oracle::{self, OracleTable};
use matfact::pipelines::{decompose_length4, parse_pattern, pattern_string, skew_stable3, stable3, SkewVariant};
use matfact::{Error, Field, Mat};

#[derive(Parser)]
#[command(name = "matfact", version, about = "Factor invertible matrices into involutions and U2-matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Natural,
    Skew,
}

#[derive(Subcommand)]
enum Command {
    /// Factor a matrix (after augmentation) along a pattern and write the certificate.
    Decompose {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        pattern: String,
        #[arg(long, value_enum, default_value = "natural")]
        mode: Family,
        /// Augmentation scalar: 1 for the natural family, -1 or i for skew.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        mu: String,
        /// Augmentation size for the skew family (default: the matrix size).
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate from its raw entries.
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Rational canonical form: invariant factors and transform.
    Rcf {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Exhaustive product-membership tables over GF(p).
    Oracle {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Run the acceptance suite.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Multiplier for the random sample counts.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
}

enum Failure {
    Module(Error),
    Malformed(String),
    /// Already reported; just the exit code.
    Quiet(u8),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::MalformedInput(m) => Failure::Malformed(m),
            other => Failure::Module(other),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> Result<Mat, Failure> {
    Ok(Mat::from_json(&read_json(path)?, None)?)
}

/// Prints a line, ignoring a closed pipe.
fn say(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn emit(text: &str, out: Option<&Path>) -> Outcome {
    match out {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(|e| Failure::Malformed(format!("{}: {e}", p.display()))),
        None => {
            say(text);
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json")
}

fn letters(s: &str) -> Result<Vec<Mode>, Failure> {
    let kinds: Option<Vec<Mode>> = s.chars().map(Mode::from_letter).collect();
    match kinds {
        Some(k) if !k.is_empty() => Ok(k),
        _ => Err(Failure::Malformed(format!("pattern {s:?} must be a nonempty word in I and U"))),
    }
}

fn decompose(input: &Path, pattern: &str, mode: Family, mu: &str, k: Option<usize>, seed: u64, out: Option<&Path>) -> Outcome {
    let kinds = letters(pattern)?;
    let mu = Mu::from_label(mu).ok_or_else(|| Failure::Malformed(format!("mu must be 1, -1 or i, got {mu:?}")))?;
    let a = read_matrix(input)?;
    let cert = match mode {
        Family::Natural => {
            if mu != Mu::One || k.is_some() {
                return Err(Failure::Malformed("the natural family takes mu = 1 and no --k".into()));
            }
            match kinds.len() {
                3 => stable3(&a, &parse_pattern(pattern)?, seed)?,
                4 => decompose_length4(&a, &parse_pattern(pattern)?, seed)?,
                _ => return Err(Error::UnsupportedPattern(pattern.into()).into()),
            }
        }
        Family::Skew => {
            let variant = SkewVariant::from_parts(mu, &kinds)?;
            skew_stable3(&a, variant, k.unwrap_or(a.rows()), &kinds, seed)?
        }
    };
    if let Verdict::Fail(r) = verify(&cert) {
        return Err(Error::VerificationFailed(r.to_string()).into());
    }
    emit(&cert.to_string_pretty(), out)
}

fn verify_cmd(path: &Path) -> Outcome {
    let text = fs::read_to_string(path).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))?;
    let cert = FactorizationCertificate::parse(&text)?;
    match verify(&cert) {
        Verdict::Pass => emit(&pretty(&json!({"verdict": "Pass", "pattern": cert.pattern()})), None),
        Verdict::Fail(r) => {
            say(&pretty(&json!({"error": r.to_string()})));
            Err(Failure::Quiet(1))
        }
    }
}

fn rcf_cmd(path: &Path) -> Outcome {
    let m = read_matrix(path)?;
    emit(&pretty(&rcf(&m)?.to_json()), None)
}

fn oracle_cmd(p: u64, n: usize, pattern: &str, matrix: Option<&Path>) -> Outcome {
    let kinds = letters(pattern)?;
    let field = Field::prime(p)?;
    let m = matrix.map(read_matrix).transpose()?;
    if let Some(m) = &m {
        if m.field() != &field || !m.is_square() || m.rows() != n {
            return Err(Error::TableMismatch.into());
        }
    }
    let mut v = json!({"field": field.name(), "n": n, "pattern": pattern_string(&kinds)});
    let table = if oracle::within_budget(&field, n) {
        Some(OracleTable::new(&field, n)?)
    } else if m.is_none() {
        return Err(Error::TooLarge.into());
    } else {
        None
    };
    if let Some(t) = &table {
        v["table"] = t.to_json(kinds.len());
        v["members"] = json!(t.product_set(&kinds).len());
    }
    if let Some(m) = &m {
        let r = oracle::decide(m, &kinds, table.as_ref())?;
        v["verdict"] = json!(r.verdict.name());
        v["method"] = json!(r.method.name());
    }
    emit(&pretty(&v), None)
}

fn selftest(seed: u64, scale: f64) -> Outcome {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Failure::Malformed("scale must be positive".into()));
    }
    let mut ok = true;
    for r in run_all(seed, scale) {
        say(&r.line());
        for s in &r.samples {
            say(&format!("    {s}"));
        }
        ok &= r.passed();
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Quiet(1))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Decompose { input, pattern, mode, mu, k, seed, out } => {
            decompose(&input, &pattern, mode, &mu, k, seed, out.as_deref())
        }
        Command::Verify { cert } => verify_cmd(&cert),
        Command::Rcf { input } => rcf_cmd(&input),
        Command::Oracle { p, n, pattern, matrix } => oracle_cmd(p, n, &pattern, matrix.as_deref()),
        Command::Selftest { seed, scale } => selftest(seed, scale),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Module(e)) => {
            say(&json!({"error": e.reason(), "message": e.to_string()}).to_string());
            ExitCode::from(1)
        }
        Err(Failure::Malformed(m)) => {
            say(&json!({"error": "MalformedInput", "message": m}).to_string());
            ExitCode::from(2)
        }
        Err(Failure::Quiet(code)) => ExitCode::from(code),
    }
}
