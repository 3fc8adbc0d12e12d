use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn matfact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matfact")).args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const TWO_I3_F7: &str = r#"{"field":{"kind":"Fp","p":7},"rows":[[2,0,0],[0,2,0],[0,0,2]]}"#;

#[test]
fn decompose_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", TWO_I3_F7);
    let cert = dir.path().join("c.json");
    let cert = cert.to_str().unwrap();
    let o = matfact(&["decompose", "--in", &m, "--pattern", "III", "--mode", "natural", "--out", cert]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let c: Value = serde_json::from_str(&fs::read_to_string(cert).unwrap()).unwrap();
    assert_eq!(c["augmentation"]["k"], 3);
    assert_eq!(c["factors"].as_array().unwrap().len(), 3);
    let o = matfact(&["verify", "--cert", cert]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["verdict"], "Pass");
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(
        dir.path(),
        "m.json",
        r#"{"field":{"kind":"Q"},"rows":[[1,2,1],[0,1,3],[1,2,2]]}"#,
    );
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = matfact(&["decompose", "--in", &m, "--pattern", "IUU", "--seed", "7", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
        fs::read(out).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn tampered_certificate_fails() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", TWO_I3_F7);
    let o = matfact(&["decompose", "--in", &m, "--pattern", "IIU"]);
    assert_eq!(o.status.code(), Some(0));
    let mut c = stdout_json(&o);
    c["input"]["rows"][0][0] = Value::String("3".into());
    let cert = write(dir.path(), "t.json", &c.to_string());
    let o = matfact(&["verify", "--cert", &cert]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["error"], "ProductMismatch");
}

#[test]
fn module_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", r#"{"field":{"kind":"Q"},"rows":[[-1,0],[0,1]]}"#);
    let o = matfact(&["decompose", "--in", &m, "--pattern", "UUU"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["error"], "UUUNeedsDetOne");
    let m7 = write(dir.path(), "m7.json", TWO_I3_F7);
    let o = matfact(&["decompose", "--in", &m7, "--pattern", "III", "--mode", "skew", "--mu", "i"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["error"], "NoSqrtMinusOne");
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{not json");
    let o = matfact(&["rcf", "--in", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout_json(&o)["error"], "MalformedInput");
    let m = write(dir.path(), "m.json", TWO_I3_F7);
    let o = matfact(&["decompose", "--in", &m, "--pattern", "IXI"]);
    assert_eq!(o.status.code(), Some(2));
    let o = matfact(&["decompose", "--in", &m]);
    assert_eq!(o.status.code(), Some(2));
    let o = matfact(&["verify", "--cert", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn skew_decomposition() {
    let dir = tempfile::tempdir().unwrap();
    // det 3 over GF(5), i = 2: det·i^1 = 6 = 1
    let m = write(dir.path(), "m.json", r#"{"field":{"kind":"Fp","p":5},"rows":[[3]]}"#);
    let o = matfact(&["decompose", "--in", &m, "--pattern", "III", "--mode", "skew", "--mu", "i", "--k", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(stdout_json(&o)["augmentation"]["mu"], "i");
}

#[test]
fn rcf_prints_invariant_factors() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", TWO_I3_F7);
    let o = matfact(&["rcf", "--in", &m]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["invariant_factors"].as_array().unwrap().len(), 3);
    assert!(v.get("transform").is_some());
}

#[test]
fn oracle_tables_and_verdicts() {
    let o = matfact(&["oracle", "--p", "3", "--n", "2", "--pattern", "II"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["table"]["involutions"], 14);
    assert_eq!(v["table"]["unipotents"], 9);
    assert_eq!(v["table"]["group_order"], 48);
    assert_eq!(v["members"], v["table"]["patterns"]["II"]);

    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", TWO_I3_F7);
    let o = matfact(&["oracle", "--p", "7", "--n", "3", "--pattern", "III", "--matrix", &m]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["verdict"], "non-member");
    assert_eq!(v["method"], "class-reduction");

    let o = matfact(&["oracle", "--p", "7", "--n", "3", "--pattern", "III"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["error"], "TooLarge");
    let o = matfact(&["oracle", "--p", "5", "--n", "3", "--pattern", "III", "--matrix", &m]);
    assert_eq!(stdout_json(&o)["error"], "TableMismatch");
}

#[test]
fn selftest_small_scale() {
    let o = matfact(&["selftest", "--scale", "0.02"]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 8);
}
