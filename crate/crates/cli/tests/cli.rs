use std::process::Command;

use qcrystal_cli::{emit, run_suite, CheckReport, Format, Params, Status, SuiteError};

fn params(kv: &[(&str, &str)]) -> Params {
    kv.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

fn qcrystal(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qcrystal")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn qdet_suite_reports_the_expansion() {
    let r = run_suite("qdet", &params(&[("n", "1")])).unwrap();
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].status, Status::Pass);
    assert_eq!(r[0].witness.as_deref(), Some("u11*u22 - t*u12*u21 = 1"));
}

#[test]
fn relations_on_a_cube() {
    let r = run_suite("uq-relations", &params(&[("n", "2"), ("power", "3")])).unwrap();
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].status, Status::Pass);
    assert!(r[0].max_error.is_none());
}

#[test]
fn triangular_certificates_for_sl2() {
    let r = run_suite("triangular", &params(&[("algebra", "sl2"), ("omega", "2"), ("order", "either")])).unwrap();
    assert_eq!(r[0].status, Status::Pass);
    assert!(r[0].witness.as_ref().unwrap().starts_with("9 certificates"));
    let r = run_suite("triangular", &params(&[("algebra", "sl2"), ("omega", "2")])).unwrap();
    assert_eq!(r[0].status, Status::Fail);
    let w = r[0].witness.as_ref().unwrap();
    assert!(w.starts_with("3 of 9 entries fail"), "{w}");
    assert!(["C12", "C22", "C32"].iter().all(|c| w.contains(c)));
}

#[test]
fn emit_formats() {
    assert_eq!(emit(&[], Format::Json), "[]");
    let pass = CheckReport::new("qdet", &[("n", "1".into())]).verdict(true, "ok");
    let json = emit(std::slice::from_ref(&pass), Format::Json);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v[0]["status"], "pass");
    assert_eq!(v[0]["params"]["n"], "1");
    assert!(v[0]["max_error"].is_null());
    let fail = CheckReport::new("star", &[]).verdict(false, "u12 differs").with_error(0.5);
    let text = emit(&[pass, fail], Format::Text);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().contains("u12 differs"));
}

#[test]
fn reports_are_sorted_and_reproducible() {
    let p = params(&[("words", "20"), ("seed", "9")]);
    let a = emit(&run_suite("frt-confluence", &p).unwrap(), Format::Json);
    let b = emit(&run_suite("frt-confluence", &p).unwrap(), Format::Json);
    assert_eq!(a, b);
    let r = run_suite("uq-relations", &params(&[("power", "1")])).unwrap();
    let ns: Vec<&str> = r.iter().map(|x| x.params["n"].as_str()).collect();
    assert_eq!(ns, ["1", "2", "3"]);
}

#[test]
fn failing_reports_carry_witnesses() {
    let r = run_suite("triangular", &params(&[("n", "1")])).unwrap();
    for x in r.iter().filter(|x| x.failed()) {
        assert!(x.witness.is_some());
    }
}

#[test]
fn bad_requests() {
    assert_eq!(run_suite("nope", &Params::new()), Err(SuiteError::UnknownSuite("nope".into())));
    assert!(matches!(run_suite("qdet", &params(&[("n", "5")])), Err(SuiteError::InvalidParam { .. })));
    assert!(matches!(run_suite("qdet", &params(&[("n", "x")])), Err(SuiteError::InvalidParam { .. })));
    assert!(matches!(run_suite("triangular", &params(&[("order", "sideways")])), Err(SuiteError::InvalidParam { .. })));
    assert!(matches!(run_suite("pipelines", &params(&[("q", "3/2")])), Err(SuiteError::InvalidParam { .. })));
}

#[test]
fn exit_codes() {
    let (code, out) = qcrystal(&["--format", "json", "--n", "1", "run", "qdet"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"status\": \"pass\""));
    assert_eq!(qcrystal(&["--n", "1", "run", "triangular"]).0, 1);
    assert_eq!(qcrystal(&["run", "nope"]).0, 2);
    assert_eq!(qcrystal(&["run", "qdet", "--param", "novalue"]).0, 2);
    assert_eq!(qcrystal(&["--frobnicate"]).0, 2);
}

#[test]
fn single_generator_comparisons() {
    let base = ["--format", "json", "--n", "1", "soibelman", "--cutoff", "8", "--window", "4", "--entry", "1,2"];
    for mode in ["float", "exact", "leading"] {
        let mut args = base.to_vec();
        args.extend(["--mode", mode, "--q", "1/10"]);
        let (code, out) = qcrystal(&args);
        assert_eq!(code, 0, "{mode}: {out}");
    }
    let (code, _) = qcrystal(&["--n", "1", "soibelman", "--entry", "3,1"]);
    assert_eq!(code, 2);
    let (code, out) = qcrystal(&["--n", "2", "soibelman", "--cutoff", "6", "--window", "3", "--word", "2,1,2", "--mode", "leading", "--scaled"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("word=2,1,2"));
}

#[test]
fn expression_commands() {
    let (code, out) = qcrystal(&["--n", "1", "normal-form", "u22*u11"]);
    assert_eq!(code, 0);
    assert!(out.contains("1 + t^-1*u12*u21"), "{out}");
    let (code, out) = qcrystal(&["module", "hw(tensor(fund(1),fund(1)),2)"]);
    assert_eq!(code, 0);
    assert!(out.contains("dim 3"), "{out}");
    assert_eq!(qcrystal(&["module", "fund("]).0, 2);
}
