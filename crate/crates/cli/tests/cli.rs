use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;
use traceforge::report::Report;
use traceforge::squareclass::MultiquadraticField;
use traceforge_cli::run;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_traceforge"))
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p: PathBuf = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

fn form(entries: &[&str]) -> String {
    let e: Vec<String> = entries.iter().map(|s| format!("\"{s}\"")).collect();
    format!("{{\"field\":{{\"kind\":\"Q\"}},\"entries\":[{}]}}", e.join(","))
}

fn code(args: &[&str]) -> i32 {
    let mut v = vec!["traceforge"];
    v.extend_from_slice(args);
    run(v).0
}

const GPS_PLAN: &str = r#"{"base_field":{"kind":"Q"},"n":3,"f0":["-1","1","1"],"pieces":[{"label":"M1","a":"1"},{"label":"M2","a":"3"}],"steps":[{"op":"interbreed","left":"M1","right":"M2","isometry":{"type":"canonical"}}]}"#;

#[test]
fn exit_code_matrix() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", &form(&["-1", "1", "1", "1"]));
    let f5 = write(&dir, "f5.json", &form(&["-5", "5", "5", "5"]));
    let f3 = write(&dir, "f3.json", &form(&["-3", "3", "3", "3"]));
    let g2 = write(&dir, "g2.json", r#"{"field":{"kind":"QSqrt","m":2},"entries":["-1","1"]}"#);
    let bad = write(&dir, "bad.json", "{not json");
    let plan = write(&dir, "plan.json", GPS_PLAN);

    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["version"], 0),
        (vec!["--help"], 0),
        (vec!["invariants", "--form", &f], 0),
        (vec!["equiv", &f, &f5], 0),
        (vec!["equiv", &f, &f3], 1),
        (vec!["equiv", &g2, &g2], 2),
        (vec!["similar", &f, &f3], 0),
        (vec!["trace-field", &plan], 0),
        (vec!["trace-field", "--plan", &plan], 0),
        (vec!["twist", "table1"], 1),
        (vec!["twist", "build-odd", "--d", "5", "--n", "4"], 0),
        (vec!["twist", "build-odd", "--d", "4", "--n", "4"], 64),
        (vec!["twist", "build-quad", "--b", "2,1", "--n", "4"], 0),
        (vec!["twist", "search", "--d", "3"], 0),
        (vec!["examples", "ex45", "--r", "1"], 0),
        (vec!["examples", "ex45", "--r", "1", "--n", "6"], 64),
        (vec!["examples", "ex46", "--r", "4", "--norm-bound", "10"], 2),
        (vec!["examples", "delta5"], 0),
        (vec!["delta5"], 0),
        (vec![], 64),
        (vec!["bogus"], 64),
        (vec!["version", "--frobnicate"], 64),
        (vec!["equiv", &f], 64),
        (vec!["invariants", "--form", "/nonexistent/form.json"], 64),
        (vec!["invariants", "--form", &bad], 64),
        (vec!["trace-field", &bad], 64),
        (vec!["twist", "search", "--d", "x"], 64),
    ];
    for (args, expected) in cases {
        assert_eq!(code(&args), expected, "traceforge {}", args.join(" "));
    }
}

#[test]
fn binary_exit_codes_match_library() {
    let st = bin().arg("delta5").output().unwrap().status;
    assert_eq!(st.code(), Some(0));
    let st = bin().args(["twist", "table1"]).output().unwrap().status;
    assert_eq!(st.code(), Some(1));
    let st = bin().arg("bogus").output().unwrap();
    assert_eq!(st.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&st.stderr).contains("bogus"));
}

#[test]
fn json_outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let plan = write(&dir, "plan.json", GPS_PLAN);
    let commands: Vec<Vec<&str>> = vec![
        vec!["traceforge", "--json", "delta5"],
        vec!["traceforge", "--json", "examples", "ex45"],
        vec!["traceforge", "--json", "examples", "ex46"],
        vec!["traceforge", "--json", "twist", "table1"],
        vec!["traceforge", "--json", "twist", "search", "--d", "6", "--dim", "4"],
        vec!["traceforge", "--json", "trace-field", &plan],
    ];
    for c in commands {
        let a = run(c.clone());
        let b = run(c.clone());
        assert_eq!(a, b, "{}", c.join(" "));
        serde_json::from_str::<Value>(&a.1).unwrap();
    }
    let out = bin().args(["--json", "delta5"]).output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), run(["traceforge", "--json", "delta5"]).1);
}

#[test]
fn trace_field_json_is_the_verdict() {
    let dir = TempDir::new().unwrap();
    let plan = write(&dir, "plan.json", GPS_PLAN);
    let (c, out, _) = run(["traceforge", "--json", "trace-field", &plan]);
    assert_eq!(c, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["degree"], 2);
    assert_eq!(v["verdict"], "nonarithmetic");
    assert_eq!(v["rule"], "Thm 1.1");
    let field: MultiquadraticField = serde_json::from_value(v["trace_field"].clone()).unwrap();
    assert_eq!(field.degree(), 2);
    assert_eq!(field.label(), "Q(sqrt(3))");
}

#[test]
fn reports_parse_back() {
    for args in [
        vec!["traceforge", "--json", "delta5"],
        vec!["traceforge", "--json", "examples", "ex45", "--r", "2"],
        vec!["traceforge", "--json", "examples", "ex46", "--r", "2", "--n", "6", "--norm-bound", "500"],
        vec!["traceforge", "--json", "twist", "table1"],
    ] {
        let (_, out, _) = run(args.clone());
        let r: Report = serde_json::from_str(&out).unwrap();
        assert!(r.steps.iter().all(|s| !s.citation.is_empty()), "{}", args.join(" "));
    }
}

#[test]
fn emitted_certificates_verify() {
    let dir = TempDir::new().unwrap();
    let sources: Vec<Vec<&str>> = vec![
        vec!["traceforge", "--json", "twist", "build-odd", "--d", "15", "--n", "6"],
        vec!["traceforge", "--json", "twist", "build-quad", "--b", "2,1", "--n", "4"],
        vec!["traceforge", "--json", "twist", "search", "--d", "3", "--dim", "4"],
    ];
    for (i, args) in sources.into_iter().enumerate() {
        let (c, out, _) = run(args.clone());
        assert_eq!(c, 0, "{}", args.join(" "));
        let v: Value = serde_json::from_str(&out).unwrap();
        let cert = if v.get("certificate").is_some() { v["certificate"].clone() } else { v };
        let path = write(&dir, &format!("cert{i}.json"), &serde_json::to_string(&cert).unwrap());
        let (c, back, err) = run(["traceforge", "--json", "twist", "verify", &path]);
        assert_eq!(c, 0, "{err}");
        let back: Value = serde_json::from_str(&back).unwrap();
        assert_eq!(back, cert);
    }
}

#[test]
fn tampered_certificate_fails() {
    let dir = TempDir::new().unwrap();
    let (_, out, _) = run(["traceforge", "--json", "twist", "build-odd", "--d", "5", "--n", "4"]);
    let mut v: Value = serde_json::from_str(&out).unwrap();
    v["a"] = Value::String("7".into());
    let path = write(&dir, "cert.json", &v.to_string());
    let (c, out, _) = run(["traceforge", "--json", "twist", "verify", &path]);
    assert_eq!(c, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "fail");
}

#[test]
fn invariants_report_hasse_places() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", &form(&["-1", "1", "1", "3"]));
    let (c, out, _) = run(["traceforge", "--json", "invariants", "--form", &f]);
    assert_eq!(c, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rank"], 4);
    assert_eq!(v["admissible"], true);
    let again = run(["traceforge", "--json", "invariants", "--form", &f]).1;
    assert_eq!(out, again);
}

#[test]
fn text_mode_is_readable() {
    let (c, out, _) = run(["traceforge", "examples", "ex45"]);
    assert_eq!(c, 0);
    assert!(out.contains("Q(sqrt(5), sqrt(13), sqrt(17))"));
    assert!(out.contains("degree 8"));
}
