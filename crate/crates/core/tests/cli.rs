use std::io::Write;

use linkforge::cli::run;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["linkforge"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.push("--json");
    let (code, out, err) = call(&a);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn pd_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

const FIG5A: &str = "fig5a(m=6,k1=trefoil,k2=trefoil)";
const FIG5B: &str = "fig5b(m=6,k=trefoil)";

#[test]
fn envelope_fields() {
    let v = json(&["catalog"]);
    assert_eq!(v["tool"], "linkforge");
    assert_eq!(v["command"], "catalog");
    assert!(v["version"].is_string());
    assert!(v["result"]["entries"].as_array().unwrap().len() >= 15);
}

#[test]
fn unlink_invariants_vanish() {
    let (code, out, _) = call(&["invariants", "--catalog", "unlink(3)", "--k", "4"]);
    assert_eq!(code, 0);
    assert!(out.contains("all vanish"));
    let v = json(&["invariants", "--catalog", "unlink(3)", "--k", "4"]);
    for e in v["result"]["milnor"]["entries"].as_array().unwrap() {
        assert_eq!(e["mu"], 0);
    }
}

#[test]
fn fig5a_bounds_carry_the_obstruction() {
    let v = json(&["bounds", "--catalog", FIG5A, "--k", "4"]);
    let obs = v["result"]["obstructions"].as_array().unwrap();
    let fired: Vec<&Value> = obs.iter().filter(|c| !c["conclusion"].is_null()).collect();
    assert_eq!(fired.len(), 1);
    assert_eq!(fired[0]["theorem"], "Thm4.2");
    assert_eq!(fired[0]["conclusion"]["k"], 4);
    assert_eq!(fired[0]["conclusion"]["value"], 3);
    assert_eq!(v["result"]["effective_lower"]["value"], 3);
}

#[test]
fn fig5a_obstruction_does_not_lift_lower_levels() {
    let v = json(&["bounds", "--catalog", FIG5A, "--k", "3"]);
    assert_eq!(v["result"]["effective_lower"]["value"], 0);
}

#[test]
fn fig5b_obstructions() {
    let v = json(&["obstructions", "--catalog", FIG5B]);
    let lows = v["result"]["lower_bounds"].as_array().unwrap();
    let pairs: Vec<(String, i64, i64)> = lows
        .iter()
        .map(|b| (b["theorem"].as_str().unwrap().to_string(), b["k"].as_i64().unwrap(), b["value"].as_i64().unwrap()))
        .collect();
    assert_eq!(pairs, vec![("Thm4.3a".into(), 3, 5), ("Thm4.3b".into(), 4, 6)]);
}

#[test]
fn missing_file_is_an_input_error() {
    let (code, out, err) = call(&["bounds", "--pd", "/nonexistent/missing.pd", "--k", "3"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("missing.pd"));
}

#[test]
fn both_sources_rejected() {
    let f = pd_file("X(1,3,2,4)\nX(3,1,4,2)\n");
    let (code, _, err) = call(&["invariants", "--pd", f.path().to_str().unwrap(), "--catalog", "hopf(+)"]);
    assert_eq!(code, 1);
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn bad_k_is_an_input_error() {
    let (code, _, err) = call(&["bounds", "--catalog", "hopf(+)", "--k", "0"]);
    assert_eq!(code, 1);
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn bad_catalog_spec() {
    let (code, _, err) = call(&["invariants", "--catalog", "fig5a(m=99)"]);
    assert_eq!(code, 1);
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn capacity_errors_exit_two() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let status = std::process::Command::new(env!("CARGO_BIN_EXE_linkforge"))
        .args(["invariants", "--catalog", "borromean", "--k", "4"])
        .env("LINKFORGE_CAPACITY", "10")
        .output()
        .unwrap();
    out.extend(status.stdout);
    err.extend(status.stderr);
    assert_eq!(status.status.code(), Some(2));
    assert_eq!(String::from_utf8(err).unwrap().lines().count(), 1);
    assert!(out.is_empty());
}

#[test]
fn pd_and_catalog_inputs_agree() {
    let (_, pd, _) = call(&["catalog", "--catalog", "whitehead"]);
    let f = pd_file(&pd);
    let path = f.path().to_str().unwrap();
    for verb in ["invariants", "bounds", "obstructions", "search", "validate"] {
        let a = json(&[verb, "--catalog", "whitehead", "--k", "3", "--budget", "1"]);
        let b = json(&[verb, "--pd", path, "--k", "3", "--budget", "1"]);
        let strip = |mut v: Value| {
            v["result"].as_object_mut().unwrap().remove("input");
            v
        };
        assert_eq!(strip(a), strip(b), "{verb}");
    }
    let v = json(&["catalog", "--pd", path]);
    assert_eq!(v["result"]["pd"].as_str().unwrap(), pd);
}

#[test]
fn json_is_byte_stable() {
    for args in [
        vec!["bounds", "--catalog", FIG5A, "--k", "4", "--json", "--min-ordering"],
        vec!["search", "--catalog", "whitehead", "--k", "4", "--budget", "2", "--json", "--workers", "3"],
        vec!["invariants", "--catalog", "borromean", "--k", "3", "--json"],
    ] {
        let (c1, a, _) = call(&args);
        let (c2, b, _) = call(&args);
        assert_eq!((c1, c2), (0, 0));
        assert_eq!(a, b);
    }
}

#[test]
fn search_timing_flag() {
    let v = json(&["search", "--catalog", "hopf(+)", "--k", "4", "--budget", "2"]);
    assert_eq!(v["result"]["ms"], 0);
    assert_eq!(v["result"]["min_witness_size"], 1);
    let (code, out, _) = call(&["search", "--catalog", "hopf(+)", "--timing"]);
    assert_eq!(code, 0);
    assert!(out.trim_end().ends_with("ms"));
}

#[test]
fn validate_reports_violations() {
    let f = pd_file("X(1,2,3,4)\nX(1,2,3,5)\n");
    let (code, out, _) = call(&["validate", "--pd", f.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("violation"));
    let (code, out, _) = call(&["validate", "--catalog", FIG5B]);
    assert_eq!(code, 0);
    assert!(out.contains("valid"));
}

#[test]
fn min_ordering_extension() {
    let v = json(&["bounds", "--catalog", "borromean", "--k", "3", "--min-ordering"]);
    assert_eq!(v["result"]["lambda_star_min"]["value"], 2);
    let v = json(&["bounds", "--catalog", "borromean", "--k", "3"]);
    assert!(v["result"].get("lambda_star_min").is_none());
}
