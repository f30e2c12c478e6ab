use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn kummer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kummer")).args(args).env("KUMMER_WORKERS", "2").output().expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = kummer(args);
    let code = out.status.code().expect("exited");
    let json = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)));
    (code, json)
}

fn validate(report: &Value) {
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(schema_path).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    let msgs: Vec<String> = match compiled.validate(report) {
        Ok(()) => vec![],
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    assert!(msgs.is_empty(), "schema violations: {msgs:#?}");
}

#[test]
fn verify_all_n2_exact() {
    let (code, r) = report(&["verify-all", "--n", "2", "--backend", "exact"]);
    assert_eq!(code, 0);
    validate(&r);
    assert_eq!(r["results"]["crossed_product"]["hh_dims"], serde_json::json!({"0": 5, "1": 0, "2": 1}));
    assert_eq!(r["results"]["cyclic"]["hc_dims"]["8"], 6);
    assert_eq!(r["results"]["periodic"], serde_json::json!({"hp_even": 6, "hp_odd": 0}));
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn hochschild_n3_twisted_vanishes() {
    let (code, r) = report(&["hochschild", "--n", "3", "--window", "3"]);
    assert_eq!(code, 0);
    validate(&r);
    let t = &r["results"]["twisted"];
    assert_eq!(t["dims"], serde_json::json!({"0": 8, "1": 0, "2": 0, "3": 0}));
    assert_eq!(t["stabilized"], serde_json::json!({"0": true, "1": true, "2": true, "3": true}));
}

#[test]
fn reduce_cycle_writes_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let out = kummer(&["reduce-cycle", "--n", "2", "--seed", "7", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    validate(&r);
    let cert = &r["results"]["reductions"][0];
    assert_eq!(cert["residual"], "0");
    assert_eq!(cert["round_trip"], true);
}

#[test]
fn reports_are_byte_identical() {
    let args = ["verify-all", "--n", "2", "--backend", "modular", "--seed", "11"];
    let a = kummer(&args);
    let b = kummer(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r: Value = serde_json::from_slice(&a.stdout).unwrap();
    validate(&r);
    // every modular certificate records its seeds
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("\"backend\": \"modular\""));
}

#[test]
fn invalid_config_exits_4() {
    for args in [
        vec!["hochschild", "--n", "5"],
        vec!["hochschild", "--n", "2", "--window", "1"],
        vec!["hochschild", "--n", "2", "--margin", "1"],
        vec!["hochschild", "--n", "2", "--backend", "fast"],
        vec!["cyclic"],
        vec!["frobnicate", "--n", "2"],
        vec!["reduce-cycle", "--n", "2", "--degree", "2"],
    ] {
        assert_eq!(kummer(&args).status.code(), Some(4), "{args:?}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_kummer")).args(["hochschild", "--n", "2"]).env("KUMMER_WORKERS", "zero").output().unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn short_cyclic_range_exits_3() {
    let out = kummer(&["periodic", "--n", "2", "--max-degree", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn csv_output() {
    let out = kummer(&["cyclic", "--n", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(headers.iter().collect::<Vec<_>>(), ["command", "check", "n", "degree", "dimension", "expected", "pass"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    let hc4 = rows.iter().find(|r| &r[1] == "crossed_product_hc" && &r[3] == "4").unwrap();
    assert_eq!((&hc4[4], &hc4[5], &hc4[6]), ("6", "6", "true"));
}

#[test]
fn invariance_report() {
    let (code, r) = report(&["invariance", "--n", "3"]);
    assert_eq!(code, 0);
    validate(&r);
    let records = r["results"]["invariance"]["untwisted"].as_array().unwrap();
    assert_eq!(records.len(), 8);
    for rec in records {
        let s = rec["degree"].as_u64().unwrap();
        assert_eq!(rec["scalar"], if s % 2 == 0 { "1" } else { "-1" });
    }
}
