use std::process::Command;

use limitlab::cli::run;
use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["limitlab", "--format", "structured"];
    full.extend_from_slice(args);
    let (out, code) = run(full);
    (serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")), code)
}

#[test]
fn classify_reports_every_type() {
    let (doc, code) = json(&["classify", "--fn", &fixture("dirichlet.fn"), "--at", "0"]);
    assert_eq!(code, 0);
    assert_eq!(doc["command"], "classify");
    assert_eq!(doc["chain_consistent"], true);
    assert_eq!(doc["types"]["T1"]["exists"], "no");
    assert_eq!(doc["types"]["T5"]["value"], "0");
    assert_eq!(doc["types"]["T2"]["exists"], "yes");
}

#[test]
fn limit_verdicts_and_witnesses() {
    let (doc, code) = json(&["limit", "--fn", "x^2", "--at", "1/2", "--type", "t1", "--value", "1/4"]);
    assert_eq!((code, doc["status"].as_str()), (0, Some("pass")));
    assert!(doc["witness"].as_array().is_some_and(|w| !w.is_empty()));
    let (doc, code) = json(&["limit", "--fn", &fixture("cantor.fn"), "--at", "0", "--type", "T5", "--value", "0"]);
    assert_eq!((code, doc["status"].as_str()), (0, Some("fail")));
    assert!(doc["evidence"].is_string());
}

#[test]
fn measure_density_cardinality() {
    let (doc, _) = json(&["measure", "--set", &fixture("omega.set")]);
    assert_eq!((doc["value"].as_str(), doc["exact"].as_bool()), (Some("69/80"), Some(true)));
    let (doc, _) = json(&["density", "--set", &fixture("omega.set"), "--at", "0"]);
    assert_eq!(doc["verdict"], "zero");
    let (doc, _) = json(&["cardinality", "--set", "seq(1/n) | points(-1/2)", "--at", "0", "--radius", "1"]);
    assert_eq!(doc["class"], "countably infinite");
}

#[test]
fn decompose_and_verify() {
    let (doc, code) = json(&["decompose", "--fn", &fixture("dirichlet.fn"), "--at", "0", "--type", "t5", "--value", "0"]);
    assert_eq!((code, doc["verified"].as_bool()), (0, Some(true)));
    let (doc, code) =
        json(&["verify", "--fn", &fixture("dirichlet.fn"), "--fn", &fixture("identity.fn"), "--at", "0"]);
    assert_eq!((code, doc["ok"].as_bool()), (0, Some(true)));
    assert_eq!(doc["cases"].as_array().map(Vec::len), Some(2));
}

#[test]
fn estimates_and_profiles() {
    let (doc, _) = json(&["estimate", "--set", "[0, 1]", "--radius", "2", "--samples", "4000", "--seed", "9"]);
    assert_eq!(doc["exact"], "1");
    assert_eq!(doc["within_three_sigma"], true);
    let (doc, _) = json(&["estimate", "--set", &fixture("omega.set"), "--at", "0", "--depths", "6"]);
    assert_eq!(doc["profile"].as_array().map(Vec::len), Some(7));
}

#[test]
fn errors_are_structured() {
    let (doc, code) = json(&["measure", "--set", "[0,"]);
    assert_eq!(code, 1);
    assert_eq!(doc["error"]["kind"], "syntax");
    assert_eq!((doc["error"]["line"].as_u64(), doc["error"]["column"].as_u64()), (Some(1), Some(4)));
    let (doc, code) = json(&["measure", "--set", "cantor(0, 1) & cantor(1/9, 1)"]);
    assert_eq!((code, doc["error"]["kind"].as_str()), (1, Some("unsupported_intersection")));
    let (doc, _) = json(&["measure", "--set", "blob(1)"]);
    assert_eq!(doc["error"]["kind"], "unknown_atom");
    let (_, code) = run(["limitlab", "classify", "--bogus"]);
    assert_eq!(code, 1);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_limitlab");
    let ok = Command::new(bin).args(["measure", "--set", "[0, 1/2]"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout).trim(), "measure 1/2");
    let bad = Command::new(bin).args(["measure", "--set", "[0,"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let open = Command::new(bin).args(["density", "--set", "family(1/n, 1/n + 1/2/n)", "--at", "0"]).output().unwrap();
    assert_eq!(open.status.code(), Some(2));
}
