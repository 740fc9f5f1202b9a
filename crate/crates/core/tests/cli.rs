//! End-to-end checks of the command-line interface: exit codes, report
//! stability, and input-path equivalence.

use std::path::Path;
use std::process::{Command, Output};

fn homsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homsym"))
        .args(args)
        .env_remove("HOMSYM_SEED")
        .output()
        .expect("binary runs")
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn analyze_type_iii_reports_g4() {
    let out = homsym(&["analyze", "--type", "III", "--seed", "11"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["d_total"], 4);
    assert_eq!(json["extra_count"], 1);
    assert_eq!(json["gauge_rank"], 2);
    assert_eq!(json["symmetry_class"], "extra");
}

#[test]
fn analyze_vii_at_zero_q() {
    let out = homsym(&["analyze", "--type", "VII", "--q", "0", "--seed", "11"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["d_total"], 3);
    assert_eq!(json["extra_count"], 0);
}

#[test]
fn reports_are_byte_stable() {
    let a = homsym(&["analyze", "--type", "V", "--seed", "42"]);
    let b = homsym(&["analyze", "--type", "V", "--seed", "42"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same input and seed, same bytes");
}

#[test]
fn custom_constants_match_the_catalog_route() {
    let dir = tempdir();
    let constants = dir.join("custom.json");
    // Type IX under another name (B < C storage).
    write(
        &constants,
        r#"{"n":3,"entries":[
            {"A":1,"B":2,"C":3,"value":"1"},
            {"A":2,"B":1,"C":3,"value":"-1"},
            {"A":3,"B":1,"C":2,"value":"1"}]}"#,
    );
    let custom = homsym(&[
        "analyze",
        "--constants",
        constants.to_str().unwrap(),
        "--seed",
        "11",
    ]);
    assert!(custom.status.success());
    let catalog = homsym(&["analyze", "--type", "IX", "--seed", "11"]);
    assert!(catalog.status.success());
    let a: serde_json::Value = serde_json::from_slice(&custom.stdout).unwrap();
    let b: serde_json::Value = serde_json::from_slice(&catalog.stdout).unwrap();
    for key in [
        "jacobi",
        "derivation_dim",
        "inner_dim",
        "outer_dim",
        "gauge_rank",
        "residual_params",
        "d_total",
        "extra_count",
        "symmetry_class",
    ] {
        assert_eq!(a[key], b[key], "field {key}");
    }
}

#[test]
fn explicit_metric_file_is_analyzed_and_canonicalized() {
    let dir = tempdir();
    let metric = dir.join("metric.json");
    write(
        &metric,
        r#"{"n":3,"entries":[["2","1/3","1/2"],["1/3","3","0"],["1/2","0","1"]]}"#,
    );
    let out = homsym(&[
        "analyze",
        "--type",
        "II",
        "--metric",
        metric.to_str().unwrap(),
        "--seed",
        "11",
    ]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["d_total"], 4);
    assert_eq!(json["canonicalization"]["reached_pattern"], true);
}

#[test]
fn exit_codes_follow_the_contract() {
    // Input error: unknown type.
    let out = homsym(&["analyze", "--type", "XI"]);
    assert_eq!(out.status.code(), Some(2));

    // Input error: q out of range.
    let out = homsym(&["analyze", "--type", "VI", "--q", "1"]);
    assert_eq!(out.status.code(), Some(2));

    // Input error: missing file.
    let out = homsym(&["analyze", "--constants", "/nonexistent.json"]);
    assert_eq!(out.status.code(), Some(2));

    // Verification failure: Jacobi-violating constants.
    let dir = tempdir();
    let constants = dir.join("broken.json");
    write(
        &constants,
        r#"{"n":3,"entries":[
            {"A":1,"B":2,"C":3,"value":"1"},
            {"A":2,"B":1,"C":3,"value":"-1"},
            {"A":3,"B":1,"C":2,"value":"1"},
            {"A":1,"B":1,"C":2,"value":"1"}]}"#,
    );
    let out = homsym(&["analyze", "--constants", constants.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    // Fault injection in the realization verifier.
    let out = homsym(&["verify-realizations", "--type", "II", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(1));

    // Clean verifier run.
    let out = homsym(&["verify-realizations", "--type", "VIII", "--points", "10"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn reproduce_table_passes_and_renders_markdown() {
    let out = homsym(&["reproduce", "--seed", "11"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["all_pass"], true);
    assert_eq!(json["rows"].as_array().unwrap().len(), 11);

    let md = homsym(&["reproduce", "--markdown", "--seed", "11"]);
    assert!(md.status.success());
    let text = String::from_utf8(md.stdout).unwrap();
    assert!(text.contains("| I | - | 0 | 0* | 6 | 6 | 3 | ok |"));
    assert!(text.contains("| V | - | 3 | 3 | 3 | 6 | 3 | ok |"));
    assert!(text.contains("out of scope"));
}

#[test]
fn realization_dump_round_trips() {
    let dir = tempdir();
    let dump = dir.join("ix.json");
    let out = homsym(&[
        "verify-realizations",
        "--type",
        "IX",
        "--dump",
        dump.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&dump).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    for field in json["xi"].as_array().unwrap() {
        for comp in field.as_array().unwrap() {
            homsym::coordinate_realizations::parse_sexpr(comp.as_str().unwrap())
                .expect("dumped expressions parse back");
        }
    }
}

#[test]
fn seed_env_fallback() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_homsym"))
        .args(["analyze", "--type", "I"])
        .env("HOMSYM_SEED", "777")
        .output()
        .unwrap();
    assert!(with_env.status.success());
    let json: serde_json::Value = serde_json::from_slice(&with_env.stdout).unwrap();
    assert_eq!(json["seed"], 777);
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("homsym-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
