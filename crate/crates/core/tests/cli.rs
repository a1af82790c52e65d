use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use psakit::scenario::parse_scenario_str;
use serde_json::Value;

fn scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn psakit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psakit")).args(args).output().unwrap()
}

fn scenario(name: &str) -> String {
    scenarios().join(name).to_str().unwrap().to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn classify_bell_is_entangled() {
    let out = psakit(&["classify", &scenario("bell_phi_plus.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["verdict"]["classification"], "Entangled");
    assert_eq!(r["verdict"]["effective"]["correlation_sign"], "correlated");
    assert_eq!(r["joint_tables"][0]["probabilities"], serde_json::json!([[0.5, 0.0], [0.0, 0.5]]));
}

#[test]
fn classify_dice() {
    let glued = json(&psakit(&["classify", &scenario("glued_dice.json")]));
    assert_eq!(glued["verdict"]["classification"], "Entangled");
    let fair = json(&psakit(&["classify", &scenario("fair_dice.json")]));
    assert_eq!(fair["verdict"]["classification"], "IntensiveOnly");
}

#[test]
fn ks_cabello_reports_nonexistence() {
    let out = psakit(&["ks", &scenario("cabello18.json"), "--format", "table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("no binary valuation exists; branches explored: "), "{text}");
    let r = json(&psakit(&["ks", &scenario("cabello18.json")]));
    assert_eq!(r["result"]["exists"], false);
    assert_eq!(r["result"]["constrained_contexts"], 9);
}

#[test]
fn ks_budget_exhaustion_is_an_error() {
    let out = psakit(&["ks", &scenario("cabello18.json"), "--budget", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[E_SEARCH_BUDGET]"));
}

#[test]
fn invalid_state_exits_one_without_report() {
    let out = psakit(&["classify", &scenario("bad_trace.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("error[E_VALIDATION]") && err.contains("trace_defect=0.1"), "{err}");
}

#[test]
fn schema_error_names_field_and_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("s.json");
    std::fs::write(&f, "{\"schema_version\": \"1.0\",\n \"dims\": [2, 2],\n \"state\": {\"type\": \"werner\", \"v\": 1}}").unwrap();
    let out = psakit(&["classify", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error[E_SCHEMA]") && err.contains("state") && err.contains("line 3"), "{err}");
}

#[test]
fn anomaly_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("anomaly.json");
    std::fs::write(
        &f,
        r#"{"schema_version": "1.0", "dims": [2, 2], "state": {"type": "bell_phi_plus"},
            "bases_a": ["z", "x"], "bases_b": ["z"], "context_pairs": [{"a": "z", "b": "z"}]}"#,
    )
    .unwrap();
    let out = psakit(&["classify", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(r["verdict"]["classification"], "EffectiveOnlyAnomaly");
    assert_eq!(r["verdict"]["diagnostics"].as_array().unwrap().len(), 1);
}

#[test]
fn out_flag_and_echo_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let out = psakit(&["classify", &scenario("singlet.json"), "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let echoed = parse_scenario_str(&r["scenario"].to_string()).unwrap();
    let original = parse_scenario_str(&std::fs::read_to_string(scenario("singlet.json")).unwrap()).unwrap();
    assert_eq!(echoed, original);
    assert_eq!(r["verdict"]["effective"]["correlation_sign"], "anti_correlated");
}

#[test]
fn mode_and_tolerance_overrides() {
    let out = psakit(&[
        "classify",
        &scenario("bell_phi_plus.json"),
        "--mode",
        "all-matched",
        "--tol-effective",
        "0.001",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["metadata"]["tolerances"]["effective"], 0.001);
    // all four context combinations are tested in all-matched mode
    assert_eq!(r["joint_tables"].as_array().unwrap().len(), 4);
    assert_eq!(r["verdict"]["classification"], "Entangled");
}

#[test]
fn env_max_dim_limits_scenarios() {
    let out = Command::new(env!("CARGO_BIN_EXE_psakit"))
        .args(["classify", &scenario("glued_dice.json")])
        .env("PSAKIT_MAX_DIM", "16")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("max_dim"));
}

#[test]
fn sample_reports_tallies_and_is_reproducible() {
    let args = ["sample", &scenario("bell_phi_plus.json"), "--shots", "20000", "--seed", "5"];
    let (a, b) = (psakit(&args), psakit(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = json(&a);
    let zz = &r["sampling"]["tallies"][0];
    assert_eq!(zz[0][1], 0);
    assert_eq!(zz[1][0], 0);
    assert_eq!(r["sampling"]["agrees_with_exact"], true);
    assert_eq!(r["metadata"]["seed"], 5);
}

#[test]
fn graph_lists_contexts() {
    let r = json(&psakit(&["graph", &scenario("qutrit_mubs.json")]));
    assert_eq!(r["graph"]["maximal_context_count"], 4);
    assert_eq!(r["graph"]["resolving_context_count"], 4);
    let text = String::from_utf8(psakit(&["classify", &scenario("werner_0.2.json"), "--format", "table"]).stdout).unwrap();
    assert!(text.starts_with("classification   IntensiveOnly"), "{text}");
}
