use std::path::PathBuf;
use std::process::{Command, Output};

use orbifold_braid::trace::ProofTrace;
use serde_json::Value;

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    root.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbibraid"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (out.status.code().unwrap(), value)
}

fn replay(trace: &Value) {
    let t: ProofTrace = serde_json::from_value(trace.clone()).expect("trace deserializes");
    t.replay().expect("trace replays");
}

#[test]
fn center_of_torus_with_one_cone() {
    let (code, v) = run_json(&["center", "-i", &fixture("torus_one_cone.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "Trivial");
    assert_eq!(v["group"]["n"], 1);
    assert_eq!(v["group"]["pure"], true);
    assert_eq!(v["group"]["base"]["genus"], 1);
    assert_eq!(v["trace"][0]["rule"], "OneRelatorTorsion");
    replay(&v["trace"]);
}

#[test]
fn braid_center_statuses_and_exit_codes() {
    let disc = fixture("disc_two_cones.json");
    let (code, v) = run_json(&["braid-center", "-i", &disc, "-n", "4", "--pure"]);
    assert_eq!((code, v["status"].as_str().unwrap()), (0, "Trivial"));
    replay(&v["trace"]);

    let (code, v) = run_json(&["braid-center", "-i", &disc, "-n", "2"]);
    assert_eq!(
        (code, v["status"].as_str().unwrap()),
        (3, "UnknownPerPaper")
    );

    let (code, v) = run_json(&[
        "braid-center",
        "-i",
        &fixture("smooth_disc.json"),
        "-n",
        "3",
    ]);
    assert_eq!(
        (code, v["status"].as_str().unwrap()),
        (3, "OutOfScopeSeeLiterature")
    );
}

#[test]
fn invalid_input_exits_with_two_and_names_the_invariant() {
    let out = run(&["center", "-i", &fixture("bad_cone_order.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cone_order_at_least_two"));

    let out = run(&["nice-check", "-i", &fixture("embedding_bad_flag.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("simply_connected_flag_agrees"));

    let out = run(&["center", "-i", &fixture("sphere_excluded.json")]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["center", "-i", "no/such/file.json"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&[
        "injectivity",
        "-i",
        &fixture("embedding_nice.json"),
        "-n",
        "3",
        "-m",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn injectivity_fixtures() {
    let (code, v) = run_json(&[
        "injectivity",
        "-i",
        &fixture("embedding_nice.json"),
        "-n",
        "2",
        "-m",
        "3",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "Injective");
    assert_eq!(v["source"]["n"], 2);
    assert_eq!(v["target"]["n"], 3);
    replay(&v["trace"]);

    let (_, v) = run_json(&[
        "injectivity",
        "-i",
        &fixture("embedding_smooth_disc_complement.json"),
        "-n",
        "1",
        "-m",
        "1",
    ]);
    assert_eq!(v["status"], "TheoremInapplicable");
    assert_eq!(v["violations"].as_array().unwrap().len(), 2);

    let (_, v) = run_json(&[
        "injectivity",
        "-i",
        &fixture("embedding_smooth_disc_sub.json"),
        "-n",
        "1",
        "-m",
        "1",
        "--pure",
    ]);
    assert_eq!(v["status"], "Injective");
}

#[test]
fn presentation_and_abelianization() {
    let (_, v) = run_json(&["present", "-i", &fixture("disc_two_cones.json")]);
    assert_eq!(v["generators"], serde_json::json!(["x1", "x2"]));
    assert_eq!(v["relators"], serde_json::json!([[["x1", 2]], [["x2", 3]]]));

    let (_, v) = run_json(&["abelianize", "-i", &fixture("klein_one_cone.json")]);
    assert_eq!(v, serde_json::json!({"rank": 1, "torsion": [6]}));

    let inline = r#"{"generators":["a","b"],"relators":[[["a",1],["b",1],["a",-1],["b",1]]]}"#;
    let (_, v) = run_json(&["abelianize", "-i", inline]);
    assert_eq!(v, serde_json::json!({"rank": 1, "torsion": [2]}));
}

#[test]
fn order_and_snf() {
    let z2z3 = fixture("z2z3.json");
    let (_, v) = run_json(&["order", "-i", &z2z3, "-w", "x1 x2"]);
    assert_eq!(v["order"], "infinite");
    let (_, v) = run_json(&["order", "-i", &z2z3, "-w", "x2^4"]);
    assert_eq!(v["order"], serde_json::json!({"finite": 3}));

    let (_, v) = run_json(&["snf", "-i", &fixture("snf_matrix.json")]);
    assert_eq!(v["factors"], serde_json::json!([2, 6, 12]));
    let (code, _) = run_json(&["snf", "-i", "[[1, 2], [3]]"]);
    assert_eq!(code, 2);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "--json",
        "injectivity",
        "-i",
        &fixture("embedding_nice.json"),
        "-n",
        "3",
        "-m",
        "4",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let args = [
        "braid-center",
        "-i",
        &fixture("genus_two_two_cones.json"),
        "-n",
        "5",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn verdict_json_round_trips() {
    let (_, v) = run_json(&[
        "braid-center",
        "-i",
        &fixture("genus_two_two_cones.json"),
        "-n",
        "3",
    ]);
    let t: ProofTrace = serde_json::from_value(v["trace"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&t).unwrap(), v["trace"]);
}
