use std::process::{Command, Output};

use serde_json::Value;

fn qrdecomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrdecomp"))
        .args(args)
        .env_remove("QRDECOMP_WORKERS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn charsum_example() {
    let out = qrdecomp(&["charsum", "--p", "7", "--tuple", "0,1,2,3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"], -1);
    assert_eq!(v["weil_ok"], true);
    assert_eq!(v["wan_ok"], true);
    assert_eq!(v["shift_reduced"], 0);
}

#[test]
fn charsum_odd_k_has_no_wan_verdict() {
    let v = json(&qrdecomp(&["charsum", "--p", "11", "--tuple", "0,1,5"]));
    assert_eq!(v["wan_ok"], Value::Null);
    assert_eq!(v["weil_ok"], true);
}

#[test]
fn bounds_example() {
    let out = qrdecomp(&["bounds", "--p", "1009"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["admissible"]["lower_a"], 9);
    assert_eq!(v["admissible"]["upper_a"], 62);
    let t2 = v["theorem2_lower_bound"].as_f64().unwrap();
    assert!((t2 - 44.23).abs() < 0.005, "{t2}");
    assert_eq!(v["theorem3"]["energy_min"].as_f64(), Some(2016.0));
}

#[test]
fn verify_range_csv() {
    let out = qrdecomp(&["verify-range", "--from", "3", "--to", "23"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,verdict,nodes,seconds"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r.ends_with(",no-decomposition,0,")));
}

#[test]
fn singleton_search_is_not_a_surprise() {
    let out = qrdecomp(&["search", "--p", "7", "--min-a", "1", "--min-b", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        json(&out)["decompositions_found"].as_array().unwrap().len(),
        14
    );
}

#[test]
fn singleton_sumset_is_not_a_surprise() {
    // A + B = {1, 2, 4} = R_7 would be a decomposition; {0} + R_7 is a singleton one
    let ok = qrdecomp(&["sumset", "--p", "7", "--a", "0", "--b", "1,2,4"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["decomposes_residues"], true);
}

#[test]
fn sumset_reports_profile() {
    let v = json(&qrdecomp(&[
        "sumset", "--p", "13", "--a", "0,1,3", "--b", "0,4",
    ]));
    assert_eq!(v["profile"]["M1"], 6);
    assert_eq!(v["residue_hypothesis"], false);
    assert_eq!(v["conditional"], Value::Null);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qrdecomp(&["nonsense"]).status.code(), Some(2));
    assert_eq!(
        qrdecomp(&["charsum", "--p", "9", "--tuple", "0,1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qrdecomp(&["charsum", "--p", "2", "--tuple", "0,1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qrdecomp(&["bounds", "--p", "7", "--format", "csv"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qrdecomp(&["bounds", "--p", "7", "--eta", "0.5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn sampled_output_depends_only_on_seed() {
    let a = qrdecomp(&[
        "ck",
        "--p",
        "101",
        "--k",
        "4",
        "--samples",
        "2000",
        "--seed",
        "7",
    ]);
    let b = qrdecomp(&[
        "ck",
        "--p",
        "101",
        "--k",
        "4",
        "--samples",
        "2000",
        "--seed",
        "7",
    ]);
    let c = qrdecomp(&["hist", "--p", "101", "--samples", "2000", "--seed", "7"]);
    let d = qrdecomp(&["hist", "--p", "101", "--samples", "2000", "--seed", "8"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(c.stdout, d.stdout);
}

#[test]
fn hist_csv_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.csv");
    let out = qrdecomp(&[
        "hist",
        "--p",
        "31",
        "--bins",
        "8",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("bin_left,bin_right,count,reference_density\n"));
    assert_eq!(text.lines().count(), 9);
}

#[test]
fn worker_env_var_is_honoured() {
    let out = Command::new(env!("CARGO_BIN_EXE_qrdecomp"))
        .args(["search", "--p", "43", "--no-theorem1", "--no-lemma5"])
        .env("QRDECOMP_WORKERS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        out.stdout,
        qrdecomp(&[
            "search",
            "--p",
            "43",
            "--no-theorem1",
            "--no-lemma5",
            "--workers",
            "1"
        ])
        .stdout
    );
}

#[test]
fn json_floats_round_trip() {
    let v = json(&qrdecomp(&[
        "charsum", "--p", "10007", "--tuple", "0,1,5,17",
    ]));
    let value = v["value"].as_i64().unwrap();
    assert_eq!(
        v["normalized"].as_f64().unwrap(),
        value as f64 / 10007f64.sqrt()
    );
}

#[test]
fn verify_lemmas_passes() {
    let out = qrdecomp(&[
        "verify-lemmas",
        "--pairs",
        "50",
        "--instances",
        "20",
        "--step-max",
        "2000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["all_passed"], true);
}

#[test]
fn sweep_skips_colliding_primes() {
    let v = json(&qrdecomp(&[
        "sweep", "--tuple", "0,1,2,3", "--from", "3", "--to", "7",
    ]));
    assert_eq!(v["skipped"], serde_json::json!([3]));
    assert_eq!(v["points"].as_array().unwrap().len(), 2);
}

#[test]
fn help_lists_every_command() {
    let text = String::from_utf8(qrdecomp(&["--help"]).stdout).unwrap();
    for cmd in [
        "charsum",
        "ck",
        "hist",
        "sweep",
        "sumset",
        "bounds",
        "search",
        "verify-range",
        "verify-lemmas",
    ] {
        assert!(text.contains(cmd), "{cmd}");
    }
}
