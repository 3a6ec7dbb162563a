//! End-to-end tests of the `wnl` binary: exit codes, output shapes, and the
//! documented verdicts of the built-in families.

use std::path::PathBuf;
use std::process::Command;

fn wnl(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_wnl"))
        .args(args)
        .env_remove("WNL_SEED")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn temp_file(name: &str, content: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("wnl-cli-test-{}-{name}", std::process::id()));
    std::fs::write(&path, content).expect("temp file writable");
    path
}

fn poly_z1_squared(scale: f64) -> String {
    format!(
        "{{\"space\":{{\"n\":3,\"p\":2.0}},\"components\":[{{\"k\":2,\"kind\":\"diagonal\",\
\"coeffs\":[[{scale},0],[0,0],[0,0]]}}],\"chain\":[]}}"
    )
}

#[test]
fn constants_csv_pins_delta_two() {
    let (code, stdout, _) = wnl(&["constants", "--n-max", "4"]);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("N,delta_N,s_N,s_half_N,M_N"));
    let row2 = lines.nth(1).expect("row for N=2");
    let fields: Vec<&str> = row2.split(',').collect();
    assert_eq!(fields[0], "2");
    let delta: f64 = fields[1].parse().unwrap();
    assert!((delta - 0.25).abs() <= 1e-12);
}

#[test]
fn constants_json_carries_schema() {
    let (code, stdout, _) = wnl(&["constants", "--n-max", "2", "--format", "json"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    assert_eq!(doc["schema"], "1");
    assert_eq!(doc["rows"][1]["N"], 2);
    assert!((doc["rows"][1]["delta_N"].as_f64().unwrap() - 0.25).abs() <= 1e-12);
}

#[test]
fn norm_v_of_squared_coordinate() {
    let poly = temp_file("vnorm.json", &poly_z1_squared(1.0));
    let (code, stdout, _) = wnl(&["norm", "--poly", poly.to_str().unwrap(), "--mode", "v"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    assert_eq!(doc["schema"], "1");
    let value = doc["value"].as_f64().unwrap();
    assert!((value - 0.25).abs() <= 1e-9, "v-norm of z_1^2 is {value}");
    // the maximizer sits at the degree-2 critical radius 1/sqrt(2)
    let coords = doc["witness"]["coords"].as_array().unwrap();
    let norm: f64 = coords
        .iter()
        .map(|z| z[0].as_f64().unwrap().powi(2) + z[1].as_f64().unwrap().powi(2))
        .sum::<f64>()
        .sqrt();
    assert!((norm - std::f64::consts::FRAC_1_SQRT_2).abs() <= 1e-4);
}

#[test]
fn norm_mode_s_requires_radius() {
    let poly = temp_file("nos.json", &poly_z1_squared(1.0));
    let (code, _, stderr) = wnl(&["norm", "--poly", poly.to_str().unwrap(), "--mode", "s"]);
    assert_eq!(code, 64);
    assert!(stderr.contains("--s"));
}

#[test]
fn norm_space_mismatch_is_domain_error() {
    let poly = temp_file("mismatch.json", &poly_z1_squared(1.0));
    let (code, _, _) = wnl(&[
        "norm",
        "--poly",
        poly.to_str().unwrap(),
        "--space",
        "4,2",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn malformed_poly_is_domain_error() {
    let poly = temp_file("broken.json", "{\"space\":");
    let (code, _, stderr) = wnl(&["norm", "--poly", poly.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("schema error"));
}

#[test]
fn counterexample_q_passes() {
    let (code, stdout, _) = wnl(&[
        "counterexample",
        "--family",
        "Q",
        "--k",
        "2",
        "--n-trunc",
        "12",
    ]);
    assert_eq!(code, 0);
    let verdict: serde_json::Value =
        serde_json::from_str(stdout.lines().last().unwrap()).unwrap();
    assert_eq!(verdict["passed"], true);
    assert_eq!(verdict["truncation"]["escape_index"], 12);
}

#[test]
fn counterexample_pr_fails_on_the_flip_clauses() {
    // the closed form ignores phase freedom on the negative second
    // coefficient, so exactly the value and escape clauses must fail
    let (code, stdout, _) = wnl(&[
        "counterexample",
        "--family",
        "Pr",
        "--k",
        "2",
        "--r",
        "0.9",
        "--n-trunc",
        "16",
    ]);
    assert_eq!(code, 1);
    let verdict: serde_json::Value =
        serde_json::from_str(stdout.lines().last().unwrap()).unwrap();
    assert_eq!(verdict["passed"], false);
    let mut failing: Vec<&str> = verdict["clauses"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    failing.sort_unstable();
    assert_eq!(failing, ["pr-closed-form-match", "pr-escape"]);
}

#[test]
fn counterexample_pr_requires_radius() {
    let (code, _, stderr) = wnl(&["counterexample", "--family", "Pr"]);
    assert_eq!(code, 64);
    assert!(stderr.contains("--r"));
}

#[test]
fn counterexample_fn_hits_the_ladder() {
    let (code, stdout, _) = wnl(&[
        "counterexample",
        "--family",
        "fN",
        "--k",
        "3",
        "--n-trunc",
        "4",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["family"], "fN");
}

#[test]
fn bollobas_round_trip_and_missing_start() {
    let poly = temp_file("boll-p.json", &poly_z1_squared(4.0));
    let x = temp_file(
        "boll-x.json",
        "{\"space\":{\"n\":3,\"p\":2.0},\"coords\":[[0.7071067811865476,0],[0,0],[0,0]]}",
    );
    let (code, stdout, _) = wnl(&[
        "bollobas",
        "--poly",
        poly.to_str().unwrap(),
        "--x",
        x.to_str().unwrap(),
        "--eps",
        "0.1",
        "--mode",
        "practical",
    ]);
    assert_eq!(code, 0);
    let last: serde_json::Value = serde_json::from_str(stdout.lines().last().unwrap()).unwrap();
    assert_eq!(last["verdict"], "ok");
    assert_eq!(last["within_initial_tube"], true);
    assert!(last["sup_dist"].as_f64().unwrap() <= 0.1);

    let (code, _, _) = wnl(&["bollobas", "--poly", poly.to_str().unwrap()]);
    assert_eq!(code, 64);
}

#[test]
fn bollobas_faithful_rejects_a_coarse_witness() {
    // 16 decimal digits of 1/sqrt(2) leave a 1e-16 attainment margin, far
    // above the faithful gate
    let poly = temp_file("faith-p.json", &poly_z1_squared(4.0));
    let x = temp_file(
        "faith-x.json",
        "{\"space\":{\"n\":3,\"p\":2.0},\"coords\":[[0.7071067811865476,0],[0,0],[0,0]]}",
    );
    let (code, _, stderr) = wnl(&[
        "bollobas",
        "--poly",
        poly.to_str().unwrap(),
        "--x",
        x.to_str().unwrap(),
        "--eps",
        "0.05",
        "--mode",
        "faithful",
    ]);
    assert_eq!(code, 1);
    assert!(stderr.contains("hypothesis violated"));
}

#[test]
fn verify_filter_is_deterministic_and_fast_checks_pass() {
    let args = ["verify", "--filter", "constants/"];
    let (code1, out1, _) = wnl(&args);
    let (code2, out2, _) = wnl(&args);
    assert_eq!(code1, 0);
    assert_eq!(code1, code2);
    assert_eq!(out1, out2, "same seed must reproduce the report bytes");
}

#[test]
fn verify_reports_exactly_the_flip_failures() {
    let (code, stdout, _) = wnl(&["verify"]);
    assert_eq!(code, 1);
    let summary: serde_json::Value =
        serde_json::from_str(stdout.lines().last().unwrap()).unwrap();
    let mut failed: Vec<&str> = summary["failed"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    failed.sort_unstable();
    assert_eq!(
        failed,
        [
            "counterexamples/pr-closed-form-upper-bound",
            "counterexamples/pr-escape-monotonicity"
        ]
    );
    assert_eq!(summary["total"].as_u64().unwrap() as usize, stdout.lines().count() - 1);
}

#[test]
fn verify_unknown_filter_is_usage_error() {
    let (code, _, stderr) = wnl(&["verify", "--filter", "no-such-check"]);
    assert_eq!(code, 64);
    assert!(stderr.contains("filter"));
}

#[test]
fn config_file_merges_and_flags_override() {
    let cfg = temp_file("conf.json", "{\"seed\": 9, \"format\": \"json\"}");
    let (code, stdout, _) = wnl(&["constants", "--n-max", "1", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.trim_start().starts_with('{'), "file format applies");
    let (code, stdout, _) = wnl(&[
        "constants",
        "--n-max",
        "1",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("N,"), "flag overrides the file");

    let bad = temp_file("conf-bad.json", "{\"does_not_exist\": 1}");
    let (code, _, _) = wnl(&["constants", "--config", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn out_flag_redirects_the_payload() {
    let target = std::env::temp_dir().join(format!("wnl-out-{}.csv", std::process::id()));
    let (code, stdout, _) = wnl(&[
        "constants",
        "--n-max",
        "2",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let written = std::fs::read_to_string(&target).unwrap();
    assert!(written.starts_with("N,delta_N"));
    let _ = std::fs::remove_file(&target);
}

#[test]
fn help_and_bad_usage_exit_codes() {
    let (code, stdout, _) = wnl(&["--help"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("constants"));
    let (code, _, _) = wnl(&["definitely-not-a-command"]);
    assert_eq!(code, 64);
    let (code, _, _) = wnl(&["norm"]);
    assert_eq!(code, 64, "missing required --poly");
}

#[test]
fn seed_env_feeds_the_default() {
    let out_a = Command::new(env!("CARGO_BIN_EXE_wnl"))
        .args(["verify", "--filter", "space/norm-axioms"])
        .env("WNL_SEED", "11")
        .output()
        .unwrap();
    let out_b = Command::new(env!("CARGO_BIN_EXE_wnl"))
        .args(["verify", "--filter", "space/norm-axioms", "--seed", "11"])
        .env_remove("WNL_SEED")
        .output()
        .unwrap();
    assert_eq!(out_a.status.code(), Some(0));
    assert_eq!(out_a.stdout, out_b.stdout, "env seed equals the flag");
    let (code, _, stderr) = {
        let out = Command::new(env!("CARGO_BIN_EXE_wnl"))
            .args(["constants"])
            .env("WNL_SEED", "not-a-number")
            .output()
            .unwrap();
        (
            out.status.code().unwrap_or(-1),
            String::from_utf8_lossy(&out.stdout).into_owned(),
            String::from_utf8_lossy(&out.stderr).into_owned(),
        )
    };
    assert_eq!(code, 64);
    assert!(stderr.contains("WNL_SEED"));
}
