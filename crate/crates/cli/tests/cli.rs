//! End-to-end command behavior: the exit-code taxonomy, cache round-trips
//! and corruption detection, flag plumbing, and partial certificates.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_eds")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(bin()).args(args).output().unwrap();
    (
        out.status.code().expect("process terminated by signal"),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn exit_codes_distinguish_input_verification_and_budget() {
    // Malformed JSON: input error, exit 2.
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{not json").unwrap();
    let (code, _, err) = run(&["gen", "--curve", junk.to_str().unwrap()]);
    assert_eq!(code, 2, "stderr: {err}");

    // Missing file: also an input error.
    let (code, _, _) = run(&["gen", "--curve", "/nonexistent/curve.json"]);
    assert_eq!(code, 2);

    // Zero numeric parameter: rejected before compute.
    let c37 = data("curve_37a.json");
    let (code, _, err) = run(&["gen", "--curve", c37.to_str().unwrap(), "--max-index", "0"]);
    assert_eq!(code, 2, "stderr: {err}");

    // A failed mathematical check: exit 1. At n = 1 the quartic pipeline has
    // v(Delta_F) = 4 at the distinguished ideal, which 5 does not divide.
    let quartic = data("curve_quartic.json");
    let (code, _, err) = run(&[
        "frey", "build", "--curve", quartic.to_str().unwrap(), "-n", "1", "--ell", "5",
    ]);
    assert_eq!(code, 1, "stderr: {err}");
    assert!(err.contains("does not divide") || err.contains("power"), "stderr: {err}");

    // An infeasible search budget: exit 3. The degree-6 tower's generator
    // bound is far beyond the class-group enumeration cap.
    let deg6 = data("curve_37a_nonintegral.json");
    let (code, _, err) = run(&["frey", "build", "--curve", deg6.to_str().unwrap(), "-n", "1"]);
    assert_eq!(code, 3, "stderr: {err}");
}

#[test]
fn cache_roundtrip_matches_cold_run_and_detects_damage() {
    let c37 = data("curve_37a.json");
    let c37 = c37.to_str().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();

    let (code, cold_gen, _) = run(&["gen", "--curve", c37, "--max-index", "12"]);
    assert_eq!(code, 0);
    let (code, warm_seed, _) = run(&["gen", "--curve", c37, "--max-index", "12", "--cache-dir", cache]);
    assert_eq!(code, 0);
    assert_eq!(cold_gen, warm_seed, "cache seeding changed the output");
    let (code, warm_gen, _) = run(&["gen", "--curve", c37, "--max-index", "12", "--cache-dir", cache]);
    assert_eq!(code, 0);
    assert_eq!(cold_gen, warm_gen, "cache reuse changed the output");

    // props over the cached terms agrees with a cold props run.
    let (code, cold_props, _) = run(&["props", "--curve", c37, "--max-index", "12"]);
    assert_eq!(code, 0);
    let (code, warm_props, _) =
        run(&["props", "--curve", c37, "--max-index", "12", "--cache-dir", cache]);
    assert_eq!(code, 0);
    assert_eq!(cold_props, warm_props);

    // Damage the stored header hash: the next cached run must refuse.
    let entry = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|x| x == "terms"))
        .expect("cache file written");
    let text = std::fs::read_to_string(&entry).unwrap();
    let tampered = if text.contains('a') {
        text.replacen('a', "b", 1)
    } else {
        text.replacen('0', "1", 1)
    };
    std::fs::write(&entry, tampered).unwrap();
    let (code, _, err) = run(&["gen", "--curve", c37, "--max-index", "12", "--cache-dir", cache]);
    assert_eq!(code, 2, "stderr: {err}");
    assert!(err.contains("cache"), "stderr: {err}");
}

#[test]
fn cache_root_env_var_is_honored() {
    let c37 = data("curve_37a.json");
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(bin())
        .args(["gen", "--curve", c37.to_str().unwrap(), "--max-index", "6"])
        .env("EDS_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let wrote_terms = std::fs::read_dir(dir.path())
        .unwrap()
        .any(|e| e.unwrap().path().extension().is_some_and(|x| x == "terms"));
    assert!(wrote_terms, "no cache file under $EDS_CACHE_DIR");
}

#[test]
fn primdiv_exclude_flag_overrides_default_set() {
    let quartic = data("curve_quartic.json");
    let (code, out, _) = run(&[
        "primdiv", "--curve", quartic.to_str().unwrap(), "--exclude", "2,3", "--json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["inputs"]["excluded"], serde_json::json!(["2", "3"]));
    let prime = v["certificate_data"]["prime"].as_str().unwrap();
    assert!(prime != "2" && prime != "3");
    assert_eq!(v["outcome"], "pass");
}

#[test]
fn frey_on_integral_point_reports_b1_precondition() {
    // B_1 = 1 on this model: certificate construction must refuse up front.
    let c37 = data("curve_37a.json");
    let (code, _, err) = run(&["frey", "build", "--curve", c37.to_str().unwrap(), "-n", "1"]);
    assert_eq!(code, 2, "stderr: {err}");
    assert!(err.contains("B_1 = 1"), "stderr: {err}");
}

#[test]
fn budget_failure_still_emits_partial_certificate() {
    let deg6 = data("curve_37a_nonintegral.json");
    let (code, out, _) = run(&[
        "frey", "build", "--curve", deg6.to_str().unwrap(), "-n", "1", "--json",
    ]);
    assert_eq!(code, 3);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["outcome"], "incomplete");
    assert_eq!(v["tower"]["degree"], "6");
    assert!(v["error"].as_str().unwrap().contains("budget"));
}

#[test]
fn bound_without_forms_exits_zero_with_gaps() {
    let quartic = data("curve_quartic.json");
    let (code, out, _) = run(&[
        "bound", "exponent", "--curve", quartic.to_str().unwrap(), "--assume-modularity",
        "--json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["outcome"], "pass");
    assert_eq!(v["gaps"].as_array().unwrap().len(), 27);
    assert_eq!(v["kappa_values"]["kappa1"], "0");

    // Without modularity assumed, kappa_1 is mandatory configuration.
    let (code, _, err) = run(&["bound", "exponent", "--curve", quartic.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("kappa_1"), "stderr: {err}");
}
