use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn kron(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kron"))
        .args(args)
        .env_remove("KRON_SEED")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stdout).expect("json report");
    v["report"].clone()
}

#[test]
fn twisted_cubic_analysis() {
    let out = kron(&["curve", "analyze", &data("twisted_cubic.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["splitting"], json!([5, 5]));
    assert_eq!(r["h0"], json!([12, 6, 0]));
    assert_eq!(r["twistor_splitting"], json!({"1": 6}));
    assert_eq!(r["slice_certificate"]["verdict"], json!("randomized_pass"));
}

#[test]
fn sigma_cubic_reports_quaternionic_structure() {
    let out = kron(&["curve", "analyze", &data("sigma_cubic.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["quaternionic"]["passed"], json!(true));
}

#[test]
fn random_quartic() {
    let out = kron(&["curve", "analyze", "--random", "4", "3", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let ab = r["ab"].as_array().unwrap();
    assert_eq!(ab[0].as_i64().unwrap() + ab[1].as_i64().unwrap(), 6);
}

#[test]
fn malformed_input_exits_two() {
    let dir = std::env::temp_dir().join("kron-cli-malformed.json");
    std::fs::write(&dir, "{\"ambient\": 3, \"degree\": ").unwrap();
    let out = kron(&["curve", "analyze", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = kron(&["curve", "analyze", "/nonexistent/curve.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = kron(&["curve", "analyze", r#"{"ambient": 3, "degree": 3, "phi": []}"#]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_curve_exits_one() {
    let curve = r#"{"ambient": 3, "degree": 3, "phi": [
        {"degree": 3, "coeffs": [1,0,0,0]}, {"degree": 3, "coeffs": [0,1,0,0]},
        {"degree": 3, "coeffs": [0,0,1,0]}, {"degree": 3, "coeffs": [0,0,1,0]}]}"#;
    let out = kron(&["curve", "analyze", curve]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["validation"]["nondegenerate"], json!(false));
}

#[test]
fn bundle_commands() {
    let out = kron(&["bundle", "generic-section", "--h0", "16,8,2", "--rank", "8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["splitting"], json!({"0": 2, "1": 4, "2": 2}));

    let out = kron(&["bundle", "generic-section", "--h0", "16,8,2", "--rank", "8", "--recursion", "printed"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["recursion_values"][0], json!(10));

    let res = data("twisted_cubic_resolution.json");
    let out = kron(&["bundle", "h0", "--resolution", &res, "--twist", "-3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["h0"], json!(6));

    let out = kron(&["bundle", "splitting", "--resolution", &res]);
    assert_eq!(report(&out)["splitting"], json!([5, 5]));

    let out = kron(&["bundle", "splitting", "--resolution", &data("not_locally_free.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(report(&out)["diagnostics"]["witness"].is_object());
}

#[test]
fn cohomology_table_as_csv() {
    let res = data("twisted_cubic_resolution.json");
    let out = kron(&["bundle", "h0", "--resolution", &res, "--range", "-6", "-4", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    // E = O(5) + O(5), so h0(E(k)) = 2 max(0, k + 6) and h1 vanishes.
    let want: String = (-6i64..=-4)
        .map(|k| format!("{k},{},0\n", 2 * (k + 6).max(0)))
        .collect();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), format!("k,h0,h1\n{want}"));
}

#[test]
fn quadric_commands() {
    let out = kron(&["quadric", "classify", &data("coordinate_line.json")]);
    assert_eq!(report(&out)["class"], json!("degenerate"));

    let out = kron(&["quadric", "metric"]);
    assert_eq!(report(&out)["signature"], json!([8, 8]));

    let out = kron(&["quadric", "convention"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(r["certified"]["id"].is_u64());
    assert_eq!(r["printed"]["id"], json!(0));

    let out = kron(&["quadric", "real", "--x", "1,0,0,0", "--y", "0,1,0,0"]);
    assert_eq!(report(&out)["class"], json!("generic"));
    let out = kron(&["quadric", "real", "--x", "1,0,0,0", "--y", "1,0,0,0"]);
    assert_eq!(out.status.code(), Some(1));

    let out = kron(&["quadric", "fibration", &data("tuple.json"), "--act", "1,1+i"]);
    let r = report(&out);
    assert_eq!(r["fibration"][0], json!({"finite": {"a": "1", "b": "0"}}));
    assert_eq!(r["fibration"][1], json!({"finite": {"a": "-1", "b": "0"}}));
}

#[test]
fn blowup_commands() {
    let out = kron(&["blowup", "classify", &data("section.json")]);
    let r = report(&out);
    assert_eq!(r["class"], json!("off_divisor"));
    assert_eq!(r["real"], json!(true));

    let out = kron(&["blowup", "module", r#"{"coords": [1, 0, 0, 1, 0]}"#]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["certificate"]["verdict"], json!("exact_pass"));

    let out = kron(&["blowup", "classify", r#"{"coords": [1, 0, 0, 0, 0]}"#]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn selftest_subsets_and_negative_control() {
    let out = kron(&["selftest", "--suite", "quadric", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 3);

    let out = kron(&["selftest", "--suite", "bundles", "--corrupt-recursion", "--format", "text"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("FAIL criterion  4"));

    let out = kron(&["selftest", "--suite", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_reproducible_and_echo_the_seed() {
    let args = ["selftest", "--suite", "quadric", "--seed", "42"];
    let a = kron(&args);
    let b = kron(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], json!(42));

    let out = Command::new(env!("CARGO_BIN_EXE_kron"))
        .args(["curve", "random", "--degree", "5"])
        .env("KRON_SEED", "9")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], json!(9));
    assert_eq!(v["report"]["degree"], json!(5));
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join("kron-cli-output.json");
    let _ = std::fs::remove_file(&path);
    let out = kron(&["quadric", "metric", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["report"]["signature"], json!([8, 8]));
}
