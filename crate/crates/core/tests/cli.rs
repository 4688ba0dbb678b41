//! End-to-end checks of the `cohlab` binary.

use std::process::Command;

fn cohlab(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cohlab"))
        .args(args)
        .env_remove("COHLAB_THREADS")
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(s: &str) -> serde_json::Value {
    serde_json::from_str(s).expect("valid json")
}

#[test]
fn expect_envelope() {
    let (code, out, _) = cohlab(&["expect", "--dim", "2"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["command"], "expect");
    assert_eq!(v["units"], "nats");
    assert!(v["timestamp_utc"].as_str().unwrap().ends_with('Z'));
    assert_eq!(v["payload"]["expected_cr"].as_f64().unwrap(), 0.5);
    assert!(v["payload"]["lipschitz_cr"].is_null());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cohlab(&[]).0, 2);
    assert_eq!(cohlab(&["expect", "--dim", "1"]).0, 2);
    assert_eq!(cohlab(&["expect", "--dim", "abc"]).0, 2);
    assert_eq!(cohlab(&["concentrate", "--measure", "cr", "--dim", "5", "--eps", "0.5,0.1"]).0, 2);
    assert_eq!(cohlab(&["bounds", "--dim", "2", "--eps", "0.1", "--theorem", "1"]).0, 2);
    assert_eq!(cohlab(&["--threads", "0", "expect", "--dim", "3"]).0, 2);
    assert_eq!(cohlab(&["subspace", "--dim", "1000", "--eps-frac", "1.5"]).0, 2);
}

#[test]
fn vacuous_subspace_exits_4() {
    let (code, out, err) = cohlab(&["subspace", "--dim", "1000", "--eps-frac", "0.5"]);
    assert_eq!(code, 4);
    assert!(out.is_empty());
    assert!(err.contains("32921"));
}

#[test]
fn subspace_at_scale() {
    let (code, out, _) = cohlab(&["subspace", "--dim", "100000", "--eps-frac", "0.9", "--states", "100", "--seed", "3"]);
    assert_eq!(code, 0);
    let p = &json(&out)["payload"];
    assert_eq!(p["s"], 4);
    assert_eq!(p["violations"], 0);
}

#[test]
fn same_seed_same_payload() {
    let args = ["concentrate", "--measure", "purity", "--dim", "12", "--trials", "2000", "--seed", "8", "--eps", "0.05"];
    let (_, a, _) = cohlab(&args);
    let mut threaded = vec!["--threads", "3"];
    threaded.extend_from_slice(&args);
    let (_, b, _) = cohlab(&threaded);
    assert_eq!(json(&a)["payload"], json(&b)["payload"]);
    assert_eq!(json(&a)["payload"].to_string(), json(&b)["payload"].to_string());
}

#[test]
fn csv_histogram_matches_json() {
    let dir = std::env::temp_dir().join(format!("cohlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv_path = dir.join("hist.csv");
    let common = ["concentrate", "--measure", "cr", "--dim", "9", "--trials", "3000", "--seed", "4", "--bins", "12"];
    let mut csv_args = common.to_vec();
    csv_args.extend_from_slice(&["--format", "csv", "--output", csv_path.to_str().unwrap()]);
    let (code, out, _) = cohlab(&csv_args);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let (_, js, _) = cohlab(&common);
    let hist = json(&js)["payload"]["histogram"].clone();

    let file = std::fs::File::open(&csv_path).unwrap();
    let bins = cohlab::report::read_histogram_csv(file).unwrap();
    assert_eq!(bins.len(), 12);
    let total: u64 = bins.iter().map(|b| b.count).sum();
    assert_eq!(total, 3000);
    for (b, h) in bins.iter().zip(hist.as_array().unwrap()) {
        assert_eq!(b.count, h["count"].as_u64().unwrap());
        assert_eq!(b.bin_low, h["bin_low"].as_f64().unwrap());
        assert_eq!(b.bin_high, h["bin_high"].as_f64().unwrap());
    }
    let text = std::fs::read_to_string(&csv_path).unwrap();
    assert!(text.starts_with("bin_low,bin_high,count"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bounds_report() {
    let (code, out, _) = cohlab(&["bounds", "--dim", "1000", "--eps", "1.0", "--theorem", "4"]);
    assert_eq!(code, 0);
    let rows = json(&out)["payload"].clone();
    let b = &rows[0]["bound"];
    let expected = 2.0 * (-1000.0 / (18.0 * std::f64::consts::PI.powi(3) * std::f64::consts::LN_2)).exp();
    assert!((b["raw"].as_f64().unwrap() - expected).abs() < 1e-15);
    assert!(b["effective"].as_f64().unwrap() < 1.0);
}

#[test]
fn verify_suites_pass() {
    for suite in ["integral", "inequalities"] {
        let (code, out, _) = cohlab(&["verify", "--suite", suite, "--seed", "1"]);
        assert_eq!(code, 0, "{suite}: {out}");
        assert_eq!(json(&out)["payload"]["passed"], true);
    }
    let (code, out, _) = cohlab(&["verify", "--suite", "moments", "--seed", "1", "--samples", "20000"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn verify_failure_exits_1() {
    // 10 unitaries cannot resolve the |U11| distribution to KS < 0.01
    let (code, out, _) = cohlab(&["verify", "--suite", "moments", "--seed", "1", "--samples", "10"]);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["payload"]["passed"], false);
}

#[test]
fn bits_units() {
    let (_, out, _) = cohlab(&["--bits", "concentrate", "--measure", "cr", "--dim", "2", "--trials", "500"]);
    let v = json(&out);
    assert_eq!(v["units"], "bits");
    assert!(v["payload"]["observed_max"].as_f64().unwrap() <= 1.0 + 1e-12);
}
