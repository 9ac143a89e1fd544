use std::fs;
use std::path::Path;

use fbt_core::cli::{execute_with, EXIT_DATA, EXIT_OK, EXIT_USAGE};
use fbt_core::{builtin_layout, Method};
use serde_json::Value;

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data");

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("fbt").chain(args.iter().copied());
    let code = execute_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn unknown_command_is_a_usage_error() {
    let (code, out, err) = run(&["frobnicate"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(out.is_empty());
    assert!(err.contains("Usage"), "{err}");
}

#[test]
fn help_goes_to_stdout() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("simulate"));
}

#[test]
fn shipped_layouts_validate() {
    let dir = tempfile::tempdir().unwrap();
    for m in Method::ALL {
        let (code, text, _) = run(&["layout", "show", m.name()]);
        assert_eq!(code, EXIT_OK);
        let f = dir.path().join(format!("{m}.json"));
        fs::write(&f, text).unwrap();
        let (code, out, _) = run(&["layout", "validate", path(&f)]);
        assert_eq!(code, EXIT_OK, "{out}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["ok"], true);
    }
}

#[test]
fn duplicate_digit_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc: Value = serde_json::from_str(&builtin_layout(Method::SingleDigitFdi).serialize()).unwrap();
    for b in doc["bindings"].as_array_mut().unwrap() {
        if b["region"] == "Middle" {
            b["action"]["digit"] = 4.into();
        }
    }
    let f = dir.path().join("broken.json");
    fs::write(&f, doc.to_string()).unwrap();
    let (code, out, err) = run(&["layout", "validate", path(&f)]);
    assert_eq!(code, EXIT_DATA);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ok"], false);
    let rules: Vec<&str> = v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["rule"].as_str().unwrap())
        .collect();
    assert!(rules.iter().all(|r| *r == "digit_coverage"), "{rules:?}");
    assert!(out.contains("4") && out.contains("5"), "{out}");
    assert!(err.contains("violation"));
}

#[test]
fn unparseable_files_are_data_errors() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("junk.json");
    fs::write(&f, "{ not json").unwrap();
    assert_eq!(run(&["layout", "validate", path(&f)]).0, EXIT_DATA);
    assert_eq!(run(&["replay", path(&f)]).0, EXIT_DATA);
    assert_eq!(run(&["calibrate", path(&f)]).0, EXIT_DATA);
    assert_eq!(run(&["layout", "validate", "/no/such/file"]).0, EXIT_DATA);
}

#[test]
fn calibrate_writes_a_profile() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("profile.json");
    let input = format!("{DATA}/calibration/right_grip.json");
    let (code, _, err) = run(&["calibrate", &input, "-o", path(&out), "--layout", "fti"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let profile: fbt_core::CalibrationProfile = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(profile.anchors.len(), 12);

    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        r#"{"fingertips":[{"x":0.05,"y":0.5},{"x":0.05,"y":0.3},{"x":0.05,"y":0.6},{"x":0.05,"y":0.7},{"x":0.9,"y":0.5}]}"#,
    )
    .unwrap();
    let (code, _, err) = run(&["calibrate", path(&bad)]);
    assert_eq!(code, EXIT_DATA);
    assert!(err.contains("non-monotone"), "{err}");
}

#[test]
fn bad_latency_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = run(&[
        "simulate",
        "--method",
        "fti",
        "--latency",
        "soon",
        "-o",
        path(dir.path()),
    ]);
    assert_eq!(code, EXIT_USAGE);
}

fn simulate(dir: &Path, method: &str, extra: &[&str]) -> Vec<String> {
    let mut args = vec!["simulate", "--method", method, "--seed", "3", "-o", path(dir)];
    args.extend_from_slice(extra);
    let (code, out, err) = run(&args);
    assert_eq!(code, EXIT_OK, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    v["files"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f.as_str().unwrap().to_string())
        .collect()
}

#[test]
fn replay_reproduces_each_phrase() {
    let dir = tempfile::tempdir().unwrap();
    let phrases = format!("{DATA}/phrases/text.txt");
    let files = simulate(dir.path(), "fti", &["--phrases", &phrases, "--touch"]);
    let expected = fbt_core::phrases::parse_phrase_file(&fs::read_to_string(&phrases).unwrap());
    assert_eq!(files.len(), expected.len());
    for (f, phrase) in files.iter().zip(&expected) {
        let (code, out, err) = run(&["replay", f, "--layout", "fti-default"]);
        assert_eq!(code, EXIT_OK, "{err}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["transcript"], phrase.as_str());
        assert_eq!(v["metrics"]["msd"], 0);
    }
    let (code, out, _) = run(&["replay", &files[0], "--pretty"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("transcript: "));
}

#[test]
fn replay_rejects_a_layout_for_another_method() {
    let dir = tempfile::tempdir().unwrap();
    let files = simulate(dir.path(), "single_digit_fdi", &["--count", "1"]);
    assert_eq!(run(&["replay", &files[0], "--layout", "fti"]).0, EXIT_DATA);
}

#[test]
fn pipeline_orders_methods_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let digits = format!("{DATA}/phrases/digits.txt");
    let mut logs = simulate(dir.path(), "single_digit_fdi", &["--phrases", &digits]);
    logs.extend(simulate(dir.path(), "double_digit_fdi", &["--phrases", &digits]));
    logs.extend(simulate(
        dir.path(),
        "fti",
        &["--count", "6", "--latency", "uniform:500-1500"],
    ));

    let mut args = vec!["compare", "--group-by", "method"];
    args.extend(logs.iter().map(String::as_str));
    let (code, out, err) = run(&args);
    assert_eq!(code, EXIT_OK, "{err}");
    let report: Value = serde_json::from_str(&out).unwrap();
    let wpm = |m: &str| report["methods"][m]["wpm"]["mean"].as_f64().unwrap();
    assert!(wpm("double_digit_fdi") < wpm("single_digit_fdi"));
    assert_eq!(report["normality_threshold"], 0.9);
    assert!(report["rule"].as_str().unwrap().contains("0.9"));

    // same inputs, same bytes
    let dir2 = tempfile::tempdir().unwrap();
    let again = simulate(dir2.path(), "single_digit_fdi", &["--phrases", &digits]);
    for (a, b) in logs.iter().zip(&again) {
        assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
    }
    assert_eq!(run(&args).1, out);

    args.push("--pretty");
    let (code, text, _) = run(&args);
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("rule: "));
}

#[test]
fn compare_threshold_is_configurable() {
    let dir = tempfile::tempdir().unwrap();
    let logs = simulate(dir.path(), "fti", &["--count", "5", "--latency", "uniform:500-1500"]);
    let mut args = vec!["compare", "--threshold", "0.5"];
    args.extend(logs.iter().map(String::as_str));
    let (code, out, _) = run(&args);
    assert_eq!(code, EXIT_OK);
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["normality_threshold"], 0.5);
    args[2] = "1.5";
    assert_eq!(run(&args).0, EXIT_USAGE);
}
