use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use eigenbound_core::presets::{self, POLYTOPE_PRESETS};
use eigenbound_core::parse_polytope;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eigenbound"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn repo_file(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("eigenbound-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn validator() -> jsonschema::Validator {
    let text = std::fs::read_to_string(repo_file("schemas/run_report.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

#[test]
fn emitted_polytopes_round_trip() {
    for name in POLYTOPE_PRESETS {
        let out = run(&["bound", "toric", "--preset", name, "--emit-polytope"]);
        assert!(out.status.success());
        let parsed = parse_polytope(&stdout(&out)).unwrap();
        let preset = presets::polytope(name).unwrap();
        assert_eq!(parsed.facets(), preset.facets(), "{name}");
        assert_eq!(parsed.vertices(), preset.vertices(), "{name}");
    }
}

#[test]
fn shipped_preset_files_match_builtins() {
    for name in POLYTOPE_PRESETS {
        let text = std::fs::read_to_string(repo_file(&format!("presets/{name}.json"))).unwrap();
        assert_eq!(parse_polytope(&text).unwrap().facets(), presets::polytope(name).unwrap().facets());
    }
    let disc = repo_file("presets/disc.moments.json");
    let v: Value = serde_json::from_str(&stdout(&run(&["bound", "raw", disc.to_str().unwrap(), "--json"]))).unwrap();
    assert_eq!(v["result"]["exact"], "16/3");

    let doran = repo_file("presets/doran-dp6.potential.json");
    let from_file = run(&["spectrum", "--preset", "dp6", "--potential", doran.to_str().unwrap(), "--json"]);
    let builtin = run(&["spectrum", "--preset", "dp6", "--potential", "doran-dp6", "--json"]);
    let eig = |o: &Output| -> Vec<f64> {
        let v: Value = serde_json::from_str(&stdout(o)).unwrap();
        v["result"]["eigenvalues"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
    };
    for (a, b) in eig(&from_file).iter().zip(eig(&builtin)) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn json_outputs_satisfy_schema() {
    let schema = validator();
    let doran = repo_file("presets/doran-dp6.potential.json");
    let doran = doran.to_str().unwrap();
    let invocations: &[&[&str]] = &[
        &["bound", "toric", "--preset", "threefold", "--json"],
        &["bound", "raw", "--preset", "disc", "--json"],
        &["bound", "ks", "--n", "1,1", "--p", "-1,1", "--q", "1,1", "--json"],
        &["bound", "ks-family", "--table", "--json"],
        &["moments", "--preset", "cp2", "--json"],
        &["spectrum", "--preset", "dp6", "--potential", doran, "--check-convergence", "--json"],
        &["check", "--preset", "dp6", "--json"],
        &["table1", "--json"],
    ];
    for args in invocations {
        let out = run(args);
        assert!(out.status.success(), "{args:?}");
        let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
        let errors: Vec<String> = schema.iter_errors(&v).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
        assert_eq!(v["command"][0], args[0]);
    }
}

#[test]
fn input_digest_is_stable_and_input_sensitive() {
    let digest = |args: &[&str]| -> String {
        let v: Value = serde_json::from_str(&stdout(&run(args))).unwrap();
        v["input_sha256"].as_str().unwrap().to_string()
    };
    let a = digest(&["bound", "toric", "--preset", "cp2", "--json"]);
    assert_eq!(a, digest(&["bound", "toric", "--preset", "cp2", "--json"]));
    assert_ne!(a, digest(&["bound", "toric", "--preset", "dp6", "--json"]));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["bound", "toric", "--preset", "cp2"]).status.code(), Some(0));
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    // unreadable, malformed, unknown preset, usage errors
    assert_eq!(run(&["bound", "toric", "/nonexistent/p.json"]).status.code(), Some(1));
    let junk = scratch("junk.json", "{ not json");
    assert_eq!(run(&["bound", "toric", junk.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(run(&["bound", "toric", "--preset", "cp7"]).status.code(), Some(1));
    assert_eq!(run(&["bound", "frobnicate"]).status.code(), Some(1));
    let unbounded = scratch("unbounded.json", r#"{"dimension": 2, "facets": [{"v": [1, 0], "c": 1}, {"v": [0, 1], "c": 1}]}"#);
    assert_eq!(run(&["bound", "toric", unbounded.to_str().unwrap()]).status.code(), Some(1));

    // off-centre segment [-1, 2]: Futaki obstruction unless re-centred
    let shifted = scratch("shifted.json", r#"{"dimension": 1, "facets": [{"v": [1], "c": 2}, {"v": [-1], "c": 1}]}"#);
    let shifted = shifted.to_str().unwrap();
    let out = run(&["bound", "toric", shifted]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("barycenter"));
    let out = run(&["bound", "toric", shifted, "--recenter"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["bound", "6"]), "{}", stdout(&out));

    // h = x³ with no canonical part is not convex on [-1, 1]
    let concave = scratch(
        "concave.json",
        r#"{"canonical_weight": 0, "poly_correction": [{"alpha": [3], "coeff": 1}]}"#,
    );
    let out = run(&["spectrum", "--preset", "cp1", "--potential", concave.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_reports_fano_normalization() {
    let out = run(&["check", "--preset", "cp2"]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().any(|l| l.starts_with("Fano-normalized") && l.ends_with("yes")));

    let big = scratch("big.json", r#"{"dimension": 1, "facets": [{"v": [1], "c": 2}, {"v": [-1], "c": 2}]}"#);
    let out = run(&["check", big.to_str().unwrap()]);
    assert!(stdout(&out).lines().any(|l| l.starts_with("Fano-normalized") && l.ends_with("no")));
}

#[test]
fn ks_warns_when_futaki_integral_is_nonzero() {
    let out = run(&["bound", "ks", "--n", "0,1,0", "--p", "0,2,0", "--q", "1,1,1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("Futaki"));
}

#[test]
fn ks_family_first_member() {
    let out = run(&["bound", "ks-family", "--N", "1", "--q", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("2530/443"));
    // --N and --table are exclusive; --N needs --q
    assert_eq!(run(&["bound", "ks-family", "--N", "1", "--table"]).status.code(), Some(1));
    assert_eq!(run(&["bound", "ks-family", "--N", "1"]).status.code(), Some(1));
}

#[test]
fn lambda_scales_bounds() {
    let out = run(&["bound", "toric", "--preset", "cp2", "--lambda", "3/2"]);
    assert!(stdout(&out).lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["bound", "8"]), "{}", stdout(&out));
    let out = run(&["bound", "toric", "--preset", "cp2", "--lambda", "-1"]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn table1_lists_all_rows() {
    let out = run(&["table1"]);
    let text = stdout(&out);
    for needle in ["6", "16/3", "32/7", "672/127", "4.6956", "2530/443"] {
        assert!(text.contains(needle), "{needle} missing from\n{text}");
    }
}
