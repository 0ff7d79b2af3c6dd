use std::path::PathBuf;
use std::process::{Command, Output};

use bloch::error::{EXIT_INVALID, EXIT_IO};

fn bloch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bloch"))
        .args(args)
        .env("BLOCH_THREADS", "2")
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = bloch(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn without_schema(s: &str) -> String {
    let mut v: serde_json::Value = serde_json::from_str(s).unwrap();
    assert_eq!(v["schema_version"], bloch::json::SCHEMA_VERSION);
    v.as_object_mut().unwrap().remove("schema_version");
    serde_json::to_string_pretty(&v).unwrap()
}

/// Compare against `tests/golden/<name>.json`; `BLOCH_BLESS=1` rewrites it.
fn golden(name: &str, args: &[&str]) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    let got = stdout(args);
    if std::env::var_os("BLOCH_BLESS").is_some() {
        std::fs::write(&path, &got).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(without_schema(&got), without_schema(&want), "{name}");
}

#[test]
fn golden_bound() {
    golden("bound", &["bound", "--R", "4.0546358"]);
}

#[test]
fn golden_fedorov() {
    golden("fedorov", &["fedorov", "--alpha", "0.7853981633974483", "--c", "1"]);
}

#[test]
fn golden_special() {
    golden("special", &["special", "--k", "0.5", "--phi", "1.0", "--u", "0.3"]);
}

#[test]
fn golden_symcheck() {
    golden(
        "symcheck",
        &["symcheck", "--family", "radial", "--n", "3", "--r", "0.6", "--walks", "10000", "--seed", "5"],
    );
}

#[test]
fn bound_matches_the_library() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["bound", "--R", "4.0546358"])).unwrap();
    assert_eq!(v["command"], "bound");
    let b = v["result"]["bound"].as_f64().unwrap();
    assert!((b - 0.656_393_613_152_19).abs() <= 5e-10);
    let w = v["result"]["w"].as_array().unwrap();
    assert_eq!(w.len(), 2);
}

#[test]
fn svg_is_deterministic_and_well_formed() {
    let a = stdout(&["render", "--R", "4.0546358"]);
    let b = stdout(&["render", "--R", "4.0546358"]);
    assert_eq!(a, b);
    assert!(a.starts_with("<?xml"));
    assert!(a.trim_end().ends_with("</svg>"));
    assert_eq!(a.matches("<polyline").count(), 6);
    assert_eq!(a.matches("<line").count(), 6 + 1);
    assert_eq!(a.matches("r=\"1\"").count(), 12);
}

#[test]
fn csv_outputs() {
    let trace = stdout(&["trace", "--alpha", "0.7853981633974483", "--c", "1", "--format", "csv"]);
    let mut lines = trace.lines();
    assert_eq!(lines.next(), Some("side,index,x,y"));
    assert!(lines.clone().any(|l| l.starts_with("lower,")));
    for l in lines {
        assert_eq!(l.split(',').count(), 4, "{l}");
    }
    let opt = stdout(&["optimize", "--rmin", "3.9", "--rmax", "4.2", "--format", "csv"]);
    let rows: Vec<&str> = opt.lines().collect();
    assert_eq!(rows[0], "row,R,bound,alpha,c,capacity");
    assert!(rows.last().unwrap().starts_with("optimum,"));
    assert!(rows[1..rows.len() - 1].iter().all(|r| r.starts_with("prescan,") || r.starts_with("golden,")));
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bound.json");
    let out = bloch(&["bound", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(without_schema(&text), without_schema(&stdout(&["bound"])));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| bloch(args).status.code().unwrap();
    assert_eq!(code(&["bound"]), 0);
    assert_eq!(code(&["--version"]), 0);

    for args in [
        &["bound", "--R", "5"][..],
        &["bound", "--R", "3"],
        &["bound", "--R", "abc"],
        &["nonsense"],
        &["fedorov", "--alpha", "0.5", "--c", "3"],
        &["fedorov", "--alpha", "0.05", "--c", "0.0999"],
        &["trace", "--alpha", "0.5", "--c", "1", "--step", "0.1"],
        &["optimize", "--rmin", "4.2", "--rmax", "3.9"],
        &["optimize", "--tol", "1e-12"],
        &["render", "--format", "json"],
        &["bound", "--format", "csv"],
        &["inradius", "--grid-step", "0"],
        &["symcheck", "--walks", "100"],
        &["symcheck", "--family", "radial", "--walks", "10000"],
        &["symcheck", "--family", "base", "--n", "3", "--a", "0.5"],
    ] {
        let out = bloch(args);
        assert_eq!(out.status.code().unwrap(), EXIT_INVALID, "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no/such/dir/out.json");
    assert_eq!(code(&["bound", "--out", missing.to_str().unwrap()]), EXIT_IO);
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_bloch"))
        .args(["bound"])
        .env("BLOCH_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code().unwrap(), EXIT_INVALID);
}

#[test]
fn in_process_run_matches_the_binary() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = bloch::run(["bloch", "fedorov", "--alpha", "1.0", "--c", "0.7"], &mut out, &mut err);
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
    assert_eq!(String::from_utf8(out).unwrap(), stdout(&["fedorov", "--alpha", "1.0", "--c", "0.7"]));
}
