use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sumprod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumprod"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn classify_smoke() {
    let o = sumprod(&["classify", "--poly", "x*y"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("NotDegenerate"), "{text}");
    assert!(text.contains("NotComposite"), "{text}");
}

#[test]
fn classify_json_reports_chain() {
    let o = sumprod(&["classify", "--poly", "(x^2 y + 1)^2 + 3", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["composite"]["verdict"], "composite");
    assert_eq!(v["core"], "x^2*y");
    assert_eq!(v["chain"].as_array().unwrap().len(), 1);
}

#[test]
fn poly_from_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    fs::write(
        &path,
        r#"{"terms":[{"i":1,"j":1,"num":1},{"i":0,"j":0,"num":"-1"}]}"#,
    )
    .unwrap();
    let o = sumprod(&["classify", "--poly", path.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["input"], "x*y - 1");
}

#[test]
fn degenerate_scan_is_refused() {
    let o = sumprod(&["scan", "--poly", "x + y"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("hypothesis violated"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_2() {
    let o = sumprod(&["classify", "--poly", "x", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--no-such-flag"));
    let o = sumprod(&["classify", "--poly", "x +"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--poly") && stderr(&o).contains("fix:"));
    let o = sumprod(&["incidence", "--poly", "x y", "--set", "gp:4:1:1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--set"));
}

#[test]
fn degree_cap_exits_3() {
    let o = sumprod(&["classify", "--poly", "x^5 y^4 + y", "--degree-cap", "8"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("--degree-cap"));
}

#[test]
fn sigma_json_mirrors_report() {
    let o = sumprod(&[
        "sigma",
        "--poly",
        "x^2 + y^2",
        "--extra-candidates",
        "-1,7/2",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in [
        "degree_k",
        "found",
        "candidate_count",
        "stein_bound_respected",
        "composite_cross_check",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["found"][0]["lambda"], "0");
}

#[test]
fn incidence_writes_histogram() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = sumprod(&[
        "incidence",
        "--poly",
        "(x + y)^2",
        "--set",
        "ap:9:1:1",
        "--out",
        out,
    ]);
    let csv = fs::read_to_string(dir.path().join("class_sizes.csv")).unwrap();
    assert!(csv.starts_with("class_size,count\n"));
    assert!(csv.lines().any(|l| l.starts_with("9,")), "{csv}");
    assert!(dir.path().join("incidence.json").exists());
    assert!(dir.path().join("manifest.json").exists());
    assert!(o.status.code().is_some());
}

#[test]
fn incidence_reads_set_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.txt");
    fs::write(&path, "1 2 3\n1/2, 5\n").unwrap();
    let o = sumprod(&[
        "incidence",
        "--poly",
        "x y",
        "--set",
        path.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["curve_count"], 25);
}

fn scan_into(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        "scan",
        "--family",
        "AP,GP,random",
        "--sizes",
        "8,16",
        "--seed",
        "11",
        "--out",
        dir.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    sumprod(&args)
}

#[test]
fn scan_outputs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(scan_into(a.path(), &[]).status.code(), Some(0));
    assert_eq!(
        scan_into(b.path(), &["--sequential"]).status.code(),
        Some(0)
    );
    for file in ["records.csv", "summary.json"] {
        let x = fs::read(a.path().join(file)).unwrap();
        let y = fs::read(b.path().join(file)).unwrap();
        assert_eq!(x, y, "{file} differs");
    }
    let csv = fs::read_to_string(a.path().join("records.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("poly_id,set_kind,n,sumset,image,product,ratio_decimal,removed_rows,runtime_ms")
    );
    assert_eq!(lines.count(), 5 * 3 * 2);
    let manifest: serde_json::Value =
        serde_json::from_slice(&fs::read(a.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["seed"], 11);
    assert_eq!(manifest["sets"].as_array().unwrap().len(), 5 * 3 * 2);
}

#[test]
fn scan_floor_violation_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let o = scan_into(dir.path(), &["--poly", "x y", "--floor", "100"]);
    assert_eq!(o.status.code(), Some(1));
    let summary: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["violations"], 6);
}
