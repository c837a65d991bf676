use std::path::Path;
use std::process::{Command, Output};

fn sepstab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sepstab"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

const F2: &str = r#"{"surface_genera": [], "free_rank": 2}"#;
const BODY: &str = r#"{"surface_genera": [2], "free_rank": 1}"#;

fn scan_config(steps: usize, base: [f64; 3], csv: &str) -> String {
    format!(
        r#"{{
            "version": "1",
            "presentation": {F2},
            "slice": {{
                "kind": "F2_TRACE",
                "base": {{"x": [{}, 0], "y": [{}, 0], "z": [{}, 0]}},
                "horizontal": {{"param": "x_re", "min": {}, "max": 4, "steps": {steps}}},
                "vertical": {{"param": "y_re", "min": {}, "max": 4, "steps": {steps}}}
            }},
            "depth": 3,
            "workers": 2,
            "outputs": {{"csv": "{csv}", "ppm": "out/scan.ppm", "metadata": "out/meta.json"}}
        }}"#,
        base[0], base[1], base[2], base[0], base[1]
    )
}

#[test]
fn whitehead_free_word() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "f2.json", F2);
    let out = sepstab(&["whitehead", "f2.json", "a b a' b'"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("connected: true"), "{text}");
    assert!(text.contains("separable: false"), "{text}");
}

#[test]
fn whitehead_labeled_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "body.json", BODY);
    let out = sepstab(&["whitehead", "body.json", "t1 a1 t1' b1"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("classification: NOT_SEPARABLE_CERTIFIED"), "{text}");
    let dot = sepstab(&["whitehead", "body.json", "t1 a1", "--dot"], dir.path());
    let text = String::from_utf8(dot.stdout).unwrap();
    assert!(text.starts_with("graph labeled_whitehead {"), "{text}");
    assert!(text.contains("label=\"a1\""), "{text}");
}

#[test]
fn separable_lists_classes() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "f2.json", F2);
    let out = sepstab(&["separable", "f2.json", "--max-length", "2"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().collect::<Vec<_>>(), ["a", "b", "a a", "a b", "a b'", "b b"]);
}

#[test]
fn certify_prints_verdict() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "f2.json", F2);
    let s = 3f64.sqrt();
    write(
        dir.path(),
        "rep.json",
        &format!(r#"{{"generators": {{"a": [[2,0],[{s},0],[{s},0],[2,0]], "b": [[2,0],[0,{s}],[0,-{s}],[2,0]]}}}}"#),
    );
    let out = sepstab(
        &["certify", "f2.json", "rep.json", "--depth", "4", "--stride", "2", "--spacing", "0.01", "--reps", "6", "--tol", "1e-10"],
        dir.path(),
    );
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["kind"], "CERTIFIED_AT_DEPTH");
    assert_eq!(v["params"]["nesting"]["reps"], 6);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = scan_config(2, [3.0, 3.0, 3.0], "out/scan.csv").replace("\"steps\": 2", "\"steps\": 0");
    write(dir.path(), "bad.json", &bad);
    let out = sepstab(&["scan", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("slice.horizontal.steps"));
    write(dir.path(), "body.json", r#"{"surface_genera": [1], "free_rank": 1}"#);
    assert_eq!(sepstab(&["separable", "body.json", "--max-length", "2"], dir.path()).status.code(), Some(2));
}

#[test]
fn missing_file_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(sepstab(&["scan", "nope.json"], dir.path()).status.code(), Some(4));
}

#[test]
fn unwritable_output_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "blocker", "");
    write(dir.path(), "cfg.json", &scan_config(1, [3.0, 3.0, 3.0], "blocker/scan.csv"));
    assert_eq!(sepstab(&["scan", "cfg.json"], dir.path()).status.code(), Some(4));
}

#[test]
fn scan_writes_reproducible_outputs() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "cfg.json", &scan_config(3, [2.5, 2.5, 3.0], "out/scan.csv"));
    assert!(sepstab(&["scan", "cfg.json"], dir.path()).status.success());
    let first = std::fs::read(dir.path().join("out/scan.csv")).unwrap();
    assert!(sepstab(&["scan", "cfg.json"], dir.path()).status.success());
    let second = std::fs::read(dir.path().join("out/scan.csv")).unwrap();
    assert_eq!(first, second);
    assert_eq!(String::from_utf8_lossy(&first).lines().count(), 10);
    let ppm = std::fs::read(dir.path().join("out/scan.ppm")).unwrap();
    assert!(ppm.starts_with(b"P6\n3 3\n255\n"));
    let meta: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("out/meta.json")).unwrap()).unwrap();
    assert_eq!(meta["records"], 9);
    assert_eq!(meta["config"]["depth"], 3);
    assert!(meta["version"].is_string());
}

#[test]
fn parabolic_scan_cell() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "cfg.json", &scan_config(1, [2.0, 3.0, 3.0], "out/scan.csv"));
    assert!(sepstab(&["scan", "cfg.json"], dir.path()).status.success());
    let csv = std::fs::read_to_string(dir.path().join("out/scan.csv")).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[8], "1");
    assert_eq!(row[10], "\"a\"");
    let ppm = std::fs::read(dir.path().join("out/scan.ppm")).unwrap();
    assert_eq!(&ppm[ppm.len() - 3..], &[255, 0, 0]);
}
