use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_legendrian-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn curves_suite_passes() {
    let out = lab(&["verify", "--suite", "curves", "--m-max", "30", "--quick"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["suite"], "curves");
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["pass"] == true));
    assert!(checks.iter().any(|c| c["id"] == "curves.cusps.m30"));
}

#[test]
fn failing_suite_exits_with_one() {
    let out = lab(&["verify", "--suite", "zigzag", "--quick"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let c0 = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == "zigzag.c0")
        .unwrap();
    assert_eq!(c0["pass"], false);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(lab(&["verify", "--suite", ""]).status.code(), Some(2));
    assert_eq!(
        lab(&["verify", "--suite", "nonsense"]).status.code(),
        Some(2)
    );
    assert_eq!(lab(&["verify"]).status.code(), Some(2));
    assert_eq!(
        lab(&["flow", "--hamiltonian", "reeb", "--start", "1,2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lab(&["plot", "--source", "gamma:x", "-o", "/dev/null"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn plot_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fronts.svg");
    let out = lab(&[
        "plot",
        "--source",
        "psi:-1",
        "--source",
        "psi:1",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("class=\"panel\"").count(), 2);
}

#[test]
fn flow_prints_json_lines() {
    let out = lab(&[
        "flow",
        "--hamiltonian",
        "reeb",
        "--start",
        "0,0,0,0,0",
        "--step",
        "0.25",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 5);
    let last = lines.last().unwrap();
    assert_eq!(last["tau"], 1.0);
    let z = last["pt"][2].as_f64().unwrap();
    assert!((z - 1.0).abs() < 1e-12);
}

#[test]
fn approximate_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("gamma.json");
    let out = lab(&[
        "approximate",
        "--target",
        "gamma",
        "--m",
        "2",
        "--points",
        "25",
        "-d",
        "0.01",
        "-o",
        first.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&first).unwrap()).unwrap();
    assert!(v["samples"].as_array().unwrap().len() > 100);
    let out = lab(&[
        "approximate",
        "--target",
        "file",
        "--input",
        first.to_str().unwrap(),
        "--points",
        "20",
        "-d",
        "0.02",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let missing = dir.path().join("missing.json");
    let out = lab(&[
        "approximate",
        "--target",
        "file",
        "--input",
        missing.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn single_step_report() {
    let out = lab(&["report", "-n", "1", "--quick"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["suite"], "construction-1");
    assert_eq!(lab(&["report", "-n", "0"]).status.code(), Some(2));
}
