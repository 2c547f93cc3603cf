use std::path::Path;
use std::process::{Command, Output};

fn icvec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_icvec")).args(args).output().expect("run icvec")
}

fn ok(args: &[&str]) -> String {
    let out = icvec(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_persist_vectorize_distance_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let (cloud, other) = (dir.path().join("c.csv"), dir.path().join("c2.csv"));
    ok(&["--seed", "1", "--out", path(&cloud), "generate", "--kind", "sierpinski", "-n", "120"]);
    ok(&["--seed", "2", "--out", path(&other), "generate", "--kind", "uniform", "-n", "80"]);
    assert_eq!(std::fs::read_to_string(&cloud).unwrap().lines().count(), 121);

    let (d1, d2) = (dir.path().join("d1.csv"), dir.path().join("d2.csv"));
    ok(&["--out", path(&d1), "--max-filtration", "0.3", "persist", path(&cloud)]);
    ok(&["--out", path(&d2), "--max-filtration", "0.3", "persist", path(&other), "--engine", "clearing"]);
    let diagram = std::fs::read_to_string(&d1).unwrap();
    assert!(diagram.starts_with("dim,birth,death\n"));
    assert!(diagram.contains(",inf\n"));

    let vector = dir.path().join("v.csv");
    ok(&["--out", path(&vector), "--delta", "0.25", "vectorize", path(&d1), "--method", "stable"]);
    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("v.json")).unwrap()).unwrap();
    assert_eq!(sidecar["method"], "stable_interconnectivity");
    assert_eq!(sidecar["delta"], 0.25);
    assert_eq!(sidecar["source_diagram_sha256"].as_str().unwrap().len(), 64);
    assert!(std::fs::read_to_string(&vector).unwrap().starts_with("index,value\n1,"));

    for (metric, p) in [("wasserstein", serde_json::json!(2.0)), ("bottleneck", serde_json::json!("inf"))] {
        let args = ["distance", path(&d1), path(&d2), "--metric", metric, "--p", "2"];
        let value: serde_json::Value = serde_json::from_str(&ok(&args)).unwrap();
        assert_eq!(value["p"], p);
        assert!(value["value"].as_f64().unwrap() > 0.0);
    }
    let same: serde_json::Value =
        serde_json::from_str(&ok(&["distance", path(&d1), path(&d1), "--metric", "sliced"])).unwrap();
    assert_eq!(same["value"], 0.0);
}

#[test]
fn json_format_and_rips_dump() {
    let dir = tempfile::tempdir().unwrap();
    let cloud = dir.path().join("c.csv");
    std::fs::write(&cloud, "x0,x1\n0,0\n1,0\n1,1\n0,1\n").unwrap();
    let dump = ok(&["--max-filtration", "2", "rips", path(&cloud)]);
    // 4 vertices, 6 edges, 4 triangles
    assert_eq!(dump.lines().count(), 1 + 14);
    let diagram: serde_json::Value =
        serde_json::from_str(&ok(&["--format", "json", "--max-filtration", "2", "persist", path(&cloud)])).unwrap();
    let loops: Vec<_> = diagram["points"].as_array().unwrap().iter().filter(|p| p["dim"] == 1).collect();
    assert_eq!(loops.len(), 1);
    assert_eq!(loops[0]["birth"], 1.0);
    assert_eq!(loops[0]["death"], std::f64::consts::SQRT_2);
    let generated: serde_json::Value =
        serde_json::from_str(&ok(&["--format", "json", "generate", "--kind", "lattice", "-n", "9"])).unwrap();
    assert_eq!(generated["points"].as_array().unwrap().len(), 9);
}

#[test]
fn experiment_writes_report_and_verify_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("inst");
    ok(&["--out", path(&out), "experiment", "instability", "--grid", "0:2:9:open"]);
    for file in ["instability.csv", "report.json", "timings.json"] {
        assert!(out.join(file).exists(), "{file}");
    }
    assert!(ok(&["verify", path(&out)]).contains("instability.csv: identical"));

    let csv = out.join("instability.csv");
    let text = std::fs::read_to_string(&csv).unwrap();
    std::fs::write(&csv, text.replacen('2', "3", 1)).unwrap();
    let tampered = icvec(&["verify", path(&out)]);
    assert_eq!(tampered.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&tampered.stdout).contains("instability.csv: DIFFERS"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // Nine points per class cannot separate the lattice: an asserted check fails.
    let failing =
        icvec(&["--out", path(&dir.path().join("r")), "experiment", "rvl", "--points", "9", "--repetitions", "2"]);
    assert_eq!(failing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&failing.stderr).contains("[FAIL] assert lattice_stable_lead_separated"));

    let bad_grid = icvec(&["--out", path(&dir.path().join("i")), "experiment", "instability", "--grid", "0:3:5"]);
    assert_eq!(bad_grid.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad_grid.stderr).contains("error:"));

    let missing = icvec(&["persist", path(&dir.path().join("nope.csv"))]);
    assert_eq!(missing.status.code(), Some(1));
    let misplaced = icvec(&["experiment", "rvl", "--image-dir", "x"]);
    assert_eq!(misplaced.status.code(), Some(1));
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        ok(&[
            "--seed",
            "5",
            "--out",
            path(&out),
            "experiment",
            "perturb",
            "--points",
            "40",
            "--grid",
            "0:0.02:8",
            "--wide-grid",
            "0:0.1:8",
        ]);
        std::fs::read(out.join("perturb.csv")).unwrap()
    };
    assert_eq!(run("a"), run("b"));
}
