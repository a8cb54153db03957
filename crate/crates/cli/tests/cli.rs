//! End-to-end CLI tests: exit codes, determinism and golden files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_darkmode-lab"))
}

fn repo_file(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn golden(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(rel)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn CLI")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 output")
}

fn assert_matches_golden(name: &str, produced: &str) {
    let path = golden(name);
    let want = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing golden file {path:?}"));
    assert_eq!(produced, want, "output drifted from golden file {name}");
}

#[test]
fn analyze_matches_golden_and_is_deterministic() {
    let spec = repo_file("docs/examples/two-by-three.json");
    let spec = spec.to_str().unwrap();
    let first = stdout(&["analyze", spec]);
    let second = stdout(&["analyze", spec]);
    assert_eq!(first, second, "analyze output must be byte-deterministic");
    assert_matches_golden("analyze-two-by-three.json", &first);
}

#[test]
fn cool_matches_golden() {
    let spec = repo_file("docs/examples/loop-two-mode.json");
    let out = stdout(&["cool", spec.to_str().unwrap()]);
    assert_matches_golden("cool-loop-two-mode.csv", &out);
}

#[test]
fn sweep_single_point_equals_cool() {
    let spec = repo_file("docs/examples/loop-two-mode.json");
    let spec = spec.to_str().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let plan_path = dir.path().join("plan.json");
    // Degenerate 1×1 grid pinned to the spec's own κ.
    std::fs::write(
        &plan_path,
        r#"{"param1": {"path": "kappa.0", "min": 0.1, "max": 0.1, "count": 1}}"#,
    )
    .unwrap();
    let sweep = stdout(&["sweep", spec, plan_path.to_str().unwrap()]);
    let cool = stdout(&["cool", spec]);
    // Identical apart from the param1 column.
    let strip = |csv: &str| -> Vec<String> {
        csv.lines()
            .skip(1)
            .map(|line| line.splitn(3, ',').nth(2).unwrap_or("").to_string())
            .collect()
    };
    assert_eq!(strip(&sweep), strip(&cool));
}

#[test]
fn sweep_is_order_deterministic_under_jobs() {
    let spec = repo_file("docs/examples/loop-two-mode.json");
    let spec = spec.to_str().unwrap();
    let plan = repo_file("docs/examples/sweep-kappa.json");
    let plan = plan.to_str().unwrap();
    let serial = stdout(&["sweep", spec, plan]);
    let parallel = stdout(&["--jobs", "4", "sweep", spec, plan]);
    assert_eq!(serial, parallel, "sweep output must not depend on --jobs");
    assert_eq!(serial.lines().count(), 9, "header + 8 grid rows");
}

#[test]
fn enumerate_three_modes_matches_golden() {
    let out = stdout(&["enumerate", "-n", "3"]);
    assert_eq!(out.lines().count(), 12, "header + 11 rows");
    assert_matches_golden("enumerate-n3.csv", &out);
}

#[test]
fn enumerate_counts_per_size() {
    assert_eq!(stdout(&["enumerate", "-n", "1"]).lines().count(), 2);
    assert_eq!(stdout(&["enumerate", "-n", "2"]).lines().count(), 4);
}

#[test]
fn chain_report_matches_golden() {
    let spec = repo_file("docs/examples/two-chains.json");
    let out = stdout(&["chain", spec.to_str().unwrap()]);
    assert_matches_golden("chain-two-chains.json", &out);
}

#[test]
fn atoms_and_dfs_reports_parse_and_count() {
    let atoms = repo_file("docs/examples/driven-atom.json");
    let out = stdout(&["atoms", atoms.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dark_count"], 2);

    let dfs = repo_file("docs/examples/common-bath-pair.json");
    let out = stdout(&["dfs", dfs.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dark_count"], 1);
    let norms = v["decoupling_norms"].as_array().unwrap();
    assert!(norms[0].as_f64().unwrap() < 1e-10);
}

#[test]
fn dump_normal_form_round_trips_dimensions() {
    let spec = repo_file("docs/examples/two-by-three.json");
    let out = stdout(&["dump-normal-form", spec.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["delta"].as_array().unwrap().len(), 2);
    assert_eq!(v["omega"].as_array().unwrap().len(), 3);
    assert_eq!(v["c_ab"].as_array().unwrap().len(), 2);
}

#[test]
fn malformed_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_spec_exits_3_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("invalid.json");
    let mut spec: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(repo_file("docs/examples/loop-two-mode.json")).unwrap(),
    )
    .unwrap();
    spec["kappa"][0] = serde_json::json!(-0.1);
    std::fs::write(&path, spec.to_string()).unwrap();
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("kappa"), "stderr must name the violation: {stderr}");
}

#[test]
fn out_flag_writes_file() {
    let spec = repo_file("docs/examples/loop-two-mode.json");
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let out = run(&[
        "analyze",
        spec.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let written = std::fs::read_to_string(&out_path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!(v["dark_count"], 1);
}

#[test]
fn tolerance_flag_changes_grouping() {
    // With an absurdly wide degeneracy tolerance the whole type-b spectrum
    // collapses into one group.
    let spec = repo_file("docs/examples/two-by-three.json");
    let out = stdout(&["analyze", spec.to_str().unwrap(), "--tol-deg", "1.0"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["groups"].as_array().unwrap().len(), 1);
}

#[test]
fn sweep_two_coupling_reproduces_mode_resolved_pattern() {
    let spec = repo_file("docs/examples/two-by-three.json");
    let plan = repo_file("docs/examples/sweep-two-coupling.json");
    let out = stdout(&["sweep", spec.to_str().unwrap(), plan.to_str().unwrap()]);
    let mut rows = std::collections::HashMap::new();
    for line in out.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let g22: f64 = f[0].parse().unwrap();
        let g23: f64 = f[1].parse().unwrap();
        let n: Vec<f64> = (3..6).map(|i| f[i].parse().unwrap()).collect();
        let dark: usize = f[6].parse().unwrap();
        rows.insert((format!("{g22:.2}"), format!("{g23:.2}")), (n, dark));
    }
    let at = |g22: &str, g23: &str| rows[&(g22.to_string(), g23.to_string())].clone();

    // Both extra couplings at the symmetric point: two dark modes, all hot.
    let (n, dark) = at("0.10", "0.10");
    assert_eq!(dark, 2);
    assert!(n.iter().all(|&x| x > 100.0));

    // Along g23 = 0.1 with g22 ≠ 0.1 the first coupling column vanishes and
    // mode 2 cools; symmetrically mode 3 cools along g22 = 0.1.
    for g22 in ["0.00", "0.05", "0.15", "0.20"] {
        let (n, dark) = at(g22, "0.10");
        assert_eq!(dark, 1);
        assert!(n[1] < 1.0 && n[0] > 100.0 && n[2] > 100.0, "g22={g22}: {n:?}");
    }
    for g23 in ["0.00", "0.05", "0.15", "0.20"] {
        let (n, _) = at("0.10", g23);
        assert!(n[2] < 1.0 && n[0] > 100.0 && n[1] > 100.0, "g23={g23}: {n:?}");
    }

    // On the diagonal away from 0.1 the dark mode avoids mode 1, which cools
    // (weak-coupling points; the 0.15 corner sits at the strong-coupling
    // edge and only approaches the ground state).
    for gd in ["0.00", "0.05", "0.20"] {
        let (n, _) = at(gd, gd);
        assert!(n[0] < 1.0, "diag {gd}: {n:?}");
        assert!(n[1] > 100.0 && n[2] > 100.0);
    }

    // Generic off-diagonal points keep mode 1 suppressed.
    for (g22, g23) in [("0.00", "0.05"), ("0.20", "0.05"), ("0.05", "0.15")] {
        let (n, _) = at(g22, g23);
        assert!(n[0] > 100.0, "({g22},{g23}): {n:?}");
    }
}
