use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn qwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(args)
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = qwalk(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn cfg(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

fn numbers(line: &str) -> Vec<f64> {
    line.split_whitespace()
        .filter_map(|t| t.parse().ok())
        .collect()
}

#[test]
fn single_step_histogram() {
    let out = ok(&["run", "--config", &cfg("single_step.json")]);
    let body: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], "position,probability");
    assert_eq!(body.len(), 2);
    let (m, p) = body[1].split_once(',').unwrap();
    assert_eq!(m, "-1");
    assert!((p.parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn histograms_for_four_cycle_counts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = ok(&["run", "--config", &cfg("histograms.json"), "--out", d]);
    assert_eq!(out.lines().filter(|l| l.starts_with("# n")).count(), 12);
    let files: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 24);
    // n=3, W3 with home psi1 has mean 0.556.
    let line = out.lines().find(|l| l.starts_with("# n3_W3")).unwrap();
    assert!(line.ends_with("mean=0.556"), "{line}");
    let svg = fs::read_to_string(dir.path().join("hist_n1_W1_h1_psi1.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn empty_walk_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.json");
    fs::write(&path, r#"{"walk": {"steps": []}}"#).unwrap();
    let out = qwalk(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at least one step"));
}

#[test]
fn config_errors_report_position_and_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\n  \"omgea\": 1\n}").unwrap();
    let out = qwalk(&["analyze", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2") && err.contains("omgea"), "{err}");

    assert_eq!(
        qwalk(&["regions", "--preset", "two-step", "--grid", "10"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        qwalk(&["analyze", "--config", "/nonexistent/x.json"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        qwalk(&["analyze", "--preset", "two-step", "--home", "1,1,1,1"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn analyze_reports_matrix_and_eigenpairs() {
    let out = ok(&["analyze", "--config", &cfg("two_step_mu.json")]);
    let w2: Vec<&str> = out.lines().skip_while(|l| *l != "W2").take(5).collect();
    assert_eq!(
        w2[1].trim(),
        "o     = [[1.503, 1.503-1.250i], [1.503+1.250i, -1.503]]"
    );
    assert!(w2[2].contains("o_max = 2.465"));

    let out = ok(&["analyze", "--config", &cfg("two_step_delta.json")]);
    let w1: Vec<&str> = out.lines().skip_while(|l| *l != "W1").take(4).collect();
    assert!(w1[2].contains("o_max = 0.796"), "{}", w1[2]);
    assert!(
        w1[2].contains("v_max = (0.981)|0> + (0.195)|1>"),
        "{}",
        w1[2]
    );
    let rho = out
        .lines()
        .find(|l| l.trim_start().starts_with("rho12:"))
        .unwrap();
    assert_eq!(numbers(rho), vec![-0.267, -0.134, 0.235]);
    assert!(rho.ends_with("LLW"));
}

#[test]
fn analyze_degenerate_walk() {
    let out = ok(&["analyze", "--config", &cfg("degenerate.json")]);
    assert!(out.contains("degenerate: payoff is 1.000"), "{out}");
}

#[test]
fn analyze_spectral_observable_from_file() {
    let out = ok(&["analyze", "--config", &cfg("spectral.json")]);
    assert!(out.starts_with("observable spectral"));
    assert!(out.contains("psi1:"));
}

#[test]
fn two_step_region_map_has_eight_regions() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = ok(&[
        "regions",
        "--config",
        &cfg("two_step_mu.json"),
        "--grid",
        "91x180",
        "--out",
        d,
    ]);
    let tie_free = out
        .lines()
        .filter(|l| l.starts_with("  ") && !l.contains('T'))
        .count();
    assert_eq!(tie_free, 8, "{out}");
    assert!(out.contains("marker psi1: LLW (Parrondo)"));
    assert!(out.contains("marker psi2: LLW (Parrondo)"));
    let csv = fs::read_to_string(dir.path().join("regions.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "theta,phi,label_w1,label_w2,label_w3,parrondo"
    );
    assert_eq!(csv.lines().count(), 1 + 91 * 180);
    assert!(fs::read_to_string(dir.path().join("regions.svg"))
        .unwrap()
        .contains("psi1"));
}

#[test]
fn three_step_delta_map_marks_phi() {
    let out = ok(&[
        "regions",
        "--config",
        &cfg("three_step_delta.json"),
        "--grid",
        "37x72",
    ]);
    assert!(out.contains("marker phi: LLLW (Parrondo)"), "{out}");
}

#[test]
fn tiny_grid_gives_four_rows() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    ok(&[
        "regions", "--preset", "two-step", "--grid", "2x2", "--out", d,
    ]);
    let csv = fs::read_to_string(dir.path().join("regions.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn region_output_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        ok(&[
            "regions",
            "--config",
            &cfg("three_step_mu.json"),
            "--grid",
            "37x72",
            "--out",
            d.path().to_str().unwrap(),
        ]);
    }
    for f in ["regions.csv", "regions.svg", "caps.csv"] {
        assert_eq!(
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

fn persist_rows(out: &str, home: &str) -> Vec<Vec<f64>> {
    out.lines()
        .skip_while(|l| !l.starts_with(&format!("home {home}")))
        .skip(1)
        .take_while(|l| l.trim_start().starts_with("n="))
        .map(|l| numbers(l.trim_start().trim_start_matches("n=")))
        .collect()
}

#[test]
fn persistence_sign_pattern() {
    let out = ok(&["persist", "--config", &cfg("two_step_mu.json")]);
    let rows = persist_rows(&out, "psi1");
    assert_eq!(rows.len(), 19);
    // W3's payoff is exactly zero at n = 1, 2 and positive from n = 3 on.
    for r in &rows {
        let n = r[0] as usize;
        if n <= 2 {
            assert_eq!(r[3], 0.0, "n={n}");
        } else {
            assert!(r[3] > 0.0 && r[1] < 0.0 && r[2] < 0.0, "n={n}: {r:?}");
        }
    }

    let out = ok(&[
        "persist",
        "--config",
        &cfg("two_step_delta.json"),
        "--home",
        "rho12",
    ]);
    assert!(
        out.contains("persistent over the scanned range from n = 3"),
        "{out}"
    );
    assert_eq!(out.lines().filter(|l| l.ends_with("Parrondo")).count(), 17);
}

#[test]
fn persistence_files_and_single_value_range() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    ok(&[
        "persist",
        "--preset",
        "two-step",
        "--home",
        "psi2",
        "--n-range",
        "5",
        "--out",
        d,
    ]);
    let csv = fs::read_to_string(dir.path().join("persist_h1_psi2.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.starts_with("n,payoff_w1,payoff_w2,payoff_w3,parrondo\n5,"));
    assert!(fs::read_to_string(dir.path().join("persist_h1_psi2.svg"))
        .unwrap()
        .starts_with("<svg"));
}

#[test]
fn design_reports_steps_and_threshold() {
    let out = ok(&["design", "--config", &cfg("designed_two.json")]);
    assert!(out.contains("Q = 5/7"));
    assert!(out.contains(r#""p": 3"#) && out.contains(r#""q": -4"#));
    let out = ok(&["design", "--config", &cfg("designed_four.json")]);
    assert!(out.contains("Q = 8/9"));
    assert!(out.contains("n(9x - 8)"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("odd.json");
    fs::write(
        &path,
        r#"{"design": {"target": "h", "strides": [[-1,-1],[-1,-1],[3,-4]]}}"#,
    )
    .unwrap();
    let out = qwalk(&["design", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("even number of steps"));

    fs::write(
        &path,
        r#"{"design": {"target": "h", "strides": [[1,-1],[3,-4]]}}"#,
    )
    .unwrap();
    let out = qwalk(&["design", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p_i < 0"));
}

#[test]
fn oracle_passes_and_is_deterministic() {
    let a = ok(&["oracle"]);
    assert!(a.trim_end().ends_with("ALL PASS"));
    assert!(a.contains("trials=1000"));
    assert_eq!(a, ok(&["oracle"]));
    assert_ne!(a, ok(&["oracle", "--seed", "7"]));
    let empty = ok(&["oracle", "--trials", "0"]);
    assert!(empty.contains("trials=0") && empty.trim_end().ends_with("ALL PASS"));
}
