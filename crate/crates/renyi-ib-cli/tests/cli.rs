//! End-to-end tests driving the built binary: exit codes, file schemas, and
//! byte-level reproducibility.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_renyi-ib")
}

fn run(args: &[&str]) -> Output {
    Command::new(binary()).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_table1a(dir: &Path) -> PathBuf {
    let path = dir.join("table1a.json");
    std::fs::write(
        &path,
        r#"{
  "y_labels": ["1", "2", "3", "4"],
  "x_labels": ["1", "2", "3", "4", "5"],
  "pyx": [
    ["1/4", 0, 0, 0, 0],
    [0, "1/8", "1/8", 0, 0],
    [0, "1/8", "1/8", 0, 0],
    [0, 0, 0, "1/8", "1/8"]
  ]
}
"#,
    )
    .unwrap();
    path
}

#[test]
fn info_reports_the_joint_constants() {
    let dir = tempfile::tempdir().unwrap();
    let joint = write_table1a(dir.path());
    let out = run(&["info", joint.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("H(X) = 2.25 bits"), "{text}");
    assert!(text.contains("I(Y;X) = 1.5 bits"), "{text}");
    assert!(text.contains("|Y| = 4, |X| = 5"), "{text}");
}

#[test]
fn frontier_emits_the_expected_envelope_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let joint = write_table1a(dir.path());
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out_dir in [&out_a, &out_b] {
        let out = run(&[
            "frontier",
            joint.to_str().unwrap(),
            "--alpha",
            "1",
            "--M",
            "2",
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let envelope = std::fs::read_to_string(out_a.join("envelope.csv")).unwrap();
    assert!(envelope.starts_with("gamma,eta,is_vertex\n"));
    assert!(envelope.contains("0.00000000000e0,0.00000000000e0,true"), "{envelope}");
    assert!(envelope.contains("1.00000000000e0,1.00000000000e0,true"), "{envelope}");

    let points = std::fs::read_to_string(out_a.join("points.csv")).unwrap();
    assert_eq!(points.lines().count(), 33, "header plus 32 maps");
    assert!(points.lines().nth(1).unwrap().ends_with("bruteforce,11111"), "{points}");

    for file in ["points.csv", "envelope.csv", "manifest.json"] {
        let a = std::fs::read(out_a.join(file)).unwrap();
        let b = std::fs::read(out_b.join(file)).unwrap();
        assert_eq!(a, b, "{file} must be byte-identical across reruns");
    }
}

#[test]
fn frontier_with_one_cluster_is_a_single_row() {
    let dir = tempfile::tempdir().unwrap();
    let joint = write_table1a(dir.path());
    let out_dir = dir.path().join("m1");
    let out = run(&[
        "frontier",
        joint.to_str().unwrap(),
        "--alpha",
        "0.5",
        "--M",
        "1",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let envelope = std::fs::read_to_string(out_dir.join("envelope.csv")).unwrap();
    let rows: Vec<&str> = envelope.lines().collect();
    assert_eq!(rows.len(), 2, "header plus the single origin row: {envelope}");
    assert_eq!(rows[1], "0.00000000000e0,0.00000000000e0,true");
}

#[test]
fn infeasible_enumeration_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let joint = dir.path().join("wide.json");
    let row: Vec<String> = (0..16).map(|_| "0.03125".to_string()).collect();
    std::fs::write(
        &joint,
        format!(r#"{{"pyx": [[{r}], [{r}]]}}"#, r = row.join(", ")),
    )
    .unwrap();
    let out = run(&[
        "frontier",
        joint.to_str().unwrap(),
        "--alpha",
        "0.5",
        "--M",
        "4",
        "--out",
        dir.path().join("x").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("4.295e9"), "{}", stderr(&out));
}

#[test]
fn validation_failures_exit_with_code_one() {
    let dir = tempfile::tempdir().unwrap();

    let bad_sum = dir.path().join("bad_sum.json");
    std::fs::write(&bad_sum, r#"{"pyx": [[0.5, 0.2], [0.1, 0.1]]}"#).unwrap();
    let out = run(&["info", bad_sum.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("sum=0.900000"), "{}", stderr(&out));

    let negative = dir.path().join("negative.json");
    std::fs::write(&negative, r#"{"pyx": [[0.75, -0.25], [0.25, 0.25]]}"#).unwrap();
    let out = run(&["info", negative.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("pyx[0][1]"), "{}", stderr(&out));

    let out = run(&["info", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let joint = write_table1a(dir.path());
    let out = run(&[
        "frontier",
        joint.to_str().unwrap(),
        "--alpha",
        "1.5",
        "--M",
        "2",
        "--out",
        dir.path().join("y").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("Renyi order"), "{}", stderr(&out));
}

#[test]
fn solve_is_seed_reproducible_and_matches_the_frontier_on_table1a() {
    let dir = tempfile::tempdir().unwrap();
    let joint = write_table1a(dir.path());
    let solve_a = dir.path().join("sa");
    let solve_b = dir.path().join("sb");
    for out_dir in [&solve_a, &solve_b] {
        let out = run(&[
            "solve",
            joint.to_str().unwrap(),
            "--alpha",
            "0.5",
            "--M",
            "2",
            "--restarts",
            "5",
            "--seed",
            "11",
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    for file in ["points.csv", "envelope.csv", "runs.csv", "manifest.json"] {
        let a = std::fs::read(solve_a.join(file)).unwrap();
        let b = std::fs::read(solve_b.join(file)).unwrap();
        assert_eq!(a, b, "{file} must be byte-identical for a fixed seed");
    }

    let frontier_dir = dir.path().join("f");
    let out = run(&[
        "frontier",
        joint.to_str().unwrap(),
        "--alpha",
        "0.5",
        "--M",
        "2",
        "--out",
        frontier_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let vertex_rows = |dir: &Path| -> Vec<String> {
        std::fs::read_to_string(dir.join("envelope.csv"))
            .unwrap()
            .lines()
            .filter(|l| l.ends_with(",true"))
            .map(str::to_owned)
            .collect()
    };
    assert_eq!(vertex_rows(&solve_a), vertex_rows(&frontier_dir));

    let runs = std::fs::read_to_string(solve_a.join("runs.csv")).unwrap();
    assert!(runs.starts_with("beta,init,iterations,converged,cycle_detected,objective,gamma,eta,map\n"));
    assert!(runs.lines().count() > 1);
}

#[test]
fn jobs_flag_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let joint = write_table1a(dir.path());
    let seq = dir.path().join("seq");
    let par = dir.path().join("par");
    for (out_dir, jobs) in [(&seq, "1"), (&par, "0")] {
        let out = run(&[
            "frontier",
            joint.to_str().unwrap(),
            "--alpha",
            "0.5",
            "--M",
            "3",
            "--out",
            out_dir.to_str().unwrap(),
            "--jobs",
            jobs,
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    for file in ["points.csv", "envelope.csv"] {
        assert_eq!(
            std::fs::read(seq.join(file)).unwrap(),
            std::fs::read(par.join(file)).unwrap(),
            "{file} must not depend on the thread count"
        );
    }
}

#[test]
fn timeshare_prints_the_even_split_plan() {
    let dir = tempfile::tempdir().unwrap();
    let joint = write_table1a(dir.path());
    let out = run(&[
        "timeshare",
        joint.to_str().unwrap(),
        "--alpha",
        "1",
        "--M",
        "3",
        "--gamma",
        "0.75",
        "--n",
        "10000",
        "--seed",
        "7",
        "--simulate",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("segment 1: weight = 0.5, map = 11111"), "{text}");
    assert!(text.contains("segment 2: weight = 0.5, map = 12233"), "{text}");
    assert!(text.contains("analytic: gamma_n = 0.75, eta_n = 0.75"), "{text}");
    assert!(text.contains("simulated (seed 7):"), "{text}");

    let out = run(&[
        "timeshare",
        joint.to_str().unwrap(),
        "--alpha",
        "1",
        "--M",
        "3",
        "--gamma",
        "-1",
        "--n",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(1), "negative gamma is a validation error");
}

#[test]
fn demos_pass_all_claims() {
    for name in ["table1a", "example1", "example2"] {
        let out = run(&["demo", name]);
        assert!(out.status.success(), "demo {name}: {}", stderr(&out));
        let text = stdout(&out);
        assert!(text.contains("all claims pass"), "demo {name}: {text}");
        assert!(!text.contains("FAIL"), "demo {name}: {text}");
    }
}
