use std::path::Path;
use std::process::{Command, Output};

fn mcm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcmulticast"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn files_in(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    v.sort();
    v
}

#[test]
fn mbsfn_preset_writes_two_logs_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = mcm(&[
        "run",
        "--preset",
        "fig8_mbsfn_vs_mc",
        "--seed",
        "7",
        "--subframes",
        "30",
        "--drops",
        "2",
        "--out",
        out,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        files_in(dir.path()),
        [
            "fig8_mbsfn_vs_mc_cga.csv",
            "fig8_mbsfn_vs_mc_mbsfn.csv",
            "fig8_mbsfn_vs_mc_summary.json"
        ]
    );
    let csv = std::fs::read_to_string(dir.path().join("fig8_mbsfn_vs_mc_cga.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,policy,served_count,served_ids"));
    assert_eq!(lines.count(), 60);
    let summary: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("fig8_mbsfn_vs_mc_summary.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(summary["seed"], 7);
    assert_eq!(summary["paired"]["better"], "cga");
    assert_eq!(summary["paired"]["worse"], "mbsfn");
    assert_eq!(summary["metrics"].as_array().unwrap().len(), 2);
    assert!(stdout(&o).contains("fig8_mbsfn_vs_mc cga:"));
}

#[test]
fn custom_run_is_deterministic() {
    let args = |out: &str| {
        vec![
            "run".to_string(),
            "--preset".into(),
            "custom".into(),
            "--policy".into(),
            "cga".into(),
            "--radius".into(),
            "250".into(),
            "--ues".into(),
            "20".into(),
            "--subframes".into(),
            "50".into(),
            "--drops".into(),
            "2".into(),
            "--out".into(),
            out.into(),
        ]
    };
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let argv = args(d.path().to_str().unwrap());
        let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
        assert!(mcm(&argv).status.success());
    }
    let read = |d: &Path| std::fs::read(d.join("custom_cga.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}

#[test]
fn sweep_preset_writes_both_axes() {
    let dir = tempfile::tempdir().unwrap();
    let o = mcm(&[
        "run",
        "--preset",
        "fig6_unserved_sweep",
        "--subframes",
        "5",
        "--drops",
        "1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let users = std::fs::read_to_string(dir.path().join("fig6_unserved_sweep_users.csv")).unwrap();
    // header + 4 values x 2 policies
    assert_eq!(users.lines().count(), 9);
    assert!(users
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("users_per_cell,5,cga,"));
    let radius =
        std::fs::read_to_string(dir.path().join("fig6_unserved_sweep_radius.csv")).unwrap();
    assert!(radius
        .lines()
        .last()
        .unwrap()
        .starts_with("radius,1000,sc,"));
}

#[test]
fn oracle_check_reports_ratio() {
    let o = mcm(&["oracle-check", "--instances", "50", "--max-users", "8"]);
    let text = stdout(&o);
    assert!(text.starts_with("oracle-check: 50 instances"), "{text}");
    assert!(text.contains("min CGA/OPT ratio"));
    assert!(matches!(o.status.code(), Some(0 | 1)));
}

#[test]
fn oracle_check_fails_on_known_bad_generator_range() {
    // Tiny instances include the two-cell case where the greedy serves 1 of 2.
    let o = mcm(&[
        "oracle-check",
        "--instances",
        "3000",
        "--max-users",
        "2",
        "--max-cells",
        "2",
        "--max-prbs",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn bad_config_exits_2() {
    assert_eq!(mcm(&["run", "--preset", "nope"]).status.code(), Some(2));
    assert_eq!(mcm(&["run", "--radius", "-5"]).status.code(), Some(2));
    assert_eq!(mcm(&["run", "--bogus-flag"]).status.code(), Some(2));
}

#[test]
fn malformed_trace_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("bad.txt");
    std::fs::write(&trace, "# trace\n0 I 0.0 4500\n1 what\n").unwrap();
    let o = mcm(&[
        "run",
        "--trace",
        trace.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn exact_cap_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let o = mcm(&[
        "run",
        "--preset",
        "custom",
        "--policy",
        "exact",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("o");
    std::fs::write(
        &cfg,
        format!(
            "# comment\npreset = custom\npolicy = sc\nues = 2\nsubframes = 10\ndrops = 1\nout = {}\n",
            out.display()
        ),
    )
    .unwrap();
    let o = mcm(&["run", "--config", cfg.to_str().unwrap(), "--subframes", "4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("custom_sc.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert!(stdout(&o).contains("users 14"));
}

#[test]
fn solve_prints_allocation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two_cell.txt");
    std::fs::write(
        &path,
        "instance 6 2 2\n0 0 : 0 1\n0 1 : 1 2 3\n1 1 : 2 3 4 5\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let o = mcm(&["solve", p, "--policy", "cga"]);
    assert_eq!(
        stdout(&o).trim(),
        "cga: served 6 of 6 | prbs 0 1 | users 0 1 2 3 4 5"
    );
    let o = mcm(&["solve", p, "--policy", "dga"]);
    assert_eq!(
        stdout(&o).trim(),
        "dga: served 5 of 6 | prbs 1 1 | users 1 2 3 4 5"
    );
    let o = mcm(&["solve", p, "--policy", "exact", "--exact-cap", "2"]);
    assert_eq!(o.status.code(), Some(4));
}
