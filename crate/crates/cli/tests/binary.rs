use std::process::{Command, Output};

use oscillab::output::read_csv;
use oscillab::RunManifest;

fn oscillab(args: &[&str], dir: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oscillab"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

#[test]
fn list_names_every_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let out = oscillab(&["list"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in oscillab::experiment_names() {
        assert!(text.contains(name), "{name} missing");
    }
}

#[test]
fn validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = oscillab(&["no-such-experiment"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("osc-random"));
    let out = oscillab(&["fan2", "--set", "bogus=1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn capacity_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = oscillab(&["expansive-search", "--n", "20000"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hint"));
}

#[test]
fn check_flag_exits_4_on_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = oscillab(&["gowers-tm-rs", "--check"], dir.path());
    assert_eq!(out.status.code(), Some(4));
    let out = oscillab(&["gowers-tm-rs"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let out = oscillab(&["non-orthogonality", "--check"], dir.path());
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn json_to_stdout_and_csv_to_file_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = oscillab(&["osc-random", "--n", "4096", "--seed", "9"], dir.path());
    assert!(out.status.success());
    let m: RunManifest = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(m.experiment.seed, 9);

    let out = oscillab(&["osc-random", "--n", "4096", "--seed", "9", "--out", "r.csv"], dir.path());
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert!(text.starts_with("# artifact_version: "));
    let (results, flags) = read_csv(text.as_bytes()).unwrap();
    assert_eq!(flags, m.pass_flags);
    let from_csv = RunManifest { results, ..m.clone() };
    assert_eq!(m.max_result_difference(&from_csv), Some(0.0));
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.conf"), "# small run\nn = 2048\nseed = 5\n").unwrap();
    let out = oscillab(&["osc-random", "--config", "run.conf", "--seed", "6"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let m: RunManifest = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(m.experiment.seed, 6);
    assert_eq!(m.experiment.params["n"].to_string(), "2048");
}

#[test]
fn thread_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let parse = |threads: &str| -> RunManifest {
        let out = oscillab(&["quasi-orthogonality", "--n", "8192", "--threads", threads], dir.path());
        assert!(out.status.success());
        serde_json::from_slice(&out.stdout).unwrap()
    };
    assert_eq!(parse("1").max_result_difference(&parse("3")), Some(0.0));
}

#[test]
fn cache_lifecycle() {
    let dir = tempfile::tempdir().unwrap();
    let args = |action| ["cache", action, "--n", "100000", "--cache-dir", "c"];
    assert!(oscillab(&args("build"), dir.path()).status.success());
    assert!(oscillab(&args("verify"), dir.path()).status.success());
    assert!(oscillab(&args("purge"), dir.path()).status.success());
    assert_eq!(oscillab(&["cache"], dir.path()).status.code(), Some(2));
}

#[test]
fn tools_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = oscillab(&["gowers", "--set", "sequence=rudin-shapiro", "--n", "256"], dir.path());
    assert!(out.status.success());
    let m: RunManifest = serde_json::from_slice(&out.stdout).unwrap();
    assert!(m.scalar("norm").unwrap() < 0.5);
    let out = oscillab(&["gen", "--set", "sequence=mobius", "--n", "10", "--format", "csv"], dir.path());
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("series,re,"));
}
