use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bvlasso"))
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn run_to(cmd: &str, config: &Path, out: &Path, jobs: usize) -> std::process::Output {
    bin()
        .args([cmd, "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(["--jobs", &jobs.to_string()])
        .output()
        .expect("binary runs")
}

#[test]
fn outputs_match_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in ["select", "regret", "chernoff"] {
        let out = dir.path().join(format!("{cmd}.csv"));
        let status = run_to(cmd, &golden(&format!("{cmd}_tiny.toml")), &out, 2);
        assert!(status.status.success(), "{cmd}: {}", String::from_utf8_lossy(&status.stderr));
        let got = std::fs::read_to_string(&out).unwrap();
        let want = std::fs::read_to_string(golden(&format!("{cmd}_tiny.csv"))).unwrap();
        assert_eq!(got, want, "{cmd} output drifted from its golden file");
    }
}

#[test]
fn output_is_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in ["select", "regret"] {
        let config = golden(&format!("{cmd}_tiny.toml"));
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        assert!(run_to(cmd, &config, &a, 1).status.success());
        assert!(run_to(cmd, &config, &b, 4).status.success());
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }
}

#[test]
fn trial_tables_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let trials = dir.path().join("trials.csv");
    let config = dir.path().join("c.toml");
    let base = std::fs::read_to_string(golden("select_tiny.toml")).unwrap();
    std::fs::write(&config, format!("{base}trial_output = {:?}\n", trials.to_str().unwrap())).unwrap();
    let out = dir.path().join("s.csv");
    assert!(run_to("select", &config, &out, 1).status.success());
    let text = std::fs::read_to_string(&trials).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("trial_id,n,sigma,c_lambda,scheme,score_x1,score_x2,selected_bitmask"));
    // 2 σ values × 2 sample sizes × 3 trials.
    assert_eq!(lines.count(), 12);
}

#[test]
fn config_errors_exit_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "sigma = [1.0]\nc_lambda = [0.2]\nn = [100]\ntrials = 0\n").unwrap();
    let out = dir.path().join("o.csv");
    assert_eq!(run_to("select", &bad, &out, 1).status.code(), Some(2));
    std::fs::write(&bad, "not toml at all [").unwrap();
    assert_eq!(run_to("select", &bad, &out, 1).status.code(), Some(2));
    assert_eq!(run_to("select", &dir.path().join("missing.toml"), &out, 1).status.code(), Some(2));
    assert_eq!(run_to("regret", &golden("select_tiny.toml"), &out, 1).status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_with_code_3() {
    let out = Path::new("/nonexistent-dir/out.csv");
    assert_eq!(run_to("chernoff", &golden("chernoff_tiny.toml"), out, 1).status.code(), Some(3));
}

#[test]
fn noiseless_linear_selection_scores_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.toml");
    std::fs::write(&config, "env = \"f2\"\nsigma = [0.0]\nc_lambda = [0.22]\nn = [2000]\ntrials = 1\n").unwrap();
    let out = dir.path().join("o.csv");
    assert!(run_to("select", &config, &out, 1).status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().nth(1), Some("2000,1.000000,1.000000,1.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000"));
}
