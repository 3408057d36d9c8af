use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn ehcr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ehcr")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_file(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn solve_reports_policy() {
    let table = fixture("table1.scn");
    let o = ehcr(&["solve", table.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("status: optimal"), "{text}");
    assert!(text.contains("tau_"));
}

#[test]
fn solve_infeasible_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("table1.scn")).unwrap().replace("lambda_p 0.1", "lambda_p 0.5");
    let path = write_file(&dir, "heavy.scn", &text);
    let o = ehcr(&["solve", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("infeasible"));
}

#[test]
fn parse_errors_exit_1_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("table1.scn")).unwrap().replace("0.85  0.085", "1.85  0.085");
    let path = write_file(&dir, "bad.scn", &text);
    let o = ehcr(&["solve", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 14") && err.contains("duration 5"), "{err}");

    let o = ehcr(&["solve", "/nonexistent/file.scn"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sweep_writes_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let table = fixture("table1.scn");
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = ehcr(&[
            "sweep",
            table.to_str().unwrap(),
            "--param",
            "lambda_p",
            "--from",
            "0",
            "--to",
            "0.4",
            "--step",
            "0.1",
            "--simulate",
            "--horizon",
            "20000",
            "--seed",
            "5",
            "--output",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(out).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().last().unwrap().starts_with("0.400000,infeasible,"));
}

#[test]
fn sweep_rejects_bad_grid() {
    let table = fixture("table1.scn");
    let o = ehcr(&[
        "sweep", table.to_str().unwrap(), "--param", "lambda_se", "--from", "0", "--to", "1", "--step", "0",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = ehcr(&[
        "sweep", table.to_str().unwrap(), "--param", "lambda_q", "--from", "0", "--to", "1", "--step", "0.1",
    ]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn simulate_with_policy_file() {
    let dir = tempfile::tempdir().unwrap();
    let policy = write_file(&dir, "p.txt", "1 0 0 0 0\n0 0 0 0 0\n");
    let table = fixture("table1.scn");
    let o = ehcr(&[
        "simulate", table.to_str().unwrap(), "--policy", policy.to_str().unwrap(), "--mode", "dominant",
        "--horizon", "100000",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("mode dominant") && text.contains("mu_se"), "{text}");

    let o = ehcr(&["simulate", table.to_str().unwrap(), "--policy", "uniform", "--mode", "coupled", "--horizon", "10000"]);
    assert!(stdout(&o).contains("dominance violations"));

    let short = write_file(&dir, "short.txt", "1");
    let o = ehcr(&["simulate", table.to_str().unwrap(), "--policy", short.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn check_prints_one_line_per_criterion() {
    let o = ehcr(&["check", fixture("table1.scn").to_str().unwrap()]);
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("criterion ")).count(), 9, "{text}");
    assert!(text.contains("of 9 criteria passed"));
    let all_pass = text.lines().filter(|l| l.starts_with("criterion ")).all(|l| l.contains(" PASS "));
    assert_eq!(o.status.code(), Some(if all_pass { 0 } else { 1 }));
}
