//! End-to-end tests of the `pbbs` binary: the documented subcommands, the
//! exit-code contract, and byte-deterministic CSV output.

use std::process::{Command, Output};

fn pbbs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pbbs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn evolve_matches_printed_row() {
    let out = pbbs(&["evolve", "--state", "11211122211122", "--l", "2", "--t", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "22121111222111");
}

#[test]
fn solve_reproduces_the_worked_example() {
    let out = pbbs(&["solve", "--state", "22121111222111", "--schedule", "2:1000"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "11112221112212");

    let out = pbbs(&["solve", "--state", "22121111222111", "--schedule", "3:1000"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "12211122111122");
}

#[test]
fn solve_accepts_angle_specs() {
    let out = pbbs(&["solve", "--angle", "mu=2,6;L=170;I=0,0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1122111111222222.1^154");

    let out = pbbs(&["solve", "--angle", "mu=2,6;L=170;I=0,0", "--schedule", "inf:70"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1^94.222222.1^38.22.1^30");
}

#[test]
fn solve_and_evolve_agree() {
    for schedule in [("2", "3"), ("3", "2"), ("1", "5")] {
        let solve = pbbs(&[
            "solve",
            "--state",
            "11211122211122",
            "--schedule",
            &format!("{}:{}", schedule.0, schedule.1),
        ]);
        let evolve = pbbs(&[
            "evolve",
            "--state",
            "11211122211122",
            "--l",
            schedule.0,
            "--t",
            schedule.1,
        ]);
        assert!(solve.status.success() && evolve.status.success());
        assert_eq!(stdout(&solve), stdout(&evolve));
    }
}

#[test]
fn scatter_prints_the_angle_data() {
    let out = pbbs(&["scatter", "--state", "22121111222111"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("mu = 1 2 3"), "{text}");
    assert!(text.contains("L = 14"), "{text}");
    assert!(text.contains("I = 2 6 3"), "{text}");
    assert!(text.contains("p = 8 4 2"), "{text}");
    assert!(text.contains("det A = 448"), "{text}");
    assert!(text.contains("10 2 2"), "{text}");
}

#[test]
fn soften_writes_deterministic_csv() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path_a = dir.path().join("a.csv");
    let path_b = dir.path().join("b.csv");
    for path in [&path_a, &path_b] {
        let out = pbbs(&[
            "soften",
            "--angle",
            "mu=1,2;L=12;I=3,5",
            "--eps",
            "2.0",
            "--tmax",
            "4",
            "--out",
            path.to_str().expect("utf8 path"),
        ]);
        assert!(out.status.success());
    }
    let a = std::fs::read(&path_a).expect("csv written");
    let b = std::fs::read(&path_b).expect("csv written");
    assert!(!a.is_empty());
    assert_eq!(a, b, "CSV output must be byte-identical across runs");
    let text = String::from_utf8(a).expect("utf8");
    assert_eq!(text.lines().next(), Some("k,t,u"));
    assert_eq!(text.lines().count(), 1 + 12 * 5);
}

#[test]
fn verify_suites_run_clean() {
    let out = pbbs(&["verify", "--suite", "crystal", "--max-l", "6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("[PASS] crystal::evolution_tables"), "{text}");
    assert!(!text.contains("[FAIL]"), "{text}");
}

#[test]
fn exit_codes() {
    // Usage errors exit 2.
    let out = pbbs(&["evolve", "--state", "11x1", "--l", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = pbbs(&["solve", "--state", "111"]); // fine
    assert!(out.status.success());
    let out = pbbs(&["solve"]); // missing source
    assert_eq!(out.status.code(), Some(2));
    let out = pbbs(&["verify", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    // Ball-heavy states are rejected as usage errors.
    let out = pbbs(&["evolve", "--state", "221", "--l", "1"]);
    assert_eq!(out.status.code(), Some(2));
}
