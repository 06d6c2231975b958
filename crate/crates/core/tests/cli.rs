use std::process::{Command, Output};

use serde_json::Value;

fn coarse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coarse"))
        .args(args)
        .env_remove("COARSE_BUDGET")
        .output()
        .expect("binary runs")
}

fn coarse_env(args: &[&str], budget: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coarse"))
        .args(args)
        .env("COARSE_BUDGET", budget)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(o: &Output) -> usize {
    stdout(o).lines().count() - 1
}

#[test]
fn ball_row_counts() {
    for (args, rows) in [
        (["ball", "--group", "zd:2", "--length", "linf", "--radius", "2.5"], 25),
        (["ball", "--group", "free:2", "--length", "word:std", "--radius", "3.5"], 53),
        (["ball", "--group", "z", "--length", "l1", "--radius", "0.5"], 1),
    ] {
        let o = coarse(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert_eq!(csv_rows(&o), rows, "{args:?}");
    }
}

#[test]
fn ball_json_matches_csv() {
    let o = coarse(&["ball", "--group", "cmz2:4", "--length", "linf", "--radius", "2", "--out", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 4 + 32);
    assert_eq!(v["entries"].as_array().unwrap().len(), 36);
}

#[test]
fn length_values() {
    let o = coarse(&["length", "--group", "cmz2:4", "--length", "word:t,e1", "(t^0,(2,3))"]);
    assert!(stdout(&o).contains("7"), "{}", stdout(&o));
    let o = coarse(&["length", "--group", "zd:2", "--length", "smooth:l2:1.5", "--out", "json", "(2,1)"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v[0]["length"].as_f64().unwrap() - (1.0 + 2f64.sqrt())).abs() < 1e-9);
    let o = coarse(&["length", "--group", "cmz2:4", "--length", "l1", "(t^2,(-3,5))"]);
    assert!(stdout(&o).lines().nth(1).unwrap().ends_with(",8.0"));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["ball", "--group", "nope", "--length", "l1", "--radius", "1"],
        vec!["ball", "--group", "z", "--length", "mystery", "--radius", "1"],
        vec!["ball", "--group", "z", "--length", "l1", "--radius", "-1"],
        vec!["length", "--group", "z", "--length", "l1", "x"],
        vec!["frobnicate"],
        vec!["ball", "--group", "z"],
        vec!["verify", "no-such-scenario"],
        vec!["pseudometric"],
    ] {
        let o = coarse(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
    let o = coarse(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verify"));
}

#[test]
fn budget_exhaustion_exits_two() {
    let args = ["ball", "--group", "zd:2", "--length", "l1", "--radius", "1000", "--budget", "100"];
    let o = coarse(&args);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
    let o = coarse_env(&["ball", "--group", "zd:2", "--length", "l1", "--radius", "1000"], "100");
    assert_eq!(o.status.code(), Some(2));
    let o = coarse_env(&["ball", "--group", "zd:2", "--length", "l1", "--radius", "20", "--budget", "100000"], "100");
    assert_eq!(o.status.code(), Some(0), "flag takes precedence over the environment");
    let o = coarse_env(&["ball", "--group", "z", "--length", "l1", "--radius", "2"], "lots");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn failed_assertion_exits_three() {
    let o = coarse(&["verify", "chains"]);
    assert_eq!(o.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], false);
    let failed: Vec<&str> = v["assertions"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|a| a["passed"] == false)
        .map(|a| a["id"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["grid:l2:41:R=1.5"]);
}

#[test]
fn passing_scenario_exits_zero_and_repeats_byte_for_byte() {
    let args = ["verify", "z2-log2", "--rmax", "60", "--seed", "7"];
    let a = coarse(&args);
    let b = coarse(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["scenario"], "z2-log2");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn seeded_scans_repeat_byte_for_byte() {
    for args in [
        vec!["homog", "--space", "grid:l2:21", "--action", "translations+rot4", "--samples", "50", "--seed", "3"],
        vec!["chains", "--space", "grid:l2:21", "--radii", "1.5,3", "--sources", "8", "--seed", "3"],
    ] {
        let a = coarse(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, coarse(&args).stdout, "{args:?}");
    }
}

#[test]
fn single_chain_report() {
    let o = coarse(&["chains", "--space", "grid:l1:21", "--radii", "1.5", "--from", "(0,0)", "--to", "(3,4)"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let c = &v["chains"][0];
    assert_eq!(c["value"], 7.0);
    assert_eq!(c["witness"].as_array().unwrap().len(), 8);
}

#[test]
fn csv_space_and_action_files() {
    let dir = tempfile::tempdir().unwrap();
    let space = dir.path().join("space.csv");
    std::fs::write(&space, "a,b,c\n0,1,2\n1,0,1\n2,1,0\n").unwrap();
    let action = dir.path().join("action.csv");
    std::fs::write(&action, "0,1,2\n2,1,0\n").unwrap();
    let o = coarse(&["homog", "--space", space.to_str().unwrap(), "--action", action.to_str().unwrap(), "--samples", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = coarse(&["chains", "--space", space.to_str().unwrap(), "--radii", "1.5", "--from", "a", "--to", "c"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["chains"][0]["value"], 2.0);
}

#[test]
fn profile_commands() {
    let o = coarse(&["alpha", "--group", "zd:2", "--l1", "l1", "--l2", "linf", "--rmax", "40"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["alpha_hat"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-12);
    let o = coarse(&["ratio", "--group", "zd:2", "--l1", "wnorm:3,1", "--l2", "l1", "--rmax", "10"]);
    assert_eq!(csv_rows(&o), 9);
    let o = coarse(&["diameter", "--group", "zd:2", "--length", "l1", "--length", "l2", "--length", "linf", "--rmax", "60"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["diameter"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-9);
    let o = coarse(&["smooth-conv", "--group", "zd:2", "--length", "l2", "--radii", "1.5,2.5", "--radius", "10", "--out", "csv"]);
    assert_eq!(csv_rows(&o), 2);
    let o = coarse(&["word-conv", "--group", "z", "--length", "l1", "--radii", "2,4,8", "--rmax", "400"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_list_and_csv() {
    let o = coarse(&["verify", "list"]);
    assert_eq!(stdout(&o).lines().count(), 11);
    let o = coarse(&["verify", "z2-unbounded", "--rmax", "40", "--out", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("id,scenario,claim,kind,relation,measured,target,tolerance,passed"));
    assert_eq!(text.lines().count(), 6);
}
