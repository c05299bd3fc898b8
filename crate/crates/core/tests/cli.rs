//! CLI surface tests: subcommands, output schemas, exit codes.

use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cmwide"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn classgroup_json_matches_schema() {
    let (code, stdout, _) = run(&["classgroup", "--disc", "-23"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["h"], 3);
    assert_eq!(v["disc"], -23);
    assert_eq!(v["forms"].as_array().unwrap().len(), 3);
    assert_eq!(v["elementary_divisors"], serde_json::json!([3]));
}

#[test]
fn classgroup_rejects_nonfundamental() {
    let (code, _, stderr) = run(&["classgroup", "--disc", "-12"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("fundamental"), "stderr: {stderr}");
}

#[test]
fn unknown_flag_is_usage_error() {
    let (code, _, _) = run(&["classgroup", "--disc", "-23", "--bogus"]);
    assert_eq!(code, 64);
    let (code, _, _) = run(&["not-a-command"]);
    assert_eq!(code, 64);
}

#[test]
fn help_exits_zero() {
    let (code, stdout, _) = run(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["classgroup", "heegner", "theta", "lvalue", "waldspurger", "widemoment", "diagmoment", "equidist"] {
        assert!(stdout.contains(sub), "help must list {sub}");
    }
}

#[test]
fn heegner_table_covers_classes() {
    let (code, stdout, _) = run(&["heegner", "--disc", "-23"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 3);
    assert_eq!(v["ideal_identity_holds"], true);
    assert_eq!(v["base"], serde_json::json!([1, 1, 6]));
}

#[test]
fn theta_csv_has_schema_and_values() {
    let (code, stdout, _) = run(&["theta", "--disc", "-23", "--infty-type", "0", "--terms", "8", "--out", "csv"]);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert_eq!(lines.next().unwrap(), "n,re_lambda,im_lambda");
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "1");
    let re: f64 = first[1].parse().unwrap();
    assert!((re - 1.0).abs() < 1e-12);
    // λ(2) = 2 for the trivial character of D = −23
    let second: Vec<&str> = stdout.lines().nth(2).unwrap().split(',').collect();
    let re2: f64 = second[1].parse().unwrap();
    assert!((re2 - 2.0).abs() < 1e-12);
}

#[test]
fn lvalue_row_schema() {
    let (code, stdout, _) = run(&[
        "lvalue", "--disc", "-23", "--weight", "12", "--chi", "1", "--terms", "20000", "--out", "csv",
    ]);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert_eq!(lines.next().unwrap(), "disc,chi,k,value,error,terms_used");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "-23");
    assert_eq!(row[1], "1");
    assert_eq!(row[2], "12");
    let value: f64 = row[3].parse().unwrap();
    assert!(value > 0.0);
}

#[test]
fn waldspurger_report_is_consistent() {
    let (code, stdout, _) = run(&["waldspurger", "--disc", "-23", "--weight", "12", "--terms", "20000"]);
    assert_eq!(code, 0, "stdout: {stdout}");
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert!(v["dispersion"].as_f64().unwrap() < 1e-3);
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert!(v["measured_c_infinity"].as_f64().unwrap() > 0.0);
}

#[test]
fn widemoment_and_diagmoment_rows() {
    for cmd in ["widemoment", "diagmoment"] {
        for n in ["1", "2", "3"] {
            let (code, stdout, stderr) =
                run(&[cmd, "--disc", "-23", "--n", n, "--terms", "20000"]);
            assert_eq!(code, 0, "{cmd} n={n}: {stderr}");
            let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
            assert!(v["delta"].as_f64().unwrap() < 1e-9 || v["lhs"][0].as_f64().unwrap().abs() < 1e-15);
        }
    }
}

#[test]
fn accuracy_error_exits_two() {
    // a 100-term eigenform cannot feed the AFE for D = −23: accuracy error
    let (code, _, stderr) = run(&["lvalue", "--disc", "-23", "--weight", "12", "--terms", "100"]);
    assert_eq!(code, 2, "stderr: {stderr}");
    assert!(stderr.contains("accuracy"), "stderr: {stderr}");
}

#[test]
fn equidist_csv_rows() {
    let (code, stdout, _) = run(&["equidist", "--disc", "-200", "--disc-hi", "-23", "--weight", "12", "--out", "csv"]);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert_eq!(lines.next().unwrap(), "disc,h,mean_mass,deviation,weyl");
    let n_rows = stdout.lines().count() - 1;
    // fundamental discriminants in [−200, −23]
    let expected = (-200..=-23i64)
        .filter(|&d| cmwide::qforms::is_fundamental(d).unwrap())
        .count();
    assert_eq!(n_rows, expected);
    // 15 significant digits in float columns
    let row = stdout.lines().nth(1).unwrap();
    let mass = row.split(',').nth(2).unwrap();
    assert!(mass.contains('e') && mass.splitn(2, 'e').next().unwrap().len() >= 16);
}
