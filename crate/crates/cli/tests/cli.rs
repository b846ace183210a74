//! Black-box checks of the CLI contract: rendered output, exit codes,
//! config handling, and run-to-run determinism.

use std::fs;
use std::process::{Command, Output};

fn moyal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moyal"))
        .args(args)
        .output()
        .expect("spawn binary")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn star_prints_both_orders_and_the_bracket() {
    let out = moyal(&["star", "q", "p"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "q*p = q p + (1/2) i ħ\np*q = q p - (1/2) i ħ\n[q,p]_M = i ħ\n"
    );

    let out = moyal(&["star", "p^2", "q^2"]);
    assert_eq!(
        stdout(&out),
        "p^2*q^2 = q^2 p^2 - 2 i ħ q p - (1/2) ħ^2\n\
         q^2*p^2 = q^2 p^2 + 2 i ħ q p - (1/2) ħ^2\n\
         [p^2,q^2]_M = -4 i ħ q p\n"
    );
}

#[test]
fn parse_errors_exit_2() {
    let out = moyal(&["star", "q +", "p"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error: parse error"));
}

#[test]
fn degree_cap_exits_3() {
    let out = moyal(&["star", "q^40", "q^40"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("degree cap"));
}

#[test]
fn unknown_config_keys_exit_2() {
    let path = std::env::temp_dir().join("moyal_bad_key.json");
    fs::write(&path, r#"{"command": "star", "f": "q", "g": "p", "bogus": 1}"#).unwrap();
    let out = moyal(&["--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown field"));
}

#[test]
fn config_and_subcommand_are_mutually_exclusive() {
    let path = std::env::temp_dir().join("moyal_conflict.json");
    fs::write(&path, r#"{"command": "star", "f": "q", "g": "p"}"#).unwrap();
    let out = moyal(&["--config", path.to_str().unwrap(), "star", "q", "p"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_star_round_trip_matches_direct_invocation() {
    let path = std::env::temp_dir().join("moyal_star.json");
    fs::write(&path, r#"{"command": "star", "f": "p^2", "g": "q^2"}"#).unwrap();
    let via_config = moyal(&["--config", path.to_str().unwrap()]);
    let direct = moyal(&["star", "p^2", "q^2"]);
    assert!(via_config.status.success());
    assert_eq!(via_config.stdout, direct.stdout);
}

#[test]
fn figure_output_is_deterministic_across_runs_and_thread_counts() {
    let a = moyal(&["figures", "1"]);
    let b = moyal(&["figures", "1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "repeated runs differ");

    let single = Command::new(env!("CARGO_BIN_EXE_moyal"))
        .args(["figures", "1"])
        .env("MOYAL_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, single.stdout, "thread count leaked into output");
}

#[test]
fn wigner_point_evaluation_prints_one_number() {
    let out = moyal(&["wigner", "--n", "0", "--at", "0,0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let value: f64 = text.trim().parse().unwrap();
    assert!((value - 1.0 / std::f64::consts::PI).abs() < 1e-15);
}

#[test]
fn zeta_csv_reports_value_and_error() {
    let out = moyal(&["zeta", "--s", "2", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,zeta,error"));
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|c| c.parse().unwrap())
        .collect();
    assert!((row[1] - std::f64::consts::PI.powi(2) / 2.0).abs() < 1e-6);
    assert!(row[2] < 1e-6);
}

#[test]
fn green_routes_agree_through_the_cli() {
    let mut values = Vec::new();
    for route in ["closed", "angular", "modes"] {
        let out = moyal(&["green", "--route", route]);
        assert!(out.status.success(), "route {route}");
        values.push(stdout(&out).trim().parse::<f64>().unwrap());
    }
    for v in &values {
        assert!((v - std::f64::consts::PI).abs() < 1e-4);
    }
}

#[test]
fn sdw_csv_carries_coefficient_and_curve_sections() {
    let out = moyal(&[
        "sdw",
        "--potential",
        "harmonic",
        "--q",
        "0",
        "--sigma-min",
        "0.05",
        "--sigma-max",
        "0.2",
        "--sigma-points",
        "4",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("n,a_n,delta2_a_n"));
    assert!(text.contains("sigma,density"));
    // delta2 a_2 = -alpha v''/6 = -1/12 at the defaults.
    let row = text
        .lines()
        .find(|l| l.starts_with("2,"))
        .expect("n = 2 coefficient row");
    let delta2: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!((delta2 + 1.0 / 12.0).abs() < 1e-15);
}
