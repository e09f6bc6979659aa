//! End-to-end runs of every subcommand against frozen outputs.

use std::process::{Command, Output};

const THETA: &str = "(3-1*sqrt(5))/2";

fn sturm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sturm"))
        .args(args)
        .env_remove("STURM_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn gen_doubled_characteristic() {
    let out = sturm(&["gen", "--spec", &format!("D c({THETA})"), "--n", "10"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0011000011\n");
}

#[test]
fn gen_extremal_words() {
    let out = sturm(&["gen", "--spec", &format!("C011({THETA})"), "--n", "13"]);
    assert_eq!(stdout(&out), "0110011000011\n");
    let out = sturm(&["gen", "--spec", &format!("100 D c({THETA})"), "--n", "7"]);
    assert_eq!(stdout(&out), "1000011\n");
    let out = sturm(&["gen", "--spec", &format!("T^2 D c({THETA})"), "--n", "4"]);
    assert_eq!(stdout(&out), "1100\n");
}

#[test]
fn eval_upper_extremal() {
    let out = sturm(&[
        "eval",
        "--ratio",
        "-1/2",
        "--spec",
        &format!("011 D c({THETA})"),
        "--bits",
        "40",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("value: 0.13294232"), "{text}");
    assert!(text.contains("value.lo = "), "{text}");
    assert!(text.contains("value.hi = "), "{text}");
}

#[test]
fn classify_words() {
    let out = sturm(&["classify", "--word", "010", "--class", "d"]);
    assert_eq!(stdout(&out), "inconsistent (witness: 010)\n");
    let out = sturm(&["classify", "--word", "0100101001", "--class", "sturmian"]);
    assert_eq!(stdout(&out), "consistent up to length 10\n");
    let out = sturm(&["classify", "--word", "0011", "--class", "sturmian"]);
    assert_eq!(stdout(&out), "inconsistent (witness: )\n");
}

#[test]
fn constants_for_base_two() {
    let out = sturm(&["constants", "--base", "2", "--bits", "48"]);
    let text = stdout(&out);
    assert!(text.contains("P: 0.35018386"), "{text}");
    assert!(text.contains("A: 0.41245403"), "{text}");
    assert!(text.contains("A': 0.32490806"), "{text}");
    assert!(text.contains("B: 0.78818951"), "{text}");
}

#[test]
fn endpoints_report_exact_gap() {
    let out = sturm(&[
        "endpoints",
        "--spec",
        &format!("D c({THETA})"),
        "--base",
        "2",
        "--bits",
        "64",
    ]);
    let text = stdout(&out);
    assert!(text.contains("lower: -0.4920576791"), "{text}");
    assert!(text.contains("upper: 0.1329423208"), "{text}");
    assert!(text.contains("gap = 5/8 (exact)"), "{text}");
}

#[test]
fn orbit_csv_shape() {
    let out = sturm(&[
        "orbit",
        "--spec",
        &format!("D c({THETA})"),
        "--n",
        "2",
        "--bits",
        "64",
        "--format",
        "csv",
    ]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,frac_lo,frac_hi,frac_dec,wrap,wrap_ambiguous");
    let first = lines.next().unwrap();
    assert!(first.starts_with("0,"), "{first}");
    assert!(first.contains("0.936461432"), "{first}");
    assert!(first.ends_with(",-1,false"), "{first}");
}

#[test]
fn orbit_digit_extraction() {
    let out = sturm(&[
        "orbit",
        "--spec",
        &format!("D c({THETA})"),
        "--n",
        "3",
        "--digits",
        "8",
        "--eta",
        "-1/2",
    ]);
    let text = stdout(&out);
    assert!(text.contains("digits: 00110000"), "{text}");
}

#[test]
fn verify_negative_suite_passes() {
    let out = sturm(&[
        "verify",
        "--suite",
        "negative",
        "--params",
        &format!("b=2,g=0,theta={THETA},w=Dc"),
        "--n",
        "300",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("containment"));
}

#[test]
fn verify_jsonl_is_machine_readable() {
    let out = sturm(&[
        "verify",
        "--suite",
        "monotone",
        "--params",
        "r=2/5,pairs=200,len=32",
        "--seed",
        "5",
        "--format",
        "jsonl",
    ]);
    assert_eq!(out.status.code(), Some(0));
    for line in stdout(&out).lines() {
        let v: serde_json::Value = serde_json::from_str(line).expect("valid json");
        assert_eq!(v["status"], "pass", "{line}");
        assert_eq!(v["suite"], "monotone");
    }
}

#[test]
fn oracle_subcommand() {
    let out = sturm(&["oracle", "--length", "6", "--ratio", "1/2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("balance-agree"));
}

#[test]
fn parse_errors_exit_two() {
    let out = sturm(&["gen", "--spec", "011 q(1/2)", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("parse error at byte"), "{err}");
    let out = sturm(&["verify", "--suite", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    // clap usage errors share the code
    let out = sturm(&["gen", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_sets_defaults() {
    let dir = std::env::temp_dir().join(format!("sturm-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("config");
    std::fs::write(&path, "format=jsonl\nbits=48\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_sturm"))
        .args([
            "verify",
            "--suite",
            "monotone",
            "--params",
            "r=2/5,pairs=50,len=16",
        ])
        .env("STURM_CONFIG", &path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().next().unwrap().starts_with('{'), "{text}");

    std::fs::write(&path, "bits=4\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_sturm"))
        .args(["constants"])
        .env("STURM_CONFIG", &path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let _ = std::fs::remove_dir_all(&dir);
}
