use std::process::{Command, Output};

fn tecm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tecm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn count_matches_hand_value() {
    let o = tecm(&["count", "--curve", "E0", "--p", "7"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "13");
}

#[test]
fn gen_prints_a_parseable_record() {
    let o = tecm(&["gen", "--family", "4x8", "--param", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("curve: 1/1,3600/83521,3600/83521,0/1,0/1"), "{text}");
    assert!(text.contains("split: (-1/p)=1; (161/p)=1"), "{text}");
}

#[test]
fn verify_exit_code_follows_verdict() {
    let pass = tecm(&["verify", "--curve", "E7", "--check", "injection", "--order", "7", "--sample", "50"]);
    assert_eq!(pass.status.code(), Some(0));
    let fail = tecm(&["verify", "--curve", "E7", "--check", "injection", "--order", "14", "--sample", "50"]);
    assert_eq!(fail.status.code(), Some(1));
    assert!(stdout(&fail).contains("verdict=fail"));
}

#[test]
fn verify_off_curve_point_is_an_error() {
    let o = tecm(&["verify", "--curve", "5x5-t1/3", "--check", "nontorsion"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn ecm_splits_91() {
    let o = tecm(&["ecm", "91", "--b1", "13", "--b2", "0", "--curves", "catalog:E0", "--max-curves", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("factor=13"), "{}", stdout(&o));
}

#[test]
fn ecm_rejects_non_integer() {
    let o = tecm(&["ecm", "abc"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("abc"));
}

#[test]
fn unknown_curve_reports_module() {
    let o = tecm(&["count", "--curve", "no-such-curve", "--p", "7"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: families:"));
}

#[test]
fn census_csv_is_deterministic_across_workers() {
    let args = ["census", "--range", "50:300", "--curves", "E7,E12", "--format", "csv"];
    let one = tecm(&[&args[..], &["--workers", "1"]].concat());
    let four = tecm(&[&args[..], &["--workers", "4"]].concat());
    assert!(one.status.success() && four.status.success());
    assert_eq!(stdout(&one), stdout(&four));
    let text = stdout(&one);
    assert!(text.starts_with("curve,set,count,set_size\n"));
    assert_eq!(text.lines().count(), 1 + 2 * 6);
}
