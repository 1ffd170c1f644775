use std::process::Command;

fn lab(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_carlitz-lab")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(s: &str) -> serde_json::Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn zeta_at_negative_one() {
    let (code, out) = lab(&["--q", "2", "zeta", "--n", "-1"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["data"]["polynomial"], "1+z");
}

#[test]
fn zeta_at_zero_q3() {
    let (code, out) = lab(&["--q", "3", "zeta", "--n", "0"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["data"]["polynomial"], "1");
}

#[test]
fn zeta_at_one_digits() {
    let (code, out) = lab(&["--q", "2", "zeta", "--n", "1", "--eval-z1", "--prec", "20"]);
    assert_eq!(code, 0);
    let digits = json(&out)["data"]["z1"]["digits"].as_str().unwrap().to_string();
    assert!(digits.starts_with("1+u^2+") && digits.ends_with("O(u^20)"), "{digits}");
}

#[test]
fn logalg_reports() {
    let (code, out) = lab(&["--q", "2", "logalg", "--payload", "1", "--max-z", "12"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["data"]["m0"], 1);
    assert_eq!(v["data"]["exp_value"], "1");
    let (code, out) = lab(&["--q", "3", "--ext", "T", "logalg", "--payload", "L"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["data"]["integral"], true);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(lab(&["--q", "3", "logalg", "--payload", ""]).0, 2);
    assert_eq!(lab(&["--q", "3", "det", "--primes", "T+"]).0, 2);
    assert_eq!(lab(&["--q", "6", "zeta"]).0, 2);
    assert_eq!(lab(&["zeta"]).0, 2);
    assert_eq!(lab(&["--q", "3", "frobnicate"]).0, 2);
}

#[test]
fn det_report_labels_and_csv() {
    let (code, out) = lab(&["--q", "3", "--ext", "T", "det", "--primes", "T+1,T^2+1"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["data"]["label"], "EXPLORATORY");
    assert_eq!(v["data"]["factors"][0]["lhs"], v["data"]["factors"][0]["rhs"]);
    let (code, out) = lab(&["--q", "3", "--ext", "T", "--emit", "csv", "det", "--primes", "T+1"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("P,order,lhs,rhs,holds\n"));
}

#[test]
fn reports_do_not_depend_on_threads() {
    let base = ["--q", "3", "--ext", "T", "classformula", "--max-deg", "4"];
    let one = lab(&[&["--threads", "1"], &base[..]].concat());
    let many = lab(&[&["--threads", "8"], &base[..]].concat());
    assert_eq!(one, many);
    assert_eq!(one.0, 0);
}

#[test]
fn rank_two_table() {
    let (code, out) = lab(&["--q", "2", "classformula", "--module", "T,1", "--max-deg", "3"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["checks"][0]["verdict"], "pass");
}
