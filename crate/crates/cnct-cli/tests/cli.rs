//! End-to-end tests for the `cnct` binary: exit-code contract, JSON envelope
//! shape, and spot checks of the numeric output against known values.

use std::process::{Command, Output};

fn cnct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cnct"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn exit(out: &Output) -> i32 {
    out.status.code().expect("exit code present")
}

#[test]
fn lerch_evaluates_geometric_special_case() {
    // Phi(0.5, 1, 1) = 2 ln 2.
    let out = cnct(&["lerch", "--z", "0.5", "--s", "1", "--v", "1"]);
    assert_eq!(exit(&out), 0);
    let first = stdout(&out).lines().next().unwrap().to_string();
    let value: f64 = first.parse().unwrap();
    assert!((value - 2.0 * std::f64::consts::LN_2).abs() < 1e-12);
}

#[test]
fn zeta_two_matches_pi_squared_over_six() {
    let out = cnct(&["zeta", "--s", "2"]);
    assert_eq!(exit(&out), 0);
    let value: f64 = stdout(&out).trim().parse().unwrap();
    assert!((value - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
}

#[test]
fn big_kernel_extends_precision() {
    let out = cnct(&["--acc", "30", "zeta", "--s", "2"]);
    assert_eq!(exit(&out), 0);
    assert!(stdout(&out).starts_with("1.6449340668482264364724151666"));
}

#[test]
fn domain_error_exits_one() {
    // z = 1 requires s > 1.
    let out = cnct(&["lerch", "--z", "1", "--s", "0.5", "--v", "1"]);
    assert_eq!(exit(&out), 1);
    assert!(stderr(&out).contains("error"));
}

#[test]
fn order_cap_exits_two() {
    let out = cnct(&["--imax", "2", "accelerate", "--series", "dirichlet", "--params", "s=2"]);
    assert_eq!(exit(&out), 2);
    assert!(stdout(&out).contains("order-cap"));
}

#[test]
fn usage_error_exits_sixty_four() {
    let out = cnct(&["lerch", "--z", "0.5"]); // missing --s and --v
    assert_eq!(exit(&out), 64);

    let out = cnct(&["lerch", "--z", "abc", "--s", "1", "--v", "1"]);
    assert_eq!(exit(&out), 64);
    assert!(stderr(&out).contains("not a decimal number"));

    let out = cnct(&["--precision", "big", "zeta", "--s", "2"]);
    assert_eq!(exit(&out), 64);

    let out = cnct(&["dist", "--family", "zipf", "--s", "3", "--truncate", "9:4"]);
    assert_eq!(exit(&out), 64);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(exit(&cnct(&["--help"])), 0);
    assert_eq!(exit(&cnct(&["--version"])), 0);
}

#[test]
fn unknown_series_lists_catalog() {
    let out = cnct(&["accelerate", "--series", "nope"]);
    assert_eq!(exit(&out), 1);
    let err = stderr(&out);
    for name in ["dirichlet", "alternating-zeta", "bailey-cross", "plate-u"] {
        assert!(err.contains(name), "catalog listing missing `{name}`");
    }
}

#[test]
fn unknown_family_exits_one() {
    let out = cnct(&["dist", "--family", "poisson", "--s", "2"]);
    assert_eq!(exit(&out), 1);
    assert!(stderr(&out).contains("zipf-mandelbrot"));
}

#[test]
fn json_envelope_round_trips() {
    let out = cnct(&["--json", "lerch", "--z", "0.5", "--s", "2", "--v", "1"]);
    assert_eq!(exit(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["command"], "lerch");
    assert_eq!(doc["parameters"]["z"], "0.5");
    let value: f64 = doc["result"]["value"].as_str().unwrap().parse().unwrap();
    assert!((value - 1.1644810529300251).abs() < 1e-12);
    assert_eq!(doc["diagnostics"]["terminated"], "converged");
}

#[test]
fn json_output_is_deterministic() {
    let args = ["--json", "accelerate", "--series", "alternating-zeta", "--params", "s=1"];
    let a = stdout(&cnct(&args));
    let b = stdout(&cnct(&args));
    assert_eq!(a, b);
    let doc: serde_json::Value = serde_json::from_str(&a).unwrap();
    let value: f64 = doc["result"]["value"].as_str().unwrap().parse().unwrap();
    assert!((value - std::f64::consts::LN_2).abs() < 1e-12);
}

#[test]
fn dist_table_matches_closed_form() {
    // Good(z=0.5, s=0) is geometric on {1,2,...}: pmf(n) = 0.5^n.
    let out = cnct(&["dist", "--family", "good", "--z", "0.5", "--s", "0", "--n-max", "4", "--csv"]);
    assert_eq!(exit(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,pmf,cdf,survival,hazard");
    for (n, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[0], (n + 1).to_string());
        let pmf: f64 = fields[1].parse().unwrap();
        assert!((pmf - 0.5f64.powi(n as i32 + 1)).abs() < 1e-12);
    }
}

#[test]
fn truncated_distribution_closes_at_upper_bound() {
    let out = cnct(&["dist", "--family", "zipf", "--s", "2", "--truncate", "1:5", "--n-max", "10"]);
    assert_eq!(exit(&out), 0);
    let text = stdout(&out);
    let last = text.lines().last().unwrap();
    let fields: Vec<&str> = last.split(',').collect();
    assert_eq!(fields[0], "5");
    assert_eq!(fields[2], "1"); // cdf at the truncation bound is exactly one
    assert_eq!(fields[4], "undefined"); // hazard is pmf / survival, and survival is zero
}

#[test]
fn bailey_reports_requested_depth() {
    let out = cnct(&["--json", "bailey", "--digits", "12"]);
    assert_eq!(exit(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(doc["result"]["lhs"].as_str().unwrap().starts_with("2.37254516"));
    assert!(doc["result"]["matching_digits"].as_u64().unwrap() >= 12);
}

#[test]
fn plate_sum_matches_brute_force() {
    // R_1(x) = sum_{m odd} x^m / m = atanh(x).
    let out = cnct(&["plate", "--kind", "r", "--p", "1", "--x", "0.9", "--b", "1"]);
    assert_eq!(exit(&out), 0);
    let value: f64 = stdout(&out).lines().next().unwrap().parse().unwrap();
    let oracle = 0.9f64.atanh();
    assert!((value - oracle).abs() < 1e-12, "value {value} vs oracle {oracle}");
}

#[test]
fn trace_table_is_rendered() {
    let out = cnct(&["accelerate", "--series", "dirichlet", "--params", "s=3", "--trace"]);
    assert_eq!(exit(&out), 0);
    assert!(stdout(&out).contains("order value ratio error_estimate"));
}
