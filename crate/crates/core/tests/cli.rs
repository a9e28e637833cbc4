use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arithdyn"))
        .args(args)
        .env_remove("ARITHDYN_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn json_err(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(1), "{args:?}");
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

#[test]
fn tate_report() {
    let v = json_ok(&["tate", "--curve", "[0,-1,1,0,0]", "--p", "11"]);
    assert_eq!(v["kind"], "multiplicative");
    assert_eq!(v["f"], 1);
    assert_eq!(v["kodaira"], "I1");
    assert_eq!(v["ap"], 1);
}

#[test]
fn lseries_coefficients() {
    let v = json_ok(&["lseries", "--curve", "[0,0,1,-1,0]", "--nmax", "10"]);
    assert_eq!(v["coeffs"][1], -2);
    assert_eq!(v["level"], 37);
}

#[test]
fn usage_errors_exit_2() {
    let out = run(&[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(run(&["tate", "--curve", "[0,0,1,-1,0]"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn domain_errors_are_named() {
    assert_eq!(json_err(&["tate", "--curve", "[0,0,0,0,0]", "--p", "5"])["error"], "SingularCurve");
    assert_eq!(json_err(&["tate", "--curve", "[0,0,1,-1,0]", "--p", "4"])["error"], "NotPrime");
    assert_eq!(json_err(&["tate", "--curve", "[0,0,1]", "--p", "5"])["error"], "Parse");
    assert_eq!(
        json_err(&["curve-from-series", "--series", "x^3*(1 + 1*x)"])["error"],
        "InsufficientOrder"
    );
    assert_eq!(json_err(&["qparam", "--j", "1728", "--p", "5"])["error"], "BadReductionRequired");
    let e = json_err(&["factorize", "--e1", "[0,-1,1,0,0]", "--e2", "[0,0,1,-1,0]"]);
    assert_eq!(e["error"], "NoCommonBadPrime");
    assert!(e["message"].as_str().unwrap().len() > 5);
}

#[test]
fn series_round_trip_through_cli() {
    let s = json_ok(&["series-from-curve", "--curve", "[1,-1,1,-3,5]", "--order", "8"]);
    let lit = s["series"].as_str().unwrap();
    let c = json_ok(&["curve-from-series", "--series", lit]);
    assert_eq!(c["curve"], "[1,-1,1,-3,5]");
}

#[test]
fn qparam_coefficients() {
    let v = json_ok(&["qparam", "--terms", "3"]);
    assert_eq!(v["coefficients"], serde_json::json!([1, 744, 750420]));
    let v = json_ok(&["qparam", "--j", "-4096/11", "--p", "11", "--terms", "5"]);
    assert_eq!(v["valuation"], 1);
}

#[test]
fn orbit_is_attracted() {
    let v = json_ok(&["orbit", "--series", "x^3*(1 + 2*x)", "--p", "5", "--steps", "3"]);
    assert_eq!(v["attracted_to_zero"], true);
    assert_eq!(v["orbit"]["valuations"], serde_json::json!([1, 3, 9, 27]));
}

#[test]
fn formation_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("coeffs.json");
    std::fs::write(&path, "[1, 3, 1, 4, 1, 5, 9, 2, 6]").unwrap();
    let p = path.to_str().unwrap();
    let v = json_ok(&["formation", "--coeffs", p, "--nstar", "6", "--s", "3.0", "--pnt-x", "100000"]);
    assert_eq!(v["p_star"], 7);
    assert_eq!(v["recovery_sum"], v["truncated_l"]);
    assert!(v["axiomA_max_err"].as_f64().unwrap() <= 1.0);
    assert_eq!(v["pnt_ratios"].as_array().unwrap().len(), 6);
    assert_eq!(json_err(&["formation", "--coeffs", p, "--nstar", "40"])["error"], "InvalidNStar");
}

#[test]
fn surface_scan_and_geodesic() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("d.svg");
    let args = [
        "surface-scan",
        "--e1",
        "[0,-1,1,0,0]",
        "--e2",
        "[0,-1,1,-11,0]",
        "--grid",
        "8",
        "--nmax",
        "20",
        "--plot",
        plot.to_str().unwrap(),
    ];
    let v = json_ok(&args);
    assert_eq!(v["family"]["prime"], 11);
    assert_eq!(v["fibers"].as_array().unwrap().len(), 9);
    assert_eq!(v["path"]["steps"][0], 0);
    assert!(std::fs::read_to_string(&plot).unwrap().starts_with("<svg"));

    let gap = json_ok(&["surface-scan", "--e1", "[0,0,0,0,1]", "--e2", "[0,0,0,0,-1]", "--grid", "2", "--p", "5"]);
    assert_eq!(gap["fibers"][1]["singular"], true);
    assert_eq!(gap["fibers"][1]["status"], "gap");
    assert_eq!(gap["path_error"]["error"], "NoAdmissiblePath");
    let g = json_err(&["geodesic", "--e1", "[0,0,0,0,1]", "--e2", "[0,0,0,0,-1]", "--grid", "2", "--p", "5"]);
    assert_eq!(g["error"], "NoAdmissiblePath");
}

#[test]
fn tfilter_check() {
    let v = json_ok(&["tfilter-check", "--r", "1/4", "--r-star", "1/2", "--count", "3"]);
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["sequence"]["holes"][0]["radius"], "3/8");
    assert_eq!(json_err(&["tfilter-check", "--r", "1/2", "--r-star", "1/4"])["error"], "InvalidRadii");
}

#[test]
fn render_writes_svg_into_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_arithdyn"))
        .args(["render", "--series", "x^3*(1 + 1*x)", "--p", "3"])
        .env("ARITHDYN_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let svg = std::fs::read_to_string(dir.path().join("orbits.svg")).unwrap();
    assert_eq!(svg.matches("<g id=\"layer-").count(), 2);
}

#[test]
fn config_file_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.toml");
    std::fs::write(&good, "prime = 5\nn_max = 12\n").unwrap();
    let v = json_ok(&["--config", good.to_str().unwrap(), "lseries", "--curve", "[0,0,1,-1,0]"]);
    assert_eq!(v["n_max"], 12);
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "prime = 5\ncolour = 1\n").unwrap();
    let e = json_err(&["--config", bad.to_str().unwrap(), "lseries", "--curve", "[0,0,1,-1,0]"]);
    assert_eq!(e["error"], "Parse");
}

#[test]
fn match_field_ranks_truth_first() {
    use arithdyn::field::{save_field_csv, synthetic_field, SyntheticKind};
    use arithdyn::planar::{portrait, PortraitConfig};
    use arithdyn::series::TruncatedSeries;

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("street.csv");
    let truth = TruncatedSeries::from_i64(&[2, 0, 1]);
    let img = portrait(&truth, &PortraitConfig::new(3)).unwrap();
    save_field_csv(&synthetic_field(&img, SyntheticKind::VortexStreet, 401), &path).unwrap();
    let v = json_ok(&["match-field", "--field", path.to_str().unwrap(), "--p", "3"]);
    // index of [2, 0, 1] in the default candidate grid
    assert_eq!(v[0]["candidate_id"], 2 + 9);
    assert_eq!(v.as_array().unwrap().len(), 27);
    assert_eq!(json_err(&["match-field", "--field", "/nonexistent.csv"])["error"], "Io");
}

#[test]
fn output_is_deterministic() {
    let args = ["surface-scan", "--e1", "[0,-1,1,0,0]", "--e2", "[0,-1,1,-11,0]", "--grid", "6", "--nmax", "15"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(!Path::new("orbits.svg").exists());
}
