use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

const RP: &str = "1.8660254037844386";

fn subshear(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subshear"))
        .args(args)
        .env_remove("SUBSHEAR_TOL_UMB")
        .output()
        .expect("binary runs")
}

fn kerr_args<'a>(extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec!["--metric", "kerr", "--param", "m=1.0,a=0.5", "--surface", "const-vr"];
    v.extend_from_slice(extra);
    v
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn horizon_scan_reports_marginally_trapped_spheres() {
    let sparam = format!("v=0,r={RP}");
    let mut args = vec!["scan"];
    args.extend(kerr_args(&["--sparam", &sparam, "--grid", "theta=0.01:3.13:64"]));
    let report = stdout_json(&subshear(&args));
    let records = report["records"].as_array().unwrap();
    assert_eq!(records.len(), 64);
    for r in records {
        assert_eq!(r["direction_exists"], true);
        assert_eq!(r["pseudo_umbilical"], true);
        assert_eq!(r["ortho_umbilical"], true);
        assert_eq!(r["trapped_status"], "marginally_trapped");
    }
    let summary = &report["summary"];
    assert_eq!(summary["counts"]["trapped_status"]["marginally_trapped"], 64);
    assert_eq!(summary["region_trapped_status"], "marginally_trapped");
    assert!(summary["max_residuals"]["casorati_identity"].as_f64().unwrap() < 1e-12);
}

#[test]
fn worker_count_gives_byte_identical_reports() {
    let base = ["scan", "--metric", "euclidean4", "--surface", "round_sphere", "--sparam", "R=2", "--grid", "theta=0.1:3:9,phi=0:6:5"];
    let one = subshear(&[&base[..], &["--workers", "1"]].concat());
    let four = subshear(&[&base[..], &["--workers", "4"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    let report: Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(report["summary"]["counts"]["totally_umbilical"], 45);
}

#[test]
fn csv_report_has_fixed_header() {
    let out = subshear(&["scan", "--metric", "euclidean4", "--surface", "sphere", "--grid", "theta=0.5:1:2", "--report", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "theta,phi,theta1,theta2,sigma1,sigma2,gHH,trB,trJ,dir_exists,tot_umb,pseudo,ortho,subgeo,causal,trapped,max_residual"
    );
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn locus_finds_outer_horizon() {
    let mut args = vec!["locus"];
    args.extend(kerr_args(&["--sparam", "v=0,r=2", "--point", "theta=0.7853981633974483", "--free", "r", "--bracket", "1.5:2.5"]));
    let report = stdout_json(&subshear(&args));
    let roots = report["roots"].as_array().unwrap();
    assert_eq!(roots.len(), 1);
    let r = roots[0]["value"].as_f64().unwrap();
    assert!((r - RP.parse::<f64>().unwrap()).abs() < 1e-6);
}

#[test]
fn locus_without_root_exits_one() {
    let mut args = vec!["locus"];
    args.extend(kerr_args(&["--sparam", "v=0,r=3", "--free", "r", "--bracket", "3:4"]));
    let out = subshear(&args);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no umbilical locus"));
}

#[test]
fn curvature_of_round_sphere() {
    let out = subshear(&["curvature", "--metric", "euclidean4", "--surface", "round_sphere", "--sparam", "R=2", "--point", "theta=1.1,phi=0.4", "--report", "text"]);
    assert!(out.status.success());
    let k: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!((k - 0.25).abs() < 1e-9);
}

#[test]
fn domain_skips_exit_two() {
    let mut args = vec!["scan"];
    args.extend(kerr_args(&["--sparam", "v=0,r=3", "--grid", "theta=0:1:3"]));
    let out = subshear(&args);
    assert_eq!(out.status.code(), Some(2));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["records"].as_array().unwrap().len(), 2);
    assert_eq!(report["summary"]["skipped"].as_array().unwrap().len(), 1);
}

#[test]
fn config_errors_name_the_line() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "metric = \"kerr\"\nsurface = \"const_vr\"\n\n[surface_params]\nr = 2.0\n\n[grid]\ntheta = \"1.0:0.5:4\"").unwrap();
    let out = subshear(&["scan", "--config", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 8"), "{err}");
}

#[test]
fn tolerance_precedence_is_file_env_flag() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "metric = \"euclidean4\"\nsurface = \"round_sphere\"\n\n[tolerances]\numb = 1e-7").unwrap();
    let path = file.path().to_str().unwrap();
    let umb = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_subshear"));
        cmd.args(["classify", "--config", path]).args(extra).env_remove("SUBSHEAR_TOL_UMB");
        if let Some(v) = env {
            cmd.env("SUBSHEAR_TOL_UMB", v);
        }
        let report = stdout_json(&cmd.output().unwrap());
        report["config"]["tolerances"]["umb"].as_f64().unwrap()
    };
    assert_eq!(umb(None, &[]), 1e-7);
    assert_eq!(umb(Some("1e-6"), &[]), 1e-6);
    assert_eq!(umb(Some("1e-6"), &["--tol", "umb=1e-5"]), 1e-5);
}

#[test]
fn negative_orientation_and_physics_convention() {
    let sparam = format!("v=0,r={RP}");
    let mut args = vec!["classify"];
    args.extend(kerr_args(&["--sparam", &sparam, "--point", "theta=1.0", "--orientation", "-", "--mean-curvature-convention", "physics"]));
    let report = stdout_json(&subshear(&args));
    assert_eq!(report["config"]["orientation"], "-");
    assert_eq!(report["config"]["mean_curvature_convention"], "physics");
    assert_eq!(report["records"][0]["trapped_status"], "marginally_trapped");
}

#[test]
fn missing_metric_is_an_error() {
    let out = subshear(&["classify", "--surface", "sphere"]);
    assert_eq!(out.status.code(), Some(1));
}
