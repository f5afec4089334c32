use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn confreg(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_confreg"))
        .current_dir(dir)
        .env_remove("CONFREG_SEED")
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_str().unwrap().parse().unwrap()
}

fn report_path(out: &Output) -> String {
    let err = String::from_utf8_lossy(&out.stderr);
    err.lines()
        .find_map(|l| l.strip_prefix("report: "))
        .expect("report line")
        .to_string()
}

#[test]
fn reproduce_succeeds_with_defaults() {
    let dir = TempDir::new().unwrap();
    let out = confreg(dir.path(), &["reproduce", "--n", "20000"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["result"]["status"], "verified");
    let written = std::fs::read(dir.path().join(report_path(&out))).unwrap();
    assert_eq!(written, out.stdout);
}

#[test]
fn regime_failure_exits_2() {
    let dir = TempDir::new().unwrap();
    let out = confreg(dir.path(), &["reproduce", "--sigma0", "1", "--sigma1", "1", "--n", "1000"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["result"]["status"], "outside_regime");
}

#[test]
fn usage_errors_exit_64() {
    let dir = TempDir::new().unwrap();
    for args in [
        &["reproduce", "--delta", "0.3"][..],
        &["eval", "--n", "0"],
        &["eval", "--model", "cubic"],
        &["eval", "--estimators", "bayes", "--prior1", "1.5"],
        &["eval", "--sigma0", "-1"],
        &["sweep", "--axis", "delta", "--values", ""],
        &["sweep", "--axis", "delta"],
        &["frobnicate"],
    ] {
        let out = confreg(dir.path(), args);
        assert_eq!(out.status.code(), Some(64), "{args:?}");
    }
    assert_eq!(confreg(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn reports_are_byte_identical_across_runs_and_workers() {
    let dir = TempDir::new().unwrap();
    let base = ["eval", "--n", "30000", "--seed", "11", "--estimators", "fiducial,improved,degenerate"];
    let a = confreg(dir.path(), &base);
    let b = confreg(dir.path(), &base);
    let mut w1 = base.to_vec();
    w1.extend(["--workers", "1"]);
    let mut w4 = base.to_vec();
    w4.extend(["--workers", "4"]);
    let c = confreg(dir.path(), &w1);
    let d = confreg(dir.path(), &w4);
    for o in [&a, &b, &c, &d] {
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(c.stdout, d.stdout);
    assert_eq!(a.stdout, c.stdout);
    assert_eq!(report_path(&c), report_path(&d));
}

#[test]
fn different_seed_changes_report_and_name() {
    let dir = TempDir::new().unwrap();
    let a = confreg(dir.path(), &["eval", "--n", "5000", "--seed", "1"]);
    let b = confreg(dir.path(), &["eval", "--n", "5000", "--seed", "2"]);
    assert_ne!(a.stdout, b.stdout);
    assert_ne!(report_path(&a), report_path(&b));
    assert!(report_path(&b).contains("seed2"));
}

#[test]
fn eval_grid_has_estimator_by_theta_shape() {
    let dir = TempDir::new().unwrap();
    let out = confreg(dir.path(), &["eval", "--n", "2000", "--estimators", "fiducial,improved", "--thetas", "0,1"]);
    let v = json(&out);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 2);
    for r in results {
        assert_eq!(r["coverage"].as_array().unwrap().len(), 2);
        assert_eq!(r["size"].as_array().unwrap().len(), 2);
    }
    assert_eq!(v["dominance"].as_array().unwrap().len(), 2);

    let out = confreg(
        dir.path(),
        &["eval", "--n", "2000", "--estimators", "fiducial,improved", "--format", "csv"],
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 4);
}

#[test]
fn single_point_sweep_matches_eval_analytics() {
    let dir = TempDir::new().unwrap();
    let sweep = confreg(dir.path(), &["sweep", "--axis", "delta", "--values", "0.05", "--format", "json"]);
    assert_eq!(sweep.status.code(), Some(0));
    let sv = json(&sweep);
    let rows = sv["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    let row = &rows[0];

    let eval = confreg(dir.path(), &["eval", "--n", "1000", "--delta", "0.05"]);
    let ev = json(&eval);
    for r in ev["results"].as_array().unwrap() {
        let name = r["name"].as_str().unwrap();
        for (j, s) in r["size"].as_array().unwrap().iter().enumerate() {
            let analytic = num(&s["analytic_expected_size"]);
            let swept = num(&row[format!("{name}_size")][j]);
            assert!((analytic - swept).abs() <= 1e-12, "{name} θ={j}: {analytic} vs {swept}");
        }
    }
    assert!((num(&row["mu0"]) - 0.013_057_993_818_3).abs() < 1e-12);
}

#[test]
fn sweep_csv_has_one_row_per_value() {
    let dir = TempDir::new().unwrap();
    let out = confreg(dir.path(), &["sweep", "--axis", "sigma0", "--values", "1,5,10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("sigma0,sigma1,delta,mu0"));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("exp.json");
    std::fs::write(
        &cfg,
        r#"{
            "model": {"kind": "two_point", "sigma0": "5", "sigma1": "0.2"},
            "estimators": [{"kind": "fiducial"}],
            "delta": "0.1",
            "n": 3000,
            "seed": 42
        }"#,
    )
    .unwrap();
    let p = cfg.to_str().unwrap();
    let from_file = json(&confreg(dir.path(), &["eval", "--config", p]));
    assert_eq!(from_file["config"]["seed"], 42);
    assert_eq!(from_file["config"]["n"], 3000);
    assert_eq!(num(&from_file["config"]["model"]["sigma0"]), 5.0);
    assert_eq!(num(&from_file["config"]["band"]["delta"]), 0.1);

    let overridden = json(&confreg(dir.path(), &["eval", "--config", p, "--seed", "7", "--sigma0", "8"]));
    assert_eq!(overridden["config"]["seed"], 7);
    assert_eq!(num(&overridden["config"]["model"]["sigma0"]), 8.0);
    assert_eq!(num(&overridden["config"]["model"]["sigma1"]), 0.2);

    std::fs::write(&cfg, r#"{"n": 10, "bogus": 1}"#).unwrap();
    assert_eq!(confreg(dir.path(), &["eval", "--config", p]).status.code(), Some(64));
    std::fs::write(&cfg, r#"{"delta": 0.1}"#).unwrap();
    assert_eq!(confreg(dir.path(), &["eval", "--config", p]).status.code(), Some(64));
}

#[test]
fn seed_falls_back_to_environment() {
    let dir = TempDir::new().unwrap();
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_confreg"));
        cmd.current_dir(dir.path()).env_remove("CONFREG_SEED");
        if let Some(s) = env {
            cmd.env("CONFREG_SEED", s);
        }
        let mut args = vec!["eval", "--n", "1000"];
        args.extend_from_slice(extra);
        json(&cmd.args(args).output().unwrap())["config"]["seed"].as_u64().unwrap()
    };
    assert_eq!(run(None, &[]), 1);
    assert_eq!(run(Some("99"), &[]), 99);
    assert_eq!(run(Some("99"), &["--seed", "5"]), 5);
}

#[test]
fn echoed_config_reproduces_report() {
    let dir = TempDir::new().unwrap();
    let first = confreg(dir.path(), &["eval", "--n", "4000", "--seed", "13", "--delta", "0.1", "--sigma0", "6"]);
    let v = json(&first);
    let cfg = &v["config"];
    // translate the echoed resolved config back into the file schema
    let file = serde_json::json!({
        "model": cfg["model"],
        "estimators": cfg["estimators"],
        "delta": cfg["band"]["delta"],
        "thetas": cfg["thetas"].as_array().unwrap().iter()
            .map(|t| t["label"].to_string()).collect::<Vec<_>>(),
        "n": cfg["n"],
        "seed": cfg["seed"],
        "format": cfg["format"],
    });
    let path = dir.path().join("echo.json");
    std::fs::write(&path, serde_json::to_string_pretty(&file).unwrap()).unwrap();
    let second = confreg(dir.path(), &["eval", "--config", path.to_str().unwrap()]);
    assert_eq!(second.status.code(), Some(0), "{}", String::from_utf8_lossy(&second.stderr));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn location_model_text_output() {
    let dir = TempDir::new().unwrap();
    let out = confreg(
        dir.path(),
        &["eval", "--model", "location", "--sigma", "2", "--thetas", "-1,3", "--n", "2000", "--format", "text"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.contains("fiducial") && text.contains("flat_prior"));
    assert!(report_path(&out).ends_with(".txt"));
}
