use std::path::Path;
use std::process::{Command, Output};

fn ciforge(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ciforge"));
    c.args(args);
    for (k, _) in std::env::vars().filter(|(k, _)| k.starts_with("CIFORGE_")) {
        c.env_remove(k);
    }
    for (k, v) in envs {
        c.env(k, v);
    }
    c.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("config.json");
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn default_parameters_validate() {
    let o = ciforge(&["validate-params"], &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("records"));
}

#[test]
fn beta_at_the_onsager_threshold_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"beta": 0.4}"#);
    let o = ciforge(&["run", "--config", &cfg, "--out", dir.path().join("run").to_str().unwrap()], &[]);
    assert!(!o.status.success());
    assert!(stdout(&o).contains("beta < 1/3"), "validation report printed");
    assert!(!dir.path().join("run/summary.json").exists());

    let o = ciforge(&["validate-params"], &[("CIFORGE_BETA", "0.4")]);
    assert!(!o.status.success());
}

#[test]
fn unknown_suite_and_bad_config_fail() {
    assert!(!ciforge(&["verify", "nonsense"], &[]).status.success());
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"grid": 32}"#);
    assert!(!ciforge(&["validate-params", "--config", &cfg], &[]).status.success());
}

#[test]
fn params_and_singular_suites_are_green() {
    for suite in ["params", "singular"] {
        let o = ciforge(&["verify", suite], &[]);
        let out = stdout(&o);
        assert!(o.status.success(), "{out}");
        assert!(out.lines().filter(|l| l.starts_with("[pass]")).count() >= 4, "{out}");
        assert!(!out.contains("[FAIL]"));
    }
}

#[test]
fn dims_prints_the_bounds() {
    let o = ciforge(&["dims"], &[]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("energy regularity target"));
}

#[test]
fn zero_step_run_then_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = ciforge(&["run", "--out", out.to_str().unwrap()], &[("CIFORGE_STEPS", "0")]);
    assert!(o.status.success(), "{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    assert!(ciforge(&["plot-data", out.to_str().unwrap()], &[]).status.success());
    let text = std::fs::read_to_string(out.join("plot/metrics.csv")).unwrap();
    let mut lines = text.lines();
    let t_col = lines.next().unwrap().split(',').position(|h| h == "t").unwrap();
    let ts: Vec<f64> = lines.map(|l| l.split(',').nth(t_col).unwrap().parse().unwrap()).collect();
    assert!(ts.len() > 2 && ts.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn identical_presets_run_degenerate_and_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let cfg = write_config(dir.path(), r#"{"preset": "shear/shear", "steps": 1, "n": 32}"#);
    let o = ciforge(&["run", "--config", &cfg, "--out", out.to_str().unwrap(), "--seed", "3"], &[]);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    assert!(text.contains("w = 0"), "{text}");
    std::fs::remove_file(out.join("dimension_report.json")).unwrap();
    assert!(ciforge(&["analyze", out.to_str().unwrap()], &[]).status.success());
    assert!(out.join("dimension_report.json").exists());
    let o = ciforge(&["verify", "scheme", "--run-dir", out.to_str().unwrap()], &[]);
    assert!(o.status.success(), "{}", stdout(&o));
}
