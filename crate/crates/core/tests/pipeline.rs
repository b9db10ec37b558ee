use ciforge::pipeline::*;
use ciforge::scheme::Mode;
use std::path::Path;

fn env(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

#[test]
fn empty_config_is_the_desk_default() {
    let c = RunConfig::from_json("{}", env(&[])).unwrap();
    assert_eq!(c, RunConfig::default());
    assert_eq!((c.n, c.steps, c.preset, c.mode), (32, 1, Preset::ShearZero, Mode::StructureOnly));
    assert!(c.validate().is_ok());
}

#[test]
fn flat_and_nested_params_agree() {
    let flat = RunConfig::from_json(r#"{"beta": 0.2, "steps": 2}"#, env(&[])).unwrap();
    let nested = RunConfig::from_json(r#"{"params": {"beta": 0.2}, "steps": 2}"#, env(&[])).unwrap();
    assert_eq!(flat.params.beta, 0.2);
    assert_eq!(flat.params.b, RunConfig::default().params.b);
    assert_eq!(flat, nested);
}

#[test]
fn environment_overrides_the_file() {
    let c = RunConfig::from_json(
        r#"{"seed": 1, "preset": "shear/zero"}"#,
        env(&[("CIFORGE_SEED", "9"), ("CIFORGE_PRESET", "taylor-green/zero"), ("CIFORGE_BETA", "0.1"), ("HOME", "/x")]),
    )
    .unwrap();
    assert_eq!(c.seed, 9);
    assert_eq!(c.preset, Preset::TaylorGreenZero);
    assert_eq!(c.params.beta, 0.1);
}

#[test]
fn unknown_keys_are_rejected() {
    assert!(RunConfig::from_json(r#"{"grid": 32}"#, env(&[])).is_err());
    assert!(RunConfig::from_json(r#"{"preset": "vortex"}"#, env(&[])).is_err());
}

#[test]
fn out_of_range_plumbing_fails_validation() {
    for text in [r#"{"n": 48}"#, r#"{"steps": 4}"#, r#"{"epsilon_safety": 0}"#, r#"{"beta": 0.4}"#] {
        let c = RunConfig::from_json(text, env(&[])).unwrap();
        assert!(c.validate().is_err(), "{text}");
    }
}

#[test]
fn preset_names_round_trip() {
    for p in Preset::ALL {
        assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        assert_eq!(serde_json::to_string(&p).unwrap(), format!("\"{}\"", p.name()));
    }
}

fn assert_files(dir: &Path, names: &[&str]) {
    for n in names {
        assert!(dir.join(n).exists(), "missing {n}");
    }
}

#[test]
fn zero_step_run_writes_the_initial_level_and_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig { steps: 0, ..Default::default() };
    let s = run(&cfg, dir.path()).unwrap();
    assert!(s.ok());
    assert_eq!((s.steps_completed, s.levels.len()), (0, 1));
    assert!(s.levels[0].structural_pass, "{:?}", s.levels[0].failures);
    assert_files(
        dir.path(),
        &["config.json", "validation.json", "initial_report.json", "summary.json", "step_0/badset.json", "step_0/metrics.csv"],
    );
    assert!(!dir.path().join("dimension_report.json").exists());

    plot_data(dir.path()).unwrap();
    let m = read_metrics(&dir.path().join("plot/metrics.csv")).unwrap();
    assert!(m.len() > 2);
    assert!(m.windows(2).all(|w| w[0].t < w[1].t));
    let bad = std::fs::read_to_string(dir.path().join("plot/badsets.csv")).unwrap();
    assert_eq!(bad.lines().count(), 2);
}

#[test]
fn guard_messages_describe_what_they_guard() {
    let msgs = ciforge::suites::sample_guard_messages();
    assert!(msgs.len() >= 3, "{msgs:?}");
    for m in &msgs {
        assert!(ciforge::suites::descriptive(m), "{m}");
    }
    assert!(!ciforge::suites::descriptive("see (4.3)"));
    assert!(!ciforge::suites::descriptive("Lemma guard"));
    assert!(ciforge::suites::descriptive("grad-Phi guard: |grad Phi| = 2.5 exceeds 2.0 (limit)"));
}
