use ciforge::pipeline::*;
use ciforge::scheme::{InductiveReport, PerturbReport};
use ciforge::suites;

#[test]
fn identical_solutions_give_a_degenerate_step() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig { preset: Preset::ShearShear, ..Default::default() };
    let s = run(&cfg, dir.path()).unwrap();
    assert!(s.ok(), "{:?}", s.fault);
    assert_eq!(s.steps_completed, 1);
    let l1 = &s.levels[1];
    assert!(l1.degenerate_perturbation);
    assert!(l1.structural_pass, "{:?}", l1.failures);

    let p: PerturbReport = read_json(&step_dir(dir.path(), 1).join("perturb_report.json")).unwrap();
    assert!(p.intervals.is_empty());
    let r: InductiveReport = read_json(&step_dir(dir.path(), 1).join("inductive_report.json")).unwrap();
    assert_eq!(r.property("(vi) R_{q+1} = 0 off the real bad set").unwrap().value, 0.0);

    let checks = suites::scheme(dir.path()).unwrap();
    let red: Vec<_> = checks.iter().filter(|c| !c.pass).map(|c| c.line()).collect();
    assert!(red.is_empty(), "{red:#?}");
    assert!(dir.path().join("dimension_report.json").exists());
}

#[test]
fn scheme_suite_needs_a_completed_step() {
    let dir = tempfile::tempdir().unwrap();
    run(&RunConfig { steps: 0, ..Default::default() }, dir.path()).unwrap();
    assert!(suites::scheme(dir.path()).is_err());
}
