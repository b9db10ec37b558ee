//! End-to-end acceptance: nine criteria, one printed line each. Every criterion
//! is evaluated even when an earlier one fails; the test fails at the end if any
//! line is red.

use ciforge::mikado::MikadoFamily;
use ciforge::params::{infimum_scan, lower_bound_exact, theorem_bound_exact};
use ciforge::pipeline::{read_json, run, step_dir, RunConfig, RunSummary};
use ciforge::scheme::InductiveReport;
use ciforge::singular::{box_dimension, IntervalFamilySequence};
use ciforge::suites::{self, Check};
use num_rational::Ratio;
use std::path::Path;
use std::time::{Duration, Instant};

struct Outcome {
    pass: bool,
    detail: String,
}

fn timed(budget: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let t = Instant::now();
    let mut o = f();
    let dt = t.elapsed();
    o.pass &= dt < budget;
    o.detail = format!("{} [{:.1}s of {}s]", o.detail, dt.as_secs_f64(), budget.as_secs());
    o
}

fn from_checks(checks: &[Check]) -> Outcome {
    let red: Vec<_> = checks.iter().filter(|c| !c.pass).map(|c| format!("{}: {}", c.name, c.detail)).collect();
    Outcome {
        pass: red.is_empty(),
        detail: if red.is_empty() { format!("{} checks green", checks.len()) } else { red.join("; ") },
    }
}

fn fault(e: impl std::fmt::Display) -> Outcome {
    Outcome { pass: false, detail: format!("fault: {e}") }
}

fn property_checks(dir: &Path, names: &[&str]) -> Outcome {
    let rep: InductiveReport = match read_json(&step_dir(dir, 1).join("inductive_report.json")) {
        Ok(r) => r,
        Err(e) => return fault(e),
    };
    let checks: Vec<Check> = names
        .iter()
        .map(|n| match rep.property(n) {
            Some(p) => Check::new("scheme", n, p.pass, p.value, p.detail.clone()),
            None => Check::new("scheme", n, false, f64::NAN, "missing"),
        })
        .collect();
    from_checks(&checks)
}

fn c1_operators() -> Outcome {
    let [a, b, c] = suites::operator_identities(&[32, 64], 50, 11);
    let worst = a.max(b).max(c);
    Outcome {
        pass: worst <= 1e-10,
        detail: format!("div R {a:.2e}, curl B {b:.2e}, pressure {c:.2e} on 100 fields"),
    }
}

fn c2_mikado() -> Outcome {
    let run = || -> ciforge::Result<Vec<Check>> { suites::mikado(12) };
    match run() {
        Ok(checks) => {
            let relevant: Vec<_> = checks.into_iter().filter(|c| !c.name.contains("R-derivative")).collect();
            from_checks(&relevant)
        }
        Err(e) => fault(e),
    }
}

fn c3_euler() -> Outcome {
    match suites::euler(13) {
        Ok(checks) => {
            let relevant: Vec<_> = checks.into_iter().filter(|c| !c.name.contains("second order")).collect();
            from_checks(&relevant)
        }
        Err(e) => fault(e),
    }
}

fn c6_scaling() -> Outcome {
    match suites::scaling(16) {
        Ok(c) => from_checks(&c),
        Err(e) => fault(e),
    }
}

fn c7_dimension() -> Outcome {
    let cantor = box_dimension(&IntervalFamilySequence::cantor(8)).map(|d| d.dimension);
    let Ok(cantor) = cantor else { return fault(cantor.unwrap_err()) };
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let b = 0.01 + 0.031 * i as f64;
        match infimum_scan(b) {
            Ok(s) => worst = worst.max((s.infimum - (0.5 + 0.5 * 2.0 * b / (1.0 - b))).abs()),
            Err(e) => return fault(e),
        }
    }
    let third = Ratio::new(1, 3);
    let exact = lower_bound_exact(third) == Ratio::from_integer(1) && theorem_bound_exact(third) == Ratio::from_integer(1);
    Outcome {
        pass: (cantor - 2f64.ln() / 3f64.ln()).abs() <= 0.02 && worst <= 1e-3 && exact,
        detail: format!("Cantor {cantor:.4}, infimum scan error {worst:.2e}, boundary values exact: {exact}"),
    }
}

fn c8_harness() -> Outcome {
    let positive = suites::cantor_harness(6, 7);
    let Ok(levels) = positive else { return fault(positive.unwrap_err()) };
    // linear energy varies in the gaps of the cover, so the harness must refuse it
    let times: Vec<f64> = (0..=729).map(|k| k as f64 / 729.0).collect();
    let ramp = ciforge::singular::EnergyProfile::from_fn(times, |t| t).expect("valid profile");
    let cover = IntervalFamilySequence::cantor(3).levels.pop().expect("three levels");
    let negative = ciforge::singular::holder_increase_bound(&ramp, &cover, 0.5, 1e-12);
    Outcome {
        pass: levels.iter().all(|l| l.2) && negative.is_err(),
        detail: format!(
            "{}/{} levels pass, off-cover variation {}",
            levels.iter().filter(|l| l.2).count(),
            levels.len(),
            match negative {
                Err(e) => format!("faults ({e})"),
                Ok(_) => "accepted".into(),
            }
        ),
    }
}

#[test]
fn acceptance() {
    let _ = MikadoFamily::standard(); // warm the allocator and caches outside the timed sections
    let root = tempfile::tempdir().expect("temp dir");
    let (a, b) = (root.path().join("a"), root.path().join("b"));
    let cfg = RunConfig::default();

    let t = Instant::now();
    let first: Result<RunSummary, _> = run(&cfg, &a);
    let run_time = t.elapsed();
    let run_note = match &first {
        Ok(s) => format!("desk run {:.1}s, fault {:?}", run_time.as_secs_f64(), s.fault),
        Err(e) => format!("desk run fault: {e}"),
    };

    let mut rows: Vec<(&str, Outcome)> = Vec::new();
    rows.push(("1 operator identities", timed(Duration::from_secs(60), c1_operators)));
    rows.push(("2 Mikado suite", timed(Duration::from_secs(120), c2_mikado)));
    rows.push(("3 Euler solver", timed(Duration::from_secs(300), c3_euler)));

    let step = |names: &[&str], budget: u64| {
        let mut o = if first.is_ok() { property_checks(&a, names) } else { fault(&run_note) };
        o.pass &= run_time < Duration::from_secs(budget);
        o.detail = format!("{} [{run_note}; budget {budget}s]", o.detail);
        o
    };
    rows.push((
        "4 gluing step",
        step(
            &[
                "(v) v_{q+1} = v_q' on G_q'",
                "glue: supp R_bar inside the stress intervals",
                "glue: partition of unity",
                "(iv) |B_{q+1}| <= 10 (tau/theta) |B_q|",
                "glue: Euler-Reynolds residual / delta_{q+1}",
            ],
            600,
        ),
    ));
    rows.push((
        "5 perturbation step",
        step(
            &[
                "perturb: div w",
                "perturb: supp w inside the real bad set",
                "perturb: ||w_o||_0 / ((M/32) delta^(1/2)) where |grad Phi| <= 2",
                "perturb: mode-0 cancellation / delta_{q+1}",
                "perturb: D_t phase",
            ],
            900,
        ),
    ));
    rows.push(("6 scaling-law fits", timed(Duration::from_secs(300), c6_scaling)));
    rows.push(("7 dimension machinery", timed(Duration::from_secs(60), c7_dimension)));
    rows.push(("8 Hölder harness", timed(Duration::from_secs(60), c8_harness)));

    let second = run(&cfg, &b);
    let det = match (&first, &second) {
        (Ok(_), Ok(_)) => match suites::compare_runs(&a, &b) {
            Ok((files, diffs)) => Outcome {
                pass: files > 0 && diffs.is_empty(),
                detail: format!("{files} JSON reports compared, differing: {diffs:?}"),
            },
            Err(e) => fault(e),
        },
        (Err(e), _) | (_, Err(e)) => fault(e),
    };
    rows.push(("9 determinism", det));

    println!();
    for (name, o) in &rows {
        println!("[{}] {name}: {}", if o.pass { "pass" } else { "FAIL" }, o.detail);
    }
    let red: Vec<_> = rows.iter().filter(|r| !r.1.pass).map(|r| r.0).collect();
    assert!(red.is_empty(), "red criteria: {red:?}");
}
