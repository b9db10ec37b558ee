use ciforge::params::*;
use num_rational::Ratio;
use proptest::prelude::*;
use std::f64::consts::PI;

fn example() -> SchemeParams {
    let (beta, b) = (0.25, 1.1);
    SchemeParams::new(beta, b, 0.9 * gamma_max(beta, b), 1e-4, 1e6, 1.0)
}

#[test]
fn admissible_example_passes_exponent_and_domain_checks() {
    let r = validate(&example(), 3);
    assert!(r.pass_of(CheckKind::Domain));
    assert!(r.pass_of(CheckKind::Exponent), "{:?}", r.failures());
    for q in 0..=3 {
        assert!(r.get(&format!("2 theta_{} < tau_{}", q + 1, q)).unwrap().pass);
    }
}

#[test]
fn ten_pi_floor_is_bisected_to_its_closed_form() {
    // γ ≈ 0.0086 here, so the floor is (10π)^{1/γ} ≈ 10^174.6: a = 10^6 is below it
    let p = example();
    let r = validate(&p, 0);
    assert!(!r.get("10 pi a^-gamma < 1").unwrap().pass);
    let floors = a_floors(&p, 0, 1e300);
    let f = floors.iter().find(|f| f.name == "10 pi a^-gamma < 1").unwrap();
    let exact = (10.0 * PI).powf(1.0 / p.gamma);
    let a0 = f.a0.unwrap();
    assert!(((a0.ln() - exact.ln()) / exact.ln()).abs() < 1e-9);
}

#[test]
fn beta_one_third_fails() {
    for b in [1.01, 1.5, 3.0] {
        let r = validate(&SchemeParams::new(1.0 / 3.0, b, 0.01, 1e-4, 10.0, 1.0), 0);
        assert!(!r.get("beta < 1/3").unwrap().pass);
    }
}

#[test]
fn b_two_is_too_large_for_beta_quarter() {
    let r = validate(&SchemeParams::new(0.25, 2.0, 0.01, 1e-4, 10.0, 1.0), 0);
    let c = r.get("b < (1-beta)/(2 beta)").unwrap();
    assert!(!c.pass);
    assert_eq!(c.rhs, 1.5);
}

#[test]
fn frequency_and_amplitude_by_hand() {
    let p = SchemeParams::new(0.25, 2.0, 0.1, 1e-4, 3.0, 15.0);
    let s1 = scales(&p, 1).unwrap();
    assert_eq!(s1.frequency, Some(9));
    assert_eq!(s1.lambda, 18.0 * PI);
    let s0 = scales(&p, 0).unwrap();
    assert!((s0.delta - (6.0 * PI).powf(-0.5)).abs() < 1e-15);
    assert!((s0.tau - 1.0).abs() < 1e-15);
    assert!(s0.theta.is_none());
}

#[test]
fn theta_tau_ell_formulas() {
    let p = SchemeParams::new(0.2, 1.3, 0.02, 1e-3, 5.0, 1.0);
    let s = |q| scales(&p, q).unwrap();
    let (l0, d0, l1, d1, d2) = (s(0).lambda, s(0).delta, s(1).lambda, s(1).delta, s(2).delta);
    let th1 = 1.0 / (d0.sqrt() * l0.powf(1.0 + 3.0 * p.alpha));
    assert!((s(1).theta.unwrap() / th1 - 1.0).abs() < 1e-12);
    assert!((s(1).tau / (l0.powf(-p.gamma) * th1) - 1.0).abs() < 1e-12);
    let ell1 = d2.sqrt() / (d1.sqrt() * l1.powf(1.0 + p.gamma / 2.0 + 1.5 * p.alpha));
    assert!((s(1).ell / ell1 - 1.0).abs() < 1e-12);
}

#[test]
fn overflow_faults_beyond_extended_range() {
    let p = SchemeParams::new(0.1, 3.0, 0.01, 1e-4, 1e100, 1.0);
    assert!(matches!(scales(&p, 5), Err(ciforge::Error::Overflow(_))));
    assert!(scales(&p, 2).is_ok());
}

#[test]
fn chain_passes_above_bisected_floor() {
    let p = example();
    let floors = a_floors(&p, 0, 1e300);
    let a0 = floors.iter().filter(|f| !f.name.starts_with("10 pi")).map(|f| f.a0.unwrap()).fold(2.0, f64::max);
    let r = check_chain(&p.with_a(a0 * 1.01), 0).unwrap();
    assert!(r.all_pass(), "{:?}", r.failures());
}

#[test]
fn large_alpha_breaks_the_stress_inequality() {
    let base = example();
    let alpha = (base.b - 1.0) * (1.0 - base.beta) / (5.0 * base.b);
    let p = SchemeParams { alpha, a: 1e200, ..base };
    let r = check_chain(&p, 0).unwrap();
    let c = r.records.iter().find(|c| c.name.starts_with("stress at step")).unwrap();
    assert!(!c.pass);
}

#[test]
fn chain_report_lists_each_inequality_once() {
    let p = SchemeParams::new(0.15, 2.0, 0.9, 1e-3, 2.0, 1.0);
    let r = check_chain(&p, 0).unwrap();
    let mut names: Vec<_> = r.records.iter().map(|c| c.name.clone()).collect();
    assert_eq!(names.len(), 6);
    names.sort();
    names.dedup();
    assert_eq!(names.len(), 6);
}

#[test]
fn exact_boundary_values() {
    assert_eq!(lower_bound_exact(Ratio::new(1, 3)), Ratio::from_integer(1));
    assert_eq!(theorem_bound_exact(Ratio::new(1, 4)), Ratio::new(5, 6));
    assert_eq!(theorem_bound_exact(Ratio::new(1, 3)), Ratio::from_integer(1));
    assert!((theorem_bound(0.25) - 5.0 / 6.0).abs() < 1e-15);
}

#[test]
fn dimension_bounds_reject_bad_beta() {
    assert!(dimension_bounds(0.4, 1.1, 0.01, 1e-4).is_err());
    assert!(infimum_scan(0.0).is_err());
}

#[test]
fn infimum_scan_quarter() {
    let s = infimum_scan(0.25).unwrap();
    assert!((s.infimum - 5.0 / 6.0).abs() < 1e-3, "{s:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scales_are_monotone_and_nested(
        beta in 0.05f64..0.3,
        bf in 0.05f64..0.95,
        gf in 0.05f64..0.5,
        la in 6.0f64..12.0,
    ) {
        let b_max = ((1.0 - beta) / (2.0 * beta)).min(1.6);
        let b = 1.02 + bf * (b_max - 1.02);
        prop_assume!(b < b_max);
        let p = SchemeParams::new(beta, b, gf * gamma_max(beta, b), 1e-6, 10f64.powf(la), 1.0);
        let s: Vec<QScales> = (0..=4).map(|q| scales(&p, q).unwrap()).collect();
        for q in 0..4 {
            prop_assert!(s[q + 1].lambda > s[q].lambda);
            prop_assert!(s[q + 1].delta < s[q].delta);
            prop_assert!(s[q + 1].tau < s[q].tau);
        }
        for q in 1..=3 {
            prop_assert!(s[q + 1].ln_theta < s[q].ln_tau);
            prop_assert!(s[q].ln_tau < s[q].ln_theta);
        }
    }

    #[test]
    fn box_bound_in_unit_interval(beta in 0.01f64..0.33, bf in 0.01f64..0.99, gf in 0.01f64..0.99) {
        let b_max = (1.0 - beta) / (2.0 * beta);
        let b = 1.0 + bf * (b_max - 1.0);
        let v = box_dim_bound(beta, b, gf * gamma_max(beta, b), 1e-8).unwrap();
        prop_assert!(v > 0.0 && v < 1.0);
    }
}
