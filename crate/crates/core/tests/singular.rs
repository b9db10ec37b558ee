use ciforge::scheme::Interval;
use ciforge::singular::*;
use proptest::prelude::*;

const CANTOR_DIM: f64 = 0.630_929_753_571_457_4; // ln 2 / ln 3

fn grid_times(n: usize) -> Vec<f64> {
    (0..=n).map(|k| k as f64 / n as f64).collect()
}

#[test]
fn cantor_dimension_at_eight_levels() {
    let d = box_dimension(&IntervalFamilySequence::cantor(8)).unwrap();
    assert!((d.dimension - CANTOR_DIM).abs() < 0.02, "{}", d.dimension);
    assert_eq!(d.counts.last().unwrap().count, 256);
}

#[test]
fn stationary_sequence_has_dimension_one() {
    let j = vec![Interval::new(0.0, 0.5)];
    let d = box_dimension(&IntervalFamilySequence::new(vec![j.clone(), j])).unwrap();
    assert_eq!(d.dimension, 1.0);
    assert_eq!(d.fitted_levels, vec![0]);
}

#[test]
fn non_nested_families_are_rejected() {
    let seq = IntervalFamilySequence::new(vec![vec![Interval::new(0.0, 0.3)], vec![Interval::new(0.5, 0.6)]]);
    assert!(seq.check_nested().is_err());
    assert!(box_dimension(&seq).is_err());
}

#[test]
fn cantor_function_values() {
    assert_eq!(cantor_function(0.0, 10), 0.0);
    assert_eq!(cantor_function(1.0, 10), 1.0);
    assert_eq!(cantor_function(0.5, 10), 0.5);
    assert!((cantor_function(0.25, 20) - 1.0 / 3.0).abs() < 1e-6);
}

#[test]
fn matched_cantor_profile_passes_every_level() {
    let e = EnergyProfile::from_fn(grid_times(3usize.pow(7)), |t| cantor_function(t, 7)).unwrap();
    let seq = IntervalFamilySequence::cantor(6);
    for cover in &seq.levels {
        let h = holder_increase_bound(&e, cover, CANTOR_DIM, 1e-12).unwrap();
        assert!(h.pass, "lhs {} rhs {}", h.lhs, h.rhs);
    }
}

#[test]
fn variation_off_the_cover_faults() {
    // linear ramp varies everywhere, including the gaps of the cover
    let e = EnergyProfile::from_fn(grid_times(729), |t| t).unwrap();
    let cover = IntervalFamilySequence::cantor(3).levels.pop().unwrap();
    assert!(holder_increase_bound(&e, &cover, 0.5, 1e-12).is_err());
}

#[test]
fn energy_profile_rejects_bad_input() {
    assert!(EnergyProfile::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
    assert!(EnergyProfile::new(vec![0.0, 1.0], vec![1.0, -1.0]).is_err());
    assert!(EnergyProfile::new(vec![0.0, 1.0], vec![1.0]).is_err());
}

#[test]
fn regularity_fit_recovers_a_power_law() {
    let target = regularity_target(0.2);
    let e = EnergyProfile::from_fn(grid_times(4096), |t| 1.0 + (t - 0.3).abs().powf(target)).unwrap();
    let fit = energy_regularity_fit(&e, 0.2).unwrap();
    let x = fit.exponent.unwrap();
    assert!((x - target).abs() < 0.1, "{x} vs {target}");
}

#[test]
fn constant_energy_has_no_fitted_exponent() {
    let e = EnergyProfile::from_fn(grid_times(256), |_| 2.0).unwrap();
    assert!(energy_regularity_fit(&e, 0.2).unwrap().exponent.is_none());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn box_dimension_is_affine_invariant(s in 0.01f64..100.0, c in -10.0f64..10.0) {
        let base = IntervalFamilySequence::cantor(6);
        let d0 = box_dimension(&base).unwrap().dimension;
        let d1 = box_dimension(&base.affine(s, c)).unwrap().dimension;
        prop_assert!((d0 - d1).abs() < 1e-9);
    }

    #[test]
    fn holder_seminorm_of_a_line_is_its_slope(k in -5.0f64..5.0) {
        let e = EnergyProfile::from_fn(grid_times(50), |t| 10.0 + k * t).unwrap();
        prop_assert!((holder_seminorm(&e, 1.0) - k.abs()).abs() < 1e-9 * (1.0 + k.abs()));
    }

    #[test]
    fn seminorm_is_monotone_in_theta_on_the_unit_interval(seed in 0u64..1000) {
        let e = EnergyProfile::from_fn(grid_times(40), |t| 1.0 + ((seed as f64 + 1.0) * t).sin().abs()).unwrap();
        prop_assert!(holder_seminorm(&e, 0.3) <= holder_seminorm(&e, 0.8) + 1e-12);
    }
}
