use ciforge::mikado::*;
use ciforge::random::rng;
use proptest::prelude::*;
use std::sync::OnceLock;

fn family() -> &'static MikadoFamily {
    static F: OnceLock<MikadoFamily> = OnceLock::new();
    F.get_or_init(|| MikadoFamily::standard().unwrap())
}

#[test]
fn identities_hold_on_a_few_sampled_stresses() {
    let mut r = rng(7);
    for _ in 0..5 {
        let s = check_identities(family(), &sample_in_ball(NEIGHBOURHOOD_RADIUS, &mut r)).unwrap();
        assert!(s.mean_w < 1e-12, "{s:?}");
        assert!(s.second_moment_error < 1e-6, "{s:?}");
        assert!(s.div_w < 1e-10 && s.div_ww < 1e-8, "{s:?}");
        assert!(s.a_dot_k < 1e-10 && s.c_dot_k < 1e-10, "{s:?}");
    }
}

#[test]
fn tubes_never_overlap() {
    assert_eq!(overlap(family()), 0.0);
}

#[test]
fn identity_stress_is_inside_and_far_stress_faults() {
    assert!(in_neighbourhood(&[1.0, 0.0, 0.0, 1.0, 0.0, 1.0]));
    let far = [3.0, 0.0, 0.0, 1.0, 0.0, 1.0];
    assert!(!in_neighbourhood(&far));
    assert!(gamma(&far).is_err());
}

#[test]
fn coefficients_decay_past_the_sixth_power() {
    let k = family().kmax;
    let d = family().decay_exponent(&[1.0, 0.0, 0.0, 1.0, 0.0, 1.0], k, 2 * k).unwrap();
    assert!(d >= 6.0, "decay exponent {d}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sampled_stresses_stay_in_the_neighbourhood(seed in 0u64..10_000) {
        let r = sample_in_ball(NEIGHBOURHOOD_RADIUS, &mut rng(seed));
        prop_assert!(in_neighbourhood(&r));
        let g = gamma(&r).unwrap();
        prop_assert!(g.iter().all(|x| x.is_finite() && *x > 0.0));
    }
}
