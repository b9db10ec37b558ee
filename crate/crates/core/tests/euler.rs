use ciforge::euler::*;
use ciforge::fields::*;
use ciforge::random::{divfree, rng};

#[test]
fn steady_flows_do_not_move() {
    let grid = Grid::new(32).unwrap();
    for v0 in [shear(grid, 1.0), taylor_green(grid, 1.0)] {
        assert!(steady_residual(&v0) < 1e-12);
        let u = march(&v0.to_spectral(), 0.0, 0.2, 0.01);
        assert!((&u.to_physical() - &v0).sup_norm() < 1e-12);
    }
}

#[test]
fn random_flow_conserves_energy_and_stays_divergence_free() {
    let grid = Grid::new(32).unwrap();
    let mut r = rng(7);
    let v0 = divfree(grid, 3, 1.0, &mut r);
    let e0 = energy(&v0);
    let u = march(&v0.to_spectral(), 0.0, 0.05, 0.005);
    let v = u.to_physical();
    assert!(divergence_norm(&v) < 1e-11);
    assert!(((energy(&v) - e0) / e0).abs() < 1e-8);
    // time reversal
    let back = march(&u, 0.05, 0.0, 0.005).to_physical();
    let err = (&back - &v0).sup_norm();
    assert!(err < 1e-5, "{err}");
}

#[test]
fn cheb_matches_direct_march() {
    let grid = Grid::new(16).unwrap();
    let mut r = rng(2);
    let v0 = divfree(grid, 2, 1.0, &mut r);
    let u0 = v0.to_spectral();
    let sol = ChebSolution::solve(&u0, 0.0, -0.05, 0.05, 10, 0.002).unwrap();
    let direct = march(&u0, 0.0, 0.0137, 0.0005).to_physical();
    let interp = sol.eval(0.0137).to_physical();
    assert!((&direct - &interp).sup_norm() < 1e-8, "{}", (&direct - &interp).sup_norm());
}

#[test]
fn cfl_violation_faults() {
    let grid = Grid::new(16).unwrap();
    let s = EulerState::new(shear(grid, 1.0), 0.0);
    assert!(matches!(step(&s, 1.0), Err(ciforge::Error::Cfl { .. })));
}

#[test]
fn shear_flow_map_is_a_translation() {
    // Φ(x,t) = x − (t − s) v(x) for the shear flow, whose streamlines are straight
    let grid = Grid::new(16).unwrap();
    let v = shear(grid, 0.1);
    let slab = TimeSlab::new(vec![0.0, 0.5, 1.0], vec![v.clone(), v.clone(), v.clone()]).unwrap();
    let fm = flow_map(&slab, 0.2, 0.7).unwrap();
    let expect = v.scale(-0.5);
    // 0.5 * (0.1 + 2π·0.1) < 1 keeps the hypothesis
    assert!((&fm.disp - &expect).sup_norm() < 1e-12);
}

#[test]
fn flow_map_hypothesis_faults() {
    let grid = Grid::new(16).unwrap();
    let v = shear(grid, 5.0);
    let slab = TimeSlab::new(vec![0.0, 1.0], vec![v.clone(), v]).unwrap();
    assert!(matches!(flow_map(&slab, 0.0, 1.0), Err(ciforge::Error::FlowHypothesis(_))));
}

#[test]
fn sparse_trig_interpolates_off_grid() {
    let grid = Grid::new(16).unwrap();
    let v = taylor_green(grid, 1.0);
    let t = SparseTrig::from_spectrum(&v.to_spectral(), 1e-14);
    let x = [0.123, 0.456, 0.789];
    let e = t.eval(x);
    let pi2 = 2.0 * std::f64::consts::PI;
    assert!((e[0] + (pi2 * x[0]).cos() * (pi2 * x[1]).sin()).abs() < 1e-14);
    assert!((e[1] - (pi2 * x[0]).sin() * (pi2 * x[1]).cos()).abs() < 1e-14);
}
