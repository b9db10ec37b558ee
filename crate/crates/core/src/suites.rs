//! Property suites behind `ciforge verify`: one [`Check`] per invariant.
//!
//! Every check is seeded and deterministic. The scheme-level checks read the
//! artifacts of a run directory, so they need a finished run.

use crate::calculus::{biot_savart, inverse_divergence, rcurl, solve_pressure};
use crate::euler::{
    c1_norm, energy, flow_map, shear, slab_velocity, step, taylor_green, trace_flow, EulerState, SparseTrig,
};
use crate::fields::{
    curl, derivative, div, div_tensor, fit_slope, holder_norm, holder_seminorm, mollify, Field, Grid, ScalarField,
    SymTensorField, TimeSlab, VectorField,
};
use crate::mikado::{check_identities, overlap, sample_in_ball, MikadoFamily, NEIGHBOURHOOD_RADIUS};
use crate::params::{
    box_dim_bound, gamma_max, infimum_scan, lower_bound_exact, scales, theorem_bound_exact, SchemeParams,
};
use crate::pipeline::{load_bad_sets, read_json, step_dir, RunSummary};
use crate::random::{bandlimited, divfree, rng};
use crate::scheme::{InductiveReport, Interval, PerturbReport};
use crate::singular::{
    box_dimension, cantor_function, holder_increase_bound, EnergyProfile, IntervalFamilySequence,
};
use crate::{Error, Result};
use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub pass: bool,
    pub value: f64,
    pub detail: String,
}

impl Check {
    pub fn new(suite: &str, name: &str, pass: bool, value: f64, detail: impl Into<String>) -> Self {
        Check { suite: suite.into(), name: name.into(), pass, value, detail: detail.into() }
    }

    pub fn below(suite: &str, name: &str, value: f64, tol: f64) -> Self {
        Check::new(suite, name, value <= tol, value, format!("{value:.3e} <= {tol:.1e}"))
    }

    pub fn line(&self) -> String {
        format!("[{}] {:<10} {}: {}", if self.pass { "pass" } else { "FAIL" }, self.suite, self.name, self.detail)
    }
}

pub const SUITES: [&str; 8] = ["params", "operators", "scaling", "euler", "mikado", "singular", "scheme", "cli"];

fn grid(n: usize) -> Grid {
    Grid::new(n).expect("supported grid size")
}

fn rel_err<const C: usize>(a: &Field<C>, b: &Field<C>) -> f64 {
    let mut d = a.clone();
    d.axpy(-1.0, b);
    d.sup_norm() / b.sup_norm().max(f64::MIN_POSITIVE)
}

// ---------------------------------------------------------------------------
// operators: fields and calculus

/// Worst relative errors of `div ℛ = id`, `curl ℬ = id` and the pressure equation
/// over `count` random fields per grid size.
pub fn operator_identities(ns: &[usize], count: usize, seed: u64) -> [f64; 3] {
    let mut r = rng(seed);
    let mut worst = [0.0_f64; 3];
    for &n in ns {
        let g = grid(n);
        let k = (n / 8) as i64;
        for _ in 0..count {
            let f: VectorField = bandlimited::<3>(g, k, 1.0, &mut r).remove_mean();
            let rf = inverse_divergence(&f).expect("mean removed");
            worst[0] = worst[0].max(rel_err(&div_tensor(&rf), &f));

            let v = divfree(g, k, 1.0, &mut r).remove_mean();
            let b = biot_savart(&v).expect("mean removed");
            worst[1] = worst[1].max(rel_err(&curl(&b), &v));

            let rs: SymTensorField = bandlimited::<6>(g, k, 0.5, &mut r);
            let p = solve_pressure(&v, &rs);
            let mut t = crate::fields::sym_outer(&v, &v);
            t.axpy(-1.0, &rs);
            let rhs = div(&div_tensor(&t));
            let lap = div(&crate::fields::grad(&p)).scale(-1.0);
            worst[2] = worst[2].max(rel_err(&lap, &rhs));
        }
    }
    worst
}

/// Log-log slope of the 4th-order finite-difference error against the spacing.
pub fn fd_convergence_slope() -> f64 {
    use std::f64::consts::PI;
    let f = |x: [f64; 3]| [(2.0 * PI * (x[0] + x[1])).sin() + (4.0 * PI * x[0] + 2.0 * PI * x[2]).cos()];
    let mut pts = Vec::new();
    for n in [16usize, 32, 64] {
        let g = grid(n);
        let s = ScalarField::from_fn(g, f);
        let exact = derivative(&s.to_spectral(), [1, 0, 0]).to_physical();
        let h = g.spacing();
        let mut err: f64 = 0.0;
        for i in 0..n {
            let ip = |o: isize| ((i as isize + o).rem_euclid(n as isize)) as usize;
            for j in 0..n {
                for k in 0..n {
                    let at = |o: isize| s.data[g.index(ip(o), j, k)];
                    let fd = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
                    err = err.max((fd - exact.data[g.index(i, j, k)]).abs());
                }
            }
        }
        pts.push((h.ln(), err.ln()));
    }
    fit_slope(&pts)
}

/// Largest constants in the product and interpolation inequalities over random pairs.
pub fn holder_inequality_constants(count: usize, seed: u64) -> [f64; 2] {
    let g = grid(32);
    let mut r = rng(seed);
    let (rr, s) = (0.5, 0.5);
    let mut worst = [0.0_f64; 2];
    for _ in 0..count {
        let f: ScalarField = bandlimited(g, 3, 1.0, &mut r);
        let h: ScalarField = bandlimited(g, 3, 1.0, &mut r);
        let mut fh = f.clone();
        for (a, b) in fh.data.iter_mut().zip(&h.data) {
            *a *= b;
        }
        let rhs = holder_seminorm(&f, rr) * h.sup_norm() + f.sup_norm() * holder_seminorm(&h, rr);
        worst[0] = worst[0].max(holder_seminorm(&fh, rr) / rhs);
        let interp = f.sup_norm().powf(1.0 - s) * holder_seminorm(&f, 1.0).powf(s);
        worst[1] = worst[1].max(holder_seminorm(&f, s) / interp);
    }
    worst
}

/// Ratio `‖ℛcurl f‖_α / ‖f‖_α`, maximised over random fields, per grid size.
pub fn rcurl_ratios(ns: &[usize], count: usize, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    ns.iter()
        .map(|&n| {
            let g = grid(n);
            (0..count)
                .map(|_| {
                    let f: VectorField = bandlimited(g, (n / 8) as i64, 1.0, &mut r);
                    holder_norm(&rcurl(&f), 0.5) / holder_norm(&f, 0.5)
                })
                .fold(0.0, f64::max)
        })
        .collect()
}

pub fn operators(seed: u64) -> Vec<Check> {
    const S: &str = "operators";
    let mut out = Vec::new();
    let [dr, cb, pr] = operator_identities(&[32, 64], 50, seed);
    out.push(Check::below(S, "div R f = f (relative, n = 32, 64)", dr, 1e-10));
    out.push(Check::below(S, "curl B v = v (relative)", cb, 1e-10));
    out.push(Check::below(S, "pressure equation residual (relative)", pr, 1e-10));

    // ℛ is stored in six components, so symmetry cannot fail; still confirm the 3×3 view
    let g = grid(16);
    let f: VectorField = bandlimited::<3>(g, 3, 1.0, &mut rng(seed)).remove_mean();
    let rf = inverse_divergence(&f).expect("mean removed");
    let sym = (0..g.len()).all(|x| {
        let m = crate::linalg::sym_to_m3(&rf.at(x));
        (0..3).all(|a| (0..3).all(|b| m[a][b].to_bits() == m[b][a].to_bits()))
    });
    out.push(Check::new(S, "R f symmetric bit-exactly", sym, 0.0, "six-component storage"));

    let ratios = rcurl_ratios(&[32, 64], 50, seed + 1);
    let spread = ratios[1] / ratios[0];
    out.push(Check::new(
        S,
        "R curl bounded on C^1/2, stable across grids",
        (0.5..=2.0).contains(&spread),
        spread,
        format!("C(32) = {:.3}, C(64) = {:.3}, ratio {spread:.3}", ratios[0], ratios[1]),
    ));

    let slope = fd_convergence_slope();
    out.push(Check::new(
        S,
        "spectral vs 4th-order FD derivative slope",
        (3.8..=4.2).contains(&slope),
        slope,
        format!("slope {slope:.3} (expect 4)"),
    ));

    let [prod, interp] = holder_inequality_constants(50, seed + 2);
    out.push(Check::below(S, "Hölder product inequality constant", prod, 2.0));
    out.push(Check::below(S, "Hölder interpolation constant", interp, 2.0));

    let g = grid(32);
    let mut r = rng(seed + 3);
    let a: ScalarField = bandlimited(g, 4, 1.0, &mut r);
    let b: ScalarField = bandlimited(g, 4, 1.0, &mut r);
    let ell = 0.1;
    let mut comb = a.scale(2.0);
    comb.axpy(-3.0, &b);
    let mut lin = mollify(&a, ell).expect("resolved").scale(2.0);
    lin.axpy(-3.0, &mollify(&b, ell).expect("resolved"));
    out.push(Check::below(S, "mollify is linear", rel_err(&mollify(&comb, ell).expect("resolved"), &lin), 1e-13));
    let sq = a.map(|x| x * x);
    let m = mollify(&sq, ell).expect("resolved");
    let low = m.data.iter().cloned().fold(f64::INFINITY, f64::min);
    out.push(Check::below(S, "mollify preserves positivity (-min / max)", (-low).max(0.0) / sq.sup_norm(), 1e-13));
    out
}

// ---------------------------------------------------------------------------
// scaling: asymptotic estimates measured as slopes

fn smooth_pair(g: Grid) -> (ScalarField, ScalarField) {
    use std::f64::consts::TAU;
    let f = ScalarField::from_fn(g, |x| [(TAU * x[0]).sin() + 0.5 * (TAU * (x[1] + x[2])).cos()]);
    let h = ScalarField::from_fn(g, |x| [(TAU * (x[0] - x[2])).cos() + 0.3 * (2.0 * TAU * x[1]).sin()]);
    (f, h)
}

fn geometric(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| lo * (hi / lo).powf(i as f64 / (count - 1) as f64)).collect()
}

/// Mollification scales from just above two grid spacings to `0.05`, where
/// `|k|ℓ < 1/2` for the modes of [`smooth_pair`] and the quadratic term dominates.
fn ell_range(g: Grid) -> Vec<f64> {
    geometric(2.05 * g.spacing(), 0.05, 6)
}

/// Slope of `ln ‖f_ℓ g_ℓ − (fg)_ℓ‖₀` against `ln ℓ`.
pub fn commutator_slope(n: usize) -> Result<f64> {
    let g = grid(n);
    let (f, h) = smooth_pair(g);
    let pts = ell_range(g)
        .into_iter()
        .map(|ell| Ok((ell.ln(), crate::fields::cet_commutator(&f, &h, ell)?.ln())))
        .collect::<Result<Vec<_>>>()?;
    Ok(fit_slope(&pts))
}

/// Slope of `ln ‖f − f_ℓ‖₀` against `ln ℓ`.
pub fn mollification_slope(n: usize) -> Result<f64> {
    let g = grid(n);
    let (f, _) = smooth_pair(g);
    let pts = ell_range(g)
        .into_iter()
        .map(|ell| {
            let mut d = mollify(&f, ell)?;
            d.axpy(-1.0, &f);
            Ok((ell.ln(), d.sup_norm().ln()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fit_slope(&pts))
}

/// Slope of `ln ‖ℛ(a e^{iλk·Φ})‖_α` against `ln λ` for `λ/2π` from 5 to 50.
pub fn stationary_phase_slope(n: usize, alpha: f64, seed: u64) -> Result<f64> {
    use std::f64::consts::TAU;
    let g = grid(n);
    let mut r = rng(seed);
    let a: ScalarField = bandlimited(g, 1, 0.3, &mut r).map(|x| 1.0 + x);
    let disp: VectorField = divfree(g, 1, 0.002, &mut r);
    let pts = [5.0, 8.0, 13.0, 20.0, 32.0, 50.0]
        .into_iter()
        .map(|m: f64| {
            let lambda = TAU * m;
            let v = crate::calculus::stationary_phase_probe(&a, &disp, [1, 0, 0], lambda, alpha)?;
            Ok((lambda.ln(), v.ln()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fit_slope(&pts))
}

pub const PHASE_ALPHA: f64 = 0.25;

pub fn scaling(seed: u64) -> Result<Vec<Check>> {
    const S: &str = "scaling";
    let band = |name: &str, v: f64, target: f64, tol: f64| {
        Check::new(S, name, (v - target).abs() <= tol, v, format!("slope {v:.3}, expect {target:.3} +- {tol}"))
    };
    Ok(vec![
        band("commutator of mollification and products vs ell", commutator_slope(128)?, 2.0, 0.1),
        band("mollification error vs ell", mollification_slope(128)?, 2.0, 0.1),
        band(
            "inverse divergence of an oscillation vs lambda",
            stationary_phase_slope(128, PHASE_ALPHA, seed)?,
            -(1.0 - PHASE_ALPHA),
            0.15,
        ),
    ])
}

// ---------------------------------------------------------------------------
// euler

/// Sup-norm drift of a steady field after `steps` steps of size `dt`.
pub fn steady_drift(v: &VectorField, steps: usize, dt: f64) -> Result<f64> {
    let mut s = EulerState::new(v.clone(), 0.0);
    for _ in 0..steps {
        s = step(&s, dt)?;
    }
    let mut d = s.v.clone();
    d.axpy(-1.0, v);
    Ok(d.sup_norm())
}

/// Relative energy drift over `steps` steps of a random flow, and whether its
/// spectral mean survives the march bit for bit.
pub fn energy_drift(n: usize, steps: usize, seed: u64) -> (f64, bool) {
    let g = grid(n);
    let v0 = divfree(g, 3, 0.5, &mut rng(seed));
    let dt = 0.25 * crate::euler::cfl_limit(&v0);
    let e0 = energy(&v0);
    // the spectral state carries mode 0 through every stage untouched
    let u0 = v0.to_spectral();
    let u = crate::euler::march(&u0, 0.0, steps as f64 * dt, dt);
    let mean_exact = u.mean().iter().zip(u0.mean().iter()).all(|(a, b)| a.to_bits() == b.to_bits());
    ((energy(&u.to_physical()) - e0).abs() / e0, mean_exact)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlowEstimates {
    /// `‖∇Φ − Id‖₀ / (|t − s| [v]₁)`.
    pub c_first: f64,
    /// `[∇Φ]₁ / (|t − s| [v]₂)`.
    pub c_second: f64,
    /// `max |Φ(X(x)) − x|`.
    pub composition: f64,
}

fn sup_derivatives(f: &VectorField, order: usize) -> f64 {
    holder_seminorm(f, order as f64)
}

/// Flow-map estimates on `count` random, linearly time-interpolated flows.
pub fn flow_estimates(count: usize, seed: u64) -> Result<FlowEstimates> {
    let g = grid(32);
    let mut r = rng(seed);
    let mut out = FlowEstimates { c_first: 0.0, c_second: 0.0, composition: 0.0 };
    for _ in 0..count {
        let a = divfree(g, 2, 0.05, &mut r);
        let b = divfree(g, 2, 0.05, &mut r);
        let (s, t) = (0.0, r.gen_range(0.3..0.8));
        let v1 = sup_derivatives(&a, 1).max(sup_derivatives(&b, 1));
        let v2 = sup_derivatives(&a, 2).max(sup_derivatives(&b, 2));
        let slab = TimeSlab::new(vec![0.0, 1.0], vec![a, b])?;
        let fm = flow_map(&slab, s, t)?;
        let gd = sup_derivatives(&fm.disp, 1);
        let gd2 = sup_derivatives(&fm.disp, 2);
        out.c_first = out.c_first.max(gd / ((t - s) * v1));
        out.c_second = out.c_second.max(gd2 / ((t - s) * v2));

        // forward flux X(s → t), then Φ(t → s) at X(x)
        let fwd = trace_flow(g, t, s, 32, |tau| Ok(SparseTrig::from_spectrum(&slab_velocity(&slab, tau)?, 1e-14)))?;
        let phi = SparseTrig::<3>::from_spectrum(&fm.disp.to_spectral(), 0.0);
        let n3 = g.len();
        for x in 0..n3 {
            let x0 = g.coords(x);
            let y: [f64; 3] = std::array::from_fn(|d| x0[d] + fwd.disp.data[d * n3 + x]);
            let dp = phi.eval(y);
            for d in 0..3 {
                out.composition = out.composition.max((y[d] + dp[d] - x0[d]).abs());
            }
        }
    }
    Ok(out)
}

pub fn euler(seed: u64) -> Result<Vec<Check>> {
    const S: &str = "euler";
    let mut out = Vec::new();
    let g = grid(64);
    let (sh, tg) = (shear(g, 1.0), taylor_green(g, 1.0));
    let d_shear = steady_drift(&sh, 100, 0.5 * crate::euler::cfl_limit(&sh))?;
    let d_tg = steady_drift(&tg, 100, 0.5 * crate::euler::cfl_limit(&tg))?;
    out.push(Check::below(S, "steady shear preserved over 100 steps (n = 64)", d_shear, 1e-6));
    out.push(Check::below(S, "2.5D eigenflow preserved over 100 steps (n = 64)", d_tg, 1e-6));
    let (drift, mean_exact) = energy_drift(64, 100, seed);
    out.push(Check::below(S, "energy drift per 100 steps (n = 64)", drift, 1e-8));
    out.push(Check::new(S, "mean conserved exactly by step", mean_exact, 0.0, "bit-exact"));
    let fe = flow_estimates(10, seed + 1)?;
    out.push(Check::below(S, "flow-map gradient constant, first order", fe.c_first, 2.0));
    out.push(Check::below(S, "flow-map gradient constant, second order", fe.c_second, 4.0));
    out.push(Check::below(S, "composition of back-to-labels with forward flux", fe.composition, 1e-6));
    Ok(out)
}

// ---------------------------------------------------------------------------
// mikado

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MikadoSuite {
    pub samples: usize,
    pub mean_w: f64,
    pub second_moment: f64,
    pub div_w: f64,
    pub div_ww: f64,
    pub a_dot_k: f64,
    pub c_dot_k: f64,
}

pub fn mikado_identities(fam: &MikadoFamily, samples: usize, seed: u64) -> Result<MikadoSuite> {
    let mut r = rng(seed);
    let mut s = MikadoSuite { samples, mean_w: 0.0, second_moment: 0.0, div_w: 0.0, div_ww: 0.0, a_dot_k: 0.0, c_dot_k: 0.0 };
    for _ in 0..samples {
        let rr = sample_in_ball(NEIGHBOURHOOD_RADIUS, &mut r);
        let c = check_identities(fam, &rr)?;
        s.mean_w = s.mean_w.max(c.mean_w);
        s.second_moment = s.second_moment.max(c.second_moment_error);
        s.div_w = s.div_w.max(c.div_w);
        s.div_ww = s.div_ww.max(c.div_ww);
        s.a_dot_k = s.a_dot_k.max(c.a_dot_k);
        s.c_dot_k = s.c_dot_k.max(c.c_dot_k);
    }
    Ok(s)
}

/// `M` at `kmax` and `2 kmax`, and the tail bound reported at `kmax`.
pub fn m_doubling(fam: &MikadoFamily) -> Result<(f64, f64, f64)> {
    // the family keeps every on-plane mode of the reference grid, so 2 kmax needs no rebuild
    let lo = fam.geometric_constants(fam.kmax)?;
    let hi = fam.geometric_constants(2 * fam.kmax)?;
    Ok((lo.m, hi.m, lo.m_tail))
}

/// Decay exponents of `|a_k(R)|` and of its finite-difference `R`-derivative over
/// `kmax ≤ |k| ≤ 2 kmax`, past the peak of `|a_k||k|⁵`.
pub fn r_smoothness(fam: &MikadoFamily, seed: u64) -> Result<(f64, f64)> {
    let mut r = rng(seed);
    let r0 = sample_in_ball(0.5 * NEIGHBOURHOOD_RADIUS, &mut r);
    let dir: [f64; 6] = std::array::from_fn(|_| r.gen_range(-1.0..1.0));
    let h = 1e-5;
    let (k_lo, k_hi) = (fam.kmax, 2 * fam.kmax);
    let mut env = vec![0.0_f64; (k_hi + 1) as usize];
    for m in fam.modes_upto(k_hi) {
        let s = m.norm().floor() as i64;
        if s < k_lo {
            continue;
        }
        let plus: [f64; 6] = std::array::from_fn(|c| r0[c] + h * dir[c]);
        let minus: [f64; 6] = std::array::from_fn(|c| r0[c] - h * dir[c]);
        let (a, b) = (fam.coefficient(m, &plus)?, fam.coefficient(m, &minus)?);
        let d = (0..3).map(|c| ((a[c] - b[c]) / (2.0 * h)).norm_sqr()).sum::<f64>().sqrt();
        let slot = &mut env[s.min(k_hi) as usize];
        *slot = slot.max(d);
    }
    let pts: Vec<(f64, f64)> =
        (k_lo..=k_hi).filter(|&s| env[s as usize] > 0.0).map(|s| ((s as f64 + 0.5).ln(), env[s as usize].ln())).collect();
    Ok((fam.decay_exponent(&r0, k_lo, k_hi)?, -fit_slope(&pts)))
}

pub fn mikado(seed: u64) -> Result<Vec<Check>> {
    const S: &str = "mikado";
    let fam = MikadoFamily::standard()?;
    let s = mikado_identities(&fam, 50, seed)?;
    let mut out = vec![
        Check::below(S, "mean of W", s.mean_w, 1e-12),
        Check::below(S, "mean of W (x) W = R", s.second_moment, 1e-6),
        Check::below(S, "div W", s.div_w, 1e-10),
        Check::below(S, "div (W (x) W)", s.div_ww, 1e-8),
        Check::below(S, "A_k . k", s.a_dot_k, 1e-10),
        Check::below(S, "C_k . k", s.c_dot_k, 1e-10),
    ];
    let (lo, hi, tail) = m_doubling(&fam)?;
    out.push(Check::new(
        S,
        "M stable under kmax doubling",
        (hi - lo).abs() <= tail,
        (hi - lo).abs(),
        format!("M({}) = {lo:.6e}, M({}) = {hi:.6e}, tail {tail:.3e}", fam.kmax, 2 * fam.kmax),
    ));
    let (a, d) = r_smoothness(&fam, seed + 1)?;
    out.push(Check::new(
        S,
        "a_k and its R-derivative decay at least like |k|^-6",
        a >= 6.0 && d >= 6.0,
        a.min(d),
        format!("exponent {a:.2} for a_k, {d:.2} for its R-derivative (|k| in [{}, {}])", fam.kmax, 2 * fam.kmax),
    ));
    let ov = overlap(&fam);
    out.push(Check::new(S, "tube supports disjoint", ov == 0.0, ov, format!("max |psi_i psi_j| = {ov:e}")));
    Ok(out)
}

// ---------------------------------------------------------------------------
// params

fn admissible(r: &mut impl Rng) -> SchemeParams {
    let beta: f64 = r.gen_range(0.05..0.3);
    let b_max = ((1.0 - beta) / (2.0 * beta)).min(1.6);
    let b = 1.02 + r.gen_range(0.05..0.95) * (b_max - 1.02);
    SchemeParams::new(beta, b, r.gen_range(0.05..0.5) * gamma_max(beta, b), 1e-6, 10f64.powf(r.gen_range(6.0..12.0)), 1.0)
}

pub fn params(seed: u64) -> Result<Vec<Check>> {
    const S: &str = "params";
    let mut r = rng(seed);
    let (mut ordered, mut monotone, mut in_unit) = (true, true, true);
    for _ in 0..50 {
        let p = admissible(&mut r);
        let s: Vec<_> = (0..=4).map(|q| scales(&p, q)).collect::<Result<_>>()?;
        for q in 1..=3 {
            ordered &= s[q + 1].ln_theta < s[q].ln_tau && s[q].ln_tau < s[q].ln_theta;
        }
        for q in 0..4 {
            monotone &= s[q + 1].lambda > s[q].lambda && s[q + 1].delta < s[q].delta && s[q + 1].tau < s[q].tau;
        }
        let v = box_dim_bound(p.beta, p.b, p.gamma, 1e-8)?;
        in_unit &= v > 0.0 && v < 1.0;
    }
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let beta = 0.02 + 0.03 * i as f64;
        let s = infimum_scan(beta)?;
        worst = worst.max((s.infimum - (0.5 + beta / (1.0 - beta))).abs());
    }
    let exact = lower_bound_exact(Ratio::new(1, 3)) == Ratio::from_integer(1)
        && theorem_bound_exact(Ratio::new(1, 3)) == Ratio::from_integer(1);
    Ok(vec![
        Check::new(S, "theta_{q+1} < tau_q < theta_q (q <= 3)", ordered, 0.0, "50 admissible samples"),
        Check::new(S, "scales monotone in q", monotone, 0.0, "50 admissible samples"),
        Check::new(S, "box-dimension bound inside (0, 1)", in_unit, 0.0, "50 admissible samples"),
        Check::below(S, "infimum scan vs closed form (10 beta)", worst, 1e-3),
        Check::new(S, "boundary values at beta = 1/3 exact", exact, 0.0, "rational arithmetic"),
    ])
}

// ---------------------------------------------------------------------------
// singular

/// `(lhs, rhs, pass)` of the Hölder harness on the Cantor function, per cover level.
pub fn cantor_harness(levels: usize, digits: u32) -> Result<Vec<(f64, f64, bool)>> {
    let theta = 2f64.ln() / 3f64.ln();
    let npts = 3usize.pow(digits) + 1;
    let times: Vec<f64> = (0..npts).map(|k| k as f64 / (npts - 1) as f64).collect();
    let e = EnergyProfile::from_fn(times, |t| cantor_function(t, digits))?;
    let seq = IntervalFamilySequence::cantor(levels);
    seq.levels
        .iter()
        .map(|cover| holder_increase_bound(&e, cover, theta, 1e-12).map(|h| (h.lhs, h.rhs, h.pass)))
        .collect()
}

/// Staircases whose rise shrinks like `Σ r_i^θ` along the Cantor covers, `θ` above the
/// Cantor dimension; returns `lhs` per level and whether each level passed.
pub fn refinement_harness(levels: usize) -> Result<Vec<(f64, bool)>> {
    let theta = 0.9;
    let npts = 3usize.pow(levels as u32 + 2) + 1;
    let times: Vec<f64> = (0..npts).map(|k| k as f64 / (npts - 1) as f64).collect();
    let seq = IntervalFamilySequence::cantor(levels);
    seq.levels
        .iter()
        .map(|cover| {
            let rise: f64 = cover.iter().map(|j| j.len().powf(theta)).sum();
            let per = rise / cover.len() as f64;
            let e = EnergyProfile::from_fn(times.clone(), |t| {
                1.0 + per * cover.iter().map(|j| ((t - j.lo) / j.len()).clamp(0.0, 1.0)).sum::<f64>()
            })?;
            let h = holder_increase_bound(&e, cover, theta, 1e-12)?;
            Ok((h.lhs, h.pass))
        })
        .collect()
}

pub fn singular(seed: u64) -> Result<Vec<Check>> {
    const S: &str = "singular";
    let cantor = box_dimension(&IntervalFamilySequence::cantor(8))?.dimension;
    let target = 2f64.ln() / 3f64.ln();
    let mut r = rng(seed);
    let (s, c) = (r.gen_range(0.1..10.0), r.gen_range(-5.0..5.0));
    let moved = box_dimension(&IntervalFamilySequence::cantor(8).affine(s, c))?.dimension;
    let harness = cantor_harness(6, 7)?;
    let refine = refinement_harness(5)?;
    let monotone = refine.windows(2).all(|w| w[1].0 <= w[0].0 * (1.0 + 1e-2));
    Ok(vec![
        Check::below(S, "Cantor box dimension at 8 levels", (cantor - target).abs(), 0.02),
        Check::below(S, "box dimension invariant under affine time maps", (moved - cantor).abs(), 1e-9),
        Check::new(
            S,
            "Hölder harness on the Cantor function",
            harness.iter().all(|h| h.2),
            harness.iter().map(|h| h.0 / h.1).fold(0.0, f64::max),
            format!("{} levels, worst lhs/rhs {:.4}", harness.len(), harness.iter().map(|h| h.0 / h.1).fold(0.0, f64::max)),
        ),
        Check::new(
            S,
            "harness lhs -> 0 monotonically along refinements",
            monotone && refine.iter().all(|x| x.1),
            refine.last().map_or(0.0, |x| x.0),
            format!("lhs {:?}", refine.iter().map(|x| format!("{:.3e}", x.0)).collect::<Vec<_>>()),
        ),
    ])
}

// ---------------------------------------------------------------------------
// scheme: reads a run directory

fn load_inductive(dir: &Path, q: usize) -> Result<InductiveReport> {
    read_json(&step_dir(dir, q).join("inductive_report.json"))
}

pub fn scheme(dir: &Path) -> Result<Vec<Check>> {
    const S: &str = "scheme";
    let summary: RunSummary = read_json(&dir.join("summary.json"))?;
    if summary.steps_completed == 0 {
        return Err(Error::Precondition(format!("{} holds no completed step", dir.display())));
    }
    let mut out = Vec::new();
    let sets = load_bad_sets(dir)?;
    for q in 1..=summary.steps_completed {
        let rep = load_inductive(dir, q)?;
        for p in &rep.properties {
            out.push(Check::new(S, &format!("q={q} {}", p.name), p.pass, p.value, p.detail.clone()));
        }
        let pr: PerturbReport = read_json(&step_dir(dir, q).join("perturb_report.json"))?;
        let mut supports: Vec<(f64, f64)> = pr.intervals.iter().map(|i| i.cutoff.support()).collect();
        supports.sort_by(|a, b| a.0.total_cmp(&b.0));
        let disjoint = supports.windows(2).all(|w| w[0].1 < w[1].0);
        out.push(Check::new(S, &format!("q={q} perturbation cutoffs pairwise disjoint"), disjoint, 0.0, format!("{} supports", supports.len())));

        // |B_q| = Σ_J (⌈|Ĵ|/θ⌉ + 2)·5τ exactly, and at most the product bound
        let (prev, next) = (&sets[q - 1], &sets[q]);
        let s1 = scales(&summary.run_params, q)?;
        let theta = s1.theta.expect("q >= 1");
        let count: usize = prev
            .intervals
            .iter()
            .map(|j| ((j.expand(-prev.tau).len() / theta) - 1e-12).ceil().max(1.0) as usize + 2)
            .sum();
        let bound = prev.measure() * 10.0 * s1.tau / theta;
        let exact = count == next.intervals.len();
        out.push(Check::new(
            S,
            &format!("q={q} |B| from the rounded interval count, below the product bound"),
            exact && next.measure() <= bound * (1.0 + 1e-12),
            next.measure() / bound,
            format!("{} intervals (expected {count}), |B| = {:.4e} vs bound {bound:.4e}", next.intervals.len(), next.measure()),
        ));
    }
    Ok(out)
}

/// Intervals as closed pairs, for ad-hoc covers.
pub fn intervals(pairs: &[(f64, f64)]) -> Vec<Interval> {
    pairs.iter().map(|&(a, b)| Interval::new(a, b)).collect()
}

// ---------------------------------------------------------------------------
// cli: determinism and guard messages

/// Byte-compares every `*.json` file below two run directories.
pub fn compare_runs(a: &Path, b: &Path) -> Result<(usize, Vec<String>)> {
    fn walk(root: &Path, rel: &Path, out: &mut Vec<std::path::PathBuf>) -> std::io::Result<()> {
        let mut entries: Vec<_> = std::fs::read_dir(root.join(rel))?.collect::<std::io::Result<_>>()?;
        entries.sort_by_key(|e| e.file_name());
        for e in entries {
            let r = rel.join(e.file_name());
            if e.file_type()?.is_dir() {
                walk(root, &r, out)?;
            } else if r.extension().is_some_and(|x| x == "json") {
                out.push(r);
            }
        }
        Ok(())
    }
    let (mut fa, mut fb) = (Vec::new(), Vec::new());
    walk(a, Path::new(""), &mut fa)?;
    walk(b, Path::new(""), &mut fb)?;
    let mut diffs = Vec::new();
    if fa != fb {
        diffs.push("different file sets".to_string());
    }
    for f in &fa {
        if std::fs::read(a.join(f)).ok() != std::fs::read(b.join(f)).ok() {
            diffs.push(f.display().to_string());
        }
    }
    Ok((fa.len(), diffs))
}

/// Messages of guards that can be provoked cheaply.
pub fn sample_guard_messages() -> Vec<String> {
    let g = grid(32);
    let mut msgs = Vec::new();
    if let Err(e) = mollify(&ScalarField::zeros(g), 0.01) {
        msgs.push(e.to_string());
    }
    let fast = shear(g, 5.0);
    if let Ok(slab) = TimeSlab::new(vec![0.0, 1.0], vec![fast.clone(), fast]) {
        if let Err(e) = flow_map(&slab, 0.0, 1.0) {
            msgs.push(e.to_string());
        }
    }
    if let Err(e) = crate::mikado::gamma(&[3.0, 0.0, 0.0, 1.0, 0.0, 1.0]) {
        msgs.push(e.to_string());
    }
    if let Err(e) = step(&EulerState::new(shear(g, 1.0), 0.0), 1.0) {
        msgs.push(e.to_string());
    }
    msgs
}

/// A guard message names what it guards in words and carries no citation.
pub fn descriptive(msg: &str) -> bool {
    let banned = ["Lemma", "Proposition", "Prop.", "Theorem", "Corollary", "Cor.", "eq.", "Section", "§", "paper"];
    // equation tags look like "(4.3)": digits, a dot, digits, closing parenthesis
    let tagged = msg.match_indices('(').any(|(i, _)| {
        let rest = &msg[i + 1..];
        let end = rest.find(')').unwrap_or(rest.len());
        let body = &rest[..end];
        end < rest.len()
            && body.split_once('.').is_some_and(|(a, b)| {
                !a.is_empty() && !b.is_empty() && a.chars().all(|c| c.is_ascii_digit()) && b.chars().all(|c| c.is_ascii_digit())
            })
    });
    !msg.trim().is_empty() && msg.chars().any(char::is_alphabetic) && !tagged && !banned.iter().any(|b| msg.contains(b))
}

pub fn c1(v: &VectorField) -> f64 {
    c1_norm(&v.to_spectral())
}
