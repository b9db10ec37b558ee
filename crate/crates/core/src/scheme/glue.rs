//! Gluing exact local solutions: `(v_q, R_q)` → `(v̄_q, R̄_q)` and `B_{q+1}`.

use super::badset::{BadSet, Interval};
use super::cutoffs::{derivative_constants, Bump, Ramp};
use super::history::{linspace, residual_at, History};
use super::Mode;
use crate::calculus::{biot_savart_spec, rcurl_spec};
use crate::euler::ChebSolution;
use crate::fields::{holder_norm, mollify_spec, sym_outer, Grid, Spectrum};
use crate::params::{scales, SchemeParams};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct GlueOptions {
    pub mode: Mode,
    /// Chebyshev nodes per local solution.
    pub nodes: usize,
    /// Stress samples per `Ĵ` used to detect `R_q ≡ 0`.
    pub stress_probes: usize,
    /// Residual samples per stress interval.
    pub residual_probes: usize,
}

impl Default for GlueOptions {
    fn default() -> Self {
        GlueOptions { mode: Mode::StructureOnly, nodes: 12, stress_probes: 33, residual_probes: 3 }
    }
}

/// One interval `J` of `B_q` with its local solutions.
#[derive(Clone, Debug)]
pub struct Window {
    pub outer: Interval,
    pub inner: Interval,
    pub times: Vec<f64>,
    /// `n + 2` transitions, one centred in each `I_i`.
    pub ramps: Vec<Ramp>,
    pub stress: Vec<Interval>,
    pub solutions: Vec<ChebSolution>,
    /// `R_q ≡ 0` on `Ĵ`: no local solves, `v̄ = v_q`.
    pub degenerate: bool,
}

impl Window {
    fn span(&self) -> (f64, f64) {
        (self.ramps[0].start, self.ramps[self.ramps.len() - 1].end)
    }

    /// `η^i` for `i = 0..=n` and `η_g = Σ η^i`.
    pub fn cutoff(&self, i: usize, t: f64) -> f64 {
        self.ramps[i].value(t) - self.ramps[i + 1].value(t)
    }

    pub fn cutoff_sum(&self, t: f64) -> f64 {
        self.ramps[0].value(t) - self.ramps[self.ramps.len() - 1].value(t)
    }

    /// As a [`Bump`], for derivative bounds.
    pub fn bump(&self, i: usize) -> Bump {
        Bump { up: self.ramps[i], down: self.ramps[i + 1] }
    }
}

/// `v̄_q = Σ η^i v_i + (1 − η_g) v_q`.
pub struct Glued {
    prev: Arc<dyn History>,
    pub q: usize,
    pub windows: Vec<Window>,
    next: BadSet,
}

enum Where<'a> {
    Outside,
    Plateau(&'a Window, usize),
    Ramp(&'a Window, usize),
}

impl Glued {
    fn locate(&self, t: f64) -> Where<'_> {
        for w in &self.windows {
            let (a, b) = w.span();
            if w.degenerate || t <= a || t >= b {
                continue;
            }
            for (k, r) in w.ramps.iter().enumerate() {
                if r.active(t) {
                    return Where::Ramp(w, k);
                }
            }
            let k = w.ramps.iter().filter(|r| r.end <= t).count();
            return Where::Plateau(w, k - 1);
        }
        Where::Outside
    }

    /// `(old, new)` on both sides of transition `k`.
    fn sides(&self, w: &Window, k: usize, t: f64) -> Result<(Spectrum<3>, Spectrum<3>)> {
        let n1 = w.ramps.len() - 1;
        let old = if k == 0 { self.prev.velocity_spec(t)? } else { w.solutions[k - 1].eval(t) };
        let new = if k == n1 { self.prev.velocity_spec(t)? } else { w.solutions[k].eval(t) };
        Ok((old, new))
    }

    /// Stress intervals of the non-degenerate windows.
    pub fn stress_intervals(&self) -> Vec<Interval> {
        self.windows.iter().filter(|w| !w.degenerate).flat_map(|w| w.stress.iter().copied()).collect()
    }

    /// `B_{q+1}`.
    pub fn next_bad(&self) -> &BadSet {
        &self.next
    }

    pub fn prev(&self) -> &Arc<dyn History> {
        &self.prev
    }
}

impl History for Glued {
    fn grid(&self) -> Grid {
        self.prev.grid()
    }

    fn horizon(&self) -> f64 {
        self.prev.horizon()
    }

    fn velocity_spec(&self, t: f64) -> Result<Spectrum<3>> {
        match self.locate(t) {
            Where::Outside => self.prev.velocity_spec(t),
            Where::Plateau(w, i) => Ok(w.solutions[i].eval(t)),
            Where::Ramp(w, k) => {
                let s = w.ramps[k].value(t);
                let (old, new) = self.sides(w, k, t)?;
                let mut v = old.scale(1.0 - s);
                v.axpy(s, &new);
                Ok(v)
            }
        }
    }

    fn stress_spec(&self, t: f64) -> Result<Option<Spectrum<6>>> {
        match self.locate(t) {
            Where::Outside => self.prev.stress_spec(t),
            Where::Plateau(..) => Ok(None),
            Where::Ramp(w, k) => {
                let r = w.ramps[k];
                let (s, ds) = (r.value(t), r.deriv(t, 1));
                let (old, mut d) = self.sides(w, k, t)?;
                d.axpy(-1.0, &old);
                let mut out = rcurl_spec(&biot_savart_spec(&d)).scale(ds);
                let dp = d.to_physical();
                out.axpy(-s * (1.0 - s), &sym_outer(&dp, &dp).to_spectral());
                Ok(Some(out))
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocalRecord {
    pub t: f64,
    /// Window half-width `θ_{q+1}` against the proxy `0.1/‖v_ℓ‖_{1+α}`.
    pub horizon: f64,
    pub horizon_limit: f64,
    pub within_horizon: bool,
    pub c1_growth: f64,
    /// `‖v_ℓ − v_q‖₀/(δ_q^{1/2}λ_qℓ)`.
    pub mollify_c0_ratio: f64,
    /// `‖v_ℓ‖_{N+1}/(δ_q^{1/2}λ_qℓ^{−N})`, `N = 1, 2`.
    pub mollify_higher_ratio: [f64; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WindowReport {
    pub outer: Interval,
    pub inner: Interval,
    pub times: Vec<f64>,
    pub stress_intervals: Vec<Interval>,
    pub degenerate: bool,
    pub local: Vec<LocalRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GlueReport {
    pub q: usize,
    pub theta: f64,
    pub tau: f64,
    pub tau_prev: f64,
    pub ell: f64,
    pub ell_requested: f64,
    pub ell_clamped: bool,
    pub windows: Vec<WindowReport>,
    pub next_bad: BadSet,
    /// `|B_{q+1}|` against `10(τ_{q+1}/θ_{q+1})|B_q|`.
    pub measure: f64,
    pub measure_bound: f64,
    pub partition_error: f64,
    /// `max_t |∂ₜᴺη^i|·τᴺ`, `N = 1, 2`.
    pub cutoff_constants: [f64; 2],
    /// Stress of the previous level on the outer transitions (must vanish).
    pub prev_stress_on_ends: f64,
    pub residual: f64,
    pub residual_bound: f64,
}

/// Build `(v̄_q, R̄_q)` and `B_{q+1}` from level `q`.
pub fn glue(
    prev: Arc<dyn History>,
    bad: &BadSet,
    p: &SchemeParams,
    opts: &GlueOptions,
) -> Result<(Glued, BadSet, GlueReport)> {
    let q = bad.q;
    let sq = scales(p, q)?;
    let s1 = scales(p, q + 1)?;
    let theta = s1.theta.expect("θ is defined for q + 1 ≥ 1");
    let tau = s1.tau;
    let tau_q = bad.tau;
    if !(5.0 * tau < theta && 2.0 * theta < tau_q) {
        return Err(Error::Guard(format!(
            "time-geometry guard: need 5τ < θ < τ_prev/2, got τ = {tau:.4e}, θ = {theta:.4e}, τ_prev = {tau_q:.4e}"
        )));
    }
    let grid = prev.grid();
    let ell_min = 2.0 * grid.spacing();
    let ell_clamped = sq.ell < ell_min;
    if ell_clamped && opts.mode == Mode::Strict {
        return Err(Error::KernelUnresolved { ell: sq.ell, min: ell_min });
    }
    let ell = sq.ell.max(ell_min);

    let mut windows = Vec::new();
    let mut reports = Vec::new();
    for j in &bad.intervals {
        let inner = j.expand(-tau_q);
        let n = ((inner.len() / theta) - 1e-12).ceil().max(1.0) as usize;
        let times: Vec<f64> = (0..=n).map(|i| inner.lo + i as f64 * theta).collect();
        let mut centres: Vec<f64> = times.iter().map(|t| t - 0.5 * theta).collect();
        centres.push(times[n] + 0.5 * theta);
        let ramps: Vec<Ramp> = centres.iter().map(|&c| Ramp::centred(c, 0.5 * tau)).collect();
        let stress: Vec<Interval> = centres.iter().map(|&c| Interval::new(c - 0.5 * tau, c + 0.5 * tau)).collect();

        let mut degenerate = true;
        for t in linspace(inner.lo, inner.hi, opts.stress_probes) {
            if let Some(r) = prev.stress_spec(t)? {
                if r.data.iter().any(|z| z.re != 0.0 || z.im != 0.0) {
                    degenerate = false;
                    break;
                }
            }
        }
        let mut solutions = Vec::new();
        let mut local = Vec::new();
        if !degenerate {
            for &ti in &times {
                let vq = prev.velocity_spec(ti)?;
                let vl = mollify_spec(&vq, ell)?;
                let vlp = vl.to_physical();
                let mut diff = vlp.clone();
                diff.axpy(-1.0, &vq.to_physical());
                let amp = sq.delta.sqrt() * sq.lambda;
                let n1 = holder_norm(&vlp, 1.0 + p.alpha);
                let horizon_limit = if n1 > 0.0 { 0.1 / n1 } else { f64::INFINITY };
                if opts.mode == Mode::Strict && theta > horizon_limit {
                    return Err(Error::Precondition(format!(
                        "local horizon {theta:.4e} exceeds the existence proxy {horizon_limit:.4e}"
                    )));
                }
                let sol = ChebSolution::solve(&vl, ti, ti - theta, ti + theta, opts.nodes, theta / 64.0)?;
                local.push(LocalRecord {
                    t: ti,
                    horizon: theta,
                    horizon_limit,
                    within_horizon: theta <= horizon_limit,
                    c1_growth: sol.max_c1_growth,
                    mollify_c0_ratio: diff.sup_norm() / (amp * ell),
                    mollify_higher_ratio: [
                        holder_norm(&vlp, 2.0) / (amp / ell),
                        holder_norm(&vlp, 3.0) / (amp / (ell * ell)),
                    ],
                });
                solutions.push(sol);
            }
        }
        reports.push(WindowReport {
            outer: *j,
            inner,
            times: times.clone(),
            stress_intervals: stress.clone(),
            degenerate,
            local,
        });
        windows.push(Window { outer: *j, inner, times, ramps, stress, solutions, degenerate });
    }

    let next = BadSet {
        q: q + 1,
        tau,
        horizon: bad.horizon,
        intervals: windows.iter().flat_map(|w| w.stress.iter().map(|i| i.expand(2.0 * tau))).collect(),
    };
    if let Err(e) = next.check_shape(1e-9) {
        return Err(Error::Guard(format!("bad-set guard: {e}")));
    }
    if !next.nested_in(bad) {
        return Err(Error::Guard("bad-set guard: new intervals leave the previous bad set".into()));
    }

    // partition of unity on Ĵ, sampled densely across every transition
    let mut partition_error: f64 = 0.0;
    let mut cutoff_constants = [0.0_f64; 2];
    for w in &windows {
        for r in &w.ramps {
            for t in linspace(r.start, r.end, 65) {
                let total: f64 = (0..w.times.len()).map(|i| w.cutoff(i, t)).sum::<f64>() + (1.0 - w.cutoff_sum(t));
                partition_error = partition_error.max((total - 1.0).abs());
            }
        }
        for t in linspace(w.inner.lo, w.inner.hi, 257) {
            let total: f64 = (0..w.times.len()).map(|i| w.cutoff(i, t)).sum();
            partition_error = partition_error.max((total - 1.0).abs());
        }
        for i in 0..w.times.len() {
            let c = derivative_constants(&w.bump(i), 256);
            for k in 0..2 {
                cutoff_constants[k] = cutoff_constants[k].max(c[k] * (tau / (0.5 * tau)).powi(k as i32 + 1));
            }
        }
    }
    if partition_error > 1e-12 {
        return Err(Error::Guard(format!("cutoff guard: partition of unity violated by {partition_error:.3e}")));
    }

    let mut prev_stress_on_ends: f64 = 0.0;
    for w in windows.iter().filter(|w| !w.degenerate) {
        for r in [w.ramps[0], w.ramps[w.ramps.len() - 1]] {
            for t in linspace(r.start, r.end, 5) {
                if let Some(s) = prev.stress_spec(t)? {
                    prev_stress_on_ends = prev_stress_on_ends.max(s.to_physical().sup_norm());
                }
            }
        }
    }

    let glued = Glued { prev, q, windows, next: next.clone() };

    // Euler–Reynolds residual inside every stress interval and on the plateaus
    let dt = 1e-3 * tau;
    let mut residual: f64 = 0.0;
    for w in glued.windows.iter().filter(|w| !w.degenerate) {
        for (k, r) in w.ramps.iter().enumerate() {
            for t in linspace(r.start, r.end, opts.residual_probes + 2).into_iter().skip(1).take(opts.residual_probes) {
                residual = residual.max(residual_at(&glued, t, dt)?);
            }
            if k < w.times.len() {
                residual = residual.max(residual_at(&glued, w.times[k], dt)?);
            }
        }
    }

    let measure = next.measure();
    let report = GlueReport {
        q,
        theta,
        tau,
        tau_prev: tau_q,
        ell,
        ell_requested: sq.ell,
        ell_clamped,
        windows: reports,
        next_bad: next.clone(),
        measure,
        measure_bound: 10.0 * tau / theta * bad.measure(),
        partition_error,
        cutoff_constants,
        prev_stress_on_ends,
        residual,
        residual_bound: 1e-3 * s1.delta,
    };
    Ok((glued, next, report))
}
