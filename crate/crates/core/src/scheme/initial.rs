//! The rescaled initial Euler–Reynolds pair built from two Euler solutions.

use super::badset::BadSet;
use super::cutoffs::Ramp;
use super::history::{linspace, History};
use crate::calculus::{biot_savart_spec, rcurl_spec};
use crate::euler::{c1_norm, steady_residual, ChebSolution};
use crate::fields::{holder_norm, sym_outer, Grid, Spectrum, VectorField};
use crate::params::{scales, SchemeParams};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// An Euler solution on `[0, T]`.
#[derive(Clone, Debug)]
pub enum Source {
    Steady(Spectrum<3>),
    Evolving(ChebSolution),
}

impl Source {
    pub fn steady(v: &VectorField) -> Self {
        Source::Steady(v.to_spectral())
    }

    pub fn at(&self, t: f64) -> Spectrum<3> {
        match self {
            Source::Steady(s) => s.clone(),
            Source::Evolving(c) => c.eval(t),
        }
    }

    pub fn grid(&self) -> Grid {
        match self {
            Source::Steady(s) => s.grid,
            Source::Evolving(c) => c.values[0].grid,
        }
    }

    fn residual(&self) -> f64 {
        match self {
            Source::Steady(s) => steady_residual(&s.to_physical()),
            Source::Evolving(c) => {
                // interior nodes against the interpolant's time derivative
                let h = 1e-4 * (c.b - c.a);
                let mut worst: f64 = 0.0;
                for t in linspace(c.a + 2.0 * h, c.b - 2.0 * h, 5) {
                    let vm = c.eval(t - h).to_physical();
                    let vp = c.eval(t + h).to_physical();
                    let v = c.eval(t).to_physical();
                    let z = crate::fields::SymTensorField::zeros(v.grid);
                    let p = super::history::pressure_of(&v, None).to_physical();
                    worst = worst.max(crate::euler::er_residual_point(&vm, &v, &vp, h, &z, &p));
                }
                worst
            }
        }
    }
}

/// `v^ε(t) = ε[η v₁(εt) + (1 − η) v₂(εt)]`, `R^ε(t) = ε² R₀(εt)` with
/// `R₀ = η′ ℛ(v₁ − v₂) − η(1 − η)(v₁ − v₂)⊗(v₁ − v₂)`.
///
/// `η` falls from 1 to 0 across the real bad set of `B₀`, i.e. across `[2T/5, 3T/5]`
/// in original time; its endpoints are taken from the bad set itself.
pub struct InitialPair {
    pub v1: Source,
    pub v2: Source,
    /// Horizon of the unscaled pair.
    pub t_orig: f64,
    pub epsilon: f64,
    /// Transition `1 − η` in rescaled time.
    pub ramp: Ramp,
    identical: bool,
}

impl InitialPair {
    pub fn new(v1: Source, v2: Source, t_orig: f64, epsilon: f64) -> Self {
        let identical = match (&v1, &v2) {
            (Source::Steady(a), Source::Steady(b)) => a.data == b.data,
            _ => false,
        };
        let k = BadSet::initial(t_orig / epsilon).real_bad()[0];
        InitialPair { v1, v2, t_orig, epsilon, ramp: Ramp { start: k.lo, end: k.hi }, identical }
    }

    /// `(v^ε(t), R^ε(t))`.
    pub fn scaled(&self, t: f64) -> (Spectrum<3>, Option<Spectrum<6>>) {
        let e = self.epsilon;
        let s = e * t;
        let v2 = self.v2.at(s);
        if self.identical {
            return (v2.scale(e), None);
        }
        let mut d = self.v1.at(s);
        d.axpy(-1.0, &v2);
        let eta = 1.0 - self.ramp.value(t);
        let mut v = v2;
        if eta != 0.0 {
            v.axpy(eta, &d);
        }
        let v = v.scale(e);
        if !self.ramp.active(t) {
            return (v, None);
        }
        // ε² ∂_sη = ε ∂_tη
        let deta = -self.ramp.deriv(t, 1);
        let mut r = rcurl_spec(&biot_savart_spec(&d)).scale(e * deta);
        let dp = d.to_physical();
        r.axpy(-e * e * eta * (1.0 - eta), &sym_outer(&dp, &dp).to_spectral());
        (v, Some(r))
    }
}

impl History for InitialPair {
    fn grid(&self) -> Grid {
        self.v1.grid()
    }

    fn horizon(&self) -> f64 {
        self.t_orig / self.epsilon
    }

    fn velocity_spec(&self, t: f64) -> Result<Spectrum<3>> {
        Ok(self.scaled(t).0)
    }

    fn stress_spec(&self, t: f64) -> Result<Option<Spectrum<6>>> {
        Ok(self.scaled(t).1)
    }

    fn state(&self, t: f64) -> Result<(Spectrum<3>, Option<Spectrum<6>>)> {
        Ok(self.scaled(t))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EpsilonChoice {
    /// `(δ₁λ₀^{−γ−3α}/‖R₀‖₀)^{1/2}`, `Mδ₀^{1/2}λ₀/‖v₀‖₁`, `(1 − δ₀^{1/2})/‖v₀‖₀`.
    pub terms: [f64; 3],
    /// The same with `‖v₀‖₀` and `‖v₀‖₁` swapped in the last two terms.
    pub literal_terms: [f64; 3],
    pub safety: f64,
    /// Largest `ε` with `τ₀ ≥ GEOMETRY_MARGIN · 2θ₁` on the rescaled horizon. Binds
    /// when `R₀` is small or zero, where the other terms allow a short horizon.
    pub geometry_cap: f64,
    pub epsilon: f64,
    pub epsilon_literal: f64,
}

pub const GEOMETRY_MARGIN: f64 = 1.25;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InitialReport {
    pub t_orig: f64,
    pub horizon: f64,
    pub mean_difference: f64,
    pub euler_residual: [f64; 2],
    pub r0_sup: f64,
    pub v0_c0: f64,
    pub v0_c1: f64,
    pub m: f64,
    pub epsilon: EpsilonChoice,
    pub bad_set: BadSet,
    /// Scaled bounds at `q = 0`: `‖R‖₀` vs `δ₁λ₀^{−γ−3α}`, `‖v‖₁` vs `Mδ₀^{1/2}λ₀`,
    /// `‖v‖₀` vs `1 − δ₀^{1/2}`.
    pub scaled_norms: [f64; 3],
    pub scaled_bounds: [f64; 3],
    /// `R^ε ≡ 0`: the remaining steps have nothing to correct.
    pub degenerate: bool,
}

#[derive(Clone, Debug)]
pub struct InitialOptions {
    pub safety: f64,
    pub samples: usize,
    pub residual_tol: f64,
    pub mean_tol: f64,
}

impl Default for InitialOptions {
    fn default() -> Self {
        InitialOptions { safety: 1.0, samples: 129, residual_tol: 1e-8, mean_tol: 1e-12 }
    }
}

/// Build the rescaled pair and `B₀`. `m` is the Mikado constant `M`.
pub fn make_initial_pair(
    v1: Source,
    v2: Source,
    p: &SchemeParams,
    m: f64,
    opts: &InitialOptions,
) -> Result<(InitialPair, BadSet, InitialReport)> {
    let t_orig = p.t;
    let (m1, m2) = (v1.at(0.0).mean(), v2.at(0.0).mean());
    let mean_difference = (0..3).map(|d| (m1[d] - m2[d]).abs()).fold(0.0, f64::max);
    if mean_difference > opts.mean_tol {
        return Err(Error::MeansDiffer(mean_difference));
    }
    let euler_residual = [v1.residual(), v2.residual()];
    let scale = 1.0 + c1_norm(&v1.at(0.0)).max(c1_norm(&v2.at(0.0))).powi(2);
    for r in euler_residual {
        if r > opts.residual_tol * scale {
            return Err(Error::NotEuler(r));
        }
    }
    let pair = InitialPair::new(v1, v2, t_orig, 1.0);
    let (mut r0_sup, mut v0_c0, mut v0_c1) = (0.0_f64, 0.0_f64, 0.0_f64);
    let mut times = linspace(0.0, t_orig, opts.samples);
    times.extend(linspace(pair.ramp.start, pair.ramp.end, opts.samples));
    for &s in &times {
        let (v, r) = pair.scaled(s);
        let vp = v.to_physical();
        v0_c0 = v0_c0.max(vp.sup_norm());
        v0_c1 = v0_c1.max(holder_norm(&vp, 1.0));
        if let Some(r) = r {
            r0_sup = r0_sup.max(r.to_physical().sup_norm());
        }
    }
    let s0 = scales(p, 0)?;
    let s1 = scales(p, 1)?;
    let r_bound = s1.delta * s0.lambda.powf(-p.gamma - 3.0 * p.alpha);
    let c1_bound = m * s0.delta.sqrt() * s0.lambda;
    let c0_bound = 1.0 - s0.delta.sqrt();
    let inv = |num: f64, den: f64| if den > 0.0 { num / den } else { f64::INFINITY };
    let terms = [inv(r_bound, r0_sup).sqrt(), inv(c1_bound, v0_c1), inv(c0_bound, v0_c0)];
    let literal_terms = [terms[0], inv(c1_bound, v0_c0), inv(c0_bound, v0_c1)];
    // τ₀ scales like the horizon T/ε, θ₁ does not
    let theta1 = s1.theta.expect("theta defined for q >= 1");
    let geometry_cap = s0.tau / (GEOMETRY_MARGIN * 2.0 * theta1);
    let pick = |t: &[f64; 3]| (opts.safety * t.iter().cloned().fold(f64::INFINITY, f64::min)).min(geometry_cap);
    let epsilon = pick(&terms);
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::Degenerate(epsilon));
    }
    let choice = EpsilonChoice { terms, literal_terms, safety: opts.safety, geometry_cap, epsilon, epsilon_literal: pick(&literal_terms) };
    let pair = InitialPair::new(pair.v1, pair.v2, t_orig, epsilon);
    let horizon = pair.horizon();
    let bad = BadSet::initial(horizon);
    let report = InitialReport {
        t_orig,
        horizon,
        mean_difference,
        euler_residual,
        r0_sup,
        v0_c0,
        v0_c1,
        m,
        epsilon: choice,
        bad_set: bad.clone(),
        scaled_norms: [epsilon * epsilon * r0_sup, epsilon * v0_c1, epsilon * v0_c0],
        scaled_bounds: [r_bound, c1_bound, c0_bound],
        degenerate: r0_sup == 0.0,
    };
    Ok((pair, bad, report))
}
