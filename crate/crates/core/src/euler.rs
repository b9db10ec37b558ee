//! Pseudo-spectral incompressible Euler on the unit torus: RK4, 2/3 dealiasing,
//! Leray projection at every stage. Also characteristic tracing (flow maps),
//! transport along characteristics and the Euler–Reynolds residual.

use crate::calculus::{leray_spec, solve_pressure};
use crate::error::{Error, Result};
use crate::fields::{
    div_spec, div_tensor, grad, grad_vector_spec, holder_norm, ik, sym_outer, Field, Grid, ScalarField, Spectrum,
    SymTensorField, TimeSlab, VectorField, SYM,
};
use crate::spectral::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const CFL: f64 = 0.5;
/// Blow-up guard: `‖v‖₁` may not exceed this multiple of its initial value.
pub const BLOWUP_FACTOR: f64 = 1e3;

#[derive(Clone, Debug)]
pub struct EulerState {
    pub v: VectorField,
    pub t: f64,
    /// Diagnostic pressure, `−Δp = div div(v⊗v)`.
    pub p: ScalarField,
}

impl EulerState {
    pub fn new(v: VectorField, t: f64) -> Self {
        let p = solve_pressure(&v, &SymTensorField::zeros(v.grid)).with_time(t);
        EulerState { v: v.with_time(t), t, p }
    }
}

/// Right-hand side `−P D div(u⊗u)` in spectral form.
pub fn rhs(u: &Spectrum<3>) -> Spectrum<3> {
    let grid = u.grid;
    let v = u.to_physical();
    let t = sym_outer(&v, &v).to_spectral();
    let p = grid.plan();
    let len = p.spec_len();
    let mut out = Spectrum::<3>::zeros(grid);
    p.for_each_mode(|idx, i, j, k| {
        if !p.keep_dealiased(i, j, k) {
            return;
        }
        let kk = p.kappa(i, j, k);
        for a in 0..3 {
            let mut acc = C64::new(0.0, 0.0);
            for b in 0..3 {
                acc += ik(kk[b], t.data[SYM[a][b] * len + idx]);
            }
            out.data[a * len + idx] = -acc;
        }
    });
    leray_spec(&out)
}

pub fn rk4(u: &Spectrum<3>, dt: f64) -> Spectrum<3> {
    let k1 = rhs(u);
    let mut tmp = u.clone();
    tmp.axpy(0.5 * dt, &k1);
    let k2 = rhs(&tmp);
    tmp = u.clone();
    tmp.axpy(0.5 * dt, &k2);
    let k3 = rhs(&tmp);
    tmp = u.clone();
    tmp.axpy(dt, &k3);
    let k4 = rhs(&tmp);
    let mut out = u.clone();
    out.axpy(dt / 6.0, &k1);
    out.axpy(dt / 3.0, &k2);
    out.axpy(dt / 3.0, &k3);
    out.axpy(dt / 6.0, &k4);
    out
}

pub fn cfl_limit(v: &VectorField) -> f64 {
    let s = v.sup_norm();
    if s == 0.0 {
        f64::INFINITY
    } else {
        CFL * v.grid.spacing() / s
    }
}

/// `‖v‖₁ = ‖v‖₀ + max ‖∂_j v_i‖₀` from a spectrum.
pub fn c1_norm(u: &Spectrum<3>) -> f64 {
    let v = u.to_physical();
    let g = grad_vector_spec(u).to_physical();
    v.sup_norm() + g.sup_norm()
}

/// One RK4 step of the Leray-projected, dealiased Euler equations.
pub fn step(state: &EulerState, dt: f64) -> Result<EulerState> {
    let limit = cfl_limit(&state.v);
    if dt.abs() > limit {
        return Err(Error::Cfl { dt, limit });
    }
    let u = rk4(&state.v.to_spectral(), dt);
    Ok(EulerState::new(u.to_physical(), state.t + dt))
}

/// March a spectral state from `t0` to `t1` in equal substeps no longer than `dt_max`.
pub fn march(u0: &Spectrum<3>, t0: f64, t1: f64, dt_max: f64) -> Spectrum<3> {
    let span = t1 - t0;
    if span == 0.0 {
        return u0.clone();
    }
    let steps = (span.abs() / dt_max).ceil().max(1.0) as usize;
    let dt = span / steps as f64;
    let mut u = u0.clone();
    for _ in 0..steps {
        u = rk4(&u, dt);
    }
    u
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocalDiagnostics {
    pub horizon: f64,
    pub horizon_limit: f64,
    pub within_horizon: bool,
    pub dt: f64,
    pub steps: usize,
    pub cfl_history: Vec<f64>,
    /// `max_t ‖v(t)‖_{N+α}/‖v0‖_{N+α}` for `N = 1, 2`.
    pub growth: [f64; 2],
}

/// Uniform slab on `[t0 − horizon, t0 + horizon]` from data `v0` at `t0`.
///
/// `enforce_horizon` turns the desk proxy `horizon ≤ 0.1/‖v0‖_{1+α}` into a fault.
pub fn solve_local(
    v0: &VectorField,
    t0: f64,
    horizon: f64,
    alpha: f64,
    slices_per_side: usize,
    enforce_horizon: bool,
) -> Result<(TimeSlab<EulerState>, LocalDiagnostics)> {
    let n1 = holder_norm(v0, 1.0 + alpha);
    let horizon_limit = if n1 > 0.0 { 0.1 / n1 } else { f64::INFINITY };
    let within = horizon <= horizon_limit;
    if enforce_horizon && !within {
        return Err(Error::Precondition(format!(
            "local horizon {horizon:.4e} exceeds the existence proxy {horizon_limit:.4e}"
        )));
    }
    let m = slices_per_side.max(1);
    let mut dt = horizon / m as f64;
    let limit = cfl_limit(v0);
    let mut sub = 1usize;
    while dt / sub as f64 > limit {
        sub += 1;
    }
    dt /= sub as f64;
    let base = [holder_norm(v0, 1.0 + alpha), holder_norm(v0, 2.0 + alpha)];
    let c1_0 = c1_norm(&v0.to_spectral());
    let mut cfl_history = Vec::new();
    let mut forward = Vec::new();
    let mut backward = Vec::new();
    for (dir, store) in [(1.0, &mut forward), (-1.0, &mut backward)] {
        let mut u = v0.to_spectral();
        for _ in 0..m {
            for _ in 0..sub {
                let v = u.to_physical();
                cfl_history.push(dt * v.sup_norm() / v.grid.spacing());
                u = rk4(&u, dir * dt);
            }
            let c1 = c1_norm(&u);
            if c1_0 > 0.0 && c1 > BLOWUP_FACTOR * c1_0 {
                return Err(Error::BlowUp { initial: c1_0, current: c1 });
            }
            store.push(u.clone());
        }
    }
    let mut times = Vec::with_capacity(2 * m + 1);
    let mut slices = Vec::with_capacity(2 * m + 1);
    let step = dt * sub as f64;
    for (j, u) in backward.iter().enumerate().rev() {
        times.push(t0 - step * (j + 1) as f64);
        slices.push(u.to_physical());
    }
    times.push(t0);
    slices.push(v0.clone());
    for (j, u) in forward.iter().enumerate() {
        times.push(t0 + step * (j + 1) as f64);
        slices.push(u.to_physical());
    }
    let mut growth: [f64; 2] = [1.0, 1.0];
    for v in &slices {
        for (g, (s, b)) in growth.iter_mut().zip([(1.0 + alpha, base[0]), (2.0 + alpha, base[1])]) {
            if b > 0.0 {
                *g = g.max(holder_norm(v, s) / b);
            }
        }
    }
    let states = times.iter().zip(slices).map(|(&t, v)| EulerState::new(v, t)).collect();
    let diag = LocalDiagnostics {
        horizon,
        horizon_limit,
        within_horizon: within,
        dt,
        steps: 2 * m * sub,
        cfl_history,
        growth,
    };
    Ok((TimeSlab::new(times, states)?, diag))
}

// ---------------------------------------------------------------------------
// Chebyshev-in-time local solutions

/// Spectral states at Chebyshev–Lobatto nodes on `[a, b]`, evaluated by the
/// barycentric formula.
#[derive(Clone, Debug)]
pub struct ChebSolution {
    pub a: f64,
    pub b: f64,
    pub t0: f64,
    pub nodes: Vec<f64>,
    weights: Vec<f64>,
    pub values: Vec<Spectrum<3>>,
    pub max_c1_growth: f64,
}

pub fn lobatto_nodes(a: f64, b: f64, count: usize) -> (Vec<f64>, Vec<f64>) {
    let m = count - 1;
    let mut nodes = Vec::with_capacity(count);
    let mut weights = Vec::with_capacity(count);
    for j in 0..count {
        // ascending order: x_j = -cos(πj/m)
        let x = -(PI * j as f64 / m as f64).cos();
        nodes.push(0.5 * (a + b) + 0.5 * (b - a) * x);
        let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
        if j == 0 || j == m {
            w *= 0.5;
        }
        weights.push(w);
    }
    (nodes, weights)
}

impl ChebSolution {
    /// Solve from `u0` at `t0 ∈ [a, b]` and record the nodes.
    pub fn solve(u0: &Spectrum<3>, t0: f64, a: f64, b: f64, count: usize, dt_max: f64) -> Result<Self> {
        if !(a <= t0 && t0 <= b) {
            return Err(Error::Precondition(format!("t0 = {t0} outside [{a}, {b}]")));
        }
        let (nodes, weights) = lobatto_nodes(a, b, count.max(3));
        let c1_0 = c1_norm(u0);
        let limit = cfl_limit(&u0.to_physical());
        let dt_max = dt_max.min(limit);
        let mut values = vec![Spectrum::<3>::zeros(u0.grid); nodes.len()];
        let split = nodes.partition_point(|&x| x < t0);
        let mut max_growth: f64 = 1.0;
        let mut check = |u: &Spectrum<3>| -> Result<()> {
            let c1 = c1_norm(u);
            if c1_0 > 0.0 {
                if c1 > BLOWUP_FACTOR * c1_0 {
                    return Err(Error::BlowUp { initial: c1_0, current: c1 });
                }
                max_growth = max_growth.max(c1 / c1_0);
            }
            Ok(())
        };
        let (mut u, mut t) = (u0.clone(), t0);
        for idx in split..nodes.len() {
            u = march(&u, t, nodes[idx], dt_max);
            t = nodes[idx];
            check(&u)?;
            values[idx] = u.clone();
        }
        let (mut u, mut t) = (u0.clone(), t0);
        for idx in (0..split).rev() {
            u = march(&u, t, nodes[idx], dt_max);
            t = nodes[idx];
            check(&u)?;
            values[idx] = u.clone();
        }
        Ok(ChebSolution { a, b, t0, nodes, weights, values, max_c1_growth: max_growth })
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.a && t <= self.b
    }

    /// Spectral state at time `t` (exact node values at the nodes).
    pub fn eval(&self, t: f64) -> Spectrum<3> {
        for (x, v) in self.nodes.iter().zip(&self.values) {
            if *x == t {
                return v.clone();
            }
        }
        let coef: Vec<f64> = self.nodes.iter().zip(&self.weights).map(|(x, w)| w / (t - x)).collect();
        let denom: f64 = coef.iter().sum();
        let mut out = Spectrum::<3>::zeros(self.values[0].grid);
        for (c, v) in coef.iter().zip(&self.values) {
            out.axpy(c / denom, v);
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Off-grid evaluation

/// Exact trigonometric interpolant restricted to the significant modes.
#[derive(Clone, Debug)]
pub struct SparseTrig<const C: usize> {
    modes: Vec<([i64; 3], [C64; C])>,
    mmax: [i64; 3],
    /// `ℓ¹` mass of the dropped coefficients (bound on the pointwise error).
    pub dropped_l1: f64,
}

impl<const C: usize> SparseTrig<C> {
    pub fn from_spectrum(s: &Spectrum<C>, rel_tol: f64) -> Self {
        let p = s.grid.plan();
        let len = p.spec_len();
        let maxc = s.data.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
        let cut = rel_tol * maxc;
        let mut modes = Vec::new();
        let mut mmax = [0i64; 3];
        let mut dropped = 0.0;
        p.for_each_mode(|idx, i, j, k| {
            let coef: [C64; C] = std::array::from_fn(|c| s.data[c * len + idx]);
            let w = p.half_weight(k);
            if coef.iter().any(|z| z.norm() > cut) && maxc > 0.0 {
                let m = p.m(i, j, k);
                for d in 0..3 {
                    mmax[d] = mmax[d].max(m[d].abs());
                }
                modes.push((m, coef.map(|z| z * w)));
            } else {
                dropped += w * coef.iter().fold(0.0_f64, |a, z| a.max(z.norm()));
            }
        });
        SparseTrig { modes, mmax, dropped_l1: dropped }
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn eval(&self, x: [f64; 3]) -> [f64; C] {
        let mut out = [0.0; C];
        if self.modes.is_empty() {
            return out;
        }
        // per-axis powers e^{2πi m x_d}; stack tables cover |m| ≤ 32, which holds for n ≤ 64
        const SMALL: usize = 32;
        if self.mmax.iter().all(|&m| m as usize <= SMALL) {
            let mut tables = [[C64::new(1.0, 0.0); 2 * SMALL + 1]; 3];
            for d in 0..3 {
                fill_powers(&mut tables[d], SMALL, self.mmax[d] as usize, x[d]);
            }
            self.accumulate(&mut out, |m, d| tables[d][(m + SMALL as i64) as usize]);
        } else {
            let tables: [Vec<C64>; 3] = std::array::from_fn(|d| {
                let mm = self.mmax[d] as usize;
                let mut t = vec![C64::new(1.0, 0.0); 2 * mm + 1];
                fill_powers(&mut t, mm, mm, x[d]);
                t
            });
            self.accumulate(&mut out, |m, d| tables[d][(m + self.mmax[d]) as usize]);
        }
        out
    }

    #[inline]
    fn accumulate(&self, out: &mut [f64; C], power: impl Fn(i64, usize) -> C64) {
        for (m, coef) in &self.modes {
            let ph = power(m[0], 0) * power(m[1], 1) * power(m[2], 2);
            for c in 0..C {
                out[c] += (coef[c] * ph).re;
            }
        }
    }
}

/// `t[centre ± m] = e^{±2πi m x}` for `m ≤ mm`.
fn fill_powers(t: &mut [C64], centre: usize, mm: usize, x: f64) {
    if mm == 0 {
        return;
    }
    let e = C64::from_polar(1.0, 2.0 * PI * x);
    let mut cur = C64::new(1.0, 0.0);
    for m in 1..=mm {
        cur *= e;
        t[centre + m] = cur;
        t[centre - m] = cur.conj();
    }
}

// ---------------------------------------------------------------------------
// Flow maps

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlowDirection {
    Forward,
    Backward,
}

/// `Φ(·, t)` with `(∂_t + v·∇)Φ = 0` and `Φ(·, s) = id`, stored as `Φ − x`.
#[derive(Clone, Debug)]
pub struct FlowMap {
    pub base_time: f64,
    pub t: f64,
    pub disp: VectorField,
    pub direction: FlowDirection,
}

impl FlowMap {
    /// `∇Φ = I + ∇(Φ − x)` as a row-major matrix field.
    pub fn gradient(&self) -> Field<9> {
        let mut g = grad_vector_spec(&self.disp.to_spectral()).to_physical();
        let n3 = self.disp.grid.len();
        for d in 0..3 {
            for v in &mut g.data[(4 * d) * n3..(4 * d + 1) * n3] {
                *v += 1.0;
            }
        }
        g
    }
}

/// Trace characteristics from every grid node at time `t` to `base` with `steps`
/// RK4 steps; `vel(τ)` supplies the velocity interpolant at time `τ`.
pub fn trace_flow(
    grid: Grid,
    base: f64,
    t: f64,
    steps: usize,
    mut vel: impl FnMut(f64) -> Result<SparseTrig<3>>,
) -> Result<FlowMap> {
    let n3 = grid.len();
    let mut disp = VectorField::zeros(grid).with_time(t);
    let direction = if base <= t { FlowDirection::Backward } else { FlowDirection::Forward };
    if base == t {
        return Ok(FlowMap { base_time: base, t, disp, direction });
    }
    let steps = steps.max(1);
    let h = (base - t) / steps as f64;
    let mut pos: Vec<[f64; 3]> = (0..n3).map(|i| grid.coords(i)).collect();
    let mut tau = t;
    let mut v_now = vel(tau)?;
    for s in 0..steps {
        let v_mid = vel(tau + 0.5 * h)?;
        let tau_next = if s + 1 == steps { base } else { t + h * (s + 1) as f64 };
        let v_end = vel(tau_next)?;
        for x in pos.iter_mut() {
            let k1 = v_now.eval(*x);
            let k2 = v_mid.eval(std::array::from_fn(|d| x[d] + 0.5 * h * k1[d]));
            let k3 = v_mid.eval(std::array::from_fn(|d| x[d] + 0.5 * h * k2[d]));
            let k4 = v_end.eval(std::array::from_fn(|d| x[d] + h * k3[d]));
            for d in 0..3 {
                x[d] += h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
            }
        }
        tau = tau_next;
        v_now = v_end;
    }
    for (i, x) in pos.iter().enumerate() {
        let x0 = grid.coords(i);
        for d in 0..3 {
            disp.data[d * n3 + i] = x[d] - x0[d];
        }
    }
    Ok(FlowMap { base_time: base, t, disp, direction })
}

/// Linear-in-time interpolation of a velocity slab, as a spectral state.
pub fn slab_velocity(slab: &TimeSlab<VectorField>, t: f64) -> Result<Spectrum<3>> {
    let (lo, hi, w) = slab
        .locate(t)
        .ok_or_else(|| Error::Precondition(format!("time {t} outside the slab")))?;
    let mut s = slab.slices[lo].to_spectral().scale(1.0 - w);
    if w > 0.0 {
        s.axpy(w, &slab.slices[hi].to_spectral());
    }
    Ok(s)
}

pub const FLOW_STEPS: usize = 32;

/// Flow map from a velocity slab: linear in time between slices, trigonometric in
/// space, RK4 along characteristics.
pub fn flow_map(slab: &TimeSlab<VectorField>, s_i: f64, t: f64) -> Result<FlowMap> {
    let grid = slab.slices[0].grid;
    let v_t = slab_velocity(slab, t)?;
    let c1 = c1_norm(&v_t);
    let hyp = (t - s_i).abs() * c1;
    if hyp > 1.0 {
        return Err(Error::FlowHypothesis(hyp));
    }
    slab_velocity(slab, s_i)?;
    trace_flow(grid, s_i, t, FLOW_STEPS, |tau| Ok(SparseTrig::from_spectrum(&slab_velocity(slab, tau)?, 1e-14)))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransportReport {
    pub norm_f: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// Solve `∂_t f + v·∇f = g` (with `g` frozen in time) along characteristics from
/// data `f0` at `t0`, and compare `‖f(t)‖_α` with `‖f0‖_α + |t − t0| ‖g‖_α`.
pub fn transport_probe(
    f0: &ScalarField,
    g: &ScalarField,
    slab: &TimeSlab<VectorField>,
    t0: f64,
    t: f64,
    alpha: f64,
) -> Result<(ScalarField, TransportReport)> {
    let grid = f0.grid;
    let v_t = slab_velocity(slab, t)?;
    let hyp = (t - t0).abs() * c1_norm(&v_t);
    if hyp > 1.0 {
        return Err(Error::FlowHypothesis(hyp));
    }
    let n3 = grid.len();
    let ftrig = SparseTrig::<1>::from_spectrum(&f0.to_spectral(), 1e-14);
    let gtrig = SparseTrig::<1>::from_spectrum(&g.to_spectral(), 1e-14);
    let steps = FLOW_STEPS;
    let h = (t0 - t) / steps as f64;
    let mut pos: Vec<[f64; 3]> = (0..n3).map(|i| grid.coords(i)).collect();
    let mut acc = vec![0.0; n3];
    let mut tau = t;
    let vel = |tau: f64| -> Result<SparseTrig<3>> { Ok(SparseTrig::from_spectrum(&slab_velocity(slab, tau)?, 1e-14)) };
    let mut v_now = vel(tau)?;
    for s in 0..steps {
        let v_mid = vel(tau + 0.5 * h)?;
        let tau_next = if s + 1 == steps { t0 } else { t + h * (s + 1) as f64 };
        let v_end = vel(tau_next)?;
        for (x, a) in pos.iter_mut().zip(acc.iter_mut()) {
            let k1 = v_now.eval(*x);
            let x2: [f64; 3] = std::array::from_fn(|d| x[d] + 0.5 * h * k1[d]);
            let k2 = v_mid.eval(x2);
            let x3: [f64; 3] = std::array::from_fn(|d| x[d] + 0.5 * h * k2[d]);
            let k3 = v_mid.eval(x3);
            let x4: [f64; 3] = std::array::from_fn(|d| x[d] + h * k3[d]);
            let k4 = v_end.eval(x4);
            let g1 = gtrig.eval(*x)[0];
            let (g2, g3, g4) = (gtrig.eval(x2)[0], gtrig.eval(x3)[0], gtrig.eval(x4)[0]);
            *a += h / 6.0 * (g1 + 2.0 * g2 + 2.0 * g3 + g4);
            for d in 0..3 {
                x[d] += h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
            }
        }
        tau = tau_next;
        v_now = v_end;
    }
    let mut f = ScalarField::zeros(grid).with_time(t);
    for i in 0..n3 {
        // acc holds ∫_t^{t0} g, i.e. minus the forward integral
        f.data[i] = ftrig.eval(pos[i])[0] - acc[i];
    }
    let norm_f = holder_norm(&f, alpha);
    let rhs = holder_norm(f0, alpha) + (t - t0).abs() * holder_norm(g, alpha);
    let ratio = if rhs > 0.0 { norm_f / rhs } else { 0.0 };
    Ok((f, TransportReport { norm_f, rhs, ratio }))
}

// ---------------------------------------------------------------------------
// Residuals

/// `‖∂_t v + div(v⊗v) + ∇p − div R‖₀` with `∂_t v ≈ (v₊ − v₋)/(2h)`.
pub fn er_residual_point(
    v_minus: &VectorField,
    v: &VectorField,
    v_plus: &VectorField,
    h: f64,
    r: &SymTensorField,
    p: &ScalarField,
) -> f64 {
    let mut res = div_tensor(&sym_outer(v, v));
    res.axpy(1.0, &grad(p));
    res.axpy(-1.0, &div_tensor(r));
    res.axpy(0.5 / h, v_plus);
    res.axpy(-0.5 / h, v_minus);
    res.sup_norm()
}

/// Maximum residual over the interior slices of a slab.
pub fn euler_reynolds_residual(
    v: &TimeSlab<VectorField>,
    r: &TimeSlab<SymTensorField>,
    p: &TimeSlab<ScalarField>,
) -> Result<f64> {
    if v.times.len() < 3 {
        return Err(Error::Precondition("residual needs at least three slices".into()));
    }
    let h = v.times[1] - v.times[0];
    let mut worst: f64 = 0.0;
    for j in 1..v.times.len() - 1 {
        worst = worst.max(er_residual_point(&v.slices[j - 1], &v.slices[j], &v.slices[j + 1], h, &r.slices[j], &p.slices[j]));
    }
    Ok(worst)
}

/// `‖P div(v⊗v)‖₀`: vanishes exactly for steady Euler flows.
pub fn steady_residual(v: &VectorField) -> f64 {
    let t = sym_outer(v, v).to_spectral();
    let d = crate::fields::div_tensor_spec(&t);
    leray_spec(&d).to_physical().sup_norm()
}

/// `‖div v‖₀`.
pub fn divergence_norm(v: &VectorField) -> f64 {
    div_spec(&v.to_spectral()).to_physical().sup_norm()
}

// ---------------------------------------------------------------------------
// Steady presets

/// Shear flow `(amp·sin 2πx₂, 0, 0)`.
pub fn shear(grid: Grid, amp: f64) -> VectorField {
    VectorField::from_fn(grid, |x| [amp * (2.0 * PI * x[1]).sin(), 0.0, 0.0])
}

/// 2.5D Taylor–Green eigenflow `(−cos 2πx₁ sin 2πx₂, sin 2πx₁ cos 2πx₂, 0)`.
pub fn taylor_green(grid: Grid, amp: f64) -> VectorField {
    VectorField::from_fn(grid, |x| {
        let (s1, c1) = (2.0 * PI * x[0]).sin_cos();
        let (s2, c2) = (2.0 * PI * x[1]).sin_cos();
        [-amp * c1 * s2, amp * s1 * c2, 0.0]
    })
}

/// `½∫|v|²` by the grid average.
pub fn energy(v: &VectorField) -> f64 {
    0.5 * v.data.iter().map(|x| x * x).sum::<f64>() / v.grid.len() as f64
}

/// `½∫|v|²` from a spectrum (Parseval).
pub fn energy_spec(u: &Spectrum<3>) -> f64 {
    let p = u.grid.plan();
    let len = p.spec_len();
    let mut e = 0.0;
    p.for_each_mode(|idx, _, _, k| {
        let w = p.half_weight(k);
        for c in 0..3 {
            e += w * u.data[c * len + idx].norm_sqr();
        }
    });
    0.5 * e
}
