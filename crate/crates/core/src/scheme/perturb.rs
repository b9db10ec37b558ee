//! Mikado perturbation along the flow of `v̄_q`: `(v̄_q, R̄_q)` → `(v_{q+1}, R_{q+1})`.

use super::badset::Interval;
use super::cutoffs::Bump;
use super::glue::Glued;
use super::history::History;
use crate::calculus::{inverse_divergence_spec, rdiv_spec};
use crate::euler::{c1_norm, trace_flow, SparseTrig};
use crate::fields::{
    advect_with, curl_spec, derivative, div_spec, grad_vector_spec, holder_norm, sym_outer, Grid, Spectrum, SymTensorField,
    VectorField, SYM_PAIRS,
};
use crate::linalg::{frob_dist_id, inv3, m3_to_sym, mul, sym_to_m3, transpose, M3};
use crate::mikado::{gamma, gram, MikadoFamily, NEIGHBOURHOOD_RADIUS};
use crate::params::{scales, SchemeParams};
use crate::spectral::C64;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct PerturbOptions {
    /// `h = fd_scale/(λ(1 + ‖v̄‖₁))` for `∂ₜw`.
    pub fd_scale: f64,
    /// Grid stride of the pointwise cancellation probes.
    pub probe_stride: usize,
    /// RK4 steps per gluing-ramp width when tracing `Φ_i`; `v̄` changes on that scale.
    pub ramp_steps: f64,
}

impl Default for PerturbOptions {
    fn default() -> Self {
        PerturbOptions { fd_scale: 1e-3, probe_stride: 61, ramp_steps: 4.0 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PerturbInterval {
    pub stress: Interval,
    /// `s_i`, where `Φ_i = id`.
    pub base: f64,
    pub cutoff: Bump,
    /// RK4 steps for `Φ_i`; fixed per interval so that `Φ_i` is smooth in `t`.
    pub steps: usize,
    pub c1: f64,
}

#[derive(Clone)]
struct PhaseMode {
    k: [i64; 3],
    psi: Vec<(usize, C64)>,
}

pub struct Perturbed {
    prev: Arc<dyn History>,
    family: Arc<MikadoFamily>,
    /// Level of the new pair.
    pub q: usize,
    pub intervals: Vec<PerturbInterval>,
    pub frequency: u64,
    pub lambda: f64,
    pub delta: f64,
    pub kmax: i64,
    pub m: f64,
    pub fd_step: f64,
    modes: Vec<PhaseMode>,
    gram: [[f64; 6]; 6],
    probe_stride: usize,
}

/// `w` at one time, with what the diagnostics need.
pub struct Assembly {
    pub w: Spectrum<3>,
    pub wo: Option<VectorField>,
    /// `(interval, η, Φ − x)` for every active interval.
    pub flows: Vec<(usize, f64, VectorField)>,
    pub grad_dev: f64,
    pub grad_max: f64,
    pub rtilde_dist: f64,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SliceDiag {
    pub t: f64,
    pub eta: f64,
    /// `‖w‖₀ + λ⁻¹‖w‖₁`.
    pub w_norm: f64,
    pub wo_c0: f64,
    pub wc_c0: f64,
    pub grad_dev: f64,
    pub grad_max: f64,
    pub rtilde_dist: f64,
    pub div_w: f64,
    /// `‖R_nash‖₀, ‖R_transp‖₀, ‖R_osc‖₀`.
    pub parts: [f64; 3],
    pub r_c0: f64,
    /// `‖D_h − D_{2h}‖₀/‖∂ₜw‖₀` of the two centred differences.
    pub richardson: f64,
    pub phase: Option<f64>,
    pub grad_transport: Option<f64>,
    pub cancellation: f64,
    pub truncated_gram: f64,
    pub lowpass: f64,
}

pub struct SliceEval {
    pub t: f64,
    pub v: Spectrum<3>,
    pub r: Option<Spectrum<6>>,
    pub diag: Option<SliceDiag>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PerturbReport {
    pub q: usize,
    pub frequency: u64,
    pub lambda: f64,
    pub delta: f64,
    pub kmax: i64,
    pub modes: Vec<[i64; 3]>,
    pub fd_step: f64,
    pub m: f64,
    pub intervals: Vec<PerturbInterval>,
    /// `(M/2)δ^{1/2}` and `(M/32)δ^{1/2}`.
    pub w_bound: f64,
    pub wo_bound: f64,
    /// `δ_{q+1}^{1/2}δ_q^{1/2}λ_q^{1+γ}/λ_{q+1}^{1−5α}`.
    pub stress_bound: f64,
}

fn cell(g: &crate::fields::Field<9>, x: usize) -> M3 {
    let n3 = g.grid.len();
    std::array::from_fn(|a| std::array::from_fn(|b| g.data[(3 * a + b) * n3 + x]))
}

fn sym_at(s: &SymTensorField, x: usize) -> [f64; 6] {
    let n3 = s.grid.len();
    std::array::from_fn(|c| s.data[c * n3 + x])
}

/// `G (Id − R̄/δ) Gᵀ`.
fn rtilde(g: &M3, rbar: &[f64; 6], delta: f64) -> [f64; 6] {
    let mut a = sym_to_m3(rbar);
    for (i, row) in a.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = if i == j { 1.0 } else { 0.0 } - *v / delta;
        }
    }
    m3_to_sym(&mul(&mul(g, &a), &transpose(g)))
}

impl Perturbed {
    pub fn new(
        glued: Arc<Glued>,
        family: Arc<MikadoFamily>,
        p: &SchemeParams,
        m: f64,
        opts: &PerturbOptions,
    ) -> Result<(Self, PerturbReport)> {
        let q = glued.q;
        let grid = glued.grid();
        let sq = scales(p, q)?;
        let s1 = scales(p, q + 1)?;
        let frequency = s1
            .frequency
            .ok_or_else(|| Error::Guard("Nyquist guard: frequency beyond exact integer range".into()))?;
        let kmax = ((grid.n as f64 / 6.0) / frequency as f64).floor() as i64;
        if kmax < 1 {
            return Err(Error::Guard(format!(
                "Nyquist guard: λ_{{q+1}} = 2π·{frequency} leaves no Mikado mode below n/6 at n = {}",
                grid.n
            )));
        }
        let modes: Vec<PhaseMode> =
            family.half_modes_upto(kmax).map(|m| PhaseMode { k: m.k, psi: m.psi.clone() }).collect();
        let prev: Arc<dyn History> = glued.clone();
        let mut intervals = Vec::new();
        let mut c1_all: f64 = 0.0;
        let next = glued.next_bad();
        let ramp_w = glued
            .windows
            .iter()
            .flat_map(|w| w.ramps.iter().map(|r| r.width()))
            .fold(f64::INFINITY, f64::min);
        for iv in glued.stress_intervals() {
            // the support is the real-bad component, computed exactly as the bad set does
            let outer = next
                .real_bad()
                .into_iter()
                .find(|k| k.lo < iv.lo && iv.hi < k.hi)
                .expect("stress interval inside the real bad set");
            let cutoff = Bump::plateau((iv.lo, iv.hi), (outer.lo, outer.hi));
            let (a, b) = cutoff.support();
            let base = iv.mid();
            let mut c1: f64 = 0.0;
            for t in [a, iv.lo, base, iv.hi, b] {
                c1 = c1.max(c1_norm(&prev.velocity_spec(t)?));
            }
            let reach = (b - base).max(base - a);
            if reach * c1 > 1.0 {
                return Err(Error::FlowHypothesis(reach * c1));
            }
            let by_ramp = (opts.ramp_steps * reach / ramp_w).ceil();
            let steps = ((32.0 * reach * c1).ceil().max(by_ramp) as usize).clamp(2, 64);
            c1_all = c1_all.max(c1);
            intervals.push(PerturbInterval { stress: iv, base, cutoff, steps, c1 });
        }
        let fd_step = opts.fd_scale / (s1.lambda * (1.0 + c1_all));
        let gram = gram(&family);
        let report = PerturbReport {
            q: q + 1,
            frequency,
            lambda: s1.lambda,
            delta: s1.delta,
            kmax,
            modes: modes.iter().map(|m| m.k).collect(),
            fd_step,
            m,
            intervals: intervals.clone(),
            w_bound: 0.5 * m * s1.delta.sqrt(),
            wo_bound: m / 32.0 * s1.delta.sqrt(),
            stress_bound: s1.delta.sqrt() * sq.delta.sqrt() * sq.lambda.powf(1.0 + p.gamma)
                / s1.lambda.powf(1.0 - 5.0 * p.alpha),
        };
        let out = Perturbed {
            prev,
            family,
            q: q + 1,
            intervals,
            frequency,
            lambda: s1.lambda,
            delta: s1.delta,
            kmax,
            m,
            fd_step,
            modes,
            gram,
            probe_stride: opts.probe_stride.max(1),
        };
        Ok((out, report))
    }

    pub fn grid(&self) -> Grid {
        self.prev.grid()
    }

    /// Indices and cutoff values of the intervals active at `t`.
    pub fn active(&self, t: f64) -> Vec<(usize, f64)> {
        self.intervals
            .iter()
            .enumerate()
            .map(|(i, iv)| (i, iv.cutoff.value(t)))
            .filter(|(_, e)| *e > 0.0)
            .collect()
    }

    fn flow(&self, i: usize, t: f64) -> Result<VectorField> {
        let iv = &self.intervals[i];
        let prev = &self.prev;
        let fm = trace_flow(self.grid(), iv.base, t, iv.steps, |tau| {
            Ok(SparseTrig::from_spectrum(&prev.velocity_spec(tau)?, 1e-14))
        })?;
        Ok(fm.disp)
    }

    /// `w = λ⁻¹ curl(2 Re Σ_k ∇Φᵀ (ik × b_k)/|k|² e^{iλk·Φ})`, `b_k = η δ^{1/2} a_k(R̃) A_k`.
    pub fn assemble(&self, t: f64, want_wo: bool) -> Result<Option<Assembly>> {
        let active = self.active(t);
        if active.is_empty() {
            return Ok(None);
        }
        let grid = self.grid();
        let n3 = grid.len();
        let rbar = self.prev.stress_spec(t)?.map(|s| s.to_physical());
        let mut pot = VectorField::zeros(grid);
        let mut wo = if want_wo { Some(VectorField::zeros(grid)) } else { None };
        let (mut grad_dev, mut grad_max, mut rtilde_dist) = (0.0_f64, 0.0_f64, 0.0_f64);
        let sd = self.delta.sqrt();
        let xi = self.family.xi;
        let mut flows = Vec::new();
        for &(i, eta) in &active {
            let disp = self.flow(i, t)?;
            let gfield = grad_vector_spec(&disp.to_spectral()).to_physical();
            for x in 0..n3 {
                let mut g = cell(&gfield, x);
                for d in 0..3 {
                    g[d][d] += 1.0;
                }
                let dev = (0..3)
                    .flat_map(|a| (0..3).map(move |b| (a, b)))
                    .map(|(a, b)| (g[a][b] - if a == b { 1.0 } else { 0.0 }).abs())
                    .fold(0.0, f64::max);
                grad_dev = grad_dev.max(dev);
                grad_max = grad_max.max(g.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs())));
                if dev > 0.5 {
                    return Err(Error::Guard(format!(
                        "flow-gradient guard: ‖∇Φ − Id‖₀ = {dev:.3e} exceeds 1/2 at t = {t:.6}"
                    )));
                }
                let rb = rbar.as_ref().map_or([0.0; 6], |r| sym_at(r, x));
                let rt = rtilde(&g, &rb, self.delta);
                let dist = frob_dist_id(&rt);
                rtilde_dist = rtilde_dist.max(dist);
                if dist > NEIGHBOURHOOD_RADIUS {
                    return Err(Error::Guard(format!(
                        "stress-tensor guard: R̃ outside the Mikado neighbourhood (distance {dist:.4} > {NEIGHBOURHOOD_RADIUS}) at t = {t:.6}"
                    )));
                }
                let gam = gamma(&rt)?;
                let ginv = inv3(&g);
                let x0 = grid.coords(x);
                let phi: [f64; 3] = std::array::from_fn(|d| x0[d] + disp.data[d * n3 + x]);
                let mut acc_p = [0.0; 3];
                let mut acc_o = [0.0; 3];
                for m in &self.modes {
                    let mut b = [C64::new(0.0, 0.0); 3];
                    for &(j, z) in &m.psi {
                        let s = z * (gam[j] * eta * sd);
                        for d in 0..3 {
                            b[d] += s * xi[j][d];
                        }
                    }
                    let kf = m.k.map(|v| v as f64);
                    let k2 = kf[0] * kf[0] + kf[1] * kf[1] + kf[2] * kf[2];
                    let arg = 2.0 * PI * self.frequency as f64 * (kf[0] * phi[0] + kf[1] * phi[1] + kf[2] * phi[2]);
                    let e = C64::from_polar(1.0, arg);
                    let ii = C64::new(0.0, 1.0);
                    let pf = [
                        ii * (b[2] * kf[1] - b[1] * kf[2]) / k2,
                        ii * (b[0] * kf[2] - b[2] * kf[0]) / k2,
                        ii * (b[1] * kf[0] - b[0] * kf[1]) / k2,
                    ];
                    for a in 0..3 {
                        let mut s = C64::new(0.0, 0.0);
                        for c in 0..3 {
                            s += pf[c] * g[c][a];
                        }
                        acc_p[a] += 2.0 * (s * e).re;
                    }
                    if want_wo {
                        for a in 0..3 {
                            let mut s = C64::new(0.0, 0.0);
                            for c in 0..3 {
                                s += b[c] * ginv[a][c];
                            }
                            acc_o[a] += 2.0 * (s * e).re;
                        }
                    }
                }
                for d in 0..3 {
                    pot.data[d * n3 + x] += acc_p[d];
                    if let Some(o) = wo.as_mut() {
                        o.data[d * n3 + x] += acc_o[d];
                    }
                }
            }
            flows.push((i, eta, disp));
        }
        let w = curl_spec(&pot.to_spectral()).scale(1.0 / self.lambda);
        Ok(Some(Assembly { w, wo, flows, grad_dev, grad_max, rtilde_dist }))
    }

    /// `v_{q+1}`, `R_{q+1}` and, on request, the slice diagnostics.
    pub fn evaluate(&self, t: f64, diagnostics: bool) -> Result<SliceEval> {
        let Some(a0) = self.assemble(t, diagnostics)? else {
            return Ok(SliceEval { t, v: self.prev.velocity_spec(t)?, r: self.prev.stress_spec(t)?, diag: None });
        };
        let grid = self.grid();
        let h = self.fd_step;
        // plain slices use the centred 2-point stencil; diagnostic slices add the
        // outer points for the 4-point stencil and its Richardson estimate
        let offsets: &[f64] = if diagnostics { &[-2.0, -1.0, 1.0, 2.0] } else { &[-1.0, 1.0] };
        let others: Vec<Option<Assembly>> =
            offsets.iter().map(|&o| self.assemble(t + o * h, false)).collect::<Result<_>>()?;
        let wat = |o: f64| {
            let k = offsets.iter().position(|&x| x == o).expect("stencil point");
            others[k].as_ref().map_or_else(|| Spectrum::<3>::zeros(grid), |a| a.w.clone())
        };
        let mut d1 = wat(1.0);
        d1.axpy(-1.0, &wat(-1.0));
        let d1 = d1.scale(0.5 / h);
        let (dtw, d2) = if diagnostics {
            let mut d2 = wat(2.0);
            d2.axpy(-1.0, &wat(-2.0));
            let d2 = d2.scale(0.25 / h);
            let mut dtw = d1.scale(4.0 / 3.0);
            dtw.axpy(-1.0 / 3.0, &d2);
            (dtw, d2)
        } else {
            (d1.clone(), d1.clone())
        };

        let vbar = self.prev.velocity_spec(t)?;
        let rbar = self.prev.stress_spec(t)?;
        let vb = vbar.to_physical();
        let w = a0.w.to_physical();
        let gv = grad_vector_spec(&vbar).to_physical();
        let gw = grad_vector_spec(&a0.w).to_physical();
        let nash = advect_with(&w, &gv);
        let mut transport = dtw.to_physical();
        transport.axpy(1.0, &advect_with(&vb, &gw));
        let mut osc = sym_outer(&w, &w);
        let rbar_phys = rbar.as_ref().map(|r| r.to_physical());
        if let Some(r) = &rbar_phys {
            osc.axpy(1.0, r);
        }
        let r_nash = inverse_divergence_spec(&nash.to_spectral());
        let r_transp = inverse_divergence_spec(&transport.to_spectral());
        let r_osc = rdiv_spec(&osc.to_spectral());
        let mut r = r_nash.clone();
        r.axpy(1.0, &r_transp);
        r.axpy(1.0, &r_osc);
        let mut v = vbar.clone();
        v.axpy(1.0, &a0.w);

        let diag = if diagnostics {
            let wo = a0.wo.as_ref().expect("w_o requested");
            let mut wc = w.clone();
            wc.axpy(-1.0, wo);
            let rel = {
                let mut e = d1.clone();
                e.axpy(-1.0, &d2);
                let den = dtw.to_physical().sup_norm();
                if den > 0.0 { e.to_physical().sup_norm() / den } else { 0.0 }
            };
            let (phase, grad_transport) = self.transport_checks(&a0, &others, &vb, &gv)?;
            let (cancellation, truncated_gram, lowpass) = self.cancellation_checks(&a0, wo, rbar_phys.as_ref())?;
            Some(SliceDiag {
                t,
                eta: a0.flows.iter().map(|f| f.1).fold(0.0, f64::max),
                w_norm: w.sup_norm() + holder_norm(&w, 1.0) / self.lambda,
                wo_c0: wo.sup_norm(),
                wc_c0: wc.sup_norm(),
                grad_dev: a0.grad_dev,
                grad_max: a0.grad_max,
                rtilde_dist: a0.rtilde_dist,
                div_w: div_spec(&a0.w).to_physical().sup_norm(),
                parts: [r_nash.to_physical().sup_norm(), r_transp.to_physical().sup_norm(), r_osc.to_physical().sup_norm()],
                r_c0: r.to_physical().sup_norm(),
                richardson: rel,
                phase,
                grad_transport,
                cancellation,
                truncated_gram,
                lowpass,
            })
        } else {
            None
        };
        Ok(SliceEval { t, v, r: Some(r), diag })
    }

    /// `max |k·D_tΦ|` over retained `k` and the residual of `D_t∇Φ + ∇Φ∇v̄ = 0`,
    /// with `∂ₜΦ` from the same four-point stencil as `∂ₜw`.
    fn transport_checks(
        &self,
        a0: &Assembly,
        others: &[Option<Assembly>],
        vb: &VectorField,
        gv: &crate::fields::Field<9>,
    ) -> Result<(Option<f64>, Option<f64>)> {
        let h = self.fd_step;
        let n3 = vb.grid.len();
        let mut phase: Option<f64> = None;
        let mut gres: Option<f64> = None;
        for (i, _, disp) in &a0.flows {
            let find = |k: usize| {
                others[k].as_ref().and_then(|a| a.flows.iter().find(|f| f.0 == *i)).map(|f| &f.2)
            };
            let (Some(m2), Some(m1), Some(p1), Some(p2)) = (find(0), find(1), find(2), find(3)) else {
                continue;
            };
            let mut dt = VectorField::zeros(vb.grid);
            for idx in 0..dt.data.len() {
                let d1 = (p1.data[idx] - m1.data[idx]) / (2.0 * h);
                let d2 = (p2.data[idx] - m2.data[idx]) / (4.0 * h);
                dt.data[idx] = (4.0 * d1 - d2) / 3.0;
            }
            let gd = grad_vector_spec(&disp.to_spectral()).to_physical();
            // D_tΦ = ∂ₜ(Φ − x) + v̄ + (v̄·∇)(Φ − x)
            let mut dphi = dt.clone();
            dphi.axpy(1.0, vb);
            dphi.axpy(1.0, &advect_with(vb, &gd));
            let mut worst: f64 = 0.0;
            for x in 0..n3 {
                let r = [dphi.data[x], dphi.data[n3 + x], dphi.data[2 * n3 + x]];
                for m in &self.modes {
                    let s: f64 = (0..3).map(|d| m.k[d] as f64 * r[d]).sum();
                    worst = worst.max(s.abs());
                }
            }
            phase = Some(phase.unwrap_or(0.0).max(worst));

            // ∂ₜG + (v̄·∇)G + G∇v̄ with G = Id + ∇(Φ − x)
            let gdt = grad_vector_spec(&dt.to_spectral()).to_physical();
            let gds = gd.to_spectral();
            let dgd: Vec<crate::fields::Field<9>> = (0..3)
                .map(|c| {
                    let mut th = [0usize; 3];
                    th[c] = 1;
                    derivative(&gds, th).to_physical()
                })
                .collect();
            let mut worst: f64 = 0.0;
            for x in 0..n3 {
                let mut g = cell(&gd, x);
                for d in 0..3 {
                    g[d][d] += 1.0;
                }
                let gvx = cell(gv, x);
                let gg = mul(&g, &gvx);
                for a in 0..3 {
                    for b in 0..3 {
                        let mut adv = 0.0;
                        for c in 0..3 {
                            adv += vb.data[c * n3 + x] * dgd[c].data[(3 * a + b) * n3 + x];
                        }
                        let res = gdt.data[(3 * a + b) * n3 + x] + adv + gg[a][b];
                        worst = worst.max(res.abs());
                    }
                }
            }
            gres = Some(gres.unwrap_or(0.0).max(worst));
        }
        Ok((phase, gres))
    }

    /// Pointwise mode-0 identity through the Gram matrix, the truncated-mode version,
    /// and the grid low-pass of `w_o⊗w_o`.
    fn cancellation_checks(
        &self,
        a0: &Assembly,
        wo: &VectorField,
        rbar: Option<&SymTensorField>,
    ) -> Result<(f64, f64, f64)> {
        let grid = wo.grid;
        let n3 = grid.len();
        let mut target = SymTensorField::zeros(grid);
        let (mut canc, mut trunc) = (0.0_f64, 0.0_f64);
        let xi = self.family.xi;
        let full: Vec<&crate::mikado::Mode> = self.family.modes_upto(self.kmax).collect();
        for (_, eta, disp) in &a0.flows {
            let gfield = grad_vector_spec(&disp.to_spectral()).to_physical();
            let e2 = eta * eta;
            for x in 0..n3 {
                let rb = rbar.map_or([0.0; 6], |r| sym_at(r, x));
                for (c, &(a, b)) in SYM_PAIRS.iter().enumerate() {
                    let id = if a == b { self.delta } else { 0.0 };
                    target.data[c * n3 + x] += e2 * (id - rb[c]);
                }
                if x % self.probe_stride != 0 {
                    continue;
                }
                let mut g = cell(&gfield, x);
                for d in 0..3 {
                    g[d][d] += 1.0;
                }
                let rt = rtilde(&g, &rb, self.delta);
                let gam = gamma(&rt)?;
                let mut s = [[0.0; 3]; 3];
                for j in 0..6 {
                    for jp in 0..6 {
                        let c = gam[j] * gam[jp] * self.gram[j][jp];
                        for a in 0..3 {
                            for b in 0..3 {
                                s[a][b] += c * xi[j][a] * xi[jp][b];
                            }
                        }
                    }
                }
                let ginv = inv3(&g);
                let lhs = mul(&mul(&ginv, &s), &transpose(&ginv));
                for (c, &(a, b)) in SYM_PAIRS.iter().enumerate() {
                    let id = if a == b { self.delta } else { 0.0 };
                    canc = canc.max((e2 * self.delta * lhs[a][b] - e2 * (id - rb[c])).abs());
                }
                // Σ_{|k|≤K} a_k A_k ⊗ conj(a_k A_k) against R̃
                let mut st = [0.0; 6];
                for m in &full {
                    let mut cf = [C64::new(0.0, 0.0); 3];
                    for &(j, z) in &m.psi {
                        for d in 0..3 {
                            cf[d] += z * (gam[j] * xi[j][d]);
                        }
                    }
                    for (c, &(a, b)) in SYM_PAIRS.iter().enumerate() {
                        st[c] += (cf[a] * cf[b].conj()).re;
                    }
                }
                for c in 0..6 {
                    trunc = trunc.max((st[c] - rt[c]).abs());
                }
            }
        }
        // low-pass of w_o⊗w_o below λ/2
        let mut ww = sym_outer(wo, wo).to_spectral();
        let p = grid.plan();
        let len = p.spec_len();
        let cut = 0.5 * self.frequency as f64;
        p.for_each_mode(|idx, i, j, k| {
            let m = p.m(i, j, k);
            let r = ((m[0] * m[0] + m[1] * m[1] + m[2] * m[2]) as f64).sqrt();
            if r >= cut {
                for c in 0..6 {
                    ww.data[c * len + idx] = C64::new(0.0, 0.0);
                }
            }
        });
        let mut low = ww.to_physical();
        low.axpy(-1.0, &target);
        Ok((canc, trunc, low.sup_norm()))
    }
}

impl History for Perturbed {
    fn grid(&self) -> Grid {
        self.prev.grid()
    }

    fn horizon(&self) -> f64 {
        self.prev.horizon()
    }

    fn velocity_spec(&self, t: f64) -> Result<Spectrum<3>> {
        let mut v = self.prev.velocity_spec(t)?;
        if let Some(a) = self.assemble(t, false)? {
            v.axpy(1.0, &a.w);
        }
        Ok(v)
    }

    fn stress_spec(&self, t: f64) -> Result<Option<Spectrum<6>>> {
        Ok(self.evaluate(t, false)?.r)
    }

    fn state(&self, t: f64) -> Result<(Spectrum<3>, Option<Spectrum<6>>)> {
        let e = self.evaluate(t, false)?;
        Ok((e.v, e.r))
    }
}
