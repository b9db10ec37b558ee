//! Nonlocal operators as Fourier multipliers.
//!
//! Every inverse operator drops the `m = 0` mode and any mode whose derivative
//! wavevector vanishes (pure Nyquist modes).

use crate::error::{Error, Result};
use crate::fields::{
    advect, curl_spec, div_tensor_spec, grad_vector, holder_norm, ik, sym_outer, Field, Grid, ScalarField, Spectrum,
    SymTensorField, VectorField, SYM_PAIRS,
};
use crate::spectral::C64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultiplierOp {
    InverseDivergence,
    BiotSavart,
    Pressure,
    Leray,
    InverseLaplacian,
}

impl MultiplierOp {
    pub fn name(&self) -> &'static str {
        match self {
            MultiplierOp::InverseDivergence => "inverse_divergence",
            MultiplierOp::BiotSavart => "biot_savart",
            MultiplierOp::Pressure => "pressure",
            MultiplierOp::Leray => "leray",
            MultiplierOp::InverseLaplacian => "inverse_laplacian",
        }
    }
}

/// Symbol of the inverse divergence: `R̂_ij = Σ_k r_ijk(κ) f̂_k`.
#[inline]
pub fn inverse_divergence_symbol(k: [f64; 3], f: [C64; 3]) -> [C64; 6] {
    let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if k2 == 0.0 {
        return [ZERO; 6];
    }
    let k4 = k2 * k2;
    let kf = k[0] * f[0] + k[1] * f[1] + k[2] * f[2];
    // i[κiκj(κ·f)/(2|κ|⁴) + (κ·f)δij/(2|κ|²) − κi f_j/|κ|² − κj f_i/|κ|²]
    std::array::from_fn(|c| {
        let (i, j) = SYM_PAIRS[c];
        let mut r = kf * (k[i] * k[j] / (2.0 * k4)) - (f[j] * k[i] + f[i] * k[j]) / k2;
        if i == j {
            r += kf / (2.0 * k2);
        }
        C64::new(-r.im, r.re)
    })
}

fn check_mean(v: &VectorField, rel: f64) -> Result<()> {
    let m = v.mean();
    let mean = m.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
    let tol = rel * v.sup_norm().max(f64::MIN_POSITIVE);
    if mean > tol {
        return Err(Error::NonzeroMean { mean, tol });
    }
    Ok(())
}

pub fn inverse_divergence_spec(f: &Spectrum<3>) -> Spectrum<6> {
    let p = f.grid.plan();
    let len = p.spec_len();
    let mut out = Spectrum::<6>::zeros(f.grid);
    p.for_each_mode(|idx, i, j, k| {
        let r = inverse_divergence_symbol(p.kappa(i, j, k), [f.data[idx], f.data[len + idx], f.data[2 * len + idx]]);
        for (c, v) in r.into_iter().enumerate() {
            out.data[c * len + idx] = v;
        }
    });
    out
}

/// `ℛf`: symmetric, with `div(ℛf) = f` for mean-zero `f`.
pub fn inverse_divergence(f: &VectorField) -> Result<SymTensorField> {
    check_mean(f, 1e-10)?;
    Ok(inverse_divergence_spec(&f.to_spectral()).to_physical().with_time(f.time_tag))
}

pub fn biot_savart_spec(v: &Spectrum<3>) -> Spectrum<3> {
    let c = curl_spec(v);
    inverse_laplacian_neg(&c)
}

/// `(−Δ)⁻¹` on every component, mean dropped.
pub fn inverse_laplacian_neg<const C: usize>(s: &Spectrum<C>) -> Spectrum<C> {
    let p = s.grid.plan();
    let len = p.spec_len();
    let mut out = s.clone();
    p.for_each_mode(|idx, i, j, k| {
        let kk = p.kappa(i, j, k);
        let k2 = kk[0] * kk[0] + kk[1] * kk[1] + kk[2] * kk[2];
        for c in 0..C {
            out.data[c * len + idx] = if k2 == 0.0 { ZERO } else { s.data[c * len + idx] / k2 };
        }
    });
    out
}

/// `ℬv = (−Δ)⁻¹ curl v`.
pub fn biot_savart(v: &VectorField) -> Result<VectorField> {
    check_mean(v, 1e-10)?;
    Ok(biot_savart_spec(&v.to_spectral()).to_physical().with_time(v.time_tag))
}

/// `p̂ = −κ_iκ_j T̂_ij / |κ|²` for a symmetric tensor `T`.
pub fn pressure_from_tensor_spec(t: &Spectrum<6>) -> Spectrum<1> {
    let p = t.grid.plan();
    let len = p.spec_len();
    let mut out = Spectrum::<1>::zeros(t.grid);
    p.for_each_mode(|idx, i, j, k| {
        let kk = p.kappa(i, j, k);
        let k2 = kk[0] * kk[0] + kk[1] * kk[1] + kk[2] * kk[2];
        if k2 == 0.0 {
            return;
        }
        let mut acc = ZERO;
        for (c, &(a, b)) in SYM_PAIRS.iter().enumerate() {
            let w = if a == b { 1.0 } else { 2.0 };
            acc += t.data[c * len + idx] * (w * kk[a] * kk[b]);
        }
        out.data[idx] = -acc / k2;
    });
    out
}

/// Mean-zero `p` with `−Δp = div div(v⊗v − R)`.
pub fn solve_pressure(v: &VectorField, r: &SymTensorField) -> ScalarField {
    let mut t = sym_outer(v, v);
    t.axpy(-1.0, r);
    pressure_from_tensor_spec(&t.to_spectral()).to_physical().with_time(v.time_tag)
}

pub fn leray_spec(v: &Spectrum<3>) -> Spectrum<3> {
    let p = v.grid.plan();
    let len = p.spec_len();
    let mut out = v.clone();
    p.for_each_mode(|idx, i, j, k| {
        let kk = p.kappa(i, j, k);
        let k2 = kk[0] * kk[0] + kk[1] * kk[1] + kk[2] * kk[2];
        if k2 == 0.0 {
            return;
        }
        let kv = v.data[idx] * kk[0] + v.data[len + idx] * kk[1] + v.data[2 * len + idx] * kk[2];
        for d in 0..3 {
            out.data[d * len + idx] -= kv * (kk[d] / k2);
        }
    });
    out
}

/// Leray projection `I − κκᵀ/|κ|²` (mean untouched).
pub fn leray_project(v: &VectorField) -> VectorField {
    leray_spec(&v.to_spectral()).to_physical().with_time(v.time_tag)
}

/// `ℛ curl`, the bounded operator used on vector potentials.
pub fn rcurl_spec(z: &Spectrum<3>) -> Spectrum<6> {
    inverse_divergence_spec(&curl_spec(z))
}

pub fn rcurl(z: &VectorField) -> SymTensorField {
    rcurl_spec(&z.to_spectral()).to_physical().with_time(z.time_tag)
}

/// `ℛ div S` for a symmetric tensor.
pub fn rdiv_spec(s: &Spectrum<6>) -> Spectrum<6> {
    inverse_divergence_spec(&div_tensor_spec(s))
}

/// Minimum of `det ∇Φ` where `Φ = x + d(x)`.
pub fn min_jacobian(disp: &VectorField) -> f64 {
    let g = grad_vector(disp);
    let n3 = disp.grid.len();
    let mut m = f64::INFINITY;
    for x in 0..n3 {
        let a: [[f64; 3]; 3] =
            std::array::from_fn(|i| std::array::from_fn(|j| g.data[(3 * i + j) * n3 + x] + if i == j { 1.0 } else { 0.0 }));
        m = m.min(crate::linalg::det3(&a));
    }
    m
}

/// `‖ℛ(a e^{iλk·Φ} d)‖_α` for the fixed unit vector `d = (1,2,3)/√14`.
///
/// `phi_disp` holds `Φ − x`; `lambda` must be `2π` times an integer so the phase is
/// periodic. Real and imaginary parts are measured separately and the larger kept.
pub fn stationary_phase_probe(
    a: &ScalarField,
    phi_disp: &VectorField,
    k: [i64; 3],
    lambda: f64,
    alpha: f64,
) -> Result<f64> {
    let det = min_jacobian(phi_disp);
    if det < 1e-6 {
        return Err(Error::Degenerate(det));
    }
    let grid = a.grid;
    let n3 = grid.len();
    let d = [1.0 / 14f64.sqrt(), 2.0 / 14f64.sqrt(), 3.0 / 14f64.sqrt()];
    let mut re = VectorField::zeros(grid);
    let mut im = VectorField::zeros(grid);
    for idx in 0..n3 {
        let x = grid.coords(idx);
        let ph: f64 = (0..3).map(|c| k[c] as f64 * (x[c] + phi_disp.data[c * n3 + idx])).sum::<f64>() * lambda;
        let (s, c) = ph.sin_cos();
        for e in 0..3 {
            re.data[e * n3 + idx] = a.data[idx] * c * d[e];
            im.data[e * n3 + idx] = a.data[idx] * s * d[e];
        }
    }
    let mut best: f64 = 0.0;
    for f in [re.remove_mean(), im.remove_mean()] {
        let r = inverse_divergence_spec(&f.to_spectral()).to_physical();
        best = best.max(holder_norm(&r, alpha));
    }
    Ok(best)
}

/// `‖[ℛcurl, b·∇] f‖_α` for a divergence-free `b` and a vector field `f`.
pub fn cz_commutator_probe(b: &VectorField, f: &VectorField, alpha: f64) -> Result<f64> {
    let divb = crate::fields::div(b).sup_norm();
    let scale = crate::fields::holder_norm(b, 1.0).max(f64::MIN_POSITIVE);
    if divb > 1e-8 * scale {
        return Err(Error::Precondition(format!("b is not divergence-free (|div b| = {divb:.3e})")));
    }
    let first = rcurl(&advect(b, f));
    let rc = rcurl(f);
    let second = advect_tensor(b, &rc);
    Ok(holder_norm(&(&first - &second), alpha))
}

/// `(b·∇) S` componentwise for a symmetric tensor.
pub fn advect_tensor(b: &VectorField, s: &SymTensorField) -> SymTensorField {
    let grid = s.grid;
    let n3 = grid.len();
    let spec = s.to_spectral();
    let p = grid.plan();
    let len = p.spec_len();
    let mut out = SymTensorField::zeros(grid).with_time(s.time_tag);
    for c in 0..6 {
        for d in 0..3 {
            let mut ds = Spectrum::<1>::zeros(grid);
            p.for_each_mode(|idx, i, j, k| {
                ds.data[idx] = ik(p.kappa(i, j, k)[d], spec.data[c * len + idx]);
            });
            let g = ds.to_physical();
            let bd = b.comp(d);
            let dst = &mut out.data[c * n3..(c + 1) * n3];
            for x in 0..n3 {
                dst[x] += bd[x] * g.data[x];
            }
        }
    }
    out
}

/// Max relative deviation helper used across tests and reports.
pub fn rel_sup<const C: usize>(a: &Field<C>, b: &Field<C>) -> f64 {
    (a - b).sup_norm() / b.sup_norm().max(f64::MIN_POSITIVE)
}

/// Grid constructed for operators that need one, re-exported for convenience.
pub fn grid(n: usize) -> Result<Grid> {
    Grid::new(n)
}
