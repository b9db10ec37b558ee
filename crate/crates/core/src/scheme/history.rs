//! Lazily evaluated time histories `t ↦ (v, R, p)`.

use crate::calculus::pressure_from_tensor_spec;
use crate::euler::er_residual_point;
use crate::fields::{sym_outer, Grid, Spectrum, SymTensorField, VectorField};
use crate::Result;

/// One level of the scheme. Every level evaluates its fields on demand.
pub trait History: Send + Sync {
    fn grid(&self) -> Grid;

    /// Length of the time interval `[0, T]`.
    fn horizon(&self) -> f64;

    fn velocity_spec(&self, t: f64) -> Result<Spectrum<3>>;

    /// `None` means the stress vanishes identically at `t`.
    fn stress_spec(&self, t: f64) -> Result<Option<Spectrum<6>>>;

    fn state(&self, t: f64) -> Result<(Spectrum<3>, Option<Spectrum<6>>)> {
        Ok((self.velocity_spec(t)?, self.stress_spec(t)?))
    }
}

/// Mean-zero pressure with `−Δp = div div(v⊗v − R)`.
pub fn pressure_of(v: &VectorField, r: Option<&SymTensorField>) -> Spectrum<1> {
    let mut t = sym_outer(v, v);
    if let Some(r) = r {
        t.axpy(-1.0, r);
    }
    pressure_from_tensor_spec(&t.to_spectral())
}

/// Sup norm of the Euler–Reynolds residual at `t`, with `∂ₜv` by a centred
/// difference of step `h`.
pub fn residual_at(h: &dyn History, t: f64, dt: f64) -> Result<f64> {
    let vm = h.velocity_spec(t - dt)?.to_physical();
    let vp = h.velocity_spec(t + dt)?.to_physical();
    let (v, r) = h.state(t)?;
    let v = v.to_physical();
    let r = r.map(|s| s.to_physical()).unwrap_or_else(|| SymTensorField::zeros(v.grid));
    let p = pressure_of(&v, Some(&r)).to_physical();
    Ok(er_residual_point(&vm, &v, &vp, dt, &r, &p))
}

/// Uniform samples of `[a, b]`, endpoints included.
pub fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    if count < 2 {
        return vec![a];
    }
    (0..count).map(|i| a + (b - a) * i as f64 / (count - 1) as f64).collect()
}
