//! Periodic grid fields on the unit 3-torus.
//!
//! Sup norms of vector and tensor fields are the maximum over components.
//! Hölder quantities are discrete estimators and therefore lower bounds of the
//! continuum norms.

use crate::error::{Error, Result};
use crate::spectral::{plan, Plan, C64};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::Write;
use std::ops::{Add, Mul, Sub};
use std::path::Path;
use std::sync::Arc;

/// Symmetric tensor component order: 11, 12, 13, 22, 23, 33.
pub const SYM: [[usize; 3]; 3] = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];
/// Index pairs of the stored symmetric components.
pub const SYM_PAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::Grid(format!("n = {n} must be a power of two >= 16")));
        }
        Ok(Grid { n })
    }


    pub fn spacing(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn dealias_fraction(&self) -> f64 {
        2.0 / 3.0
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn plan(&self) -> Arc<Plan> {
        plan(self.n)
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> [f64; 3] {
        let n = self.n;
        let h = 1.0 / n as f64;
        [(idx / (n * n)) as f64 * h, ((idx / n) % n) as f64 * h, (idx % n) as f64 * h]
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Field<const C: usize> {
    pub grid: Grid,
    /// Component-major samples: component `c` occupies `c*N..(c+1)*N`.
    pub data: Vec<f64>,
    pub time_tag: f64,
}

pub type ScalarField = Field<1>;
pub type VectorField = Field<3>;
pub type SymTensorField = Field<6>;
/// Full 3x3 matrix field, row-major components (used for gradients).
pub type MatrixField = Field<9>;

impl<const C: usize> Field<C> {
    pub fn zeros(grid: Grid) -> Self {
        Field { grid, data: vec![0.0; C * grid.len()], time_tag: 0.0 }
    }

    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> [f64; C]) -> Self {
        let n3 = grid.len();
        let mut data = vec![0.0; C * n3];
        for idx in 0..n3 {
            let v = f(grid.coords(idx));
            for c in 0..C {
                data[c * n3 + idx] = v[c];
            }
        }
        Field { grid, data, time_tag: 0.0 }
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.time_tag = t;
        self
    }

    #[inline]
    pub fn comp(&self, c: usize) -> &[f64] {
        let n3 = self.grid.len();
        &self.data[c * n3..(c + 1) * n3]
    }

    #[inline]
    pub fn comp_mut(&mut self, c: usize) -> &mut [f64] {
        let n3 = self.grid.len();
        &mut self.data[c * n3..(c + 1) * n3]
    }

    #[inline]
    pub fn at(&self, idx: usize) -> [f64; C] {
        let n3 = self.grid.len();
        std::array::from_fn(|c| self.data[c * n3 + idx])
    }

    /// `‖f‖₀`: max over nodes and components.
    pub fn sup_norm(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn mean(&self) -> [f64; C] {
        let n3 = self.grid.len() as f64;
        std::array::from_fn(|c| self.comp(c).iter().sum::<f64>() / n3)
    }

    pub fn scale(&self, s: f64) -> Self {
        Field { grid: self.grid, data: self.data.iter().map(|v| v * s).collect(), time_tag: self.time_tag }
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: f64, other: &Self) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Field { grid: self.grid, data: self.data.iter().map(|&v| f(v)).collect(), time_tag: self.time_tag }
    }

    pub fn to_spectral(&self) -> Spectrum<C> {
        let p = self.grid.plan();
        let mut data = Vec::with_capacity(C * p.spec_len());
        for c in 0..C {
            data.extend(p.forward(self.comp(c)));
        }
        Spectrum { grid: self.grid, data }
    }

    /// Subtract the mean of each component.
    pub fn remove_mean(&self) -> Self {
        let m = self.mean();
        let mut out = self.clone();
        for c in 0..C {
            for v in out.comp_mut(c) {
                *v -= m[c];
            }
        }
        out
    }

    pub fn dump(&self, dir: &Path, name: &str) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let header = DumpHeader { name: name.to_string(), n: self.grid.n, components: C, time_tag: self.time_tag };
        std::fs::write(dir.join(format!("{name}.json")), serde_json::to_vec_pretty(&header)?)?;
        let mut f = std::io::BufWriter::new(std::fs::File::create(dir.join(format!("{name}.f64")))?);
        // component-interleaved per node, (i,j,k) order with k fastest
        let n3 = self.grid.len();
        for idx in 0..n3 {
            for c in 0..C {
                f.write_all(&self.data[c * n3 + idx].to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn load(dir: &Path, name: &str) -> Result<Self> {
        let header: DumpHeader = serde_json::from_slice(&std::fs::read(dir.join(format!("{name}.json")))?)?;
        if header.components != C {
            return Err(Error::Precondition(format!("dump has {} components, expected {C}", header.components)));
        }
        let grid = Grid::new(header.n)?;
        let bytes = std::fs::read(dir.join(format!("{name}.f64")))?;
        let n3 = grid.len();
        if bytes.len() != 8 * C * n3 {
            return Err(Error::Precondition("truncated field dump".into()));
        }
        let mut data = vec![0.0; C * n3];
        for (pos, chunk) in bytes.chunks_exact(8).enumerate() {
            let v = f64::from_le_bytes(chunk.try_into().expect("chunk of 8"));
            data[(pos % C) * n3 + pos / C] = v;
        }
        Ok(Field { grid, data, time_tag: header.time_tag })
    }
}

impl<const C: usize> Add for &Field<C> {
    type Output = Field<C>;
    fn add(self, rhs: Self) -> Field<C> {
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }
}

impl<const C: usize> Sub for &Field<C> {
    type Output = Field<C>;
    fn sub(self, rhs: Self) -> Field<C> {
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }
}

impl<const C: usize> Mul<f64> for &Field<C> {
    type Output = Field<C>;
    fn mul(self, rhs: f64) -> Field<C> {
        self.scale(rhs)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DumpHeader {
    pub name: String,
    pub n: usize,
    pub components: usize,
    pub time_tag: f64,
}

/// Fourier coefficients of a `C`-component field (half spectrum per component).
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum<const C: usize> {
    pub grid: Grid,
    pub data: Vec<C64>,
}

impl<const C: usize> Spectrum<C> {
    pub fn zeros(grid: Grid) -> Self {
        let len = grid.plan().spec_len();
        Spectrum { grid, data: vec![C64::new(0.0, 0.0); C * len] }
    }

    #[inline]
    pub fn comp(&self, c: usize) -> &[C64] {
        let l = self.data.len() / C;
        &self.data[c * l..(c + 1) * l]
    }

    #[inline]
    pub fn comp_mut(&mut self, c: usize) -> &mut [C64] {
        let l = self.data.len() / C;
        &mut self.data[c * l..(c + 1) * l]
    }

    pub fn to_physical(&self) -> Field<C> {
        let p = self.grid.plan();
        let mut data = Vec::with_capacity(C * p.phys_len());
        for c in 0..C {
            data.extend(p.inverse(self.comp(c)));
        }
        Field { grid: self.grid, data, time_tag: 0.0 }
    }

    pub fn axpy(&mut self, s: f64, other: &Self) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Spectrum { grid: self.grid, data: self.data.iter().map(|v| v * s).collect() }
    }

    /// Mean of each component (the `m = 0` coefficient).
    pub fn mean(&self) -> [f64; C] {
        std::array::from_fn(|c| self.comp(c)[0].re)
    }

    /// Sum of `|coefficient|` over the full spectrum, per component maximum.
    pub fn l1(&self) -> f64 {
        let p = self.grid.plan();
        let mut best: f64 = 0.0;
        for c in 0..C {
            let s = self.comp(c);
            let mut acc = 0.0;
            p.for_each_mode(|idx, _, _, k| acc += p.half_weight(k) * s[idx].norm());
            best = best.max(acc);
        }
        best
    }
}

// ---------------------------------------------------------------------------
// Spectral calculus

/// Apply `f(kappa) -> multiplier` mode by mode to every component.
fn multiply<const A: usize, const B: usize>(
    s: &Spectrum<A>,
    f: impl Fn([f64; 3], &[C64; A]) -> [C64; B],
) -> Spectrum<B> {
    let p = s.grid.plan();
    let len = p.spec_len();
    let mut out = Spectrum::<B>::zeros(s.grid);
    p.for_each_mode(|idx, i, j, k| {
        let inp: [C64; A] = std::array::from_fn(|c| s.data[c * len + idx]);
        let r = f(p.kappa(i, j, k), &inp);
        for (c, v) in r.iter().enumerate() {
            out.data[c * len + idx] = *v;
        }
    });
    out
}

#[inline]
pub(crate) fn ik(kappa: f64, z: C64) -> C64 {
    C64::new(-kappa * z.im, kappa * z.re)
}

pub fn grad_spec(s: &Spectrum<1>) -> Spectrum<3> {
    multiply(s, |k, f| [ik(k[0], f[0]), ik(k[1], f[0]), ik(k[2], f[0])])
}

pub fn div_spec(s: &Spectrum<3>) -> Spectrum<1> {
    multiply(s, |k, f| [ik(k[0], f[0]) + ik(k[1], f[1]) + ik(k[2], f[2])])
}

pub fn curl_spec(s: &Spectrum<3>) -> Spectrum<3> {
    multiply(s, |k, f| {
        [
            ik(k[1], f[2]) - ik(k[2], f[1]),
            ik(k[2], f[0]) - ik(k[0], f[2]),
            ik(k[0], f[1]) - ik(k[1], f[0]),
        ]
    })
}

/// Row-wise divergence of a symmetric tensor: `(div S)_i = ∂_j S_ij`.
pub fn div_tensor_spec(s: &Spectrum<6>) -> Spectrum<3> {
    multiply(s, |k, f| {
        std::array::from_fn(|i| (0..3).fold(C64::new(0.0, 0.0), |acc, j| acc + ik(k[j], f[SYM[i][j]])))
    })
}

/// Full gradient of a vector: component `3*a + b` is `∂_b v_a`.
pub fn grad_vector_spec(s: &Spectrum<3>) -> Spectrum<9> {
    multiply(s, |k, f| std::array::from_fn(|c| ik(k[c % 3], f[c / 3])))
}

pub fn laplacian_spec<const C: usize>(s: &Spectrum<C>) -> Spectrum<C> {
    multiply(s, |k, f| {
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        std::array::from_fn(|c| f[c] * (-k2))
    })
}

pub fn grad(f: &ScalarField) -> VectorField {
    grad_spec(&f.to_spectral()).to_physical().with_time(f.time_tag)
}

pub fn div(v: &VectorField) -> ScalarField {
    div_spec(&v.to_spectral()).to_physical().with_time(v.time_tag)
}

pub fn curl(v: &VectorField) -> VectorField {
    curl_spec(&v.to_spectral()).to_physical().with_time(v.time_tag)
}

pub fn div_tensor(s: &SymTensorField) -> VectorField {
    div_tensor_spec(&s.to_spectral()).to_physical().with_time(s.time_tag)
}

pub fn grad_vector(v: &VectorField) -> MatrixField {
    grad_vector_spec(&v.to_spectral()).to_physical().with_time(v.time_tag)
}

/// Symmetric outer product `a ⊗ b` symmetrized, i.e. `(a_i b_j + a_j b_i)/2`.
pub fn sym_outer(a: &VectorField, b: &VectorField) -> SymTensorField {
    let n3 = a.grid.len();
    let mut out = SymTensorField::zeros(a.grid).with_time(a.time_tag);
    for (c, &(i, j)) in SYM_PAIRS.iter().enumerate() {
        let (ai, aj, bi, bj) = (a.comp(i), a.comp(j), b.comp(i), b.comp(j));
        let dst = &mut out.data[c * n3..(c + 1) * n3];
        for x in 0..n3 {
            dst[x] = 0.5 * (ai[x] * bj[x] + aj[x] * bi[x]);
        }
    }
    out
}

/// `(a·∇) b` for vector fields.
pub fn advect(a: &VectorField, b: &VectorField) -> VectorField {
    let g = grad_vector(b);
    advect_with(a, &g)
}

/// `(a·∇) b` given the gradient of `b`.
pub fn advect_with(a: &VectorField, gb: &MatrixField) -> VectorField {
    let n3 = a.grid.len();
    let mut out = VectorField::zeros(a.grid).with_time(a.time_tag);
    for i in 0..3 {
        let dst = &mut out.data[i * n3..(i + 1) * n3];
        for j in 0..3 {
            let (aj, g) = (a.comp(j), gb.comp(3 * i + j));
            for x in 0..n3 {
                dst[x] += aj[x] * g[x];
            }
        }
    }
    out
}

/// Keep only modes inside the 2/3 rule.
pub fn dealias<const C: usize>(s: &mut Spectrum<C>) {
    let p = s.grid.plan();
    let len = p.spec_len();
    p.for_each_mode(|idx, i, j, k| {
        if !p.keep_dealiased(i, j, k) {
            for c in 0..C {
                s.data[c * len + idx] = C64::new(0.0, 0.0);
            }
        }
    });
}

// ---------------------------------------------------------------------------
// Hölder estimator

/// Displacement directions used by the seminorm estimator: one representative
/// of each of the 13 lattice lines through the origin in the 3x3x3 stencil.
pub const SHIFT_DIRECTIONS: [[i64; 3]; 13] = [
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 1, 0],
    [1, -1, 0],
    [1, 0, 1],
    [1, 0, -1],
    [0, 1, 1],
    [0, 1, -1],
    [1, 1, 1],
    [1, 1, -1],
    [1, -1, 1],
    [-1, 1, 1],
];

/// Multi-indices of order `m` (as counts per axis).
pub fn multi_indices(m: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..=m {
        for b in 0..=(m - a) {
            out.push([a, b, m - a - b]);
        }
    }
    out
}

/// Spectral derivative `D^θ` of every component.
pub fn derivative<const C: usize>(f: &Spectrum<C>, theta: [usize; 3]) -> Spectrum<C> {
    multiply(f, |k, v| {
        let mut fac = C64::new(1.0, 0.0);
        for d in 0..3 {
            for _ in 0..theta[d] {
                fac = ik(k[d], fac);
            }
        }
        std::array::from_fn(|c| v[c] * fac)
    })
}

/// `max_x |g(x+h) - g(x)| / |h|^α` over the dyadic shift sample.
pub fn holder_seminorm_samples(grid: Grid, comps: &[Vec<f64>], alpha: f64) -> f64 {
    let n = grid.n;
    let mut best: f64 = 0.0;
    for dir in SHIFT_DIRECTIONS {
        let dlen = ((dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]) as f64).sqrt();
        let mut s = 1usize;
        loop {
            let h = s as f64 * dlen / n as f64;
            if h > 0.25 + 1e-12 {
                break;
            }
            let w = h.powf(alpha);
            let sh: [usize; 3] = std::array::from_fn(|d| (dir[d] * s as i64).rem_euclid(n as i64) as usize);
            for g in comps {
                let mut m: f64 = 0.0;
                for i in 0..n {
                    let i2 = (i + sh[0]) % n;
                    for j in 0..n {
                        let j2 = (j + sh[1]) % n;
                        let r1 = (i * n + j) * n;
                        let r2 = (i2 * n + j2) * n;
                        for k in 0..n {
                            let k2 = (k + sh[2]) % n;
                            m = m.max((g[r2 + k2] - g[r1 + k]).abs());
                        }
                    }
                }
                best = best.max(m / w);
            }
            s *= 2;
        }
    }
    best
}

/// Discrete `‖f‖_s`, `s = m + α`: `Σ_{j≤m} [f]_j + [f]_{m+α}`.
///
/// `[f]_j` is the max over multi-indices of order `j` of `‖D^θ f‖₀`; the fractional
/// part is estimated on grid-aligned dyadic shifts with `|h| ≤ 1/4`. Derivatives of
/// order up to three are supported.
pub fn holder_norm<const C: usize>(f: &Field<C>, s: f64) -> f64 {
    assert!(s >= 0.0, "negative Hölder index");
    let m = s.floor() as usize;
    assert!(m <= 3, "derivatives above order three are not supported");
    let alpha = s - m as f64;
    let spec = if m > 0 { Some(f.to_spectral()) } else { None };
    let derivs = |order: usize| -> Vec<Vec<f64>> {
        if order == 0 {
            return (0..C).map(|c| f.comp(c).to_vec()).collect();
        }
        let sp = spec.as_ref().expect("spectrum present");
        let mut out = Vec::new();
        for th in multi_indices(order) {
            let d = derivative(sp, th).to_physical();
            for c in 0..C {
                out.push(d.comp(c).to_vec());
            }
        }
        out
    };
    let mut total = 0.0;
    for j in 0..=m {
        let ds = derivs(j);
        total += ds.iter().flat_map(|v| v.iter()).fold(0.0_f64, |a, b| a.max(b.abs()));
        if j == m && alpha > 0.0 {
            total += holder_seminorm_samples(f.grid, &ds, alpha);
        }
    }
    total
}

/// Seminorm `[f]_s` alone (for `s` integer: `max ‖D^θ f‖₀` over `|θ| = s`).
pub fn holder_seminorm<const C: usize>(f: &Field<C>, s: f64) -> f64 {
    let m = s.floor() as usize;
    let alpha = s - m as f64;
    let comps: Vec<Vec<f64>> = if m == 0 {
        (0..C).map(|c| f.comp(c).to_vec()).collect()
    } else {
        let sp = f.to_spectral();
        multi_indices(m)
            .into_iter()
            .flat_map(|th| {
                let d = derivative(&sp, th).to_physical();
                (0..C).map(|c| d.comp(c).to_vec()).collect::<Vec<_>>()
            })
            .collect()
    };
    if alpha == 0.0 {
        comps.iter().flat_map(|v| v.iter()).fold(0.0_f64, |a, b| a.max(b.abs()))
    } else {
        holder_seminorm_samples(f.grid, &comps, alpha)
    }
}

// ---------------------------------------------------------------------------
// Mollification

fn bump(r2: f64) -> f64 {
    if r2 < 1.0 {
        (-1.0 / (1.0 - r2)).exp()
    } else {
        0.0
    }
}

/// Spectrum of the grid-sampled kernel `φ_ℓ` with discrete mass one, scaled so that
/// convolution is pointwise multiplication.
pub fn mollifier_symbol(grid: Grid, ell: f64) -> Result<Vec<C64>> {
    let h = grid.spacing();
    if ell < 2.0 * h {
        return Err(Error::KernelUnresolved { ell, min: 2.0 * h });
    }
    if ell >= 0.25 {
        return Err(Error::Precondition(format!("mollification length {ell} must be below 1/4")));
    }
    let n = grid.n;
    let mut ker = vec![0.0; grid.len()];
    let per = |i: usize| -> f64 {
        let d = i as f64 * h;
        if d > 0.5 { d - 1.0 } else { d }
    };
    let mut mass = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (x, y, z) = (per(i) / ell, per(j) / ell, per(k) / ell);
                let v = bump(x * x + y * y + z * z);
                ker[grid.index(i, j, k)] = v;
                mass += v;
            }
        }
    }
    let p = grid.plan();
    // forward() divides by n^3; the convolution theorem needs the raw sum
    let scale = grid.len() as f64 / mass;
    Ok(p.forward(&ker).into_iter().map(|c| c * scale).collect())
}

pub fn mollify_spec<const C: usize>(s: &Spectrum<C>, ell: f64) -> Result<Spectrum<C>> {
    let sym = mollifier_symbol(s.grid, ell)?;
    let len = sym.len();
    let mut out = s.clone();
    for c in 0..C {
        for (v, w) in out.data[c * len..(c + 1) * len].iter_mut().zip(&sym) {
            *v *= w;
        }
    }
    Ok(out)
}

/// Convolution with the radial kernel `c·exp(-1/(1-|x|²))` scaled to radius `ℓ`.
pub fn mollify<const C: usize>(f: &Field<C>, ell: f64) -> Result<Field<C>> {
    Ok(mollify_spec(&f.to_spectral(), ell)?.to_physical().with_time(f.time_tag))
}

/// `‖f_ℓ g_ℓ - (fg)_ℓ‖₀` for scalar fields.
pub fn cet_commutator(f: &ScalarField, g: &ScalarField, ell: f64) -> Result<f64> {
    let fl = mollify(f, ell)?;
    let gl = mollify(g, ell)?;
    let mut fg = f.clone();
    for (a, b) in fg.data.iter_mut().zip(&g.data) {
        *a *= b;
    }
    let fgl = mollify(&fg, ell)?;
    let mut m: f64 = 0.0;
    for x in 0..f.grid.len() {
        m = m.max((fl.data[x] * gl.data[x] - fgl.data[x]).abs());
    }
    Ok(m)
}

// ---------------------------------------------------------------------------
// Time slabs

#[derive(Clone, Debug)]
pub struct TimeSlab<T> {
    pub times: Vec<f64>,
    pub slices: Vec<T>,
}

impl<T> TimeSlab<T> {
    pub fn new(times: Vec<f64>, slices: Vec<T>) -> Result<Self> {
        if times.len() != slices.len() || times.is_empty() {
            return Err(Error::Precondition("slab needs one slice per time".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Precondition("slab times must increase strictly".into()));
        }
        if times.len() > 2 {
            let dt = times[1] - times[0];
            if times.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-9 * dt.abs().max(1e-300)) {
                return Err(Error::Precondition("slab spacing must be uniform".into()));
            }
        }
        Ok(TimeSlab { times, slices })
    }

    pub fn span(&self) -> (f64, f64) {
        (self.times[0], *self.times.last().expect("nonempty slab"))
    }

    /// Bracketing slice indices and the linear weight of the upper one.
    pub fn locate(&self, t: f64) -> Option<(usize, usize, f64)> {
        let (a, b) = self.span();
        if t < a - 1e-12 * (1.0 + a.abs()) || t > b + 1e-12 * (1.0 + b.abs()) {
            return None;
        }
        if self.times.len() == 1 {
            return Some((0, 0, 0.0));
        }
        let dt = self.times[1] - self.times[0];
        let pos = ((t - a) / dt).clamp(0.0, (self.times.len() - 1) as f64);
        let lo = (pos.floor() as usize).min(self.times.len() - 2);
        Some((lo, lo + 1, pos - lo as f64))
    }
}

/// Sample a smooth function of `x ∈ [0,1)³` with given mode content (helper for tests
/// and presets): `Σ c_m sin/cos(2π m·x)`.
pub fn trig_mode(x: [f64; 3], m: [i64; 3], phase: f64) -> f64 {
    (2.0 * PI * (m[0] as f64 * x[0] + m[1] as f64 * x[1] + m[2] as f64 * x[2]) + phase).cos()
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in pts {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}
