//! Mikado flows: stationary pipe flows `W(R, ξ) = Σ_j Γ_j(R) ψ_j(ξ) ξ_j` on the
//! `2π`-periodic ξ-torus, sampled through `ξ = 2πx` on a unit-torus grid.
//!
//! Directions are the six face diagonals `(e_a ± e_b)/√2`. For that basis
//! `Γ²_{ab±}(R) = (R_aa + R_bb − R_cc)/2 ± R_ab`, which is `1/2` at the identity.

use crate::error::{Error, Result};
use crate::fields::{div_spec, div_tensor_spec, Grid, ScalarField, SymTensorField, VectorField, SYM_PAIRS};
use crate::linalg::{cross, dot, frob_dist_id};
use crate::spectral::{mode_index, C64};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Frobenius radius around `Id` of the neighbourhood on which `Γ² > 0` is used.
pub const NEIGHBOURHOOD_RADIUS: f64 = 0.44;
pub const REFERENCE_N: usize = 128;
pub const DEFAULT_KMAX: i64 = 21;
/// Default exponent of the `(1 − s²)^p` tube profile.
pub const PROFILE_POWER: i32 = 8;
/// Centre-line offsets in thirds. They realise the largest separation `1/(3√3)`
/// found by a search over the lattice `(ℤ/3)³`.
const OFFSETS: [[i64; 3]; 6] = [[0, 0, 0], [0, 0, 1], [0, 0, 2], [1, 0, 2], [0, 1, 1], [0, 2, 0]];

/// `(a, b, sign)`: direction `(e_a + sign·e_b)/√2`; the third axis is `3 − a − b`.
const PAIRS: [(usize, usize, i64); 6] = [(0, 1, 1), (0, 1, -1), (1, 2, 1), (1, 2, -1), (0, 2, 1), (0, 2, -1)];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Mode {
    pub k: [i64; 3],
    /// `ψ̂_j(k)` for every direction whose plane `k·d_j = 0` contains `k`.
    pub psi: Vec<(usize, C64)>,
    /// Fourier coefficients of `ψ_j²` on the same planes.
    pub psi2: Vec<(usize, C64)>,
}

impl Mode {
    pub fn norm(&self) -> f64 {
        (self.k.iter().map(|v| (v * v) as f64).sum::<f64>()).sqrt()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MikadoFamily {
    /// Integer direction vectors `d_j`; `ξ_j = d_j/|d_j|`.
    pub directions: [[i64; 3]; 6],
    pub xi: [[f64; 3]; 6],
    /// Line offsets in unit-torus coordinates.
    pub offsets: [[f64; 3]; 6],
    pub radius: f64,
    /// Smallest distance between tube centre lines (including periodic copies).
    pub line_distance: f64,
    /// Profile `ψ_j = amp_j (1 − s²)^p (1 − c_j s²)`, `s = ρ/r`.
    pub profile_c: [f64; 6],
    pub profile_amp: [f64; 6],
    pub profile_power: i32,
    pub n_ref: usize,
    pub kmax: i64,
    pub neighbourhood_radius: f64,
    pub positivity_margin: f64,
    /// Set when the neighbourhood is smaller than the operator-norm ball of radius 1/2.
    pub shrunk: bool,
    /// Every nonzero on-plane mode of the reference grid, sorted by `(|k|², k)`.
    #[serde(skip)]
    pub modes: Vec<Mode>,
}

/// `Γ_j²(R)` for the six face diagonals.
pub fn gamma_squared(r: &[f64; 6]) -> [f64; 6] {
    let m = crate::linalg::sym_to_m3(r);
    std::array::from_fn(|j| {
        let (a, b, s) = PAIRS[j];
        let c = 3 - a - b;
        0.5 * (m[a][a] + m[b][b] - m[c][c]) + s as f64 * m[a][b]
    })
}

/// `Γ_j(R)`; faults outside the positivity region.
pub fn gamma(r: &[f64; 6]) -> Result<[f64; 6]> {
    let g2 = gamma_squared(r);
    let min = g2.iter().cloned().fold(f64::INFINITY, f64::min);
    if min <= 0.0 {
        return Err(Error::Positivity { r: *r, min });
    }
    Ok(g2.map(f64::sqrt))
}

/// Lower bound of `Γ²` on the Frobenius ball of radius `rho`: `1/2 − ρ√5/2`.
pub fn certified_margin(rho: f64) -> f64 {
    0.5 - rho * 5f64.sqrt() / 2.0
}

pub fn in_neighbourhood(r: &[f64; 6]) -> bool {
    frob_dist_id(r) <= NEIGHBOURHOOD_RADIUS
}

/// Uniform sample from the Frobenius ball of radius `rho` around `Id` in `Sym(3)`.
pub fn sample_in_ball(rho: f64, rng: &mut impl Rng) -> [f64; 6] {
    loop {
        // coordinates orthonormal for the Frobenius inner product
        let z: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n2: f64 = z.iter().map(|v| v * v).sum();
        if n2 > 1.0 || n2 == 0.0 {
            continue;
        }
        let s = rho;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        return [1.0 + s * z[0], s * h * z[1], s * h * z[2], 1.0 + s * z[3], s * h * z[4], 1.0 + s * z[5]];
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PositivityScan {
    pub radius: f64,
    pub samples: usize,
    pub min_gamma_sq: f64,
    pub worst: [f64; 6],
}

/// Rejection scan of `min_j Γ_j²` over random `R` in the Frobenius ball.
pub fn positivity_scan(rho: f64, samples: usize, seed: u64) -> PositivityScan {
    let mut rng = crate::random::rng(seed);
    let mut out = PositivityScan { radius: rho, samples, min_gamma_sq: f64::INFINITY, worst: [1.0, 0.0, 0.0, 1.0, 0.0, 1.0] };
    for _ in 0..samples {
        let r = sample_in_ball(rho, &mut rng);
        let m = gamma_squared(&r).iter().cloned().fold(f64::INFINITY, f64::min);
        if m < out.min_gamma_sq {
            out.min_gamma_sq = m;
            out.worst = r;
        }
    }
    out
}

/// Distance from `x` to the periodic line family `offset + ℝ d_j + ℤ³`.
fn line_distance_sq(j: usize, offset: &[f64; 3], x: &[f64; 3]) -> f64 {
    let (a, b, s) = PAIRS[j];
    let c = 3 - a - b;
    let y: [f64; 3] = std::array::from_fn(|d| x[d] - offset[d]);
    let t = y[a] - s as f64 * y[b];
    let t = t - t.round();
    let z = y[c] - y[c].round();
    0.5 * t * t + z * z
}

/// Smallest distance between the line families `i` and `j` over integer shifts.
fn pair_distance(di: &[i64; 3], pi: &[f64; 3], dj: &[i64; 3], pj: &[f64; 3]) -> f64 {
    let d1 = di.map(|v| v as f64);
    let d2 = dj.map(|v| v as f64);
    let n = cross(&d1, &d2);
    let nn = dot(&n, &n).sqrt();
    let mut best = f64::INFINITY;
    for z0 in -2..=2 {
        for z1 in -2..=2 {
            for z2 in -2..=2 {
                let dp = [pj[0] - pi[0] + z0 as f64, pj[1] - pi[1] + z1 as f64, pj[2] - pi[2] + z2 as f64];
                best = best.min(dot(&dp, &n).abs() / nn);
            }
        }
    }
    best
}

fn profile_raw(s2: f64, power: i32) -> (f64, f64) {
    let base = (1.0 - s2).powi(power);
    (base, base * s2)
}

impl MikadoFamily {
    /// Build the family on the reference grid with default truncation.
    pub fn standard() -> Result<Self> {
        Self::build(REFERENCE_N, DEFAULT_KMAX, None)
    }

    /// `radius = None` uses `0.45 ×` the smallest centre-line distance.
    pub fn build(n_ref: usize, kmax: i64, radius: Option<f64>) -> Result<Self> {
        Self::build_with_profile(n_ref, kmax, radius, PROFILE_POWER)
    }

    pub fn build_with_profile(n_ref: usize, kmax: i64, radius: Option<f64>, power: i32) -> Result<Self> {
        if kmax < 1 || 4 * kmax >= n_ref as i64 {
            return Err(Error::Precondition(format!("kmax = {kmax} needs 0 < 4 kmax < n_ref = {n_ref}")));
        }
        let grid = Grid::new(n_ref)?;
        let directions: [[i64; 3]; 6] = std::array::from_fn(|j| {
            let (a, b, s) = PAIRS[j];
            let mut d = [0i64; 3];
            d[a] = 1;
            d[b] = s;
            d
        });
        let xi = directions.map(|d| d.map(|v| v as f64 / 2f64.sqrt()));
        let offsets = OFFSETS.map(|p| p.map(|v| v as f64 / 3.0));
        let mut dmin = std::f64::consts::FRAC_1_SQRT_2; // spacing of parallel copies
        for i in 0..6 {
            for j in i + 1..6 {
                dmin = dmin.min(pair_distance(&directions[i], &offsets[i], &directions[j], &offsets[j]));
            }
        }
        let r = radius.unwrap_or(0.45 * dmin);
        if 2.0 * r >= dmin {
            return Err(Error::TubesIntersect { distance: dmin, diameter: 2.0 * r });
        }
        // discrete profile constants: grid mean 0, grid mean square 1
        let n3 = grid.len();
        let mut profile_c = [0.0; 6];
        let mut profile_amp = [0.0; 6];
        for j in 0..6 {
            let (mut s0, mut s1) = (0.0, 0.0);
            for idx in 0..n3 {
                let s2 = line_distance_sq(j, &offsets[j], &grid.coords(idx)) / (r * r);
                if s2 < 1.0 {
                    let (b, bs) = profile_raw(s2, power);
                    s0 += b;
                    s1 += bs;
                }
            }
            let c = s0 / s1;
            let mut sq = 0.0;
            for idx in 0..n3 {
                let s2 = line_distance_sq(j, &offsets[j], &grid.coords(idx)) / (r * r);
                if s2 < 1.0 {
                    let (b, bs) = profile_raw(s2, power);
                    sq += (b - c * bs).powi(2);
                }
            }
            profile_c[j] = c;
            profile_amp[j] = (n3 as f64 / sq).sqrt();
        }
        let rho = NEIGHBOURHOOD_RADIUS;
        let margin = certified_margin(rho);
        if margin <= 0.0 {
            return Err(Error::Positivity { r: [1.0 + rho, 0.0, 0.0, 1.0, 0.0, 1.0], min: margin });
        }
        let mut fam = MikadoFamily {
            directions,
            xi,
            offsets,
            radius: r,
            line_distance: dmin,
            profile_c,
            profile_amp,
            profile_power: power,
            n_ref,
            kmax,
            neighbourhood_radius: rho,
            positivity_margin: margin,
            shrunk: true,
            modes: Vec::new(),
        };
        fam.modes = fam.compute_modes()?;
        Ok(fam)
    }

    /// `ψ_j` on the reference grid.
    pub fn psi(&self, j: usize) -> ScalarField {
        let grid = Grid::new(self.n_ref).expect("reference grid");
        let (r, c, a, off) = (self.radius, self.profile_c[j], self.profile_amp[j], self.offsets[j]);
        let power = self.profile_power;
        ScalarField::from_fn(grid, |x| {
            let s2 = line_distance_sq(j, &off, &x) / (r * r);
            if s2 < 1.0 {
                let (b, bs) = profile_raw(s2, power);
                [a * (b - c * bs)]
            } else {
                [0.0]
            }
        })
    }

    /// Every mode of the reference grid lying on some plane `k·d_j ≡ 0 (mod n)`.
    fn compute_modes(&self) -> Result<Vec<Mode>> {
        let grid = Grid::new(self.n_ref)?;
        let p = grid.plan();
        let half = (self.n_ref / 2) as i64;
        let mut table: std::collections::BTreeMap<[i64; 3], Mode> = std::collections::BTreeMap::new();
        for j in 0..6 {
            let psi = self.psi(j);
            let sp = psi.to_spectral();
            let sq = psi.map(|v| v * v).to_spectral();
            let d = self.directions[j];
            p.for_each_mode(|idx, a, b, c| {
                let k = p.m(a, b, c);
                // modulo n so that Nyquist aliases of the plane are kept too
                if k == [0, 0, 0] || (k[0] * d[0] + k[1] * d[1] + k[2] * d[2]).rem_euclid(2 * half) != 0 {
                    return;
                }
                let (z, z2) = (sp.data[idx], sq.data[idx]);
                let e = table.entry(k).or_insert_with(|| Mode { k, psi: Vec::new(), psi2: Vec::new() });
                e.psi.push((j, z));
                e.psi2.push((j, z2));
                if k[2] > 0 {
                    let nk = k.map(|v| -v);
                    let e = table.entry(nk).or_insert_with(|| Mode { k: nk, psi: Vec::new(), psi2: Vec::new() });
                    e.psi.push((j, z.conj()));
                    e.psi2.push((j, z2.conj()));
                }
            });
        }
        let mut modes: Vec<Mode> = table.into_values().collect();
        modes.sort_by_key(|m| (m.k.iter().map(|v| v * v).sum::<i64>(), m.k));
        Ok(modes)
    }

    /// Modes with `|k| ≤ kmax` whose first nonzero component is positive.
    pub fn half_modes_upto(&self, kmax: i64) -> impl Iterator<Item = &Mode> {
        self.modes_upto(kmax).filter(|m| m.k.iter().find(|v| **v != 0).is_some_and(|v| *v > 0))
    }

    /// Retained modes with `|k| ≤ kmax`.
    pub fn modes_upto(&self, kmax: i64) -> impl Iterator<Item = &Mode> {
        let k2 = kmax * kmax;
        let end = self.modes.partition_point(|m| m.k.iter().map(|v| v * v).sum::<i64>() <= k2);
        self.modes[..end].iter()
    }

    /// `W(R, ·)` on the reference grid.
    pub fn velocity(&self, r: &[f64; 6]) -> Result<VectorField> {
        let g = gamma(r)?;
        let grid = Grid::new(self.n_ref)?;
        let mut w = VectorField::zeros(grid);
        let n3 = grid.len();
        for j in 0..6 {
            let p = self.psi(j);
            for d in 0..3 {
                let coef = g[j] * self.xi[j][d];
                if coef == 0.0 {
                    continue;
                }
                for x in 0..n3 {
                    w.data[d * n3 + x] += coef * p.data[x];
                }
            }
        }
        Ok(w)
    }

    /// `W(R, ·)` resynthesized from the modes `|k| ≤ kmax` on the reference grid.
    pub fn resynthesize(&self, r: &[f64; 6], kmax: i64) -> Result<VectorField> {
        let grid = Grid::new(self.n_ref)?;
        let p = grid.plan();
        let len = p.spec_len();
        let mut s = crate::fields::Spectrum::<3>::zeros(grid);
        for m in self.modes_upto(kmax) {
            if m.k[2] < 0 {
                continue;
            }
            let (idx, _) = mode_index(self.n_ref, m.k).expect("mode inside the grid");
            let a = self.coefficient(m, r)?;
            for d in 0..3 {
                s.data[d * len + idx] = a[d];
            }
        }
        Ok(s.to_physical())
    }

    /// `a_k(R) A_k = Σ_j Γ_j(R) ψ̂_j(k) ξ_j`.
    pub fn coefficient(&self, m: &Mode, r: &[f64; 6]) -> Result<[C64; 3]> {
        let g = gamma(r)?;
        let mut out = [C64::new(0.0, 0.0); 3];
        for &(j, z) in &m.psi {
            for d in 0..3 {
                out[d] += z * (g[j] * self.xi[j][d]);
            }
        }
        Ok(out)
    }

    /// `C_k(R) = Σ_j Γ_j² (ψ_j²)^(k) ξ_j ⊗ ξ_j` in symmetric storage.
    pub fn stress_coefficient(&self, m: &Mode, r: &[f64; 6]) -> [C64; 6] {
        let g2 = gamma_squared(r);
        let mut out = [C64::new(0.0, 0.0); 6];
        for &(j, z) in &m.psi2 {
            for (c, &(a, b)) in SYM_PAIRS.iter().enumerate() {
                out[c] += z * (g2[j] * self.xi[j][a] * self.xi[j][b]);
            }
        }
        out
    }

    pub fn fourier_data(&self, r: &[f64; 6]) -> Result<MikadoFourier> {
        let mut entries = Vec::new();
        let mut worst_a: f64 = 0.0;
        let mut worst_c: f64 = 0.0;
        for m in self.modes_upto(self.kmax) {
            let w = self.coefficient(m, r)?;
            let a = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let dir = if a > 0.0 { w.map(|z| z / a) } else { [C64::new(0.0, 0.0); 3] };
            let kf = m.k.map(|v| v as f64);
            let kn = dot(&kf, &kf).sqrt();
            let ak = (dir[0] * kf[0] + dir[1] * kf[1] + dir[2] * kf[2]).norm() / kn;
            let c = self.stress_coefficient(m, r);
            let ck = (0..3)
                .map(|i| (0..3).map(|j| c[crate::fields::SYM[i][j]] * kf[j]).sum::<C64>().norm())
                .fold(0.0_f64, f64::max)
                / kn;
            worst_a = worst_a.max(ak);
            worst_c = worst_c.max(ck);
            entries.push(FourierEntry { k: m.k, a_k: a, dir_k: dir, c_k: c });
        }
        Ok(MikadoFourier { r: *r, entries, max_a_dot_k: worst_a, max_c_dot_k: worst_c })
    }

    /// `C̄` over the given sample of `R` (plus `Id`) and `|k| ≤ kmax`, with a certified
    /// upper bound from `Γ_j ≤ (1/2 + ρ√5/2)^{1/2}` on the whole neighbourhood.
    pub fn geometric_constants_with(&self, kmax: i64, samples: &[[f64; 6]]) -> Result<GeometricConstants> {
        let id = [1.0, 0.0, 0.0, 1.0, 0.0, 1.0];
        let mut cbar: f64 = 0.0;
        let mut cert: f64 = 0.0;
        let gmax = (0.5 + self.neighbourhood_radius * 5f64.sqrt() / 2.0).sqrt();
        let gammas: Vec<[f64; 6]> = std::iter::once(&id).chain(samples.iter()).map(gamma).collect::<Result<_>>()?;
        for m in self.modes_upto(kmax) {
            let k5 = m.norm().powi(5);
            for g in &gammas {
                let mut w = [C64::new(0.0, 0.0); 3];
                for &(j, z) in &m.psi {
                    for d in 0..3 {
                        w[d] += z * (g[j] * self.xi[j][d]);
                    }
                }
                let a = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                cbar = cbar.max(a * k5);
            }
            let bound: f64 = m.psi.iter().map(|(_, z)| z.norm()).sum::<f64>() * gmax;
            cert = cert.max(bound * k5);
        }
        let lattice = lattice_sum(kmax);
        let tail = tail_bound(kmax);
        Ok(GeometricConstants {
            kmax,
            c_bar: cbar,
            c_bar_certified: cert,
            lattice_sum: lattice,
            lattice_tail: tail,
            m: 64.0 * cbar * (lattice + tail),
            m_truncated: 64.0 * cbar * lattice,
            m_tail: 64.0 * cbar * tail,
        })
    }

    /// Geometric constants from a fixed, seeded sample of 256 points of the neighbourhood.
    pub fn geometric_constants(&self, kmax: i64) -> Result<GeometricConstants> {
        let mut rng = crate::random::rng(0x4d1c);
        let samples: Vec<[f64; 6]> = (0..256).map(|_| sample_in_ball(self.neighbourhood_radius, &mut rng)).collect();
        self.geometric_constants_with(kmax, &samples)
    }

    /// Log-log slope of the shell envelope `max_{|k|∈[s, s+1)} |a_k(R)|` over `[k_lo, k_hi]`.
    pub fn decay_exponent(&self, r: &[f64; 6], k_lo: i64, k_hi: i64) -> Result<f64> {
        let mut env = vec![0.0_f64; (k_hi + 1) as usize];
        for m in self.modes_upto(k_hi) {
            let s = m.norm().floor() as usize;
            if (s as i64) < k_lo {
                continue;
            }
            let w = self.coefficient(m, r)?;
            let a = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            env[s.min(k_hi as usize)] = env[s.min(k_hi as usize)].max(a);
        }
        let pts: Vec<(f64, f64)> = (k_lo..=k_hi)
            .filter(|&s| env[s as usize] > 0.0)
            .map(|s| ((s as f64 + 0.5).ln(), env[s as usize].ln()))
            .collect();
        Ok(-crate::fields::fit_slope(&pts))
    }
}

impl MikadoFamily {
    /// Bound on `‖W(R,·) − Σ_{|k|≤K} a_k A_k e^{ik·ξ}‖₀` from the measured decay
    /// `C₆ = max_{|k|>K} |a_k||k|⁶`, summed over the six planes of modes.
    pub fn resynthesis_tail_bound(&self, r: &[f64; 6], kmax: i64) -> Result<f64> {
        let k2 = kmax * kmax;
        let mut c6: f64 = 0.0;
        for m in self.modes.iter().filter(|m| m.k.iter().map(|v| v * v).sum::<i64>() > k2) {
            let w = self.coefficient(m, r)?;
            let a = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            c6 = c6.max(a * m.norm().powi(6));
        }
        // each plane lattice has cells of area √2 and half-diagonal c = √3/2
        let c = 3f64.sqrt() / 2.0;
        let u = kmax as f64 - 2.0 * c;
        if u <= 0.0 {
            return Ok(f64::INFINITY);
        }
        let plane = 2.0 * PI * (1.0 / (4.0 * u.powi(4)) + c / (5.0 * u.powi(5))) / 2f64.sqrt();
        Ok(6.0 * c6 * plane)
    }
}

/// `Σ_{0<|k|≤K} |k|⁻⁴` over `ℤ³`.
pub fn lattice_sum(kmax: i64) -> f64 {
    let mut s = 0.0;
    for a in -kmax..=kmax {
        for b in -kmax..=kmax {
            for c in -kmax..=kmax {
                let k2 = a * a + b * b + c * c;
                if k2 != 0 && k2 <= kmax * kmax {
                    s += 1.0 / (k2 * k2) as f64;
                }
            }
        }
    }
    s
}

/// Bound on `Σ_{|k|>K} |k|⁻⁴` by comparison with `∫(|x| − √3/2)⁻⁴` outside `|x| = K − √3/2`.
pub fn tail_bound(kmax: i64) -> f64 {
    let c = 3f64.sqrt() / 2.0;
    let u = kmax as f64 - 2.0 * c;
    4.0 * PI * (1.0 / u + c / (u * u) + c * c / (3.0 * u * u * u))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FourierEntry {
    pub k: [i64; 3],
    pub a_k: f64,
    pub dir_k: [C64; 3],
    pub c_k: [C64; 6],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MikadoFourier {
    pub r: [f64; 6],
    pub entries: Vec<FourierEntry>,
    pub max_a_dot_k: f64,
    pub max_c_dot_k: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeometricConstants {
    pub kmax: i64,
    pub c_bar: f64,
    pub c_bar_certified: f64,
    pub lattice_sum: f64,
    pub lattice_tail: f64,
    /// `64 C̄ (Σ_{|k|≤K}|k|⁻⁴ + tail)`: an upper value for the full lattice sum.
    pub m: f64,
    pub m_truncated: f64,
    pub m_tail: f64,
}

/// `(ik × A)/|k|²`: curl_ξ of this times `e^{ik·ξ}` is `A e^{ik·ξ}` when `A·k = 0`.
pub fn potential_form(a: [C64; 3], k: [i64; 3]) -> Result<[C64; 3]> {
    let k2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
    if k2 == 0.0 {
        return Err(Error::Domain("potential form needs k ≠ 0".into()));
    }
    let kf = k.map(|v| v as f64);
    let i = C64::new(0.0, 1.0);
    Ok([
        i * (a[2] * kf[1] - a[1] * kf[2]) / k2,
        i * (a[0] * kf[2] - a[2] * kf[0]) / k2,
        i * (a[1] * kf[0] - a[0] * kf[1]) / k2,
    ])
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteRecord {
    pub r: [f64; 6],
    pub mean_w: f64,
    pub second_moment_error: f64,
    pub div_w: f64,
    pub div_ww: f64,
    pub a_dot_k: f64,
    pub c_dot_k: f64,
}

/// Grid identities of `W(R, ·)` on the reference grid (derivatives in ξ units).
pub fn check_identities(fam: &MikadoFamily, r: &[f64; 6]) -> Result<SuiteRecord> {
    let w = fam.velocity(r)?;
    let mean = w.mean();
    let mean_w = mean.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
    let ww = crate::fields::sym_outer(&w, &w);
    let m2 = ww.mean();
    let second_moment_error = (0..6).map(|c| (m2[c] - r[c]).abs()).fold(0.0, f64::max);
    let scale = 1.0 / (2.0 * PI);
    let div_w = div_spec(&w.to_spectral()).to_physical().sup_norm() * scale;
    let div_ww = div_tensor_spec(&ww.to_spectral()).to_physical().sup_norm() * scale;
    let fd = fam.fourier_data(r)?;
    Ok(SuiteRecord { r: *r, mean_w, second_moment_error, div_w, div_ww, a_dot_k: fd.max_a_dot_k, c_dot_k: fd.max_c_dot_k })
}

/// Largest pointwise product `|ψ_i ψ_j|`, `i ≠ j`, on the reference grid.
pub fn overlap(fam: &MikadoFamily) -> f64 {
    let psis: Vec<ScalarField> = (0..6).map(|j| fam.psi(j)).collect();
    let n3 = psis[0].grid.len();
    let mut worst: f64 = 0.0;
    for x in 0..n3 {
        for i in 0..6 {
            for j in i + 1..6 {
                worst = worst.max((psis[i].data[x] * psis[j].data[x]).abs());
            }
        }
    }
    worst
}

/// Discrete Gram matrix `⟨ψ_i ψ_j⟩` on the reference grid.
pub fn gram(fam: &MikadoFamily) -> [[f64; 6]; 6] {
    let psis: Vec<ScalarField> = (0..6).map(|j| fam.psi(j)).collect();
    let n3 = psis[0].grid.len() as f64;
    std::array::from_fn(|i| {
        std::array::from_fn(|j| psis[i].data.iter().zip(&psis[j].data).map(|(a, b)| a * b).sum::<f64>() / n3)
    })
}

/// Symmetric tensor field `Σ_j Γ_j² ψ_j² ξ_j⊗ξ_j − R` helper for tests.
pub fn stress_fluctuation(fam: &MikadoFamily, r: &[f64; 6]) -> Result<SymTensorField> {
    let w = fam.velocity(r)?;
    let mut ww = crate::fields::sym_outer(&w, &w);
    let n3 = ww.grid.len();
    for c in 0..6 {
        for x in 0..n3 {
            ww.data[c * n3 + x] -= r[c];
        }
    }
    Ok(ww)
}
