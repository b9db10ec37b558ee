//! FFT plumbing on the periodic grid.
//!
//! Physical arrays are `n^3` reals indexed `(i*n + j)*n + k` with `k` fastest and
//! node `(i,j,k)` at `x = (i,j,k)/n`. Spectral arrays keep the half spectrum along
//! the last axis: `n * n * (n/2+1)` complex values indexed `(i*n + j)*nh + k`.
//! The forward transform is normalized so the stored numbers are Fourier
//! coefficients: a constant `c` maps to `c` at `m = 0`.

use num_complex::Complex64;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

pub type C64 = Complex64;

pub struct Plan {
    pub n: usize,
    pub nh: usize,
    r2c: Arc<dyn RealToComplex<f64>>,
    c2r: Arc<dyn ComplexToReal<f64>>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    /// Integer wavenumber per full axis index.
    pub m_full: Vec<i64>,
    /// Derivative wavenumber `2 pi m`, zero at Nyquist.
    pub kappa_full: Vec<f64>,
    pub kappa_half: Vec<f64>,
}

static PLANS: OnceLock<Mutex<HashMap<usize, Arc<Plan>>>> = OnceLock::new();

/// Cached plan for grid size `n`.
pub fn plan(n: usize) -> Arc<Plan> {
    let cache = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("fft plan cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(Plan::new(n)))
        .clone()
}

impl Plan {
    fn new(n: usize) -> Self {
        let mut rp = RealFftPlanner::<f64>::new();
        let mut cp = FftPlanner::<f64>::new();
        let m_full: Vec<i64> = (0..n).map(|i| wavenumber(i, n)).collect();
        let kappa = |m: i64| {
            if 2 * m.unsigned_abs() as usize == n {
                0.0
            } else {
                2.0 * PI * m as f64
            }
        };
        let kappa_full = m_full.iter().map(|&m| kappa(m)).collect();
        let kappa_half = (0..n / 2 + 1).map(|k| kappa(k as i64)).collect();
        Plan {
            n,
            nh: n / 2 + 1,
            r2c: rp.plan_fft_forward(n),
            c2r: rp.plan_fft_inverse(n),
            fwd: cp.plan_fft_forward(n),
            inv: cp.plan_fft_inverse(n),
            m_full,
            kappa_full,
            kappa_half,
        }
    }

    pub fn spec_len(&self) -> usize {
        self.n * self.n * self.nh
    }

    pub fn phys_len(&self) -> usize {
        self.n * self.n * self.n
    }

    /// Integer wavevector of spectral index `(i, j, k)`.
    #[inline]
    pub fn m(&self, i: usize, j: usize, k: usize) -> [i64; 3] {
        [self.m_full[i], self.m_full[j], k as i64]
    }

    /// Derivative wavevector (Nyquist components zeroed).
    #[inline]
    pub fn kappa(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        [self.kappa_full[i], self.kappa_full[j], self.kappa_half[k]]
    }

    /// True when every `|m_d| < n/3` (the 2/3 rule).
    #[inline]
    pub fn keep_dealiased(&self, i: usize, j: usize, k: usize) -> bool {
        let c = self.n as i64;
        let m = self.m(i, j, k);
        m.iter().all(|&v| 3 * v.abs() < c)
    }

    /// Visit every spectral index with its flat offset.
    #[inline]
    pub fn for_each_mode(&self, mut f: impl FnMut(usize, usize, usize, usize)) {
        let (n, nh) = (self.n, self.nh);
        for i in 0..n {
            for j in 0..n {
                let base = (i * n + j) * nh;
                for k in 0..nh {
                    f(base + k, i, j, k);
                }
            }
        }
    }

    pub fn forward(&self, real: &[f64]) -> Vec<C64> {
        let (n, nh) = (self.n, self.nh);
        assert_eq!(real.len(), n * n * n);
        let mut out = vec![C64::new(0.0, 0.0); n * n * nh];
        let mut inbuf = self.r2c.make_input_vec();
        let mut scratch = self.r2c.make_scratch_vec();
        for row in 0..n * n {
            inbuf.copy_from_slice(&real[row * n..(row + 1) * n]);
            self.r2c
                .process_with_scratch(&mut inbuf, &mut out[row * nh..(row + 1) * nh], &mut scratch)
                .expect("r2c length mismatch");
        }
        self.axes(&mut out, &self.fwd);
        let s = 1.0 / (n * n * n) as f64;
        for v in out.iter_mut() {
            *v *= s;
        }
        out
    }

    pub fn inverse(&self, spec: &[C64]) -> Vec<f64> {
        let (n, nh) = (self.n, self.nh);
        assert_eq!(spec.len(), n * n * nh);
        let mut work = spec.to_vec();
        self.axes(&mut work, &self.inv);
        let mut out = vec![0.0; n * n * n];
        let mut scratch = self.c2r.make_scratch_vec();
        for row in 0..n * n {
            let line = &mut work[row * nh..(row + 1) * nh];
            line[0].im = 0.0;
            line[nh - 1].im = 0.0;
            self.c2r
                .process_with_scratch(line, &mut out[row * n..(row + 1) * n], &mut scratch)
                .expect("c2r length mismatch");
        }
        out
    }

    /// Complex transforms along the `j` then `i` axes, in place.
    fn axes(&self, data: &mut [C64], fft: &Arc<dyn Fft<f64>>) {
        let (n, nh) = (self.n, self.nh);
        let mut buf = vec![C64::new(0.0, 0.0); n * nh];
        let mut scratch = vec![C64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        // j axis: for fixed i the slab is [j][k]
        for i in 0..n {
            let slab = &mut data[i * n * nh..(i + 1) * n * nh];
            for j in 0..n {
                for k in 0..nh {
                    buf[k * n + j] = slab[j * nh + k];
                }
            }
            fft.process_with_scratch(&mut buf, &mut scratch);
            for j in 0..n {
                for k in 0..nh {
                    slab[j * nh + k] = buf[k * n + j];
                }
            }
        }
        // i axis: for fixed j gather [i][k]
        for j in 0..n {
            for i in 0..n {
                let src = (i * n + j) * nh;
                for k in 0..nh {
                    buf[k * n + i] = data[src + k];
                }
            }
            fft.process_with_scratch(&mut buf, &mut scratch);
            for i in 0..n {
                let dst = (i * n + j) * nh;
                for k in 0..nh {
                    data[dst + k] = buf[k * n + i];
                }
            }
        }
    }

    /// Weight of a half-spectrum entry in full-spectrum sums (conjugate pairs).
    #[inline]
    pub fn half_weight(&self, k: usize) -> f64 {
        if k == 0 || 2 * k == self.n {
            1.0
        } else {
            2.0
        }
    }
}

/// Signed integer wavenumber of axis index `idx`; Nyquist maps to `+n/2`.
#[inline]
pub fn wavenumber(idx: usize, n: usize) -> i64 {
    if idx <= n / 2 {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}

/// Flat spectral offset of integer wavevector `m`, if representable.
/// Negative `m[2]` is folded through conjugate symmetry; the flag reports it.
pub fn mode_index(n: usize, m: [i64; 3]) -> Option<(usize, bool)> {
    let nh = n / 2 + 1;
    let half = (n / 2) as i64;
    let (mm, conj) = if m[2] < 0 { ([-m[0], -m[1], -m[2]], true) } else { (m, false) };
    if mm.iter().any(|v| v.abs() > half) || mm[2] >= nh as i64 {
        return None;
    }
    let wrap = |v: i64| -> usize { if v < 0 { (v + n as i64) as usize } else { v as usize } };
    Some(((wrap(mm[0]) * n + wrap(mm[1])) * nh + mm[2] as usize, conj))
}
