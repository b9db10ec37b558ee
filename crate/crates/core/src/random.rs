//! Seeded random band-limited fields for property checks.

use crate::calculus::leray_spec;
use crate::fields::{Field, Grid, Spectrum};
use crate::spectral::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random real field with modes `0 < max|m_d| <= kmax`, amplitudes decaying like
/// `|m|^-2`, zero mean, sup norm normalised to `amp`.
pub fn bandlimited<const C: usize>(grid: Grid, kmax: i64, amp: f64, rng: &mut impl Rng) -> Field<C> {
    let p = grid.plan();
    let len = p.spec_len();
    let mut s = Spectrum::<C>::zeros(grid);
    p.for_each_mode(|idx, i, j, k| {
        let m = p.m(i, j, k);
        if m.iter().all(|v| *v == 0) || m.iter().any(|v| v.abs() > kmax) {
            return;
        }
        // keep the k = 0 plane Hermitian by only seeding its upper half
        if k == 0 && (m[0] < 0 || (m[0] == 0 && m[1] < 0)) {
            return;
        }
        let m2 = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]) as f64;
        for c in 0..C {
            let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) / m2;
            s.data[c * len + idx] = z;
        }
    });
    // symmetrize the k = 0 plane
    let n = grid.n;
    for c in 0..C {
        for i in 0..n {
            for j in 0..n {
                let idx = (i * n + j) * p.nh;
                let (mi, mj) = (p.m_full[i], p.m_full[j]);
                if mi < 0 || (mi == 0 && mj < 0) {
                    continue;
                }
                let ci = (n - i) % n;
                let cj = (n - j) % n;
                let cidx = (ci * n + cj) * p.nh;
                if cidx == idx {
                    continue;
                }
                let z = s.data[c * len + idx];
                s.data[c * len + cidx] = z.conj();
            }
        }
    }
    let f = s.to_physical();
    let sup = f.sup_norm().max(f64::MIN_POSITIVE);
    f.scale(amp / sup)
}

/// Random divergence-free mean-zero vector field.
pub fn divfree(grid: Grid, kmax: i64, amp: f64, rng: &mut impl Rng) -> Field<3> {
    let v: Field<3> = bandlimited(grid, kmax, 1.0, rng);
    let f = leray_spec(&v.to_spectral()).to_physical();
    let sup = f.sup_norm().max(f64::MIN_POSITIVE);
    f.scale(amp / sup)
}
