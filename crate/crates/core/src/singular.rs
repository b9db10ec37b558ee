//! Geometry of the candidate singular set and energy-profile analysis.
//!
//! Everything here is pure post-processing over immutable inputs: interval
//! families from a run (or a synthetic construction) and sampled energy
//! profiles `e(t) = ½∫|v|²`.

use crate::params::{scales, SchemeParams};
use crate::scheme::{BadSet, Interval};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Relative slack used when comparing interval lengths and nesting.
const REL_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeOrigin {
    pub params: SchemeParams,
    /// First level index of `levels[0]`.
    pub q0: usize,
}

/// Nested families of disjoint closed intervals, one family per level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalFamilySequence {
    pub levels: Vec<Vec<Interval>>,
    /// Set when the sequence came out of a scheme run; enables the closed-form prediction.
    pub origin: Option<SchemeOrigin>,
}

impl IntervalFamilySequence {
    pub fn new(levels: Vec<Vec<Interval>>) -> Self {
        IntervalFamilySequence { levels, origin: None }
    }

    /// Middle-thirds construction on `[0, 1]`, levels `1..=depth`.
    pub fn cantor(depth: usize) -> Self {
        let mut cur = vec![Interval::new(0.0, 1.0)];
        let mut levels = Vec::with_capacity(depth);
        for _ in 0..depth {
            cur = cur
                .iter()
                .flat_map(|j| {
                    let d = j.len() / 3.0;
                    [Interval::new(j.lo, j.lo + d), Interval::new(j.hi - d, j.hi)]
                })
                .collect();
            levels.push(cur.clone());
        }
        Self::new(levels)
    }

    pub fn from_bad_sets(sets: &[BadSet], params: &SchemeParams) -> Self {
        IntervalFamilySequence {
            levels: sets.iter().map(|b| b.intervals.clone()).collect(),
            origin: Some(SchemeOrigin { params: params.clone(), q0: sets.first().map_or(0, |b| b.q) }),
        }
    }

    /// `t ↦ s·t + c` applied to every endpoint (`s > 0`).
    pub fn affine(&self, s: f64, c: f64) -> Self {
        IntervalFamilySequence {
            levels: self
                .levels
                .iter()
                .map(|l| l.iter().map(|j| Interval::new(s * j.lo + c, s * j.hi + c)).collect())
                .collect(),
            origin: None,
        }
    }

    /// Each level lies inside the union of the previous one.
    pub fn check_nested(&self) -> Result<()> {
        for (k, w) in self.levels.windows(2).enumerate() {
            for j in &w[1] {
                let slack = REL_TOL * j.len().max(1e-300);
                if !w[0].iter().any(|o| j.lo >= o.lo - slack && j.hi <= o.hi + slack) {
                    return Err(Error::Precondition(format!(
                        "interval families not nested: [{:.6e}, {:.6e}] at level {} escapes level {}",
                        j.lo,
                        j.hi,
                        k + 1,
                        k
                    )));
                }
            }
        }
        Ok(())
    }

    /// Whether all intervals of a level share one length.
    pub fn uniform_lengths(&self) -> bool {
        self.levels.iter().all(|l| {
            let m = l.iter().map(Interval::len).fold(0.0, f64::max);
            l.iter().all(|j| (j.len() - m).abs() <= REL_TOL * m)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelCount {
    pub level: usize,
    pub count: usize,
    pub scale: f64,
    pub measure: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub q: usize,
    /// Closed-form covering-count bound at level `q`.
    pub count_bound: f64,
    /// `−ln(count_bound) / ln(5τ_q)`; undefined at `5τ_q ≥ 1`.
    pub quotient: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxDimension {
    pub dimension: f64,
    pub counts: Vec<LevelCount>,
    /// Levels used in the regression (strictly decreasing scale).
    pub fitted_levels: Vec<usize>,
    pub predictions: Vec<Prediction>,
    /// Pre-limit quotient at the deepest level, when available.
    pub predicted: Option<f64>,
    pub gap: Option<f64>,
}

/// Covering-count bound `(40π)^q T a^{−γ(b^q−1)/(b−1)} (5τ_q)^{−1}` in log form.
pub fn ln_count_bound(p: &SchemeParams, q: usize) -> Result<f64> {
    let s = scales(p, q)?;
    let geo = (p.b.powi(q as i32) - 1.0) / (p.b - 1.0);
    Ok(q as f64 * (40.0 * PI).ln() + p.t.ln() - p.gamma * geo * p.a.ln() - (5.0f64.ln() + s.ln_tau))
}

pub fn pre_limit_quotient(p: &SchemeParams, q: usize) -> Result<Prediction> {
    let ln_n = ln_count_bound(p, q)?;
    let ln_scale = 5.0f64.ln() + scales(p, q)?.ln_tau;
    Ok(Prediction { q, count_bound: ln_n.exp(), quotient: (ln_scale < 0.0).then(|| -ln_n / ln_scale) })
}

/// Least-squares slope of `ys` against `xs`.
fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Box-counting dimension by regression of `ln N_q` on `ln(1/scale_q)`.
///
/// The count is the number of intervals and the scale their maximal length.
/// A sequence whose scale never shrinks is stationary: a finite union of
/// intervals, dimension 1.
pub fn box_dimension(seq: &IntervalFamilySequence) -> Result<BoxDimension> {
    if seq.levels.len() < 2 {
        return Err(Error::Precondition(format!("box dimension needs at least 2 levels, got {}", seq.levels.len())));
    }
    if seq.levels.iter().any(|l| l.is_empty() || l.iter().any(Interval::is_empty)) {
        return Err(Error::Precondition("box dimension: empty level or degenerate interval".into()));
    }
    seq.check_nested()?;
    let counts: Vec<LevelCount> = seq
        .levels
        .iter()
        .enumerate()
        .map(|(k, l)| LevelCount {
            level: seq.origin.as_ref().map_or(k, |o| o.q0 + k),
            count: l.len(),
            scale: l.iter().map(Interval::len).fold(0.0, f64::max),
            measure: l.iter().map(Interval::len).sum(),
        })
        .collect();
    let mut fitted = vec![0usize];
    for k in 1..counts.len() {
        if counts[k].scale < counts[*fitted.last().unwrap()].scale * (1.0 - REL_TOL) {
            fitted.push(k);
        }
    }
    let dimension = if fitted.len() < 2 {
        1.0
    } else {
        let xs: Vec<f64> = fitted.iter().map(|&k| -counts[k].scale.ln()).collect();
        let ys: Vec<f64> = fitted.iter().map(|&k| (counts[k].count as f64).ln()).collect();
        slope(&xs, &ys)
    };
    let predictions = match &seq.origin {
        Some(o) => counts.iter().map(|c| pre_limit_quotient(&o.params, c.level)).collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let predicted = predictions.last().and_then(|p| p.quotient);
    Ok(BoxDimension {
        dimension,
        fitted_levels: fitted.iter().map(|&k| counts[k].level).collect(),
        counts,
        predictions,
        predicted,
        gap: predicted.map(|p| (dimension - p).abs()),
    })
}

/// Sampled energy profile.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyProfile {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
}

impl EnergyProfile {
    pub fn new(times: Vec<f64>, energy: Vec<f64>) -> Result<Self> {
        if times.len() != energy.len() {
            return Err(Error::Precondition(format!("{} times but {} energies", times.len(), energy.len())));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Precondition("energy profile times must increase strictly".into()));
        }
        if let Some(e) = energy.iter().find(|e| !(**e >= 0.0)) {
            return Err(Error::Precondition(format!("negative or NaN energy {e}")));
        }
        Ok(EnergyProfile { times, energy })
    }

    pub fn from_fn(times: Vec<f64>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let energy = times.iter().map(|&t| f(t)).collect();
        Self::new(times, energy)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// `max_{s≠t} |e(t) − e(s)| / |t − s|^θ` over all sample pairs.
pub fn holder_seminorm(e: &EnergyProfile, theta: f64) -> f64 {
    let mut best = 0.0f64;
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            let d = (e.energy[j] - e.energy[i]).abs();
            if d > 0.0 {
                best = best.max(d / (e.times[j] - e.times[i]).powf(theta));
            }
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub seminorm: f64,
    pub cover_sum: f64,
    pub pass: bool,
}

/// Harness for "Hölder energy, constant off a thin cover ⇒ constant".
///
/// `rhs = [e]_θ Σ r_i^θ` with `r_i` the interval lengths. `tol` bounds the
/// allowed variation between consecutive samples whose segment misses the cover.
pub fn holder_increase_bound(e: &EnergyProfile, cover: &[Interval], theta: f64, tol: f64) -> Result<HolderCheck> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Precondition(format!("Hölder exponent {theta} outside (0, 1)")));
    }
    if e.is_empty() {
        return Err(Error::Precondition("empty energy profile".into()));
    }
    let touches = |a: f64, b: f64| cover.iter().any(|j| j.lo <= b && j.hi >= a);
    for k in 1..e.len() {
        let (a, b) = (e.times[k - 1], e.times[k]);
        let d = (e.energy[k] - e.energy[k - 1]).abs();
        if !touches(a, b) && d > tol {
            return Err(Error::Precondition(format!(
                "energy varies by {d:.3e} on [{a:.6e}, {b:.6e}], which misses the cover"
            )));
        }
    }
    let e0 = e.energy[0];
    let lhs = e.energy.iter().map(|x| (x - e0).abs()).fold(0.0, f64::max);
    let seminorm = holder_seminorm(e, theta);
    let cover_sum: f64 = cover.iter().map(|j| j.len().powf(theta)).sum();
    let rhs = seminorm * cover_sum;
    Ok(HolderCheck { lhs, rhs, seminorm, cover_sum, pass: lhs <= rhs * (1.0 + 1e-2) })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularityFit {
    /// `None` when the profile is flat to roundoff: any exponent fits.
    pub exponent: Option<f64>,
    pub target: f64,
    /// `(h, sup |e(t) − e(s)|)` per dyadic bin.
    pub bins: Vec<(f64, f64)>,
}

/// `2β/(1−β)`.
pub fn regularity_target(beta: f64) -> f64 {
    2.0 * beta / (1.0 - beta)
}

/// Log-log fit of the energy increment modulus against the time lag.
pub fn energy_regularity_fit(e: &EnergyProfile, beta: f64) -> Result<RegularityFit> {
    if e.len() < 64 {
        return Err(Error::Precondition(format!("regularity fit needs at least 64 samples, got {}", e.len())));
    }
    let target = regularity_target(beta);
    let scale = e.energy.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1e-300);
    // bin index → (h, Δe) of the pair achieving the bin maximum
    let mut bins: std::collections::BTreeMap<i64, (f64, f64)> = Default::default();
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            let h = e.times[j] - e.times[i];
            let d = (e.energy[j] - e.energy[i]).abs();
            let slot = bins.entry(h.log2().floor() as i64).or_insert((h, 0.0));
            if d > slot.1 {
                *slot = (h, d);
            }
        }
    }
    let bins: Vec<(f64, f64)> = bins.into_values().collect();
    let live: Vec<&(f64, f64)> = bins.iter().filter(|(_, d)| *d > 1e-13 * scale).collect();
    let exponent = (live.len() >= 2).then(|| {
        let xs: Vec<f64> = live.iter().map(|(h, _)| h.ln()).collect();
        let ys: Vec<f64> = live.iter().map(|(_, d)| d.ln()).collect();
        slope(&xs, &ys)
    });
    Ok(RegularityFit { exponent, target, bins })
}

/// `max |de/dt|` by centred differences at samples whose neighbours lie in one interval of `good`.
pub fn good_set_flatness(e: &EnergyProfile, good: &[Interval]) -> f64 {
    let inside = |a: f64, b: f64| good.iter().any(|j| a >= j.lo && b <= j.hi);
    let mut best = 0.0f64;
    for k in 1..e.len().saturating_sub(1) {
        let (a, b) = (e.times[k - 1], e.times[k + 1]);
        if inside(a, b) {
            best = best.max(((e.energy[k + 1] - e.energy[k - 1]) / (b - a)).abs());
        }
    }
    best
}

/// Cantor function at `t`, exact for `t` with a finite ternary expansion of at most `digits` digits.
pub fn cantor_function(t: f64, digits: u32) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let scale = 3u64.pow(digits);
    let mut k = (t * scale as f64).round() as u64;
    let mut ds = Vec::with_capacity(digits as usize);
    for _ in 0..digits {
        ds.push(k % 3);
        k /= 3;
    }
    ds.reverse();
    let (mut acc, mut w) = (0.0, 0.5);
    for d in ds {
        match d {
            0 => {}
            1 => return acc + w,
            _ => acc += w,
        }
        w *= 0.5;
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub box_dimension: BoxDimension,
    pub nested: bool,
    pub uniform_lengths: bool,
    /// Measured `|B_q|` against `|B₀| ∏ 10τ_{q'}/θ_{q'}`.
    pub measure_ratios: Vec<f64>,
    pub flatness: Option<f64>,
    pub regularity: Option<RegularityFit>,
}

/// Runs the singular-set analysis on the bad sets and energy profile of a run.
pub fn dimension_report(sets: &[BadSet], params: &SchemeParams, energy: Option<&EnergyProfile>) -> Result<DimensionReport> {
    let seq = IntervalFamilySequence::from_bad_sets(sets, params);
    let box_dimension = box_dimension(&seq)?;
    let mut predicted = sets.first().map_or(0.0, BadSet::measure);
    let mut measure_ratios = Vec::new();
    for b in sets.iter().skip(1) {
        let s = scales(params, b.q)?;
        predicted *= 10.0 * s.tau / s.theta.unwrap_or(f64::NAN);
        measure_ratios.push(b.measure() / predicted);
    }
    let (flatness, regularity) = match (energy, sets.last()) {
        (Some(e), Some(last)) => {
            let fit = (e.len() >= 64).then(|| energy_regularity_fit(e, params.beta)).transpose()?;
            (Some(good_set_flatness(e, &last.good_intervals())), fit)
        }
        _ => (None, None),
    };
    Ok(DimensionReport {
        box_dimension,
        nested: seq.check_nested().is_ok(),
        uniform_lengths: seq.uniform_lengths(),
        measure_ratios,
        flatness,
        regularity,
    })
}
