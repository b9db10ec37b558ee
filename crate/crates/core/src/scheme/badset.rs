//! Bad sets `B_q`: finite unions of disjoint open intervals.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Open-interval membership.
    pub fn contains(&self, t: f64) -> bool {
        t > self.lo && t < self.hi
    }

    pub fn expand(&self, r: f64) -> Interval {
        Interval { lo: self.lo - r, hi: self.hi + r }
    }

    /// `[a, b] ⊆ (lo, hi)` style containment allowing shared endpoints.
    pub fn within(&self, outer: &Interval) -> bool {
        self.lo >= outer.lo && self.hi <= outer.hi
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BadSet {
    pub q: usize,
    /// `τ_q`: every interval has length `5τ_q`.
    pub tau: f64,
    pub horizon: f64,
    pub intervals: Vec<Interval>,
}

impl BadSet {
    /// `B₀ = (T/3, 2T/3)` with `τ₀ = T/15`.
    pub fn initial(horizon: f64) -> Self {
        BadSet {
            q: 0,
            tau: horizon / 15.0,
            horizon,
            intervals: vec![Interval::new(horizon / 3.0, 2.0 * horizon / 3.0)],
        }
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(Interval::len).sum()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.intervals.iter().any(|j| j.contains(t))
    }

    /// `t ∈ G_q = [0, T] \ B_q`.
    pub fn good(&self, t: f64) -> bool {
        (0.0..=self.horizon).contains(&t) && !self.contains(t)
    }

    /// `𝔅_q = {t ∈ B_q : dist(t, G_q) > τ_q}`, interval by interval.
    pub fn real_bad(&self) -> Vec<Interval> {
        self.intervals.iter().map(|j| j.expand(-self.tau)).collect()
    }

    pub fn in_real_bad(&self, t: f64) -> bool {
        self.real_bad().iter().any(|j| j.contains(t))
    }

    /// `dist(t, G_q)`; zero on the good set.
    pub fn dist_to_good(&self, t: f64) -> f64 {
        self.intervals
            .iter()
            .find(|j| j.contains(t))
            .map_or(0.0, |j| (t - j.lo).min(j.hi - t))
    }

    /// Maximal intervals of `G_q`.
    pub fn good_intervals(&self) -> Vec<Interval> {
        let mut out = Vec::new();
        let mut lo = 0.0;
        for j in &self.intervals {
            if j.lo > lo {
                out.push(Interval::new(lo, j.lo));
            }
            lo = j.hi;
        }
        if lo < self.horizon {
            out.push(Interval::new(lo, self.horizon));
        }
        out
    }

    /// Sorted, disjoint, of common length `5τ` within `rel` relative error.
    pub fn check_shape(&self, rel: f64) -> Result<(), String> {
        for w in self.intervals.windows(2) {
            if w[0].hi > w[1].lo {
                return Err(format!("intervals overlap at {}", w[1].lo));
            }
        }
        for j in &self.intervals {
            if ((j.len() - 5.0 * self.tau) / (5.0 * self.tau)).abs() > rel {
                return Err(format!("interval length {} differs from 5τ = {}", j.len(), 5.0 * self.tau));
            }
        }
        Ok(())
    }

    /// Every interval of `self` lies in some interval of `outer`.
    pub fn nested_in(&self, outer: &BadSet) -> bool {
        self.intervals.iter().all(|j| outer.intervals.iter().any(|o| j.within(o)))
    }
}
