//! Smooth temporal cutoffs built from one polynomial step.

use serde::{Deserialize, Serialize};

/// `S(x) = 35x⁴ − 84x⁵ + 70x⁶ − 20x⁷` on `[0, 1]`, `0` below and `1` above.
/// Three derivatives vanish at both ends.
pub fn smoothstep(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        x * x * x * x * (35.0 + x * (-84.0 + x * (70.0 - 20.0 * x)))
    }
}

/// `dᵏS/dxᵏ` for `k ≤ 3`.
pub fn smoothstep_deriv(x: f64, k: usize) -> f64 {
    if k == 0 {
        return smoothstep(x);
    }
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    // S' = 140 x³ (1 − x)³
    let (a, b) = (x, 1.0 - x);
    match k {
        1 => 140.0 * a.powi(3) * b.powi(3),
        2 => 420.0 * a * a * b * b * (b - a),
        3 => 840.0 * a * b * (b * b - 3.0 * a * b + a * a),
        _ => panic!("smoothstep derivative of order {k} is not tabulated"),
    }
}

/// `max S' = 35/16`, attained at `x = 1/2`.
pub const SMOOTHSTEP_MAX_SLOPE: f64 = 35.0 / 16.0;

/// A transition from 0 to 1 over `[start, end]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ramp {
    pub start: f64,
    pub end: f64,
}

impl Ramp {
    pub fn centred(centre: f64, width: f64) -> Self {
        Ramp { start: centre - 0.5 * width, end: centre + 0.5 * width }
    }

    pub fn width(&self) -> f64 {
        self.end - self.start
    }

    /// Exactly 0 for `t ≤ start` and exactly 1 for `t ≥ end`.
    pub fn value(&self, t: f64) -> f64 {
        smoothstep((t - self.start) / self.width())
    }

    /// `∂ₜᵏ` of [`Ramp::value`].
    pub fn deriv(&self, t: f64, k: usize) -> f64 {
        smoothstep_deriv((t - self.start) / self.width(), k) / self.width().powi(k as i32)
    }

    /// True strictly inside the transition, where the value is neither 0 nor 1.
    pub fn active(&self, t: f64) -> bool {
        t > self.start && t < self.end
    }
}

/// Rises on `up`, falls on `down`; `up` ends before `down` starts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub up: Ramp,
    pub down: Ramp,
}

impl Bump {
    /// Equal to 1 on `inner`, positive exactly on the open interval `outer`.
    pub fn plateau(inner: (f64, f64), outer: (f64, f64)) -> Self {
        Bump { up: Ramp { start: outer.0, end: inner.0 }, down: Ramp { start: inner.1, end: outer.1 } }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.up.value(t) - self.down.value(t)
    }

    pub fn deriv(&self, t: f64, k: usize) -> f64 {
        self.up.deriv(t, k) - self.down.deriv(t, k)
    }

    /// Closure of `{value > 0}`.
    pub fn support(&self) -> (f64, f64) {
        (self.up.start, self.down.end)
    }
}

/// `maxₜ |∂ₜᵏ b| · wᵏ` sampled on the two ramps, `k = 1, 2`.
pub fn derivative_constants(b: &Bump, samples: usize) -> [f64; 2] {
    let mut out = [0.0_f64; 2];
    for ramp in [b.up, b.down] {
        for s in 0..=samples {
            let t = ramp.start + ramp.width() * s as f64 / samples as f64;
            for k in 1..=2 {
                out[k - 1] = out[k - 1].max(b.deriv(t, k).abs() * ramp.width().powi(k as i32));
            }
        }
    }
    out
}
