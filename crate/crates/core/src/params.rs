//! Scheme parameters, the derived scales, admissibility checks and the
//! closed-form dimension bounds.
//!
//! Scales are carried as natural logarithms so that `a^{b^q}` never overflows;
//! the plain values are `exp` of those and may saturate to `0` or `inf`.

use crate::error::{Error, Result};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Largest admissible `log10 a^{b^q}` (the 80-bit extended exponent range).
pub const LOG10_LIMIT: f64 = 4932.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeParams {
    pub beta: f64,
    pub b: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub a: f64,
    #[serde(rename = "T")]
    pub t: f64,
    /// Geometric constant of the Mikado family, when known.
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
}

impl SchemeParams {
    pub fn new(beta: f64, b: f64, gamma: f64, alpha: f64, a: f64, t: f64) -> Self {
        SchemeParams { beta, b, gamma, alpha, a, t, m: None }
    }

    /// Desk-scale parameters used by the presets.
    pub fn desk(t: f64) -> Self {
        SchemeParams::new(0.15, 2.0, 0.9, 1e-3, 2.0, t)
    }

    pub fn with_horizon(&self, t: f64) -> Self {
        SchemeParams { t, ..self.clone() }
    }

    pub fn with_a(&self, a: f64) -> Self {
        SchemeParams { a, ..self.clone() }
    }

    /// `(b − 1)(1 − β − 2βb)/(b + 1)`, the upper end of the admissible `γ`.
    pub fn gamma_max(&self) -> f64 {
        gamma_max(self.beta, self.b)
    }
}

pub fn gamma_max(beta: f64, b: f64) -> f64 {
    (b - 1.0) * (1.0 - beta - 2.0 * beta * b) / (b + 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Always enforced.
    Domain,
    /// Exponent inequalities; enforced only in strict mode.
    Exponent,
    /// Inequalities that hold once `a` is large enough.
    AFloor,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub kind: CheckKind,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs` for additive checks, `log10(rhs/lhs)` for scale checks.
    pub slack: f64,
    pub pass: bool,
}

impl CheckRecord {
    fn lt(name: &str, kind: CheckKind, lhs: f64, rhs: f64) -> Self {
        CheckRecord { name: name.into(), kind, lhs, rhs, slack: rhs - lhs, pass: lhs < rhs }
    }

    fn le(name: &str, kind: CheckKind, lhs: f64, rhs: f64) -> Self {
        CheckRecord { name: name.into(), kind, lhs, rhs, slack: rhs - lhs, pass: lhs <= rhs }
    }

    /// Compare two positive quantities given by their natural logs.
    fn log_lt(name: &str, kind: CheckKind, ln_lhs: f64, ln_rhs: f64, strict: bool) -> Self {
        let pass = if strict { ln_lhs < ln_rhs } else { ln_lhs <= ln_rhs };
        CheckRecord {
            name: name.into(),
            kind,
            lhs: ln_lhs.exp(),
            rhs: ln_rhs.exp(),
            slack: (ln_rhs - ln_lhs) / std::f64::consts::LN_10,
            pass,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub records: Vec<CheckRecord>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn pass_of(&self, kind: CheckKind) -> bool {
        self.records.iter().filter(|r| r.kind == kind).all(|r| r.pass)
    }

    pub fn failures(&self) -> Vec<&CheckRecord> {
        self.records.iter().filter(|r| !r.pass).collect()
    }

    pub fn get(&self, name: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.records.extend(other.records);
    }
}

/// Every inequality on `(β, b, γ, α, a, T)`, plus the a-floor conditions for steps
/// `0..=horizon`. Invalid parameters give failing records, never a fault.
pub fn validate(p: &SchemeParams, horizon: usize) -> ValidationReport {
    use CheckKind::*;
    let (beta, b, gamma, alpha) = (p.beta, p.b, p.gamma, p.alpha);
    let mut r = vec![
        CheckRecord::lt("beta > 0", Domain, 0.0, beta),
        CheckRecord::lt("beta < 1/3", Domain, beta, 1.0 / 3.0),
        CheckRecord::lt("b > 1", Domain, 1.0, b),
        CheckRecord::lt("alpha > 0", Domain, 0.0, alpha),
        CheckRecord::le("a >= 2", Domain, 2.0, p.a),
        CheckRecord::lt("T > 0", Domain, 0.0, p.t),
        CheckRecord::lt("b < (1-beta)/(2 beta)", Exponent, b, (1.0 - beta) / (2.0 * beta)),
        CheckRecord::lt("gamma > 0", Exponent, 0.0, gamma),
        CheckRecord::lt("gamma < (b-1)(1-beta-2 beta b)/(b+1)", Exponent, gamma, gamma_max(beta, b)),
        CheckRecord::lt(
            "closing exponent inequality",
            Exponent,
            -beta * b - beta + 1.0 + gamma - b + 5.0 * alpha * b,
            -2.0 * beta * b * b - gamma * b - 3.0 * alpha * b,
        ),
        CheckRecord::le("6 alpha b <= (b-1)(1-beta)", Exponent, 6.0 * alpha * b, (b - 1.0) * (1.0 - beta)),
    ];
    if p.a > 1.0 {
        r.push(CheckRecord::log_lt("10 pi a^-gamma < 1", AFloor, (10.0 * PI).ln() - gamma * p.a.ln(), 0.0, true));
    }
    let domain_ok = r.iter().filter(|c| c.kind == Domain).all(|c| c.pass);
    if domain_ok {
        for q in 0..=horizon {
            match (scales(p, q), scales(p, q + 1)) {
                (Ok(s0), Ok(s1)) => r.push(CheckRecord::log_lt(
                    &format!("2 theta_{} < tau_{}", q + 1, q),
                    AFloor,
                    2f64.ln() + s1.ln_theta,
                    s0.ln_tau,
                    true,
                )),
                (Err(e), _) | (_, Err(e)) => r.push(CheckRecord {
                    name: format!("scales of step {} representable ({e})", q + 1),
                    kind: AFloor,
                    lhs: f64::NAN,
                    rhs: f64::NAN,
                    slack: f64::NAN,
                    pass: false,
                }),
            }
        }
    }
    ValidationReport { records: r }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QScales {
    pub q: usize,
    /// `⌈a^{b^q}⌉` when it fits in 2⁵³, so that `λ_q = 2π N_q` exactly.
    pub frequency: Option<u64>,
    pub lambda: f64,
    pub delta: f64,
    /// `None` at `q = 0`.
    pub theta: Option<f64>,
    pub tau: f64,
    pub ell: f64,
    pub ln_lambda: f64,
    pub ln_delta: f64,
    pub ln_theta: f64,
    pub ln_tau: f64,
    pub ln_ell: f64,
}

/// `ln ⌈a^{b^q}⌉`, together with the integer when it is exactly representable.
fn ln_frequency(a: f64, b: f64, q: usize) -> Result<(f64, Option<u64>)> {
    let ln = b.powi(q as i32) * a.ln();
    let log10 = ln / std::f64::consts::LN_10;
    if !log10.is_finite() || log10 > LOG10_LIMIT {
        return Err(Error::Overflow(log10));
    }
    if log10 < 15.0 {
        let x = ln.exp();
        // snap representation noise such as 9.000000000000002 before the ceiling
        let r = x.round();
        let x = if (x - r).abs() <= 1e-12 * r.max(1.0) { r } else { x };
        let n = x.ceil();
        return Ok((n.ln(), Some(n as u64)));
    }
    Ok((ln, None))
}

fn ln_lambda_delta(p: &SchemeParams, q: usize) -> Result<(f64, f64)> {
    let (ln_n, _) = ln_frequency(p.a, p.b, q)?;
    let ln_l = (2.0 * PI).ln() + ln_n;
    Ok((ln_l, -2.0 * p.beta * ln_l))
}

/// `λ_q, δ_q, θ_q, τ_q, ℓ_q` for step `q`.
pub fn scales(p: &SchemeParams, q: usize) -> Result<QScales> {
    let (ln_n, frequency) = ln_frequency(p.a, p.b, q)?;
    let ln_lambda = (2.0 * PI).ln() + ln_n;
    let ln_delta = -2.0 * p.beta * ln_lambda;
    let (ln_theta, ln_tau) = if q == 0 {
        (f64::NAN, (p.t / 15.0).ln())
    } else {
        let (ln_lp, ln_dp) = ln_lambda_delta(p, q - 1)?;
        let th = -(0.5 * ln_dp + (1.0 + 3.0 * p.alpha) * ln_lp);
        (th, th - p.gamma * ln_lp)
    };
    let (_, ln_dn) = ln_lambda_delta(p, q + 1)?;
    let ln_ell = 0.5 * ln_dn - 0.5 * ln_delta - (1.0 + 0.5 * p.gamma + 1.5 * p.alpha) * ln_lambda;
    Ok(QScales {
        q,
        frequency,
        lambda: frequency.map_or(ln_lambda.exp(), |n| 2.0 * PI * n as f64),
        delta: ln_delta.exp(),
        theta: if q == 0 { None } else { Some(ln_theta.exp()) },
        tau: ln_tau.exp(),
        ell: ln_ell.exp(),
        ln_lambda,
        ln_delta,
        ln_theta,
        ln_tau,
        ln_ell,
    })
}

/// The chain of scale inequalities linking steps `q`, `q + 1` and `q + 2`.
pub fn check_chain(p: &SchemeParams, q: usize) -> Result<ValidationReport> {
    use CheckKind::AFloor;
    let s0 = scales(p, q)?;
    let s1 = scales(p, q + 1)?;
    let s2 = scales(p, q + 2)?;
    let (i, j) = (q, q + 1);
    let al = p.alpha;
    let records = vec![
        CheckRecord::log_lt(&format!("5 tau_{j} < theta_{j}"), AFloor, 5f64.ln() + s1.ln_tau, s1.ln_theta, true),
        CheckRecord::log_lt(&format!("2 theta_{j} < tau_{i}"), AFloor, 2f64.ln() + s1.ln_theta, s0.ln_tau, true),
        CheckRecord::log_lt(&format!("lambda_{i}^-3/2 < ell_{i}"), AFloor, -1.5 * s0.ln_lambda, s0.ln_ell, true),
        CheckRecord::log_lt(&format!("ell_{i} < lambda_{i}^-1"), AFloor, s0.ln_ell, -s0.ln_lambda, true),
        CheckRecord::log_lt(&format!("ell_{i}^-1 < lambda_{j}"), AFloor, -s0.ln_ell, s1.ln_lambda, true),
        CheckRecord::log_lt(
            &format!("stress at step {j} below delta_{} lambda_{j}^(-gamma-3 alpha)", q + 2),
            AFloor,
            0.5 * s1.ln_delta + 0.5 * s0.ln_delta + (1.0 + p.gamma) * s0.ln_lambda + (5.0 * al - 1.0) * s1.ln_lambda,
            s2.ln_delta - (p.gamma + 3.0 * al) * s1.ln_lambda,
            false,
        ),
    ];
    Ok(ValidationReport { records })
}

/// Smallest `a ∈ [2, a_max]` at which `check` passes, by bisection on `ln a`.
/// `None` when it fails at `a_max` (treated as "violated for every a").
pub fn a_floor(p: &SchemeParams, a_max: f64, check: impl Fn(&SchemeParams) -> bool) -> Option<f64> {
    if check(&p.with_a(2.0)) {
        return Some(2.0);
    }
    if !check(&p.with_a(a_max)) {
        return None;
    }
    let (mut lo, mut hi) = (2f64.ln(), a_max.ln());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if check(&p.with_a(mid.exp())) {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-12 * hi.abs() {
            break;
        }
    }
    Some(hi.exp())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FloorRecord {
    pub name: String,
    pub passes_at_a: bool,
    /// `None`: violated for every `a` up to the search limit.
    pub a0: Option<f64>,
}

/// Per-inequality a-floors for the chain at step `q` and the `10π a^{-γ} < 1` condition.
pub fn a_floors(p: &SchemeParams, q: usize, a_max: f64) -> Vec<FloorRecord> {
    let mut names: Vec<String> = match check_chain(p, q) {
        Ok(r) => r.records.into_iter().map(|c| c.name).collect(),
        Err(_) => Vec::new(),
    };
    names.push("10 pi a^-gamma < 1".into());
    names
        .into_iter()
        .map(|name| {
            let test = |pp: &SchemeParams| -> bool {
                if name == "10 pi a^-gamma < 1" {
                    return validate(pp, 0).get(&name).is_some_and(|c| c.pass);
                }
                check_chain(pp, q).ok().and_then(|r| r.get(&name).map(|c| c.pass)).unwrap_or(false)
            };
            FloorRecord { passes_at_a: test(p), a0: a_floor(p, a_max, test), name }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Dimension bounds

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta < 1.0 / 3.0) {
        return Err(Error::Domain(format!("beta = {beta} must lie in (0, 1/3)")));
    }
    Ok(())
}

/// Upper bound on the box dimension of the singular time set,
/// `1 − γb/((b−1)(1−β+3α+γ))`.
pub fn box_dim_bound(beta: f64, b: f64, gamma: f64, alpha: f64) -> Result<f64> {
    check_beta(beta)?;
    if b <= 1.0 {
        return Err(Error::Domain(format!("b = {b} must exceed 1")));
    }
    Ok(1.0 - gamma * b / ((b - 1.0) * (1.0 - beta + 3.0 * alpha + gamma)))
}

/// `2β/(1−β)`: Hausdorff dimension lower bound from energy regularity.
pub fn lower_bound(beta: f64) -> f64 {
    2.0 * beta / (1.0 - beta)
}

/// `1/2 + β/(1−β)`.
pub fn theorem_bound(beta: f64) -> f64 {
    0.5 + beta / (1.0 - beta)
}

pub fn lower_bound_exact(beta: Ratio<i64>) -> Ratio<i64> {
    Ratio::from_integer(2) * beta / (Ratio::from_integer(1) - beta)
}

pub fn theorem_bound_exact(beta: Ratio<i64>) -> Ratio<i64> {
    Ratio::new(1, 2) + beta / (Ratio::from_integer(1) - beta)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DimensionBounds {
    pub box_dim_bound: f64,
    pub lower_bound: f64,
    pub theorem_bound: f64,
}

pub fn dimension_bounds(beta_pp: f64, b: f64, gamma: f64, alpha: f64) -> Result<DimensionBounds> {
    check_beta(beta_pp)?;
    Ok(DimensionBounds {
        box_dim_bound: box_dim_bound(beta_pp, b, gamma, alpha)?,
        lower_bound: lower_bound(beta_pp),
        theorem_bound: theorem_bound(beta_pp),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InfimumScan {
    pub beta: f64,
    pub infimum: f64,
    pub argmin: [f64; 3],
    pub closed_form: f64,
    pub evaluations: usize,
}

/// Minimise the box bound over admissible `(b, γ, α)`: `1 < b < (1−β)/(2β)`,
/// `0 < γ < γ_max(b)`, `α > 0` subject to the closing inequality and
/// `6αb ≤ (b−1)(1−β)`. The infimum is approached as `b → 1`, so `b − 1` is
/// sampled on a log scale.
pub fn infimum_scan(beta: f64) -> Result<InfimumScan> {
    check_beta(beta)?;
    let b_max = (1.0 - beta) / (2.0 * beta);
    let mut best = (f64::INFINITY, [0.0; 3]);
    let mut evals = 0;
    let span = (b_max - 1.0).ln();
    let lo = (1e-9f64).ln();
    let nb = 400;
    for ib in 0..nb {
        let eps = (lo + (span - lo) * ib as f64 / nb as f64).exp();
        let b = 1.0 + eps;
        let g_max = gamma_max(beta, b);
        for ig in 0..=45 {
            let gamma = g_max * (1.0 - 10f64.powf(-9.0 + ig as f64 / 5.0));
            // closing inequality and the α budget, solved for α
            let close = (-2.0 * beta * b * b - gamma * b - (-beta * b - beta + 1.0 + gamma - b)) / (8.0 * b);
            let alpha_cap = close.min((b - 1.0) * (1.0 - beta) / (6.0 * b));
            if alpha_cap <= 0.0 {
                continue;
            }
            for alpha in [alpha_cap * 1e-6, alpha_cap * 0.5] {
                evals += 1;
                let v = box_dim_bound(beta, b, gamma, alpha)?;
                if v < best.0 {
                    best = (v, [b, gamma, alpha]);
                }
            }
        }
    }
    Ok(InfimumScan { beta, infimum: best.0, argmin: best.1, closed_form: theorem_bound(beta), evaluations: evals })
}
