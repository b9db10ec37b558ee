//! Configuration-driven runs: initial pair, `glue ∘ perturb` steps, inductive
//! checks and the singular-set analysis, with every artifact written to a run
//! directory.
//!
//! Run-directory layout:
//! ```text
//! config.json            resolved configuration
//! validation.json        parameter checks
//! initial_report.json
//! step_<q>/inductive_report.json, badset.json, metrics.csv, fields/
//! step_<q>/glue_report.json, perturb_report.json, diagnostics.json   (q ≥ 1)
//! summary.json
//! dimension_report.json  (written by `analyze`, which `run` calls last when a step completed)
//! ```
//! JSON output carries no timings, so reruns are byte-identical.

use crate::euler::{shear, taylor_green};
use crate::fields::{Grid, VectorField};
use crate::mikado::MikadoFamily;
use crate::params::{validate, CheckKind, SchemeParams, ValidationReport};
use crate::scheme::{iterate, make_initial_pair, BadSet, InductiveReport, InitialOptions, Level, Mode, RunOptions, SliceRecord, Source};
use crate::singular::{dimension_report, DimensionReport, EnergyProfile};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::sync::Arc;

pub const ENV_PREFIX: &str = "CIFORGE_";
pub const GRID_SIZES: [usize; 3] = [32, 64, 128];
pub const MAX_STEPS: usize = 3;

/// Horizon of the desk presets. With amplitude-one data and ε-safety 1/4 the
/// rescaled horizon is about 4.6, so that `τ₀ ≈ 0.3` and one step resolves on `32³`.
pub const DESK_HORIZON: f64 = 0.03;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Preset {
    #[serde(rename = "shear/shear")]
    ShearShear,
    #[serde(rename = "shear/zero")]
    ShearZero,
    #[serde(rename = "taylor-green/zero")]
    TaylorGreenZero,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::ShearShear, Preset::ShearZero, Preset::TaylorGreenZero];

    pub fn name(self) -> &'static str {
        match self {
            Preset::ShearShear => "shear/shear",
            Preset::ShearZero => "shear/zero",
            Preset::TaylorGreenZero => "taylor-green/zero",
        }
    }

    pub fn fields(self, grid: Grid) -> (VectorField, VectorField) {
        match self {
            Preset::ShearShear => (shear(grid, 1.0), shear(grid, 1.0)),
            Preset::ShearZero => (shear(grid, 1.0), VectorField::zeros(grid)),
            Preset::TaylorGreenZero => (taylor_green(grid, 1.0), VectorField::zeros(grid)),
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown preset {s:?}")))
    }
}

fn default_params() -> SchemeParams {
    SchemeParams::desk(DESK_HORIZON)
}
fn default_n() -> usize {
    32
}
fn default_steps() -> usize {
    1
}
fn default_preset() -> Preset {
    Preset::ShearZero
}
fn default_mode() -> Mode {
    Mode::StructureOnly
}
fn default_safety() -> f64 {
    0.25
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_params")]
    pub params: SchemeParams,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_preset")]
    pub preset: Preset,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_safety")]
    pub epsilon_safety: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_value(Value::Object(Default::default())).expect("all fields default")
    }
}

const PARAM_KEYS: [&str; 7] = ["beta", "b", "gamma", "alpha", "a", "T", "M"];

/// Moves top-level parameter keys into `params`, so flat and nested configs both parse.
fn nest_params(v: &mut Value) -> Result<()> {
    let obj = v.as_object_mut().ok_or_else(|| Error::Precondition("config must be a JSON object".into()))?;
    // partial parameter blocks overlay the desk defaults
    let mut params = serde_json::to_value(default_params())?.as_object().cloned().unwrap_or_default();
    match obj.remove("params") {
        Some(Value::Object(m)) => params.extend(m),
        Some(_) => return Err(Error::Precondition("`params` must be an object".into())),
        None => {}
    }
    for k in PARAM_KEYS {
        if let Some(x) = obj.remove(k) {
            params.insert(k.to_string(), x);
        }
    }
    obj.insert("params".into(), Value::Object(params));
    Ok(())
}

/// `CIFORGE_<KEY>` overrides; values parse as JSON, falling back to a string.
/// Parameter keys are case-insensitive (`CIFORGE_BETA`, `CIFORGE_T`).
fn apply_env(v: &mut Value, vars: impl IntoIterator<Item = (String, String)>) -> Result<()> {
    let obj = v.as_object_mut().expect("nested config is an object");
    let mut vars: Vec<(String, String)> = vars.into_iter().filter(|(k, _)| k.starts_with(ENV_PREFIX)).collect();
    vars.sort();
    for (k, raw) in vars {
        let key = k[ENV_PREFIX.len()..].to_ascii_lowercase();
        let val = serde_json::from_str(&raw).unwrap_or(Value::String(raw.clone()));
        if let Some(pk) = PARAM_KEYS.iter().find(|p| p.to_ascii_lowercase() == key) {
            obj.get_mut("params").and_then(Value::as_object_mut).expect("nested").insert(pk.to_string(), val);
        } else if matches!(key.as_str(), "n" | "steps" | "preset" | "mode" | "out" | "seed" | "epsilon_safety") {
            obj.insert(key, val);
        }
    }
    Ok(())
}

impl RunConfig {
    pub fn from_value(mut v: Value, env: impl IntoIterator<Item = (String, String)>) -> Result<Self> {
        nest_params(&mut v)?;
        apply_env(&mut v, env)?;
        Ok(serde_json::from_value(v)?)
    }

    pub fn from_json(text: &str, env: impl IntoIterator<Item = (String, String)>) -> Result<Self> {
        Self::from_value(serde_json::from_str(text)?, env)
    }

    /// Range checks on the plumbing fields plus the parameter checks; domain
    /// checks always bind, the rest only in strict mode.
    pub fn validate(&self) -> Result<ValidationReport> {
        if !GRID_SIZES.contains(&self.n) {
            return Err(Error::Precondition(format!("grid size n = {} not in {GRID_SIZES:?}", self.n)));
        }
        if self.steps > MAX_STEPS {
            return Err(Error::Precondition(format!("steps = {} exceeds {MAX_STEPS}", self.steps)));
        }
        if !(self.epsilon_safety > 0.0 && self.epsilon_safety <= 1.0) {
            return Err(Error::Precondition(format!("epsilon_safety = {} outside (0, 1]", self.epsilon_safety)));
        }
        let report = validate(&self.params, self.steps);
        let ok = match self.mode {
            Mode::Strict => report.all_pass(),
            Mode::StructureOnly => report.pass_of(CheckKind::Domain),
        };
        if !ok {
            let names: Vec<String> = report
                .failures()
                .iter()
                .filter(|c| self.mode == Mode::Strict || c.kind == CheckKind::Domain)
                .map(|c| c.name.clone())
                .collect();
            return Err(Error::Precondition(format!("parameter validation failed: {}", names.join("; "))));
        }
        Ok(report)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub q: usize,
    pub structural_pass: bool,
    pub enforced_pass: bool,
    pub failures: Vec<String>,
    pub bad_measure: f64,
    pub bad_intervals: usize,
    pub degenerate_perturbation: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub preset: Preset,
    pub mode: Mode,
    pub n: usize,
    pub seed: u64,
    pub steps_requested: usize,
    pub steps_completed: usize,
    /// Parameters with the rescaled horizon and `M`, as used by every level.
    pub run_params: SchemeParams,
    pub epsilon: f64,
    pub levels: Vec<LevelSummary>,
    pub fault: Option<String>,
}

impl RunSummary {
    pub fn ok(&self) -> bool {
        self.fault.is_none()
    }
}

pub fn step_dir(dir: &Path, q: usize) -> PathBuf {
    dir.join(format!("step_{q}"))
}

fn write_json<T: Serialize>(path: &Path, v: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn sorted_slices(slices: &[SliceRecord]) -> Vec<SliceRecord> {
    let mut s = slices.to_vec();
    s.sort_by(|a, b| a.t.total_cmp(&b.t));
    s.dedup_by(|a, b| a.t == b.t);
    s
}

pub fn write_metrics(path: &Path, slices: &[SliceRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for s in sorted_slices(slices) {
        w.serialize(&s).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_metrics(path: &Path) -> Result<Vec<SliceRecord>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    r.deserialize().map(|x| x.map_err(csv_err)).collect()
}

fn csv_err(e: csv::Error) -> Error {
    Error::Precondition(format!("csv: {e}"))
}

/// Drive a full run, writing artifacts into `dir`. The summary is written
/// even when a guard fires; the fault is recorded there and returned.
pub fn run(cfg: &RunConfig, dir: &Path) -> Result<RunSummary> {
    std::fs::create_dir_all(dir)?;
    write_json(&dir.join("config.json"), cfg)?;
    let validation = cfg.validate()?;
    write_json(&dir.join("validation.json"), &validation)?;

    let grid = Grid::new(cfg.n)?;
    let family = Arc::new(MikadoFamily::standard()?);
    let m = family.geometric_constants(family.kmax)?.m;
    let (f1, f2) = cfg.preset.fields(grid);
    let opts = InitialOptions { safety: cfg.epsilon_safety, ..Default::default() };
    let (pair, bad, initial) = make_initial_pair(Source::steady(&f1), Source::steady(&f2), &cfg.params, m, &opts)?;
    write_json(&dir.join("initial_report.json"), &initial)?;
    let run_params = SchemeParams { m: Some(m), ..cfg.params.with_horizon(initial.horizon) };

    let ro = RunOptions { mode: cfg.mode, ..Default::default() };
    let mut levels = Vec::new();
    let outcome = iterate(Level { q: 0, history: Arc::new(pair), bad }, &run_params, &family, m, cfg.steps, &ro, |a| {
        let sd = step_dir(dir, a.q);
        std::fs::create_dir_all(&sd)?;
        write_json(&sd.join("inductive_report.json"), &a.inductive)?;
        write_json(&sd.join("badset.json"), &a.level.bad)?;
        write_metrics(&sd.join("metrics.csv"), &a.slices)?;
        if let Some(g) = &a.glue {
            write_json(&sd.join("glue_report.json"), g)?;
        }
        if let Some(p) = &a.perturb {
            write_json(&sd.join("perturb_report.json"), p)?;
        }
        if a.q > 0 {
            write_json(&sd.join("diagnostics.json"), &a.diags)?;
        }
        let h = &a.level.history;
        let tm = a.level.bad.intervals.first().map_or(0.5 * h.horizon(), |j| j.mid());
        h.velocity_spec(tm)?.to_physical().with_time(tm).dump(&sd.join("fields"), "v_mid")?;
        levels.push(level_summary(&a.inductive, &a.level.bad, a.perturb.as_ref().is_some_and(|p| p.intervals.is_empty())));
        Ok(())
    });
    let summary = RunSummary {
        preset: cfg.preset,
        mode: cfg.mode,
        n: cfg.n,
        seed: cfg.seed,
        steps_requested: cfg.steps,
        steps_completed: levels.len().saturating_sub(1),
        run_params,
        epsilon: initial.epsilon.epsilon,
        levels,
        fault: outcome.as_ref().err().map(|e| e.to_string()),
    };
    write_json(&dir.join("summary.json"), &summary)?;
    outcome?;
    if summary.steps_completed > 0 {
        analyze(dir)?;
    }
    Ok(summary)
}

fn level_summary(r: &InductiveReport, bad: &BadSet, degenerate: bool) -> LevelSummary {
    LevelSummary {
        q: r.q,
        structural_pass: r.structural_pass(),
        enforced_pass: r.enforced_pass(),
        failures: r.failures(),
        bad_measure: bad.measure(),
        bad_intervals: bad.intervals.len(),
        degenerate_perturbation: degenerate,
    }
}

/// Bad sets of every completed level, in order.
pub fn load_bad_sets(dir: &Path) -> Result<Vec<BadSet>> {
    let mut out = Vec::new();
    for q in 0.. {
        let p = step_dir(dir, q).join("badset.json");
        if !p.exists() {
            break;
        }
        out.push(read_json(&p)?);
    }
    if out.is_empty() {
        return Err(Error::Precondition(format!("no step_*/badset.json under {}", dir.display())));
    }
    Ok(out)
}

pub fn energy_profile(slices: &[SliceRecord]) -> Result<EnergyProfile> {
    let s = sorted_slices(slices);
    EnergyProfile::new(s.iter().map(|r| r.t).collect(), s.iter().map(|r| r.energy).collect())
}

/// Singular-set analysis of a run directory; writes `dimension_report.json`.
pub fn analyze(dir: &Path) -> Result<DimensionReport> {
    let summary: RunSummary = read_json(&dir.join("summary.json"))?;
    let sets = load_bad_sets(dir)?;
    let last = sets.last().expect("non-empty").q;
    let profile = energy_profile(&read_metrics(&step_dir(dir, last).join("metrics.csv"))?)?;
    let report = dimension_report(&sets, &summary.run_params, Some(&profile))?;
    write_json(&dir.join("dimension_report.json"), &report)?;
    Ok(report)
}

/// CSVs for plotting, under `<dir>/plot`: the final-level metrics, the norm
/// history of every level, the bad-set intervals and the covering counts.
pub fn plot_data(dir: &Path) -> Result<Vec<PathBuf>> {
    let out = dir.join("plot");
    std::fs::create_dir_all(&out)?;
    let sets = load_bad_sets(dir)?;
    let mut files = Vec::new();

    let last = sets.last().expect("non-empty").q;
    let metrics = out.join("metrics.csv");
    write_metrics(&metrics, &read_metrics(&step_dir(dir, last).join("metrics.csv"))?)?;
    files.push(metrics);

    let norms = out.join("norms.csv");
    let mut w = csv::Writer::from_path(&norms).map_err(csv_err)?;
    w.write_record(["level", "t", "energy", "r_c0", "v_c0", "v_c1"]).map_err(csv_err)?;
    for b in &sets {
        for s in sorted_slices(&read_metrics(&step_dir(dir, b.q).join("metrics.csv"))?) {
            w.serialize((b.q, s.t, s.energy, s.r_c0, s.v_c0, s.v_c1)).map_err(csv_err)?;
        }
    }
    w.flush()?;
    files.push(norms);

    let bad = out.join("badsets.csv");
    let mut w = csv::Writer::from_path(&bad).map_err(csv_err)?;
    w.write_record(["level", "lo", "hi"]).map_err(csv_err)?;
    for b in &sets {
        for j in &b.intervals {
            w.serialize((b.q, j.lo, j.hi)).map_err(csv_err)?;
        }
    }
    w.flush()?;
    files.push(bad);

    let dims = out.join("dimension.csv");
    let mut w = csv::Writer::from_path(&dims).map_err(csv_err)?;
    w.write_record(["level", "count", "scale"]).map_err(csv_err)?;
    for b in &sets {
        let scale = b.intervals.iter().map(|j| j.len()).fold(0.0, f64::max);
        w.serialize((b.q, b.intervals.len(), scale)).map_err(csv_err)?;
    }
    w.flush()?;
    files.push(dims);
    Ok(files)
}
