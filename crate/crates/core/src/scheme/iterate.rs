//! Chaining `glue ∘ perturb` over the steps.

use super::badset::BadSet;
use super::glue::{glue, GlueOptions, GlueReport, Glued};
use super::history::History;
use super::perturb::{PerturbOptions, PerturbReport, Perturbed, SliceDiag};
use super::verify::{verify_inductive, verify_initial, InductiveReport, StepContext};
use super::Mode;
use crate::mikado::MikadoFamily;
use crate::params::SchemeParams;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Clone)]
pub struct Level {
    pub q: usize,
    pub history: Arc<dyn History>,
    pub bad: BadSet,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub mode: Mode,
    pub glue: GlueOptions,
    pub perturb: PerturbOptions,
    pub coarse_samples: usize,
    /// Samples per `τ_{q+1}` on the new bad set.
    pub slices_per_tau: usize,
    /// Every `diag_stride`-th perturbed slice carries full diagnostics.
    pub diag_stride: usize,
    /// Subsampling of the residual and higher-norm checks.
    pub residual_stride: usize,
    pub good_residual_tol: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            mode: Mode::StructureOnly,
            glue: GlueOptions::default(),
            perturb: PerturbOptions::default(),
            coarse_samples: 257,
            slices_per_tau: 8,
            diag_stride: 8,
            residual_stride: 8,
            good_residual_tol: 1e-8,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SliceRecord {
    pub t: f64,
    pub energy: f64,
    pub r_c0: f64,
    pub v_c0: f64,
    pub v_c1: f64,
    pub good: bool,
    pub real_bad: bool,
}

pub struct StepArtifacts {
    pub q: usize,
    pub level: Level,
    pub inductive: InductiveReport,
    pub slices: Vec<SliceRecord>,
    pub glue: Option<GlueReport>,
    pub perturb: Option<PerturbReport>,
    pub diags: Vec<SliceDiag>,
    pub glued: Option<Arc<Glued>>,
    pub perturbed: Option<Arc<Perturbed>>,
}

/// Level-0 artifacts.
pub fn initial_step(level: Level, p: &SchemeParams, m: f64, opts: &RunOptions) -> Result<StepArtifacts> {
    let (inductive, slices) = verify_initial(&level, p, m, opts)?;
    Ok(StepArtifacts {
        q: 0,
        level,
        inductive,
        slices,
        glue: None,
        perturb: None,
        diags: Vec::new(),
        glued: None,
        perturbed: None,
    })
}

/// One `glue ∘ perturb` step from the last of `levels`.
pub fn step(
    levels: &[Level],
    p: &SchemeParams,
    family: &Arc<MikadoFamily>,
    m: f64,
    opts: &RunOptions,
) -> Result<StepArtifacts> {
    let prev = levels.last().expect("at least the initial level");
    let mut gopts = opts.glue.clone();
    gopts.mode = opts.mode;
    let (glued, next_bad, glue_report) = glue(prev.history.clone(), &prev.bad, p, &gopts)?;
    let glued = Arc::new(glued);
    let (perturbed, perturb_report) = Perturbed::new(glued.clone(), family.clone(), p, m, &opts.perturb)?;
    let perturbed = Arc::new(perturbed);
    let ctx = StepContext {
        levels,
        glued: &glued,
        perturbed: &perturbed,
        next_bad: &next_bad,
        glue: &glue_report,
        perturb: &perturb_report,
    };
    let (inductive, slices, diags) = verify_inductive(&ctx, p, m, opts)?;
    let level = Level { q: prev.q + 1, history: perturbed.clone(), bad: next_bad };
    Ok(StepArtifacts {
        q: level.q,
        level,
        inductive,
        slices,
        glue: Some(glue_report),
        perturb: Some(perturb_report),
        diags,
        glued: Some(glued),
        perturbed: Some(perturbed),
    })
}

/// Run `steps` steps from the initial level, handing each step's artifacts to
/// `sink` as soon as they exist. Stops at the first fault.
pub fn iterate(
    initial: Level,
    p: &SchemeParams,
    family: &Arc<MikadoFamily>,
    m: f64,
    steps: usize,
    opts: &RunOptions,
    mut sink: impl FnMut(&StepArtifacts) -> Result<()>,
) -> Result<Vec<Level>> {
    let first = initial_step(initial, p, m, opts)?;
    sink(&first)?;
    let mut levels = vec![first.level.clone()];
    check(&first.inductive, opts.mode)?;
    for _ in 0..steps {
        let art = step(&levels, p, family, m, opts)?;
        sink(&art)?;
        check(&art.inductive, opts.mode)?;
        levels.push(art.level.clone());
    }
    Ok(levels)
}

fn check(r: &InductiveReport, mode: Mode) -> Result<()> {
    let ok = match mode {
        Mode::Strict => r.enforced_pass(),
        Mode::StructureOnly => r.structural_pass(),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Guard(format!("inductive check at level {} failed: {}", r.q, r.failures().join("; "))))
    }
}
