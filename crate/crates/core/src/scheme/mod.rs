//! The iteration: initial pair, gluing, perturbation, inductive checks.

pub mod badset;
pub mod cutoffs;
pub mod glue;
pub mod history;
pub mod initial;
pub mod iterate;
pub mod perturb;
pub mod verify;

use serde::{Deserialize, Serialize};

pub use badset::{BadSet, Interval};
pub use glue::{glue, GlueOptions, GlueReport, Glued};
pub use history::History;
pub use initial::{make_initial_pair, InitialOptions, InitialPair, InitialReport, Source};
pub use iterate::{iterate, Level, RunOptions, SliceRecord, StepArtifacts};
pub use perturb::{PerturbOptions, PerturbReport, Perturbed};
pub use verify::{EstimateRecord, InductiveReport, PropertyRecord};

/// `Strict` enforces every inequality; `StructureOnly` enforces identities, supports
/// and set properties and reports magnitude estimates as ratios.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Strict,
    StructureOnly,
}
