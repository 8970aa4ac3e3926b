//! Zariski-van Kampen pipeline: critical values of the projection to `x`,
//! meridian planning, braid monodromy, and presentations of the complement.

mod critical;
mod monodromy;
mod plan;
mod presentation;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, BiPoly};
use crate::braid::BraidError;
use crate::roots::{PathSample, RootsError, TrackOptions};

pub use critical::{critical_values, genericity_fix, CriticalSet, GenericityRecord};
pub use monodromy::{braid_from_samples, braid_monodromy, braid_monodromy_with, MonodromyRep};
pub use plan::{plan_loops, LoopPlan, PlannedLoop};
pub use presentation::{
    abelianize, canonical_relator, is_commutator, quotient_by_generators, smith_diagonal, tietze_simplify,
    zvk_presentation, zvk_total_space_presentation, Abelianization, Presentation,
};

pub(crate) use critical::ser_display;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZvkError {
    #[error("leading y-coefficient {0} is not constant; apply genericity_fix or a projective transform")]
    NonConstantLeading(String),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("no generic shear found after {0} attempts")]
    GenericityFailed(u32),
    #[error("cannot resolve strand crossing near t = {0}")]
    AmbiguousCrossing(f64),
    #[error("braid word does not realize the tracked permutation")]
    PermutationMismatch,
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    Roots(#[from] RootsError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

pub const DEFAULT_TIETZE_BUDGET: usize = 64;

/// Settings of the full pipeline.
#[derive(Clone, Debug)]
pub struct Pi1Config {
    pub precision: u32,
    pub seed: u64,
    pub budget: usize,
    pub keep_trajectories: bool,
}

impl Default for Pi1Config {
    fn default() -> Self {
        Pi1Config { precision: 53, seed: 0, budget: DEFAULT_TIETZE_BUDGET, keep_trajectories: false }
    }
}

/// Everything the pipeline computed, in order.
#[derive(Clone, Debug, Serialize)]
pub struct Pi1Result {
    #[serde(serialize_with = "ser_display")]
    pub input: BiPoly,
    pub genericity: GenericityRecord,
    #[serde(serialize_with = "ser_display")]
    pub curve: BiPoly,
    pub critical: CriticalSet,
    pub plan: LoopPlan,
    pub monodromy: MonodromyRep,
    pub presentation: Presentation,
    pub simplified: Presentation,
    pub abelianization: Abelianization,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectories: Option<Vec<Vec<PathSample>>>,
}

/// Fundamental group of `C^2` minus the curve `f = 0`: genericity fix,
/// critical values, meridians, braid monodromy, presentation, Tietze
/// simplification and abelianization.
pub fn pi1(f: &BiPoly, cfg: &Pi1Config) -> Result<Pi1Result, ZvkError> {
    let (curve, genericity) = genericity_fix(f, cfg.seed)?;
    let critical = critical_values(&curve)?;
    let plan = plan_loops(&critical);
    let (monodromy, traj) = braid_monodromy_with(&curve, &plan, &TrackOptions::with_precision(cfg.precision))?;
    let presentation = zvk_presentation(&monodromy);
    let simplified = tietze_simplify(&presentation, cfg.budget);
    let abelianization = abelianize(&simplified);
    Ok(Pi1Result {
        input: f.clone(),
        genericity,
        curve,
        critical,
        plan,
        monodromy,
        presentation,
        simplified,
        abelianization,
        trajectories: cfg.keep_trajectories.then_some(traj),
    })
}
