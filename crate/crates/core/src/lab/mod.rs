//! Preservation experiments for the tilt.
//!
//! Each cell of the two preservation tables is a [`PreservationClaim`]. A
//! cell expected to be preserved is exercised by randomized
//! hypothesis-satisfying trials; a cell expected not to be preserved is
//! settled by a [`PreservationCertificate`], either pinned in the case
//! registry or found by [`search_counterexample`]. Every certificate replays
//! through the tilt and checker modules.
//!
//! All randomness is derived from `(seed, cell, trial index)`, so results do
//! not depend on the thread count.

mod certificate;
mod claims;
pub mod generate;
mod profile;
mod registry;
mod search;
mod table;

use thiserror::Error;

use crate::ageing::AgeingError;
use crate::dist::DistError;
use crate::tilt::TiltParameter;
use crate::verdict::Verdict;

pub use certificate::{
    check_preservation, Baseline, Origin, Preservation, PreservationCertificate, Subject,
};
pub use claims::{AlphaRegime, ClaimKind, Expectation, PreservationClaim};
pub use generate::{random_alpha, random_pmf, trial_rng};
pub use profile::{hazard_ratio_profile, HazardRatioProfile, Trend};
pub use registry::{
    case_ids, reproduce_all, reproduce_case, CaseReport, ConclusionCheck, Printed, ValueCheck,
};
pub use search::{search_counterexample, search_with_pool, SearchBudget, SearchOutcome};
pub use table::{
    preservation_table, run_cell, theorem_trials, CellOutcome, TableReport, TableRow, TrialSummary,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error("baseline does not satisfy the hypothesis {hypothesis}: {verdict}")]
    HypothesisNotSatisfied {
        hypothesis: String,
        verdict: Box<Verdict>,
    },
    #[error("alpha = {alpha} lies outside the regime {regime}")]
    AlphaOutsideRegime {
        alpha: TiltParameter,
        regime: AlphaRegime,
    },
    #[error("claim {claim} needs a {needed}")]
    SubjectMismatch { claim: String, needed: &'static str },
    #[error("cell {0} is expected to be preserved; there is no counterexample to search for")]
    NothingToSearch(String),
    #[error("invalid search budget: {0}")]
    InvalidBudget(String),
    #[error("unknown case {0:?}")]
    UnknownCase(String),
    #[error("unknown cell {0:?}")]
    UnknownCell(String),
    #[error("certificate does not replay: {0}")]
    ReplayMismatch(String),
    #[error(transparent)]
    Ageing(#[from] AgeingError),
    #[error(transparent)]
    Dist(#[from] DistError),
}
