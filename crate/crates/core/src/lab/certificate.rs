use serde::{Deserialize, Serialize};

use crate::ageing::{check_ageing, AgeingProperty, Window};
use crate::dist::{FinitePmf, ParametricSurvival};
use crate::orders::{check_order, OrderRelation};
use crate::tilt::{tilt_pmf, TiltParameter, Tilted};
use crate::verdict::Verdict;

use super::{ClaimKind, LabError, PreservationClaim};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Baseline {
    Finite(FinitePmf),
    Parametric(ParametricSurvival),
}

/// What a claim is tested on: one baseline for an ageing claim, an ordered
/// pair `(X1, X2)` for an order claim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Subject {
    Single {
        baseline: Baseline,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<Window>,
    },
    Pair {
        first: FinitePmf,
        second: FinitePmf,
    },
}

impl Subject {
    pub fn finite(d: FinitePmf) -> Subject {
        Subject::Single {
            baseline: Baseline::Finite(d),
            window: None,
        }
    }

    pub fn parametric(s: ParametricSurvival, window: Option<Window>) -> Subject {
        Subject::Single {
            baseline: Baseline::Parametric(s),
            window,
        }
    }

    pub fn pair(first: FinitePmf, second: FinitePmf) -> Subject {
        Subject::Pair { first, second }
    }
}

/// Where a certificate came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "phase", rename_all = "snake_case")]
pub enum Origin {
    /// Built directly by [`check_preservation`].
    Direct,
    Registry {
        case: String,
    },
    Pool {
        index: u64,
    },
    Exhaustive {
        index: u64,
    },
    ParametricGrid {
        index: u64,
    },
    Random {
        trial: u64,
    },
    /// A violation met while running trials of a cell expected preserved.
    Trial {
        index: u64,
    },
}

/// A tilt `alpha` of `subject` with the claim's property (or order)
/// evaluated before and after. Replaying recomputes both verdicts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreservationCertificate {
    pub claim: PreservationClaim,
    pub subject: Subject,
    pub alpha: TiltParameter,
    pub before: Verdict,
    pub after: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub origin: Origin,
}

impl PreservationCertificate {
    /// Recomputes both verdicts from the stored subject and tilt.
    pub fn replay(&self) -> Result<(), LabError> {
        let before = evaluate_before(&self.claim, &self.subject)?;
        if before != self.before {
            return Err(LabError::ReplayMismatch(format!(
                "before tilt: stored {}, recomputed {before}",
                self.before
            )));
        }
        let after = evaluate_after(&self.claim, &self.subject, &self.alpha)?;
        if after != self.after {
            return Err(LabError::ReplayMismatch(format!(
                "after tilt: stored {}, recomputed {after}",
                self.after
            )));
        }
        Ok(())
    }

    /// The baseline has the property and its tilt does not.
    pub fn is_violation(&self) -> bool {
        self.before.holds && !self.after.holds
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub(crate) fn with_origin(mut self, origin: Origin, seed: Option<u64>) -> Self {
        self.origin = origin;
        self.seed = seed;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Preservation {
    Preserved { before: Verdict, after: Verdict },
    Violated(PreservationCertificate),
}

fn single<'a>(
    claim: &PreservationClaim,
    subject: &'a Subject,
) -> Result<(AgeingProperty, &'a Baseline, Option<Window>), LabError> {
    match (claim.kind, subject) {
        (ClaimKind::Ageing(p), Subject::Single { baseline, window }) => Ok((p, baseline, *window)),
        _ => Err(LabError::SubjectMismatch {
            claim: claim.cell_id(),
            needed: "single baseline",
        }),
    }
}

fn pair<'a>(
    claim: &PreservationClaim,
    subject: &'a Subject,
) -> Result<(OrderRelation, &'a FinitePmf, &'a FinitePmf), LabError> {
    match (claim.kind, subject) {
        (ClaimKind::Order(r), Subject::Pair { first, second }) => Ok((r, first, second)),
        _ => Err(LabError::SubjectMismatch {
            claim: claim.cell_id(),
            needed: "pair of finite distributions",
        }),
    }
}

/// The claim's property (or order) on the untilted subject.
pub(crate) fn evaluate_before(
    claim: &PreservationClaim,
    subject: &Subject,
) -> Result<Verdict, LabError> {
    match claim.kind {
        ClaimKind::Ageing(_) => {
            let (p, baseline, window) = single(claim, subject)?;
            Ok(match baseline {
                Baseline::Finite(d) => check_ageing(p, d, window)?,
                Baseline::Parametric(s) => check_ageing(p, s, window)?,
            })
        }
        ClaimKind::Order(_) => {
            let (r, x1, x2) = pair(claim, subject)?;
            Ok(check_order(r, x1, x2))
        }
    }
}

/// The claim's property (or order) on the subject tilted by `alpha`.
pub(crate) fn evaluate_after(
    claim: &PreservationClaim,
    subject: &Subject,
    alpha: &TiltParameter,
) -> Result<Verdict, LabError> {
    match claim.kind {
        ClaimKind::Ageing(_) => {
            let (p, baseline, window) = single(claim, subject)?;
            Ok(match baseline {
                Baseline::Finite(d) => check_ageing(p, &tilt_pmf(d, alpha), window)?,
                Baseline::Parametric(s) => {
                    check_ageing(p, &Tilted::new(s, alpha.to_real()), window)?
                }
            })
        }
        ClaimKind::Order(_) => {
            let (r, x1, x2) = pair(claim, subject)?;
            Ok(check_order(r, &tilt_pmf(x1, alpha), &tilt_pmf(x2, alpha)))
        }
    }
}

/// Tilts a subject that satisfies the claim's hypothesis and reports whether
/// the property survives.
pub fn check_preservation(
    claim: &PreservationClaim,
    subject: &Subject,
    alpha: &TiltParameter,
) -> Result<Preservation, LabError> {
    if !claim.regime.contains(alpha) {
        return Err(LabError::AlphaOutsideRegime {
            alpha: alpha.clone(),
            regime: claim.regime,
        });
    }
    let before = evaluate_before(claim, subject)?;
    if !before.holds {
        return Err(LabError::HypothesisNotSatisfied {
            hypothesis: claim.kind.label(),
            verdict: Box::new(before),
        });
    }
    tilt_checked(claim, subject, alpha, before)
}

/// [`check_preservation`] after the hypothesis is known to hold.
pub(crate) fn tilt_checked(
    claim: &PreservationClaim,
    subject: &Subject,
    alpha: &TiltParameter,
    before: Verdict,
) -> Result<Preservation, LabError> {
    let after = evaluate_after(claim, subject, alpha)?;
    if after.holds {
        Ok(Preservation::Preserved { before, after })
    } else {
        Ok(Preservation::Violated(PreservationCertificate {
            claim: *claim,
            subject: subject.clone(),
            alpha: alpha.clone(),
            before,
            after,
            seed: None,
            origin: Origin::Direct,
        }))
    }
}
