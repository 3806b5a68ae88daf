//! Runs every preservation cell and renders the verdict matrix.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::orders::{check_order, OrderRelation};
use crate::tilt::{tilt_pmf, TiltParameter};

use super::certificate::{evaluate_before, tilt_checked};
use super::generate::{constructive_subject, random_alpha, random_subject, trial_rng};
use super::search::{search_counterexample, SearchBudget, SearchOutcome};
use super::{
    ClaimKind, Expectation, LabError, Origin, Preservation, PreservationCertificate,
    PreservationClaim, Subject,
};

/// Rejection draws per trial before switching to the constructive generator.
const REJECTION_LIMIT: u32 = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub trials: u64,
    pub passed: u64,
    /// Trials whose instance came from the constructive generator.
    pub constructed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<Box<PreservationCertificate>>,
}

impl TrialSummary {
    pub fn violations(&self) -> u64 {
        self.trials - self.passed
    }
}

/// A hypothesis-satisfying instance for `claim`, and whether it was built
/// constructively.
fn hypothesis_instance(
    rng: &mut impl Rng,
    claim: &PreservationClaim,
    budget: &SearchBudget,
) -> Result<(Subject, bool), LabError> {
    let (n, m) = (budget.max_support, budget.max_denominator);
    if !claim.parametric_only() {
        for _ in 0..REJECTION_LIMIT {
            let s = random_subject(rng, claim.kind, n, m);
            if evaluate_before(claim, &s)?.holds {
                return Ok((s, false));
            }
        }
    }
    Ok((constructive_subject(rng, claim.kind, n, m), true))
}

struct TrialResult {
    constructed: bool,
    violation: Option<PreservationCertificate>,
}

fn run_trial(
    claim: &PreservationClaim,
    budget: &SearchBudget,
    seed: u64,
    index: u64,
) -> Result<TrialResult, LabError> {
    let mut rng = trial_rng(seed, claim.stream(), index);
    let alpha = random_alpha(&mut rng, claim.regime);
    let (subject, constructed) = hypothesis_instance(&mut rng, claim, budget)?;
    let before = evaluate_before(claim, &subject)?;
    let origin = Origin::Trial { index };
    if let Preservation::Violated(cert) = tilt_checked(claim, &subject, &alpha, before)? {
        return Ok(TrialResult {
            constructed,
            violation: Some(cert.with_origin(origin, Some(seed))),
        });
    }
    if let (ClaimKind::Order(OrderRelation::St), Subject::Pair { first, second }) =
        (claim.kind, &subject)
    {
        // the converse direction, on the swapped pair
        let swapped = Subject::pair(second.clone(), first.clone());
        if let Some(cert) = st_converse_violation(claim, &swapped, &alpha) {
            return Ok(TrialResult {
                constructed,
                violation: Some(cert.with_origin(origin, Some(seed))),
            });
        }
    }
    Ok(TrialResult {
        constructed,
        violation: None,
    })
}

/// `st` must hold after the tilt exactly when it holds before.
fn st_converse_violation(
    claim: &PreservationClaim,
    subject: &Subject,
    alpha: &TiltParameter,
) -> Option<PreservationCertificate> {
    let Subject::Pair { first, second } = subject else {
        return None;
    };
    let before = check_order(OrderRelation::St, first, second);
    let after = check_order(
        OrderRelation::St,
        &tilt_pmf(first, alpha),
        &tilt_pmf(second, alpha),
    );
    (before.holds != after.holds).then(|| PreservationCertificate {
        claim: *claim,
        subject: subject.clone(),
        alpha: alpha.clone(),
        before,
        after,
        seed: None,
        origin: Origin::Direct,
    })
}

/// Runs `trials` random hypothesis-satisfying instances of `claim`, each with
/// a random tilt from its regime. Results are merged in trial order.
pub fn theorem_trials(
    claim: &PreservationClaim,
    trials: u64,
    seed: u64,
    budget: &SearchBudget,
) -> Result<TrialSummary, LabError> {
    let results: Vec<Result<TrialResult, LabError>> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(claim, budget, seed, i))
        .collect();
    let mut summary = TrialSummary {
        trials,
        passed: 0,
        constructed: 0,
        first_violation: None,
    };
    for r in results {
        let r = r?;
        summary.constructed += u64::from(r.constructed);
        match r.violation {
            None => summary.passed += 1,
            Some(cert) => {
                if summary.first_violation.is_none() {
                    summary.first_violation = Some(Box::new(cert));
                }
            }
        }
    }
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum CellOutcome {
    /// Every trial kept the property.
    Confirmed(TrialSummary),
    /// Some trial lost the property.
    Refuted(TrialSummary),
    Certificate {
        certificate: Box<PreservationCertificate>,
    },
    Exhausted {
        candidates: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub cell: String,
    pub claim: PreservationClaim,
    pub outcome: CellOutcome,
}

impl TableRow {
    /// Whether the outcome matches the stated expectation. Unstated cells
    /// always agree.
    pub fn agrees(&self) -> bool {
        match self.claim.expected {
            Expectation::Preserved => matches!(self.outcome, CellOutcome::Confirmed(_)),
            Expectation::NotPreserved => matches!(self.outcome, CellOutcome::Certificate { .. }),
            Expectation::Unstated => true,
        }
    }

    fn describe(&self) -> String {
        match &self.outcome {
            CellOutcome::Confirmed(s) => format!("{}/{} trials preserved", s.passed, s.trials),
            CellOutcome::Refuted(s) => {
                let w = s
                    .first_violation
                    .as_ref()
                    .map(|c| certificate_summary(c))
                    .unwrap_or_default();
                format!(
                    "{} of {} trials violated; first {w}",
                    s.violations(),
                    s.trials
                )
            }
            CellOutcome::Certificate { certificate } => {
                format!("certificate {}", certificate_summary(certificate))
            }
            CellOutcome::Exhausted { candidates } => {
                format!("no violation in {candidates} candidates")
            }
        }
    }
}

fn certificate_summary(c: &PreservationCertificate) -> String {
    let subject = match &c.subject {
        Subject::Single { baseline, window } => {
            let b = match baseline {
                super::Baseline::Finite(d) => format!("pmf {d}"),
                super::Baseline::Parametric(s) => s.to_string(),
            };
            match window {
                Some(w) => format!("{b} on {w}"),
                None => b,
            }
        }
        Subject::Pair { first, second } => format!("pmfs {first} vs {second}"),
    };
    let at = c
        .after
        .witness
        .as_ref()
        .map(|w| format!(", fails at {}", w.at))
        .unwrap_or_default();
    let origin = match &c.origin {
        Origin::Direct => String::from("direct"),
        Origin::Registry { case } => format!("registry {case}"),
        Origin::Pool { index } => format!("pool #{index}"),
        Origin::Exhaustive { index } => format!("exhaustive #{index}"),
        Origin::ParametricGrid { index } => format!("grid #{index}"),
        Origin::Random { trial } => format!("random trial {trial}"),
        Origin::Trial { index } => format!("trial {index}"),
    };
    format!("[{origin}] alpha={} {subject}{at}", c.alpha)
}

/// Settles one cell: trials for expected-preserved cells, a search otherwise.
pub fn run_cell(
    claim: &PreservationClaim,
    budget: &SearchBudget,
    trials: u64,
) -> Result<TableRow, LabError> {
    let outcome = match claim.expected {
        Expectation::Preserved => {
            let s = theorem_trials(claim, trials, budget.seed, budget)?;
            if s.first_violation.is_none() {
                CellOutcome::Confirmed(s)
            } else {
                CellOutcome::Refuted(s)
            }
        }
        Expectation::NotPreserved | Expectation::Unstated => {
            match search_counterexample(claim, budget)? {
                SearchOutcome::Found { certificate } => CellOutcome::Certificate { certificate },
                SearchOutcome::Exhausted { candidates } => CellOutcome::Exhausted { candidates },
            }
        }
    };
    Ok(TableRow {
        cell: claim.cell_id(),
        claim: *claim,
        outcome,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub seed: u64,
    pub trials: u64,
    pub rows: Vec<TableRow>,
}

impl TableReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(TableRow::agrees)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "preservation under tilt (seed {}, {} trials per preserved cell)",
            self.seed, self.trials
        );
        let _ = writeln!(
            out,
            "{:<10} {:<6} {:<8} {:<14} {:<6} outcome",
            "cell", "class", "regime", "expected", "agree"
        );
        for row in &self.rows {
            let agree = match (row.claim.expected, row.agrees()) {
                (Expectation::Unstated, _) => "-",
                (_, true) => "yes",
                (_, false) => "NO",
            };
            let _ = writeln!(
                out,
                "{:<10} {:<6} {:<8} {:<14} {:<6} {}",
                row.cell,
                row.claim.kind.label(),
                row.claim.regime.label(),
                row.claim.expected.label(),
                agree,
                row.describe()
            );
        }
        let stated: Vec<&TableRow> = self
            .rows
            .iter()
            .filter(|r| r.claim.expected != Expectation::Unstated)
            .collect();
        let agreeing = stated.iter().filter(|r| r.agrees()).count();
        let _ = writeln!(out, "{agreeing}/{} stated cells agree", stated.len());
        out
    }
}

/// All 28 cells in table order.
pub fn preservation_table(budget: &SearchBudget, trials: u64) -> Result<TableReport, LabError> {
    if trials == 0 {
        return Err(LabError::InvalidBudget("trials must be positive".into()));
    }
    let rows = PreservationClaim::table()
        .iter()
        .map(|c| run_cell(c, budget, trials))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TableReport {
        seed: budget.seed,
        trials,
        rows,
    })
}
