//! Counterexample search for cells expected not to be preserved.
//!
//! Phases run in a fixed order and the first violation wins:
//! 1. the caller's pool of subjects;
//! 2. every small finite pmf (support up to 4, integer weights summing to at
//!    most 8; pairs: support up to 3, total up to 5), skipped for the
//!    parametric-only hypotheses;
//! 3. a grid over the four parametric families (ageing claims only);
//! 4. seeded random trials, evaluated in parallel chunks and merged in index
//!    order.
//!
//! Each subject is tried against every tilt candidate of the claim's regime.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ageing::Window;
use crate::dist::{make_pmf, FamilyParams, FinitePmf, ParametricSurvival};
use crate::fraction::ExactFraction;
use crate::tilt::TiltParameter;

use super::certificate::{evaluate_before, tilt_checked};
use super::generate::{
    constructive_subject, decreasing_hazard_family, random_family, random_subject, trial_rng,
};
use super::{
    AlphaRegime, ClaimKind, Expectation, LabError, Origin, Preservation, PreservationCertificate,
    PreservationClaim, Subject,
};

const CHUNK: u64 = 64;
const GRID_HORIZON: u64 = 40;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchBudget {
    pub max_support: u64,
    pub max_denominator: u64,
    pub alpha_below: Vec<TiltParameter>,
    pub alpha_above: Vec<TiltParameter>,
    /// Random subjects drawn in the last phase.
    pub trial_limit: u64,
    /// Checked between random chunks; a run that stops on time is still
    /// reported as exhausted.
    pub time_limit: Duration,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_support: 6,
            max_denominator: 20,
            alpha_below: vec![
                TiltParameter::ratio(1, 5),
                TiltParameter::ratio(2, 5),
                TiltParameter::ratio(4, 5),
            ],
            alpha_above: vec![
                TiltParameter::ratio(2, 1),
                TiltParameter::ratio(4, 1),
                TiltParameter::ratio(6, 1),
            ],
            trial_limit: 5000,
            time_limit: Duration::from_secs(60),
            seed: 0,
        }
    }
}

impl SearchBudget {
    pub fn with_seed(seed: u64) -> Self {
        SearchBudget {
            seed,
            ..SearchBudget::default()
        }
    }

    pub fn alphas(&self, regime: AlphaRegime) -> &[TiltParameter] {
        match regime {
            AlphaRegime::BelowOne => &self.alpha_below,
            AlphaRegime::AboveOne => &self.alpha_above,
        }
    }

    pub fn validate(&self) -> Result<(), LabError> {
        let bad = |m: &str| Err(LabError::InvalidBudget(m.to_string()));
        if self.max_support < 2 {
            return bad("max_support must be at least 2");
        }
        if self.max_denominator < 2 {
            return bad("max_denominator must be at least 2");
        }
        if self.trial_limit == 0 {
            return bad("trial_limit must be positive");
        }
        if self.time_limit.is_zero() {
            return bad("time_limit must be positive");
        }
        for regime in AlphaRegime::ALL {
            let list = self.alphas(regime);
            if list.is_empty() {
                return bad(&format!("no tilt candidates for {regime}"));
            }
            if let Some(a) = list.iter().find(|a| !regime.contains(a)) {
                return bad(&format!("candidate {a} is not in {regime}"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found {
        certificate: Box<PreservationCertificate>,
    },
    /// No violation among `candidates` (subject, tilt) attempts. Not a proof.
    Exhausted { candidates: u64 },
}

struct Searcher<'a> {
    claim: PreservationClaim,
    alphas: &'a [TiltParameter],
    candidates: u64,
}

impl Searcher<'_> {
    /// Tries `subject` against every tilt candidate.
    fn try_subject(
        &mut self,
        subject: &Subject,
    ) -> Result<Option<PreservationCertificate>, LabError> {
        let (found, tried) = try_alphas(&self.claim, self.alphas, subject)?;
        self.candidates += tried;
        Ok(found)
    }
}

fn try_alphas(
    claim: &PreservationClaim,
    alphas: &[TiltParameter],
    subject: &Subject,
) -> Result<(Option<PreservationCertificate>, u64), LabError> {
    let before = evaluate_before(claim, subject)?;
    if !before.holds {
        return Ok((None, alphas.len() as u64));
    }
    for (i, alpha) in alphas.iter().enumerate() {
        if let Preservation::Violated(cert) = tilt_checked(claim, subject, alpha, before.clone())? {
            return Ok((Some(cert), i as u64 + 1));
        }
    }
    Ok((None, alphas.len() as u64))
}

/// Search with an empty pool.
pub fn search_counterexample(
    claim: &PreservationClaim,
    budget: &SearchBudget,
) -> Result<SearchOutcome, LabError> {
    search_with_pool(claim, budget, &[])
}

/// Searches for a subject satisfying the claim's hypothesis whose tilt does
/// not. Only cells expected not preserved (or unstated) may be searched.
pub fn search_with_pool(
    claim: &PreservationClaim,
    budget: &SearchBudget,
    pool: &[Subject],
) -> Result<SearchOutcome, LabError> {
    if claim.expected == Expectation::Preserved {
        return Err(LabError::NothingToSearch(claim.cell_id()));
    }
    budget.validate()?;
    let started = Instant::now();
    let mut s = Searcher {
        claim: *claim,
        alphas: budget.alphas(claim.regime),
        candidates: 0,
    };
    let found = |cert: PreservationCertificate, origin| {
        Ok(SearchOutcome::Found {
            certificate: Box::new(cert.with_origin(origin, Some(budget.seed))),
        })
    };

    for (i, subject) in pool.iter().enumerate() {
        if let Some(cert) = s.try_subject(subject)? {
            return found(cert, Origin::Pool { index: i as u64 });
        }
    }

    if !claim.parametric_only() {
        let subjects = small_subjects(claim.kind, budget);
        for (i, subject) in subjects.iter().enumerate() {
            if let Some(cert) = s.try_subject(subject)? {
                return found(cert, Origin::Exhaustive { index: i as u64 });
            }
        }
    }

    if let ClaimKind::Ageing(_) = claim.kind {
        for (i, subject) in parametric_grid(claim.parametric_only()).iter().enumerate() {
            if let Some(cert) = s.try_subject(subject)? {
                return found(cert, Origin::ParametricGrid { index: i as u64 });
            }
        }
    }

    let mut next = 0;
    while next < budget.trial_limit {
        if started.elapsed() > budget.time_limit {
            break;
        }
        let end = (next + CHUNK).min(budget.trial_limit);
        let results: Vec<Result<(Option<PreservationCertificate>, u64), LabError>> = (next..end)
            .into_par_iter()
            .map(|i| {
                let subject = random_search_subject(claim, budget, i);
                try_alphas(claim, s.alphas, &subject)
            })
            .collect();
        for (offset, r) in results.into_iter().enumerate() {
            let (cert, tried) = r?;
            s.candidates += tried;
            if let Some(cert) = cert {
                return found(
                    cert,
                    Origin::Random {
                        trial: next + offset as u64,
                    },
                );
            }
        }
        next = end;
    }
    Ok(SearchOutcome::Exhausted {
        candidates: s.candidates,
    })
}

/// Trial `i` of the random phase: every fourth subject is built to satisfy
/// the hypothesis; ageing claims also draw parametric subjects.
fn random_search_subject(claim: &PreservationClaim, budget: &SearchBudget, i: u64) -> Subject {
    let mut rng = trial_rng(budget.seed, claim.stream(), i);
    let (n, m) = (budget.max_support, budget.max_denominator);
    if claim.parametric_only() {
        return if i.is_multiple_of(2) {
            decreasing_hazard_family(&mut rng)
        } else {
            random_family(&mut rng)
        };
    }
    match (i % 4, claim.kind) {
        (0, kind) => constructive_subject(&mut rng, kind, n, m),
        (1, ClaimKind::Ageing(_)) => random_family(&mut rng),
        (_, kind) => random_subject(&mut rng, kind, n, m),
    }
}

/// Nonnegative integer vectors of length `n` summing to `total`, last entry
/// positive, in lexicographic order.
fn compositions(n: usize, total: u64) -> Vec<Vec<u64>> {
    fn rec(prefix: &mut Vec<u64>, left: u64, slots: usize, out: &mut Vec<Vec<u64>>) {
        if slots == 1 {
            if left > 0 {
                prefix.push(left);
                out.push(prefix.clone());
                prefix.pop();
            }
            return;
        }
        for x in 0..=left {
            prefix.push(x);
            rec(prefix, left - x, slots - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), total, n, &mut out);
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// All pmfs with support in `[2, max_n]` and weights `w / m`, `m <= max_m`,
/// each listed once (weight vectors with common factor skipped).
pub(crate) fn small_pmfs(max_n: u64, max_m: u64) -> Vec<FinitePmf> {
    let mut out = Vec::new();
    for m in 1..=max_m {
        for n in 2..=max_n as usize {
            for w in compositions(n, m) {
                if w.iter().fold(0, |g, &x| gcd(g, x)) != 1 {
                    continue;
                }
                let weights = w
                    .iter()
                    .map(|&x| ExactFraction::new(x as i64, m as i64))
                    .collect();
                out.push(make_pmf(weights).expect("weights sum to one"));
            }
        }
    }
    out
}

fn small_subjects(kind: ClaimKind, budget: &SearchBudget) -> Vec<Subject> {
    let n = budget.max_support;
    let m = budget.max_denominator;
    match kind {
        ClaimKind::Ageing(_) => small_pmfs(n.min(4), m.min(8))
            .into_iter()
            .map(Subject::finite)
            .collect(),
        ClaimKind::Order(_) => {
            let base = small_pmfs(n.min(3), m.min(5));
            let mut out = Vec::with_capacity(base.len() * base.len());
            for a in &base {
                for b in &base {
                    if a != b {
                        out.push(Subject::pair(a.clone(), b.clone()));
                    }
                }
            }
            out
        }
    }
}

fn parametric_grid(decreasing_only: bool) -> Vec<Subject> {
    let mut params = Vec::new();
    if !decreasing_only {
        for c in [0.2, 0.5, 0.8, 1.0] {
            params.push(FamilyParams::SalviaBollinger { c });
        }
        for p in [0.3, 0.5, 0.8] {
            for a in [0.2, 0.6, 0.9] {
                params.push(FamilyParams::DiscreteS { p, a });
            }
        }
    }
    for q in [0.3, 0.5, 0.8] {
        for beta in [0.5, 0.8, 1.5, 2.0] {
            if decreasing_only && beta > 1.0 {
                continue;
            }
            params.push(FamilyParams::DiscreteWeibull { q, beta });
        }
    }
    for c in [0.5, 1.0, 3.0] {
        for d in [0.5, 2.0, 5.0] {
            params.push(FamilyParams::DiscretePareto { c, d });
        }
    }
    params
        .into_iter()
        .map(|p| {
            let s = ParametricSurvival::new(p, GRID_HORIZON).expect("grid parameters are valid");
            Subject::parametric(
                s,
                Some(Window {
                    start: 1,
                    end: GRID_HORIZON,
                }),
            )
        })
        .collect()
}
