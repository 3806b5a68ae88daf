//! Membership tests for the ten discrete ageing classes.
//!
//! Each class is a non-strict inequality checked at every index (or index
//! pair) of a window:
//!
//! | class     | inequality at k (or j, k)                     |
//! |-----------|-----------------------------------------------|
//! | ILR / DLR | `f(k+2) f(k) <= / >= f(k+1)^2`                |
//! | IFR / DFR | `r(k) <= / >= r(k+1)`                         |
//! | IFRA / DFRA | `S(k)^(k+1) >= / <= S(k+1)^k`               |
//! | NBU / NWU | `S(j+k) <= / >= S(j) S(k)`                    |
//! | DRHR      | `F(k+1)^2 >= F(k) F(k+2)`                     |
//! | NBAFR     | `S(k) <= S(1)^k`                              |
//!
//! The IFRA/DFRA and NBAFR conditions are stated on `S(k)^(1/k)`; raising
//! both sides to integer powers keeps exact inputs exact.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{ProbValue, SurvivalCurve};
use crate::verdict::{Relation, Verdict, Witness, WitnessIndex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AgeingError {
    #[error("empty window {start}..{end}")]
    EmptyWindow { start: u64, end: u64 },
    #[error("window end {end} exceeds horizon {horizon}")]
    WindowBeyondHorizon { end: u64, horizon: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum AgeingProperty {
    Ilr,
    Dlr,
    Ifr,
    Dfr,
    Ifra,
    Dfra,
    Nbu,
    Nwu,
    Drhr,
    Nbafr,
}

impl AgeingProperty {
    pub const ALL: [AgeingProperty; 10] = [
        AgeingProperty::Ilr,
        AgeingProperty::Dlr,
        AgeingProperty::Ifr,
        AgeingProperty::Dfr,
        AgeingProperty::Ifra,
        AgeingProperty::Dfra,
        AgeingProperty::Nbu,
        AgeingProperty::Nwu,
        AgeingProperty::Drhr,
        AgeingProperty::Nbafr,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            AgeingProperty::Ilr => "ILR",
            AgeingProperty::Dlr => "DLR",
            AgeingProperty::Ifr => "IFR",
            AgeingProperty::Dfr => "DFR",
            AgeingProperty::Ifra => "IFRA",
            AgeingProperty::Dfra => "DFRA",
            AgeingProperty::Nbu => "NBU",
            AgeingProperty::Nwu => "NWU",
            AgeingProperty::Drhr => "DRHR",
            AgeingProperty::Nbafr => "NBAFR",
        }
    }

    /// The inequality direction as `lhs REL rhs`.
    pub fn relation(self) -> Relation {
        use AgeingProperty::*;
        match self {
            Ilr | Ifr | Nbu | Nbafr => Relation::Le,
            Dlr | Dfr | Nwu | Drhr => Relation::Ge,
            Ifra => Relation::Ge,
            Dfra => Relation::Le,
        }
    }
}

impl fmt::Display for AgeingProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for AgeingProperty {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AgeingProperty::ALL
            .into_iter()
            .find(|p| p.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown ageing property {s:?}"))
    }
}

/// Inclusive index range `start..=end`, `start >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub start: u64,
    pub end: u64,
}

impl Window {
    pub fn new(start: u64, end: u64) -> Result<Self, AgeingError> {
        if start == 0 || start > end {
            return Err(AgeingError::EmptyWindow { start, end });
        }
        Ok(Window { start, end })
    }

    pub fn full<C: SurvivalCurve>(curve: &C) -> Self {
        Window {
            start: 1,
            end: curve.default_end().max(1),
        }
    }

    pub fn contains(&self, k: u64) -> bool {
        self.start <= k && k <= self.end
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

impl FromStr for Window {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once("..")
            .ok_or_else(|| format!("window must look like A..B, got {s:?}"))?;
        let start = a
            .trim()
            .parse()
            .map_err(|_| format!("bad window start {a:?}"))?;
        let end = b
            .trim()
            .parse()
            .map_err(|_| format!("bad window end {b:?}"))?;
        Window::new(start, end).map_err(|e| e.to_string())
    }
}

/// Both sides of one instance of a defining inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison<V> {
    pub lhs: V,
    pub rhs: V,
    pub holds: bool,
}

fn compare<V: ProbValue>(lhs: V, rhs: V, relation: Relation) -> Comparison<V> {
    let holds = match relation {
        Relation::Le => lhs.not_greater(&rhs),
        Relation::Ge => rhs.not_greater(&lhs),
    };
    Comparison { lhs, rhs, holds }
}

/// The defining inequality of `property` at one index, or `None` when it is
/// undefined there (hazards past the end of the support).
pub fn evaluate_at<C: SurvivalCurve>(
    property: AgeingProperty,
    curve: &C,
    at: WitnessIndex,
) -> Option<Comparison<C::Value>> {
    use AgeingProperty::*;
    let relation = property.relation();
    match (property, at) {
        (Nbu | Nwu, WitnessIndex::Pair(j, k)) => {
            let lhs = curve.survival_at(j + k);
            let rhs = curve.survival_at(j).mul(&curve.survival_at(k));
            Some(compare(lhs, rhs, relation))
        }
        (Nbu | Nwu, WitnessIndex::Single(_)) => None,
        (_, WitnessIndex::Pair(..)) => None,
        (Ilr | Dlr, WitnessIndex::Single(k)) => {
            let lhs = curve.mass_at(k + 2).mul(&curve.mass_at(k));
            let mid = curve.mass_at(k + 1);
            Some(compare(lhs, mid.mul(&mid), relation))
        }
        (Ifr | Dfr, WitnessIndex::Single(k)) => {
            let lhs = curve.hazard_at(k)?;
            let rhs = curve.hazard_at(k + 1)?;
            Some(compare(lhs, rhs, relation))
        }
        (Ifra | Dfra, WitnessIndex::Single(k)) => {
            let lhs = curve.survival_at(k).pow(k + 1);
            let rhs = curve.survival_at(k + 1).pow(k);
            Some(compare(lhs, rhs, relation))
        }
        (Drhr, WitnessIndex::Single(k)) => {
            let mid = curve.cdf_at(k + 1);
            let rhs = curve.cdf_at(k).mul(&curve.cdf_at(k + 2));
            Some(compare(mid.mul(&mid), rhs, relation))
        }
        (Nbafr, WitnessIndex::Single(k)) => {
            let lhs = curve.survival_at(k);
            let rhs = curve.survival_at(1).pow(k);
            Some(compare(lhs, rhs, relation))
        }
    }
}

/// Index tuples at which `property` is checked inside `window`.
fn indices(property: AgeingProperty, window: Window) -> Box<dyn Iterator<Item = WitnessIndex>> {
    use AgeingProperty::*;
    let Window { start, end } = window;
    match property {
        Ilr | Dlr | Drhr => Box::new((start..=end.saturating_sub(2)).map(WitnessIndex::Single)),
        Ifr | Dfr | Ifra | Dfra => {
            Box::new((start..=end.saturating_sub(1)).map(WitnessIndex::Single))
        }
        Nbafr => Box::new((start..=end).map(WitnessIndex::Single)),
        Nbu | Nwu => Box::new((start..=end).flat_map(move |j| {
            (j..=end)
                .take_while(move |k| j + k <= end)
                .map(move |k| WitnessIndex::Pair(j, k))
        })),
    }
}

fn resolve_window<C: SurvivalCurve>(
    curve: &C,
    window: Option<Window>,
) -> Result<Window, AgeingError> {
    let w = match window {
        Some(w) => Window::new(w.start, w.end)?,
        None => Window::full(curve),
    };
    if let Some(h) = curve.horizon() {
        if w.end > h {
            return Err(AgeingError::WindowBeyondHorizon {
                end: w.end,
                horizon: h,
            });
        }
    }
    Ok(w)
}

/// Decides `property` on `curve` over `window` (default: whole support or
/// horizon). Failing verdicts carry the first violating index; NBU/NWU pairs
/// are scanned in lexicographic order with `j <= k`.
pub fn check_ageing<C: SurvivalCurve>(
    property: AgeingProperty,
    curve: &C,
    window: Option<Window>,
) -> Result<Verdict, AgeingError> {
    let window = resolve_window(curve, window)?;
    for at in indices(property, window) {
        let Some(cmp) = evaluate_at(property, curve, at) else {
            if matches!(property, AgeingProperty::Ifr | AgeingProperty::Dfr) {
                // hazards stay undefined once the survival hits zero
                break;
            }
            continue;
        };
        if !cmp.holds {
            return Ok(Verdict::fails(Witness {
                at,
                relation: property.relation(),
                lhs: cmp.lhs.to_value(),
                rhs: cmp.rhs.to_value(),
            }));
        }
    }
    Ok(Verdict::holds())
}

/// Verdicts for all ten classes.
pub fn classify_all<C: SurvivalCurve>(
    curve: &C,
    window: Option<Window>,
) -> Result<BTreeMap<AgeingProperty, Verdict>, AgeingError> {
    AgeingProperty::ALL
        .into_iter()
        .map(|p| check_ageing(p, curve, window).map(|v| (p, v)))
        .collect()
}

/// The classical chain ILR => IFR => IFRA => NBU => NBAFR, as a sanity check
/// on a full-support classification.
pub fn chain_consistent(verdicts: &BTreeMap<AgeingProperty, Verdict>) -> bool {
    use AgeingProperty::*;
    let holds = |p| verdicts.get(&p).map(|v: &Verdict| v.holds).unwrap_or(false);
    let chain = [Ilr, Ifr, Ifra, Nbu, Nbafr];
    chain.windows(2).all(|w| !holds(w[0]) || holds(w[1]))
}

/// IFR/DFR via the survival-ratio sequence `S(k)/S(k-1)`, which must be
/// nonincreasing (IFR) or nondecreasing (DFR). Same window semantics as
/// [`check_ageing`]: the window ranges over hazard indices.
pub fn monotone_failure_rate_by_ratio<C: SurvivalCurve>(
    increasing: bool,
    curve: &C,
    window: Option<Window>,
) -> Result<Verdict, AgeingError> {
    let window = resolve_window(curve, window)?;
    let ratio = |k: u64| -> Option<C::Value> {
        let prev = curve.survival_at(k - 1);
        if prev.is_zero() {
            None
        } else {
            Some(curve.survival_at(k).div(&prev))
        }
    };
    for k in window.start..window.end {
        let (Some(now), Some(next)) = (ratio(k), ratio(k + 1)) else {
            break;
        };
        let (relation, ok) = if increasing {
            (Relation::Ge, next.not_greater(&now))
        } else {
            (Relation::Le, now.not_greater(&next))
        };
        if !ok {
            return Ok(Verdict::fails(Witness {
                at: WitnessIndex::Single(k),
                relation,
                lhs: now.to_value(),
                rhs: next.to_value(),
            }));
        }
    }
    Ok(Verdict::holds())
}
