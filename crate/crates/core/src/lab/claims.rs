use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ageing::AgeingProperty;
use crate::fraction::ExactFraction;
use crate::orders::OrderRelation;
use crate::tilt::TiltParameter;

use super::LabError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimKind {
    Ageing(AgeingProperty),
    Order(OrderRelation),
}

impl ClaimKind {
    pub fn label(self) -> String {
        match self {
            ClaimKind::Ageing(p) => p.tag().to_string(),
            ClaimKind::Order(r) => r.tag().to_uppercase(),
        }
    }
}

impl fmt::Display for ClaimKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Which side of 1 the tilt lies on. `alpha = 1` belongs to both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaRegime {
    BelowOne,
    AboveOne,
}

impl AlphaRegime {
    pub const ALL: [AlphaRegime; 2] = [AlphaRegime::BelowOne, AlphaRegime::AboveOne];

    pub fn contains(self, alpha: &TiltParameter) -> bool {
        let one = ExactFraction::one();
        match self {
            AlphaRegime::BelowOne => alpha.alpha() <= &one,
            AlphaRegime::AboveOne => alpha.alpha() >= &one,
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            AlphaRegime::BelowOne => "lt1",
            AlphaRegime::AboveOne => "gt1",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            AlphaRegime::BelowOne => "alpha<1",
            AlphaRegime::AboveOne => "alpha>1",
        }
    }
}

impl fmt::Display for AlphaRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Preserved,
    NotPreserved,
    Unstated,
}

impl Expectation {
    pub fn label(self) -> &'static str {
        match self {
            Expectation::Preserved => "preserved",
            Expectation::NotPreserved => "not preserved",
            Expectation::Unstated => "unstated",
        }
    }
}

/// One cell of the preservation tables: does the tilt keep `kind` in `regime`?
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PreservationClaim {
    pub kind: ClaimKind,
    pub regime: AlphaRegime,
    pub expected: Expectation,
}

const AGEING_ROWS: [(AgeingProperty, Expectation, Expectation); 10] = {
    use AgeingProperty::*;
    use Expectation::*;
    [
        (Ilr, NotPreserved, NotPreserved),
        (Dlr, NotPreserved, NotPreserved),
        (Ifr, NotPreserved, Preserved),
        (Dfr, Preserved, NotPreserved),
        (Nbu, NotPreserved, Preserved),
        (Nwu, Preserved, NotPreserved),
        (Ifra, NotPreserved, Preserved),
        (Dfra, Preserved, NotPreserved),
        (Drhr, Preserved, NotPreserved),
        (Nbafr, NotPreserved, Unstated),
    ]
};

const ORDER_ROWS: [(OrderRelation, Expectation, Expectation); 4] = {
    use Expectation::*;
    use OrderRelation::*;
    [
        (St, Preserved, Preserved),
        (Hr, NotPreserved, Preserved),
        (Rhr, Preserved, NotPreserved),
        (Lr, NotPreserved, NotPreserved),
    ]
};

impl PreservationClaim {
    /// All 28 cells: ten ageing rows then four order rows, `alpha<1` first.
    pub fn table() -> Vec<PreservationClaim> {
        let ageing = AGEING_ROWS
            .iter()
            .map(|&(p, lt, gt)| (ClaimKind::Ageing(p), lt, gt));
        let orders = ORDER_ROWS
            .iter()
            .map(|&(r, lt, gt)| (ClaimKind::Order(r), lt, gt));
        ageing
            .chain(orders)
            .flat_map(|(kind, lt, gt)| {
                [
                    PreservationClaim {
                        kind,
                        regime: AlphaRegime::BelowOne,
                        expected: lt,
                    },
                    PreservationClaim {
                        kind,
                        regime: AlphaRegime::AboveOne,
                        expected: gt,
                    },
                ]
            })
            .collect()
    }

    /// The table cell for `kind` in `regime`.
    pub fn cell(kind: ClaimKind, regime: AlphaRegime) -> PreservationClaim {
        Self::table()
            .into_iter()
            .find(|c| c.kind == kind && c.regime == regime)
            .expect("every kind and regime has a cell")
    }

    /// Looks up a cell id such as `ifr-lt1` or `hr-gt1`.
    pub fn from_cell_id(id: &str) -> Result<PreservationClaim, LabError> {
        Self::table()
            .into_iter()
            .find(|c| c.cell_id().eq_ignore_ascii_case(id))
            .ok_or_else(|| LabError::UnknownCell(id.to_string()))
    }

    pub fn cell_id(&self) -> String {
        format!(
            "{}-{}",
            self.kind.label().to_lowercase(),
            self.regime.suffix()
        )
    }

    /// The same cell with a different expectation, for testing the harness
    /// against deliberately wrong claims.
    pub fn with_expected(self, expected: Expectation) -> PreservationClaim {
        PreservationClaim { expected, ..self }
    }

    /// Stable index of the cell, used to derive per-cell random streams.
    pub fn stream(&self) -> u64 {
        Self::table()
            .iter()
            .position(|c| c.kind == self.kind && c.regime == self.regime)
            .expect("every kind and regime has a cell") as u64
    }

    /// DFR, DFRA and NWU cannot hold on a full finite support (the last
    /// hazard is 1), so their instances come from parametric families.
    pub fn parametric_only(&self) -> bool {
        matches!(
            self.kind,
            ClaimKind::Ageing(AgeingProperty::Dfr | AgeingProperty::Dfra | AgeingProperty::Nwu)
        )
    }
}

impl fmt::Display for PreservationClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} {})", self.cell_id(), self.kind, self.regime)
    }
}
