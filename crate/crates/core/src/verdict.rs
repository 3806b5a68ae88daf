use std::fmt;

use serde::{Deserialize, Serialize};

use crate::curve::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
        })
    }
}

/// Where a defining inequality was checked: `k` or a pair `(j, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WitnessIndex {
    Single(u64),
    Pair(u64, u64),
}

impl fmt::Display for WitnessIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessIndex::Single(k) => write!(f, "k={k}"),
            WitnessIndex::Pair(j, k) => write!(f, "(j,k)=({j},{k})"),
        }
    }
}

/// A violated inequality `lhs REL rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub at: WitnessIndex,
    pub relation: Relation,
    pub lhs: Value,
    pub rhs: Value,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "at {}: {} {} {} violated",
            self.at, self.lhs, self.relation, self.rhs
        )
    }
}

/// Outcome of a predicate; failing verdicts always carry a witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn holds() -> Self {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    pub fn fails(witness: Witness) -> Self {
        Verdict {
            holds: false,
            witness: Some(witness),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => f.write_str("holds"),
            Some(w) => write!(f, "fails {w}"),
        }
    }
}
