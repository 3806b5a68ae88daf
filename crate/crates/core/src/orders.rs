//! Stochastic orders between two discrete distributions.
//!
//! * `X1 <=st X2`: `S1(k) <= S2(k)` for all `k >= 1`.
//! * `X1 <=hr X2`: `r1(k) >= r2(k)` wherever both hazards are defined.
//! * `X1 <=rhr X2`: `rr1(k) <= rr2(k)` wherever both reversed hazards are defined.
//! * `X1 <=lr X2`: `f1(k) f2(j) <= f1(j) f2(k)` for all `j <= k`.
//!
//! Support conventions: `<=hr` needs `n1 <= n2` and `<=rhr` needs the first
//! positive point of `X1` to be no later than that of `X2`. Both follow from
//! the pointwise scans (a support end forces a hazard of 1, a support start
//! a reversed hazard of 1), so neither needs a separate test.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curve::{ProbValue, SurvivalCurve};
use crate::verdict::{Relation, Verdict, Witness, WitnessIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum OrderRelation {
    St,
    Hr,
    Rhr,
    Lr,
}

impl OrderRelation {
    pub const ALL: [OrderRelation; 4] = [
        OrderRelation::St,
        OrderRelation::Hr,
        OrderRelation::Rhr,
        OrderRelation::Lr,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            OrderRelation::St => "st",
            OrderRelation::Hr => "hr",
            OrderRelation::Rhr => "rhr",
            OrderRelation::Lr => "lr",
        }
    }
}

impl fmt::Display for OrderRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for OrderRelation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        OrderRelation::ALL
            .into_iter()
            .find(|r| r.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown order relation {s:?} (expected st, hr, rhr or lr)"))
    }
}

fn scan_end<C: SurvivalCurve>(d1: &C, d2: &C) -> u64 {
    d1.default_end().max(d2.default_end())
}

fn witness<V: ProbValue>(at: WitnessIndex, relation: Relation, lhs: &V, rhs: &V) -> Verdict {
    Verdict::fails(Witness {
        at,
        relation,
        lhs: lhs.to_value(),
        rhs: rhs.to_value(),
    })
}

/// Decides `d1 REL d2`.
pub fn check_order<C: SurvivalCurve>(relation: OrderRelation, d1: &C, d2: &C) -> Verdict {
    let end = scan_end(d1, d2);
    match relation {
        OrderRelation::St => {
            for k in 1..=end {
                let (s1, s2) = (d1.survival_at(k), d2.survival_at(k));
                if !s1.not_greater(&s2) {
                    return witness(WitnessIndex::Single(k), Relation::Le, &s1, &s2);
                }
            }
        }
        OrderRelation::Hr => {
            for k in 1..=end {
                let (Some(r1), Some(r2)) = (d1.hazard_at(k), d2.hazard_at(k)) else {
                    continue;
                };
                if !r2.not_greater(&r1) {
                    return witness(WitnessIndex::Single(k), Relation::Ge, &r1, &r2);
                }
            }
        }
        OrderRelation::Rhr => {
            for k in 1..=end {
                let (Some(r1), Some(r2)) = (d1.reversed_hazard_at(k), d2.reversed_hazard_at(k))
                else {
                    continue;
                };
                if !r1.not_greater(&r2) {
                    return witness(WitnessIndex::Single(k), Relation::Le, &r1, &r2);
                }
            }
        }
        OrderRelation::Lr => {
            let f1: Vec<_> = (1..=end).map(|k| d1.mass_at(k)).collect();
            let f2: Vec<_> = (1..=end).map(|k| d2.mass_at(k)).collect();
            for j in 0..f1.len() {
                for k in j..f1.len() {
                    let lhs = f1[k].mul(&f2[j]);
                    let rhs = f1[j].mul(&f2[k]);
                    if !lhs.not_greater(&rhs) {
                        let at = WitnessIndex::Pair(j as u64 + 1, k as u64 + 1);
                        return witness(at, Relation::Le, &lhs, &rhs);
                    }
                }
            }
        }
    }
    Verdict::holds()
}

/// `d1 <=hr d2` via `S2(k)/S1(k)` nondecreasing over `k` with `S1(k) > 0`,
/// cross-multiplied.
pub fn hr_by_survival_ratio<C: SurvivalCurve>(d1: &C, d2: &C) -> Verdict {
    let end = scan_end(d1, d2);
    for k in 1..=end {
        let s1 = d1.survival_at(k);
        if s1.is_zero() {
            break;
        }
        // S2(k-1) S1(k) <= S2(k) S1(k-1)
        let lhs = d2.survival_at(k - 1).mul(&s1);
        let rhs = d2.survival_at(k).mul(&d1.survival_at(k - 1));
        if !lhs.not_greater(&rhs) {
            return witness(WitnessIndex::Single(k), Relation::Le, &lhs, &rhs);
        }
    }
    Verdict::holds()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{make_pmf, FinitePmf};
    use crate::fraction::{frac, ExactFraction};
    use crate::tilt::{tilt_pmf, TiltParameter};
    use OrderRelation::*;

    fn fr(v: &[&str]) -> Vec<ExactFraction> {
        v.iter().map(|s| frac(s)).collect()
    }

    fn pmf(v: &[&str]) -> FinitePmf {
        make_pmf(fr(v)).unwrap()
    }

    #[test]
    fn hr_fixture_holds_before_tilt() {
        let x1 = FinitePmf::from_survival(&fr(&["1", "1/2", "2/5", "0"])).unwrap();
        let x2 = FinitePmf::from_survival(&fr(&["1", "5/8", "11/20", "0"])).unwrap();
        assert!(check_order(Hr, &x1, &x2).holds);
        assert!(hr_by_survival_ratio(&x1, &x2).holds);
        assert!(check_order(St, &x1, &x2).holds);
    }

    #[test]
    fn lr_fixture_breaks_under_tilt() {
        let x1 = pmf(&["0", "3/10", "2/5", "1/5", "1/10"]);
        let x2 = pmf(&["0", "1/5", "3/10", "1/5", "3/10"]);
        assert!(check_order(Lr, &x1, &x2).holds);
        let a = TiltParameter::ratio(5, 1);
        let (y1, y2) = (tilt_pmf(&x1, &a), tilt_pmf(&x2, &a));
        assert!(!check_order(Lr, &y1, &y2).holds);
    }

    #[test]
    fn reflexive() {
        let d = pmf(&["1/7", "0", "2/7", "4/7"]);
        for r in OrderRelation::ALL {
            assert!(check_order(r, &d, &d).holds, "{r}");
        }
    }

    #[test]
    fn hr_support_end_convention() {
        // X1 ends later than X2: r2(n2) = 1 > r1(n2)
        let x1 = pmf(&["1/2", "1/4", "1/4"]);
        let x2 = pmf(&["1/2", "1/2"]);
        let v = check_order(Hr, &x1, &x2);
        assert!(!v.holds);
        assert_eq!(v.witness.unwrap().at, WitnessIndex::Single(2));
        assert!(check_order(Hr, &x2, &x1).holds);
        assert!(!hr_by_survival_ratio(&x1, &x2).holds);
        assert!(hr_by_survival_ratio(&x2, &x1).holds);
    }

    #[test]
    fn rhr_support_start_convention() {
        // X1 starts earlier than X2: allowed (point masses at 1 and 2 are lr-ordered)
        let x1 = FinitePmf::point_mass(1);
        let x2 = FinitePmf::point_mass(2);
        assert!(check_order(Lr, &x1, &x2).holds);
        assert!(check_order(Rhr, &x1, &x2).holds);
        // reversed: rr1(1) undefined, rr1(2) = 1 > rr2(2)
        let v = check_order(Rhr, &x2, &pmf(&["1/2", "1/2"]));
        assert!(!v.holds);
        assert_eq!(v.witness.unwrap().at, WitnessIndex::Single(2));
    }

    #[test]
    fn st_witness() {
        let x1 = pmf(&["1/4", "3/4"]);
        let x2 = pmf(&["1/2", "1/2"]);
        let v = check_order(St, &x1, &x2);
        let w = v.witness.unwrap();
        assert_eq!(w.at, WitnessIndex::Single(1));
        assert_eq!(w.lhs.as_exact().unwrap(), &frac("3/4"));
        assert!(check_order(St, &x2, &x1).holds);
    }

    #[test]
    fn parse_tags() {
        assert_eq!("RHR".parse::<OrderRelation>().unwrap(), Rhr);
        assert!("icx".parse::<OrderRelation>().is_err());
    }
}
