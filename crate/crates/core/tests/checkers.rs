//! Checker cross-validation: a brute-force classifier computed straight from
//! the weights, root-based and ratio-based deciders, and known implications
//! between classes and orders.

use motilt::ageing::{
    chain_consistent, check_ageing, classify_all, monotone_failure_rate_by_ratio, AgeingProperty,
};
use motilt::lab::generate::{
    hazard_dominated_pair, increasing_hazard_pmf, likelihood_ratio_pair,
    reversed_hazard_dominated_pair,
};
use motilt::lab::trial_rng;
use motilt::orders::{check_order, hr_by_survival_ratio, OrderRelation};
use motilt::{make_pmf, ExactFraction, FinitePmf, WitnessIndex};
use proptest::prelude::*;

fn pmf_strategy() -> impl Strategy<Value = FinitePmf> {
    prop::collection::vec(0u64..=9, 1..=7)
        .prop_filter("some positive weight", |w| w.iter().any(|&x| x > 0))
        .prop_map(|w| {
            let total: u64 = w.iter().sum();
            make_pmf(
                w.iter()
                    .map(|&x| ExactFraction::new(x as i64, total as i64))
                    .collect(),
            )
            .unwrap()
        })
}

/// Reference quantities recomputed by summation for every query.
struct Oracle {
    w: Vec<ExactFraction>,
}

impl Oracle {
    fn new(d: &FinitePmf) -> Self {
        Oracle {
            w: d.weights().to_vec(),
        }
    }

    fn n(&self) -> u64 {
        self.w.len() as u64
    }

    fn f(&self, k: u64) -> ExactFraction {
        if k == 0 || k > self.n() {
            ExactFraction::zero()
        } else {
            self.w[k as usize - 1].clone()
        }
    }

    fn sf(&self, k: u64) -> ExactFraction {
        (k + 1..=self.n()).map(|i| self.f(i)).sum()
    }

    fn cdf(&self, k: u64) -> ExactFraction {
        (1..=k.min(self.n())).map(|i| self.f(i)).sum()
    }

    fn r(&self, k: u64) -> ExactFraction {
        self.f(k) / self.sf(k - 1)
    }

    /// First index violating `p` on the full support, in scan order.
    fn first_violation(&self, p: AgeingProperty) -> Option<WitnessIndex> {
        use AgeingProperty::*;
        use WitnessIndex::{Pair, Single};
        let n = self.n();
        let single = |range: std::ops::RangeInclusive<u64>, bad: &dyn Fn(u64) -> bool| {
            range.into_iter().find(|&k| bad(k)).map(Single)
        };
        match p {
            Ilr => single(1..=n.saturating_sub(2), &|k| {
                self.f(k) * self.f(k + 2) > self.f(k + 1) * self.f(k + 1)
            }),
            Dlr => single(1..=n.saturating_sub(2), &|k| {
                self.f(k) * self.f(k + 2) < self.f(k + 1) * self.f(k + 1)
            }),
            Ifr => single(1..=n.saturating_sub(1), &|k| self.r(k) > self.r(k + 1)),
            Dfr => single(1..=n.saturating_sub(1), &|k| self.r(k) < self.r(k + 1)),
            Ifra => single(1..=n.saturating_sub(1), &|k| {
                self.sf(k).pow(k as u32 + 1) < self.sf(k + 1).pow(k as u32)
            }),
            Dfra => single(1..=n.saturating_sub(1), &|k| {
                self.sf(k).pow(k as u32 + 1) > self.sf(k + 1).pow(k as u32)
            }),
            Drhr => single(1..=n.saturating_sub(2), &|k| {
                self.cdf(k + 1) * self.cdf(k + 1) < self.cdf(k) * self.cdf(k + 2)
            }),
            Nbafr => single(1..=n, &|k| self.sf(k) > self.sf(1).pow(k as u32)),
            Nbu | Nwu => {
                for j in 1..=n {
                    for k in j..=n {
                        if j + k > n {
                            break;
                        }
                        let (lhs, rhs) = (self.sf(j + k), self.sf(j) * self.sf(k));
                        let bad = if p == Nbu { lhs > rhs } else { lhs < rhs };
                        if bad {
                            return Some(Pair(j, k));
                        }
                    }
                }
                None
            }
        }
    }
}

fn witness_index(v: &motilt::Verdict) -> Option<WitnessIndex> {
    v.witness.as_ref().map(|w| w.at)
}

/// `S(k)^(1/k)` compared through logs; `None` within a relative tie band.
fn root_lt(a: f64, ka: u64, b: f64, kb: u64) -> Option<bool> {
    if a == 0.0 || b == 0.0 {
        return Some(a == 0.0 && b > 0.0);
    }
    let (x, y) = (a.ln() / ka as f64, b.ln() / kb as f64);
    if (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1e-300) {
        None
    } else {
        Some(x < y)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn brute_force_classifier(d in pmf_strategy()) {
        let oracle = Oracle::new(&d);
        for p in AgeingProperty::ALL {
            let v = check_ageing(p, &d, None).unwrap();
            let expected = oracle.first_violation(p);
            prop_assert_eq!(v.holds, expected.is_none(), "{} on {}", p, &d);
            prop_assert_eq!(witness_index(&v), expected, "{} on {}", p, &d);
        }
    }

    #[test]
    fn root_free_deciders_match_roots(d in pmf_strategy()) {
        let n = d.len();
        let s = |k: u64| d.survival(k).to_f64();
        // IFRA: S(k)^(1/k) nonincreasing
        let ifra = check_ageing(AgeingProperty::Ifra, &d, None).unwrap().holds;
        let mut root_ifra = Some(true);
        for k in 1..n {
            match root_lt(s(k), k, s(k + 1), k + 1) {
                Some(true) => root_ifra = Some(false),
                Some(false) => {}
                None => if root_ifra == Some(true) { root_ifra = None },
            }
            if root_ifra == Some(false) { break; }
        }
        if let Some(r) = root_ifra { prop_assert_eq!(ifra, r); }
        // NBAFR: S(k)^(1/k) <= S(1)
        let nbafr = check_ageing(AgeingProperty::Nbafr, &d, None).unwrap().holds;
        let mut root_nbafr = Some(true);
        for k in 2..=n {
            match root_lt(s(1), 1, s(k), k) {
                Some(true) => root_nbafr = Some(false),
                Some(false) => {}
                None => if root_nbafr == Some(true) { root_nbafr = None },
            }
            if root_nbafr == Some(false) { break; }
        }
        if let Some(r) = root_nbafr { prop_assert_eq!(nbafr, r); }
    }

    #[test]
    fn ratio_form_matches_hazard_form(d in pmf_strategy()) {
        let by_ratio = monotone_failure_rate_by_ratio(true, &d, None).unwrap();
        let by_hazard = check_ageing(AgeingProperty::Ifr, &d, None).unwrap();
        prop_assert_eq!(by_ratio.holds, by_hazard.holds);
        prop_assert_eq!(witness_index(&by_ratio), witness_index(&by_hazard));
        let by_ratio = monotone_failure_rate_by_ratio(false, &d, None).unwrap();
        let by_hazard = check_ageing(AgeingProperty::Dfr, &d, None).unwrap();
        prop_assert_eq!(by_ratio.holds, by_hazard.holds);
    }

    #[test]
    fn classification_chain(d in pmf_strategy()) {
        let first = d.first_positive() as usize - 1;
        prop_assume!(d.weights()[first..].iter().all(|w| !w.is_zero()));
        prop_assert!(chain_consistent(&classify_all(&d, None).unwrap()));
    }

    #[test]
    fn dfr_on_full_support_is_degenerate(d in pmf_strategy()) {
        let dfr = check_ageing(AgeingProperty::Dfr, &d, None).unwrap().holds;
        prop_assert_eq!(dfr, d.len() == 1);
    }

    #[test]
    fn hr_two_routes(a in pmf_strategy(), b in pmf_strategy()) {
        prop_assert_eq!(
            check_order(OrderRelation::Hr, &a, &b).holds,
            hr_by_survival_ratio(&a, &b).holds
        );
    }

    #[test]
    fn order_implications(a in pmf_strategy(), b in pmf_strategy()) {
        let holds = |r| check_order(r, &a, &b).holds;
        if holds(OrderRelation::Lr) {
            prop_assert!(holds(OrderRelation::Hr));
            prop_assert!(holds(OrderRelation::Rhr));
        }
        if holds(OrderRelation::Hr) || holds(OrderRelation::Rhr) {
            prop_assert!(holds(OrderRelation::St));
        }
    }

    #[test]
    fn reflexive_and_antisymmetric(a in pmf_strategy(), b in pmf_strategy()) {
        for r in OrderRelation::ALL {
            prop_assert!(check_order(r, &a, &a).holds);
        }
        let st = |x: &FinitePmf, y: &FinitePmf| check_order(OrderRelation::St, x, y).holds;
        if st(&a, &b) && st(&b, &a) {
            prop_assert_eq!(&a, &b);
        }
    }

    #[test]
    fn constructed_pairs_are_ordered(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 0, 0);
        let (a, b) = likelihood_ratio_pair(&mut rng, 7, 20);
        for r in OrderRelation::ALL {
            prop_assert!(check_order(r, &a, &b).holds, "{} on {} {}", r, &a, &b);
        }
        let (a, b) = hazard_dominated_pair(&mut rng, 7, 20);
        prop_assert!(check_order(OrderRelation::Hr, &a, &b).holds);
        prop_assert!(check_order(OrderRelation::St, &a, &b).holds);
        prop_assert!(hr_by_survival_ratio(&a, &b).holds);
        let (a, b) = reversed_hazard_dominated_pair(&mut rng, 7, 20);
        prop_assert!(check_order(OrderRelation::Rhr, &a, &b).holds);
        prop_assert!(check_order(OrderRelation::St, &a, &b).holds);
    }

    #[test]
    fn increasing_hazard_implies_weaker_classes(seed in any::<u64>()) {
        let d = increasing_hazard_pmf(&mut trial_rng(seed, 1, 0), 7, 20);
        for p in [AgeingProperty::Ifr, AgeingProperty::Ifra, AgeingProperty::Nbu, AgeingProperty::Nbafr] {
            prop_assert!(check_ageing(p, &d, None).unwrap().holds, "{} on {}", p, &d);
        }
    }
}

#[test]
fn point_mass_is_dfr() {
    let d = FinitePmf::point_mass(1);
    assert!(check_ageing(AgeingProperty::Dfr, &d, None).unwrap().holds);
}

#[test]
fn interior_gap_breaks_the_chain() {
    // cross-product log-concavity holds vacuously across a gap
    let d = make_pmf(["1/2", "0", "0", "1/2"].map(motilt::frac).to_vec()).unwrap();
    assert!(check_ageing(AgeingProperty::Ilr, &d, None).unwrap().holds);
    assert!(!check_ageing(AgeingProperty::Ifr, &d, None).unwrap().holds);
    assert!(!chain_consistent(&classify_all(&d, None).unwrap()));
}
