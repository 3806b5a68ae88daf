//! Seeded instance generators.
//!
//! Plain generators draw arbitrary instances; the constructive ones build
//! instances that satisfy a hypothesis by construction and are the fallback
//! when rejection sampling stalls.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ageing::{AgeingProperty, Window};
use crate::dist::{make_pmf, FamilyParams, FinitePmf, ParametricSurvival};
use crate::fraction::ExactFraction;
use crate::orders::OrderRelation;
use crate::tilt::TiltParameter;

use super::{AlphaRegime, ClaimKind, Subject};

/// Independent stream for trial `index` of cell `stream` under `seed`.
pub fn trial_rng(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&stream.to_le_bytes());
    key[16..24].copy_from_slice(&index.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

fn normalize(weights: &[u64]) -> FinitePmf {
    let total: u64 = weights.iter().sum();
    let w = weights
        .iter()
        .map(|&x| ExactFraction::new(x as i64, total as i64))
        .collect();
    make_pmf(w).expect("positive total normalizes")
}

/// Support size uniform in `[2, max_support]`, integer weights uniform in
/// `[1, max_denominator]`, normalized exactly.
pub fn random_pmf(rng: &mut impl Rng, max_support: u64, max_denominator: u64) -> FinitePmf {
    let n = rng.gen_range(2..=max_support.max(2));
    let weights: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=max_denominator)).collect();
    normalize(&weights)
}

/// A rational tilt in `regime`, possibly exactly 1.
pub fn random_alpha(rng: &mut impl Rng, regime: AlphaRegime) -> TiltParameter {
    let q = rng.gen_range(1..=10i64);
    let p = match regime {
        AlphaRegime::BelowOne => rng.gen_range(1..=q),
        AlphaRegime::AboveOne => rng.gen_range(q..=6 * q),
    };
    TiltParameter::ratio(p, q)
}

/// Rational in `(0, 1)` with denominator at most `max_denominator`.
fn unit_open(rng: &mut impl Rng, max_denominator: u64) -> ExactFraction {
    let q = rng.gen_range(2..=max_denominator.max(2)) as i64;
    ExactFraction::new(rng.gen_range(1..q), q)
}

fn positive_ratio(rng: &mut impl Rng, max_denominator: u64) -> ExactFraction {
    let m = max_denominator.max(2) as i64;
    ExactFraction::new(rng.gen_range(1..=m), rng.gen_range(1..=m))
}

fn sorted(mut v: Vec<ExactFraction>, ascending: bool) -> Vec<ExactFraction> {
    v.sort();
    if !ascending {
        v.reverse();
    }
    v
}

/// Masses from successive ratios `f(k+1)/f(k) = ratios[k-1]`.
fn from_ratios(ratios: &[ExactFraction]) -> FinitePmf {
    let mut w = vec![ExactFraction::one()];
    for r in ratios {
        let next = w.last().unwrap() * r;
        w.push(next);
    }
    let total: ExactFraction = w.iter().sum();
    make_pmf(w.into_iter().map(|x| x / &total).collect()).expect("normalized")
}

/// Masses from hazards `h(1..n)`, `h(n) = 1`.
fn from_hazards(hazards: &[ExactFraction]) -> FinitePmf {
    let mut s = ExactFraction::one();
    let mut w = Vec::with_capacity(hazards.len());
    for h in hazards {
        w.push(&s * h);
        s = &s * (ExactFraction::one() - h);
    }
    make_pmf(w).expect("hazards ending in 1 give a pmf")
}

/// Masses from reversed hazards `rr(2..n)`, with `F(n) = 1`.
fn from_reversed_hazards(rr: &[ExactFraction]) -> FinitePmf {
    let n = rr.len() + 1;
    let mut cdf = vec![ExactFraction::one(); n];
    for k in (1..n).rev() {
        cdf[k - 1] = &cdf[k] * (ExactFraction::one() - &rr[k - 1]);
    }
    let mut prev = ExactFraction::zero();
    let w = cdf
        .into_iter()
        .map(|f| {
            let m = &f - &prev;
            prev = f;
            m
        })
        .collect();
    make_pmf(w).expect("increasing cdf ending in 1")
}

fn support(rng: &mut impl Rng, max_support: u64) -> usize {
    rng.gen_range(2..=max_support.max(2)) as usize
}

/// ILR: nonincreasing mass ratios.
pub fn log_concave_pmf(rng: &mut impl Rng, max_support: u64, max_den: u64) -> FinitePmf {
    let n = support(rng, max_support);
    let r = (1..n).map(|_| positive_ratio(rng, max_den)).collect();
    from_ratios(&sorted(r, false))
}

/// DLR: nondecreasing mass ratios.
pub fn log_convex_pmf(rng: &mut impl Rng, max_support: u64, max_den: u64) -> FinitePmf {
    let n = support(rng, max_support);
    let r = (1..n).map(|_| positive_ratio(rng, max_den)).collect();
    from_ratios(&sorted(r, true))
}

/// IFR (hence IFRA, NBU, NBAFR): sorted hazards ending in 1.
pub fn increasing_hazard_pmf(rng: &mut impl Rng, max_support: u64, max_den: u64) -> FinitePmf {
    let n = support(rng, max_support);
    let mut h = sorted((1..n).map(|_| unit_open(rng, max_den)).collect(), true);
    h.push(ExactFraction::one());
    from_hazards(&h)
}

/// DRHR: reversed hazards nonincreasing from `k = 2`.
pub fn decreasing_reversed_hazard_pmf(
    rng: &mut impl Rng,
    max_support: u64,
    max_den: u64,
) -> FinitePmf {
    let n = support(rng, max_support);
    let rr = sorted((1..n).map(|_| unit_open(rng, max_den)).collect(), false);
    from_reversed_hazards(&rr)
}

/// `X1 <=hr X2` (hence `<=st`): `h1 = h2 + (1 - h2) u` pointwise.
pub fn hazard_dominated_pair(
    rng: &mut impl Rng,
    max_support: u64,
    max_den: u64,
) -> (FinitePmf, FinitePmf) {
    let n = support(rng, max_support);
    let mut h2: Vec<ExactFraction> = (1..n).map(|_| unit_open(rng, max_den)).collect();
    h2.push(ExactFraction::one());
    let h1: Vec<ExactFraction> = h2
        .iter()
        .map(|h| {
            let u = unit_open(rng, max_den);
            h + (ExactFraction::one() - h) * u
        })
        .collect();
    (from_hazards(&h1), from_hazards(&h2))
}

/// `X1 <=rhr X2`: `rr1 = rr2 u` pointwise.
pub fn reversed_hazard_dominated_pair(
    rng: &mut impl Rng,
    max_support: u64,
    max_den: u64,
) -> (FinitePmf, FinitePmf) {
    let n = support(rng, max_support);
    let rr2: Vec<ExactFraction> = (1..n).map(|_| unit_open(rng, max_den)).collect();
    let rr1: Vec<ExactFraction> = rr2.iter().map(|r| r * unit_open(rng, max_den)).collect();
    (from_reversed_hazards(&rr1), from_reversed_hazards(&rr2))
}

/// `X1 <=lr X2`: `f2 = f1 t / E[t]` with `t` nondecreasing.
pub fn likelihood_ratio_pair(
    rng: &mut impl Rng,
    max_support: u64,
    max_den: u64,
) -> (FinitePmf, FinitePmf) {
    let f1 = random_pmf(rng, max_support, max_den);
    let t = sorted(
        f1.weights()
            .iter()
            .map(|_| positive_ratio(rng, max_den))
            .collect(),
        true,
    );
    let w: Vec<ExactFraction> = f1.weights().iter().zip(&t).map(|(f, t)| f * t).collect();
    let total: ExactFraction = w.iter().sum();
    let f2 = make_pmf(w.into_iter().map(|x| x / &total).collect()).expect("normalized");
    (f1, f2)
}

fn grid(rng: &mut impl Rng, lo: u32, hi: u32, scale: f64) -> f64 {
    rng.gen_range(lo..=hi) as f64 / scale
}

fn random_window(rng: &mut impl Rng) -> (Window, u64) {
    let start = rng.gen_range(1..=10);
    let end = start + rng.gen_range(2..=40);
    (Window { start, end }, end)
}

/// A discrete Weibull with `beta < 1` or a discrete Pareto on a random
/// window: DFR, DFRA and NWU by construction.
pub fn decreasing_hazard_family(rng: &mut impl Rng) -> Subject {
    let (window, horizon) = random_window(rng);
    let params = if rng.gen_bool(0.5) {
        FamilyParams::DiscreteWeibull {
            q: grid(rng, 1, 19, 20.0),
            beta: grid(rng, 4, 19, 20.0),
        }
    } else {
        FamilyParams::DiscretePareto {
            c: grid(rng, 1, 20, 4.0),
            d: grid(rng, 1, 20, 4.0),
        }
    };
    let s = ParametricSurvival::new(params, horizon).expect("grid parameters are valid");
    Subject::parametric(s, Some(window))
}

/// Any of the four families with random parameters and window.
pub fn random_family(rng: &mut impl Rng) -> Subject {
    let (window, horizon) = random_window(rng);
    let params = match rng.gen_range(0..4) {
        0 => FamilyParams::SalviaBollinger {
            c: grid(rng, 1, 20, 20.0),
        },
        1 => FamilyParams::DiscreteWeibull {
            q: grid(rng, 1, 19, 20.0),
            beta: grid(rng, 2, 30, 10.0),
        },
        2 => FamilyParams::DiscreteS {
            p: grid(rng, 1, 20, 20.0),
            a: grid(rng, 1, 19, 20.0),
        },
        _ => FamilyParams::DiscretePareto {
            c: grid(rng, 1, 20, 4.0),
            d: grid(rng, 1, 20, 4.0),
        },
    };
    let s = ParametricSurvival::new(params, horizon).expect("grid parameters are valid");
    Subject::parametric(s, Some(window))
}

/// An arbitrary instance for `kind`: one random pmf, or a random pair.
pub fn random_subject(
    rng: &mut impl Rng,
    kind: ClaimKind,
    max_support: u64,
    max_den: u64,
) -> Subject {
    match kind {
        ClaimKind::Ageing(_) => Subject::finite(random_pmf(rng, max_support, max_den)),
        ClaimKind::Order(_) => Subject::pair(
            random_pmf(rng, max_support, max_den),
            random_pmf(rng, max_support, max_den),
        ),
    }
}

/// An instance satisfying the hypothesis of `kind` by construction.
pub fn constructive_subject(
    rng: &mut impl Rng,
    kind: ClaimKind,
    max_support: u64,
    max_den: u64,
) -> Subject {
    use AgeingProperty::*;
    match kind {
        ClaimKind::Ageing(Ilr) => Subject::finite(log_concave_pmf(rng, max_support, max_den)),
        ClaimKind::Ageing(Dlr) => Subject::finite(log_convex_pmf(rng, max_support, max_den)),
        ClaimKind::Ageing(Ifr | Ifra | Nbu | Nbafr) => {
            Subject::finite(increasing_hazard_pmf(rng, max_support, max_den))
        }
        ClaimKind::Ageing(Drhr) => {
            Subject::finite(decreasing_reversed_hazard_pmf(rng, max_support, max_den))
        }
        ClaimKind::Ageing(Dfr | Dfra | Nwu) => decreasing_hazard_family(rng),
        ClaimKind::Order(OrderRelation::St | OrderRelation::Hr) => {
            let (a, b) = hazard_dominated_pair(rng, max_support, max_den);
            Subject::pair(a, b)
        }
        ClaimKind::Order(OrderRelation::Rhr) => {
            let (a, b) = reversed_hazard_dominated_pair(rng, max_support, max_den);
            Subject::pair(a, b)
        }
        ClaimKind::Order(OrderRelation::Lr) => {
            let (a, b) = likelihood_ratio_pair(rng, max_support, max_den);
            Subject::pair(a, b)
        }
    }
}
