//! Discrete distributions on `{1, 2, ...}`.
//!
//! [`FinitePmf`] is exact; [`ParametricSurvival`] covers four closed-form
//! infinite-support families evaluated in floating point up to a horizon.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{LogValue, ProbValue, SurvivalCurve};
use crate::fraction::ExactFraction;

pub const DEFAULT_HORIZON: u64 = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistError {
    #[error("weight list is empty")]
    EmptyWeights,
    #[error("negative weight {value} at support point {point}")]
    NegativeWeight { point: u64, value: ExactFraction },
    #[error("weights sum to {sum}, not 1")]
    WeightsDoNotSumToOne { sum: ExactFraction },
    #[error("hazard undefined at k={k}: survival at k-1 is zero")]
    BeyondSupport { k: u64 },
    #[error("cdf is zero at k={k}")]
    ZeroCdf { k: u64 },
    #[error("index {k} outside 1..")]
    IndexOutOfRange { k: u64 },
    #[error("k={k} exceeds horizon {horizon}")]
    HorizonExceeded { k: u64, horizon: u64 },
    #[error("invalid parameter {name}={value} for {family}")]
    InvalidParameter {
        family: Family,
        name: &'static str,
        value: f64,
    },
    #[error("horizon must be positive")]
    ZeroHorizon,
    #[error("tilt parameter must be positive, got {0}")]
    InvalidTilt(String),
}

/// Exact probability mass function on `{1, ..., n}`.
///
/// `weights[i]` is `f(i + 1)`. The last weight is positive; leading and
/// internal zeros are allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinitePmf {
    weights: Vec<ExactFraction>,
    // tail[k] = S(k) for k in 0..=n
    tail: Vec<ExactFraction>,
}

impl FinitePmf {
    pub fn new(weights: Vec<ExactFraction>) -> Result<Self, DistError> {
        make_pmf(weights)
    }

    /// Builds from survival values `S(1), ..., S(n)` (with `S(0) = 1` implied).
    pub fn from_survival(survival: &[ExactFraction]) -> Result<Self, DistError> {
        let mut prev = ExactFraction::one();
        let mut weights = Vec::with_capacity(survival.len() + 1);
        for s in survival {
            weights.push(&prev - s);
            prev = s.clone();
        }
        if !prev.is_zero() {
            weights.push(prev);
        }
        make_pmf(weights)
    }

    /// Builds from cdf values `F(1), ..., F(n)`; `F(n)` must be 1.
    pub fn from_cdf(cdf: &[ExactFraction]) -> Result<Self, DistError> {
        let mut prev = ExactFraction::zero();
        let mut weights = Vec::with_capacity(cdf.len());
        for c in cdf {
            weights.push(c - &prev);
            prev = c.clone();
        }
        make_pmf(weights)
    }

    pub fn point_mass(at: u64) -> Self {
        assert!(at >= 1);
        let mut w = vec![ExactFraction::zero(); at as usize];
        w[at as usize - 1] = ExactFraction::one();
        make_pmf(w).expect("point mass is valid")
    }

    pub fn weights(&self) -> &[ExactFraction] {
        &self.weights
    }

    /// Support maximum `n`.
    pub fn len(&self) -> u64 {
        self.weights.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `f(k)`; zero outside `1..=n`.
    pub fn mass(&self, k: u64) -> ExactFraction {
        if k == 0 || k > self.len() {
            ExactFraction::zero()
        } else {
            self.weights[k as usize - 1].clone()
        }
    }

    /// `S(k) = P{X > k}`; `S(0) = 1` and `S(k) = 0` for `k >= n`.
    pub fn survival(&self, k: u64) -> ExactFraction {
        self.tail
            .get(k as usize)
            .cloned()
            .unwrap_or_else(ExactFraction::zero)
    }

    pub fn cdf(&self, k: u64) -> ExactFraction {
        ExactFraction::one() - self.survival(k)
    }

    pub fn hazard_at(&self, k: u64) -> Result<ExactFraction, DistError> {
        if k == 0 {
            return Err(DistError::IndexOutOfRange { k });
        }
        let at_risk = self.survival(k - 1);
        if at_risk.is_zero() {
            return Err(DistError::BeyondSupport { k });
        }
        Ok(self.mass(k) / at_risk)
    }

    pub fn reversed_hazard_at(&self, k: u64) -> Result<ExactFraction, DistError> {
        if k == 0 {
            return Err(DistError::IndexOutOfRange { k });
        }
        let cdf = self.cdf(k);
        if cdf.is_zero() {
            return Err(DistError::ZeroCdf { k });
        }
        Ok(self.mass(k) / cdf)
    }

    /// Survival odds `S(k) / F(k)`.
    pub fn odds_at(&self, k: u64) -> Result<ExactFraction, DistError> {
        if k == 0 {
            return Err(DistError::IndexOutOfRange { k });
        }
        let cdf = self.cdf(k);
        if cdf.is_zero() {
            return Err(DistError::ZeroCdf { k });
        }
        Ok(self.survival(k) / cdf)
    }

    /// First support point with positive mass.
    pub fn first_positive(&self) -> u64 {
        self.weights
            .iter()
            .position(|w| w.is_positive())
            .map(|i| i as u64 + 1)
            .expect("a valid pmf has positive mass")
    }
}

/// `(f(1), ..., f(n))`
impl fmt::Display for FinitePmf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{w}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for FinitePmf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinitePmf{self}")
    }
}

/// Validates a weight list and trims trailing zeros.
pub fn make_pmf(mut weights: Vec<ExactFraction>) -> Result<FinitePmf, DistError> {
    if weights.is_empty() {
        return Err(DistError::EmptyWeights);
    }
    if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| w.is_negative()) {
        return Err(DistError::NegativeWeight {
            point: i as u64 + 1,
            value: w.clone(),
        });
    }
    let sum: ExactFraction = weights.iter().sum();
    if !sum.is_one() {
        return Err(DistError::WeightsDoNotSumToOne { sum });
    }
    while weights.last().is_some_and(|w| w.is_zero()) {
        weights.pop();
    }
    let n = weights.len();
    let mut tail = vec![ExactFraction::zero(); n + 1];
    for k in (0..n).rev() {
        tail[k] = &tail[k + 1] + &weights[k];
    }
    Ok(FinitePmf { weights, tail })
}

impl SurvivalCurve for FinitePmf {
    type Value = ExactFraction;

    fn support_end(&self) -> Option<u64> {
        Some(self.len())
    }
    fn default_end(&self) -> u64 {
        self.len()
    }
    fn survival_at(&self, k: u64) -> ExactFraction {
        self.survival(k)
    }
    fn mass_at(&self, k: u64) -> ExactFraction {
        self.mass(k)
    }
}

/// The four closed-form families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    SalviaBollinger,
    #[serde(alias = "type_i_discrete_weibull")]
    DiscreteWeibull,
    DiscreteS,
    DiscretePareto,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::SalviaBollinger,
        Family::DiscreteWeibull,
        Family::DiscreteS,
        Family::DiscretePareto,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::SalviaBollinger => "salvia_bollinger",
            Family::DiscreteWeibull => "discrete_weibull",
            Family::DiscreteS => "discrete_s",
            Family::DiscretePareto => "discrete_pareto",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Family parameters.
///
/// * Salvia-Bollinger: `S(k) = c^k / k!`, `0 < c <= 1`
/// * Type I discrete Weibull: `S(k) = q^(k^beta)`, `0 < q < 1`, `beta > 0`
/// * discrete S-distribution: `S(k) = prod_{i<=k} (1 - p + p a^i)`, `0 < p <= 1`, `0 < a < 1`
/// * discrete Pareto: `S(k) = (d / (k + d))^c`, `c, d > 0`
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyParams {
    SalviaBollinger { c: f64 },
    DiscreteWeibull { q: f64, beta: f64 },
    DiscreteS { p: f64, a: f64 },
    DiscretePareto { c: f64, d: f64 },
}

impl FamilyParams {
    pub fn family(&self) -> Family {
        match self {
            FamilyParams::SalviaBollinger { .. } => Family::SalviaBollinger,
            FamilyParams::DiscreteWeibull { .. } => Family::DiscreteWeibull,
            FamilyParams::DiscreteS { .. } => Family::DiscreteS,
            FamilyParams::DiscretePareto { .. } => Family::DiscretePareto,
        }
    }

    /// Named parameters in a fixed order.
    pub fn named(&self) -> Vec<(&'static str, f64)> {
        match *self {
            FamilyParams::SalviaBollinger { c } => vec![("c", c)],
            FamilyParams::DiscreteWeibull { q, beta } => vec![("q", q), ("beta", beta)],
            FamilyParams::DiscreteS { p, a } => vec![("p", p), ("a", a)],
            FamilyParams::DiscretePareto { c, d } => vec![("c", c), ("d", d)],
        }
    }

    pub fn validate(&self) -> Result<(), DistError> {
        let family = self.family();
        let bad = |name: &'static str, value: f64| DistError::InvalidParameter {
            family,
            name,
            value,
        };
        match *self {
            FamilyParams::SalviaBollinger { c } => {
                if !(c > 0.0 && c <= 1.0) {
                    return Err(bad("c", c));
                }
            }
            FamilyParams::DiscreteWeibull { q, beta } => {
                if !(q > 0.0 && q < 1.0) {
                    return Err(bad("q", q));
                }
                if !(beta > 0.0 && beta.is_finite()) {
                    return Err(bad("beta", beta));
                }
            }
            FamilyParams::DiscreteS { p, a } => {
                if !(p > 0.0 && p <= 1.0) {
                    return Err(bad("p", p));
                }
                if !(a > 0.0 && a < 1.0) {
                    return Err(bad("a", a));
                }
            }
            FamilyParams::DiscretePareto { c, d } => {
                if !(c > 0.0 && c.is_finite()) {
                    return Err(bad("c", c));
                }
                if !(d > 0.0 && d.is_finite()) {
                    return Err(bad("d", d));
                }
            }
        }
        Ok(())
    }

    /// `ln S(k)` from the closed form.
    fn log_survival(&self, k: u64) -> f64 {
        if k == 0 {
            return 0.0;
        }
        let kf = k as f64;
        match *self {
            FamilyParams::SalviaBollinger { c } => {
                let log_factorial: f64 = (2..=k).map(|i| (i as f64).ln()).sum();
                kf * c.ln() - log_factorial
            }
            FamilyParams::DiscreteWeibull { q, beta } => kf.powf(beta) * q.ln(),
            FamilyParams::DiscreteS { p, a } => (1..=k)
                .map(|i| (-p * -((i as f64) * a.ln()).exp_m1()).ln_1p())
                .sum(),
            FamilyParams::DiscretePareto { c, d } => -c * (kf / d).ln_1p(),
        }
    }
}

/// One of the closed-form families, evaluated on `0..=horizon`.
#[derive(Clone, PartialEq)]
pub struct ParametricSurvival {
    params: FamilyParams,
    horizon: u64,
    log_table: Vec<f64>,
}

impl ParametricSurvival {
    pub fn new(params: FamilyParams, horizon: u64) -> Result<Self, DistError> {
        params.validate()?;
        if horizon == 0 {
            return Err(DistError::ZeroHorizon);
        }
        let mut log_table = Vec::with_capacity(horizon as usize + 1);
        log_table.push(0.0);
        // Cumulative forms keep the products and factorials O(1) per step.
        let mut acc = 0.0;
        for k in 1..=horizon {
            let kf = k as f64;
            let next = match params {
                FamilyParams::SalviaBollinger { c } => {
                    acc += c.ln() - kf.ln();
                    acc
                }
                FamilyParams::DiscreteS { p, a } => {
                    acc += (-p * -(kf * a.ln()).exp_m1()).ln_1p();
                    acc
                }
                _ => params.log_survival(k),
            };
            log_table.push(next);
        }
        Ok(ParametricSurvival {
            params,
            horizon,
            log_table,
        })
    }

    pub fn with_default_horizon(params: FamilyParams) -> Result<Self, DistError> {
        Self::new(params, DEFAULT_HORIZON)
    }

    pub fn salvia_bollinger(c: f64) -> Result<Self, DistError> {
        Self::with_default_horizon(FamilyParams::SalviaBollinger { c })
    }

    pub fn discrete_weibull(q: f64, beta: f64) -> Result<Self, DistError> {
        Self::with_default_horizon(FamilyParams::DiscreteWeibull { q, beta })
    }

    pub fn discrete_s(p: f64, a: f64) -> Result<Self, DistError> {
        Self::with_default_horizon(FamilyParams::DiscreteS { p, a })
    }

    pub fn discrete_pareto(c: f64, d: f64) -> Result<Self, DistError> {
        Self::with_default_horizon(FamilyParams::DiscretePareto { c, d })
    }

    pub fn params(&self) -> &FamilyParams {
        &self.params
    }

    pub fn family(&self) -> Family {
        self.params.family()
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// `ln S(k)`; defined for any `k`, tabulated up to the horizon.
    pub fn log_survival(&self, k: u64) -> f64 {
        match self.log_table.get(k as usize) {
            Some(v) => *v,
            None => self.params.log_survival(k),
        }
    }
}

impl fmt::Debug for ParametricSurvival {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ParametricSurvival {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.family())?;
        for (i, (name, v)) in self.params.named().into_iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{name}={v}")?;
        }
        write!(f, "; horizon={})", self.horizon)
    }
}

/// `S(k)` in real arithmetic.
pub fn family_survival(s: &ParametricSurvival, k: u64) -> Result<f64, DistError> {
    if k > s.horizon {
        return Err(DistError::HorizonExceeded {
            k,
            horizon: s.horizon,
        });
    }
    Ok(s.log_survival(k).exp())
}

impl SurvivalCurve for ParametricSurvival {
    type Value = LogValue;

    fn support_end(&self) -> Option<u64> {
        None
    }
    fn default_end(&self) -> u64 {
        self.horizon
    }
    fn horizon(&self) -> Option<u64> {
        Some(self.horizon)
    }
    fn survival_at(&self, k: u64) -> LogValue {
        LogValue(self.log_survival(k))
    }
}

/// Real-valued hazard of a family at `k`, for callers that want plain `f64`.
pub fn family_hazard(s: &ParametricSurvival, k: u64) -> Result<f64, DistError> {
    if k == 0 {
        return Err(DistError::IndexOutOfRange { k });
    }
    if k > s.horizon {
        return Err(DistError::HorizonExceeded {
            k,
            horizon: s.horizon,
        });
    }
    s.hazard_at(k)
        .map(|v| v.approx())
        .ok_or(DistError::BeyondSupport { k })
}
