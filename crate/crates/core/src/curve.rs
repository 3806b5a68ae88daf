//! Numeric carriers and the survival-curve abstraction shared by the checkers.
//!
//! Every checker is written once, generic over [`SurvivalCurve`]. Finite
//! distributions evaluate in [`ExactFraction`] and give bit-exact verdicts;
//! parametric families evaluate in [`LogValue`] (natural log of a
//! nonnegative real) so that long horizons neither underflow nor lose the
//! relative precision of tiny tail probabilities.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::fraction::ExactFraction;
use crate::tilt::{RealTilt, TiltParameter};

/// Relative slack for real-valued inequality checks.
pub const REAL_SLACK: f64 = 1e-12;

/// Arithmetic needed by the ageing and order checkers.
///
/// `minus` is only called with `rhs <= self`, `div` only with a nonzero
/// divisor.
pub trait ProbValue: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Tilt: Clone + fmt::Debug + Send + Sync;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Self;
    fn pow(&self, exp: u64) -> Self;
    /// `1 - self`
    fn complement(&self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    /// `self <= rhs`, exactly or within [`REAL_SLACK`].
    fn not_greater(&self, rhs: &Self) -> bool;

    /// `alpha * x / (1 - alpha_bar * x)`
    fn tilted(&self, alpha: &Self::Tilt) -> Self;
    /// `1 / (1 - alpha_bar * x)`
    fn tilt_factor(&self, alpha: &Self::Tilt) -> Self;
    /// `alpha * x`
    fn scaled(&self, alpha: &Self::Tilt) -> Self;
    /// Position of `alpha` relative to 1.
    fn tilt_cmp_one(alpha: &Self::Tilt) -> Ordering;

    fn to_value(&self) -> Value;
    fn approx(&self) -> f64;
}

impl ProbValue for ExactFraction {
    type Tilt = TiltParameter;

    fn zero() -> Self {
        ExactFraction::zero()
    }
    fn one() -> Self {
        ExactFraction::one()
    }
    fn is_zero(&self) -> bool {
        ExactFraction::is_zero(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn pow(&self, exp: u64) -> Self {
        ExactFraction::pow(self, u32::try_from(exp).expect("exponent fits u32"))
    }
    fn complement(&self) -> Self {
        ExactFraction::one() - self
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn not_greater(&self, rhs: &Self) -> bool {
        self <= rhs
    }
    fn tilted(&self, alpha: &TiltParameter) -> Self {
        crate::tilt::tilt_survival_at(self, alpha)
    }
    fn tilt_factor(&self, alpha: &TiltParameter) -> Self {
        crate::tilt::exact_denominator(self, alpha).recip()
    }
    fn tilt_cmp_one(alpha: &TiltParameter) -> Ordering {
        alpha.alpha().cmp(&ExactFraction::one())
    }
    fn scaled(&self, alpha: &TiltParameter) -> Self {
        alpha.alpha() * self
    }
    fn to_value(&self) -> Value {
        Value::Exact(self.clone())
    }
    fn approx(&self) -> f64 {
        self.to_f64()
    }
}

/// A nonnegative real stored as its natural logarithm (`-inf` is zero).
#[derive(Clone, Copy, PartialEq)]
pub struct LogValue(pub f64);

impl LogValue {
    pub fn from_real(x: f64) -> Self {
        debug_assert!(x >= 0.0);
        LogValue(x.ln())
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn real(self) -> f64 {
        self.0.exp()
    }
}

impl fmt::Debug for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} (ln {})", self.real(), self.0)
    }
}

impl ProbValue for LogValue {
    type Tilt = RealTilt;

    fn zero() -> Self {
        LogValue(f64::NEG_INFINITY)
    }
    fn one() -> Self {
        LogValue(0.0)
    }
    fn is_zero(&self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
    fn mul(&self, rhs: &Self) -> Self {
        LogValue(self.0 + rhs.0)
    }
    fn div(&self, rhs: &Self) -> Self {
        debug_assert!(!rhs.is_zero());
        LogValue(self.0 - rhs.0)
    }
    fn pow(&self, exp: u64) -> Self {
        debug_assert!(exp > 0);
        LogValue(self.0 * exp as f64)
    }
    fn complement(&self) -> Self {
        // ln(1 - e^l) without cancellation near l = 0.
        LogValue((-self.0.exp_m1()).ln())
    }
    fn minus(&self, rhs: &Self) -> Self {
        if rhs.is_zero() {
            return *self;
        }
        LogValue(self.0 + (-(rhs.0 - self.0).exp_m1()).ln())
    }
    fn not_greater(&self, rhs: &Self) -> bool {
        if self.0 <= rhs.0 {
            return true;
        }
        let scale = 1f64.max(self.0.abs()).max(rhs.0.abs());
        self.0 <= rhs.0 + REAL_SLACK * scale
    }
    fn tilted(&self, alpha: &RealTilt) -> Self {
        if self.is_zero() {
            return *self;
        }
        LogValue(alpha.alpha().ln() + self.0 - log_denominator(self.0, alpha))
    }
    fn tilt_factor(&self, alpha: &RealTilt) -> Self {
        if self.is_zero() {
            return LogValue::one();
        }
        LogValue(-log_denominator(self.0, alpha))
    }
    fn tilt_cmp_one(alpha: &RealTilt) -> Ordering {
        alpha.alpha().total_cmp(&1.0)
    }
    fn scaled(&self, alpha: &RealTilt) -> Self {
        LogValue(self.0 + alpha.alpha().ln())
    }
    fn to_value(&self) -> Value {
        Value::Real(self.real())
    }
    fn approx(&self) -> f64 {
        self.real()
    }
}

/// `ln(1 - alpha_bar * e^l)` for `l <= 0`.
fn log_denominator(l: f64, alpha: &RealTilt) -> f64 {
    let d = (-alpha.alpha_bar() * l.exp()).ln_1p();
    debug_assert!(
        d >= alpha.alpha().min(1.0).ln() - 1e-12,
        "tilt denominator below min(alpha, 1)"
    );
    d
}

/// A value as reported in verdicts and certificates.
///
/// Exact values serialize as `"p/q"` strings, real values as JSON numbers.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Exact(ExactFraction),
    Real(f64),
}

impl Value {
    pub fn approx(&self) -> f64 {
        match self {
            Value::Exact(x) => x.to_f64(),
            Value::Real(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&ExactFraction> {
        match self {
            Value::Exact(x) => Some(x),
            Value::Real(_) => None,
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(x) => write!(f, "{x}"),
            Value::Real(x) => f.write_str(&sig7(*x)),
        }
    }
}

/// Renders `x` with seven significant digits.
pub fn sig7(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-5..=6).contains(&magnitude) {
        return format!("{x:.6e}");
    }
    let decimals = (6 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// A discrete survival function on `{0, 1, 2, ...}` with `S(0) = 1`.
///
/// Mass, cdf, hazard and reversed hazard are derived from the survival
/// values unless an implementation has a more direct route.
pub trait SurvivalCurve: Sync {
    type Value: ProbValue;

    /// Last support point for finite distributions, `None` otherwise.
    fn support_end(&self) -> Option<u64>;

    /// Upper end of the default checking window (support end or horizon).
    fn default_end(&self) -> u64;

    /// Horizon beyond which evaluation is not offered, if any.
    fn horizon(&self) -> Option<u64> {
        None
    }

    /// `P{X > k}`.
    fn survival_at(&self, k: u64) -> Self::Value;

    /// `P{X = k}`; zero at `k = 0`.
    fn mass_at(&self, k: u64) -> Self::Value {
        if k == 0 {
            return Self::Value::zero();
        }
        self.survival_at(k - 1).minus(&self.survival_at(k))
    }

    /// `P{X <= k}`.
    fn cdf_at(&self, k: u64) -> Self::Value {
        self.survival_at(k).complement()
    }

    /// `f(k) / S(k-1)`, undefined at `k = 0` and when `S(k-1) = 0`.
    fn hazard_at(&self, k: u64) -> Option<Self::Value> {
        if k == 0 {
            return None;
        }
        let at_risk = self.survival_at(k - 1);
        if at_risk.is_zero() {
            None
        } else {
            Some(self.mass_at(k).div(&at_risk))
        }
    }

    /// `f(k) / F(k)`, undefined when `F(k) = 0`.
    fn reversed_hazard_at(&self, k: u64) -> Option<Self::Value> {
        let cdf = self.cdf_at(k);
        if cdf.is_zero() {
            None
        } else {
            Some(self.mass_at(k).div(&cdf))
        }
    }
}

impl<C: SurvivalCurve + ?Sized> SurvivalCurve for &C {
    type Value = C::Value;
    fn support_end(&self) -> Option<u64> {
        (**self).support_end()
    }
    fn default_end(&self) -> u64 {
        (**self).default_end()
    }
    fn horizon(&self) -> Option<u64> {
        (**self).horizon()
    }
    fn survival_at(&self, k: u64) -> Self::Value {
        (**self).survival_at(k)
    }
    fn mass_at(&self, k: u64) -> Self::Value {
        (**self).mass_at(k)
    }
    fn cdf_at(&self, k: u64) -> Self::Value {
        (**self).cdf_at(k)
    }
    fn hazard_at(&self, k: u64) -> Option<Self::Value> {
        (**self).hazard_at(k)
    }
    fn reversed_hazard_at(&self, k: u64) -> Option<Self::Value> {
        (**self).reversed_hazard_at(k)
    }
}
