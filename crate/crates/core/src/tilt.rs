//! The proportional-odds (Marshall-Olkin) tilt.
//!
//! For a baseline survival `S` and tilt `alpha > 0` (`alpha_bar = 1 - alpha`):
//!
//! ```text
//! S_Y(k) = alpha S(k) / (1 - alpha_bar S(k))
//! F_Y(k) = F(k) / (1 - alpha_bar S(k))
//! f_Y(k) = alpha f(k) / ([1 - alpha_bar S(k-1)] [1 - alpha_bar S(k)])
//! r_Y(k) = r(k) / (1 - alpha_bar S(k))
//! rr_Y(k) = alpha rr(k) / (1 - alpha_bar S(k-1))
//! ```
//!
//! The denominator `1 - alpha_bar S` is bounded below by `min(alpha, 1)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::curve::{ProbValue, SurvivalCurve};
use crate::dist::{make_pmf, DistError, FinitePmf};
use crate::fraction::ExactFraction;

/// An exact positive tilt parameter.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TiltParameter {
    alpha: ExactFraction,
}

impl TiltParameter {
    pub fn new(alpha: ExactFraction) -> Result<Self, DistError> {
        if !alpha.is_positive() {
            return Err(DistError::InvalidTilt(alpha.to_string()));
        }
        Ok(TiltParameter { alpha })
    }

    /// Panics unless `numer/denom > 0`.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        Self::new(ExactFraction::new(numer, denom)).expect("positive tilt")
    }

    pub fn identity() -> Self {
        TiltParameter {
            alpha: ExactFraction::one(),
        }
    }

    pub fn alpha(&self) -> &ExactFraction {
        &self.alpha
    }

    pub fn alpha_bar(&self) -> ExactFraction {
        ExactFraction::one() - &self.alpha
    }

    pub fn is_identity(&self) -> bool {
        self.alpha.is_one()
    }

    pub fn inverse(&self) -> Self {
        TiltParameter {
            alpha: self.alpha.recip(),
        }
    }

    pub fn compose(&self, other: &TiltParameter) -> Self {
        TiltParameter {
            alpha: &self.alpha * &other.alpha,
        }
    }

    pub fn to_real(&self) -> RealTilt {
        RealTilt::new(self.alpha.to_f64()).expect("positive rational maps to positive real")
    }
}

impl fmt::Display for TiltParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.alpha)
    }
}

impl fmt::Debug for TiltParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alpha={}", self.alpha)
    }
}

impl FromStr for TiltParameter {
    type Err = DistError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let alpha: ExactFraction = s
            .parse()
            .map_err(|_| DistError::InvalidTilt(s.to_string()))?;
        TiltParameter::new(alpha)
    }
}

impl Serialize for TiltParameter {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.alpha.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TiltParameter {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let alpha = ExactFraction::deserialize(deserializer)?;
        TiltParameter::new(alpha).map_err(serde::de::Error::custom)
    }
}

/// A positive real tilt parameter for the parametric path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealTilt {
    alpha: f64,
}

impl RealTilt {
    pub fn new(alpha: f64) -> Result<Self, DistError> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(DistError::InvalidTilt(alpha.to_string()));
        }
        Ok(RealTilt { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn alpha_bar(&self) -> f64 {
        1.0 - self.alpha
    }
}

/// `1 - alpha_bar * s`, checked against its lower bound in debug builds.
pub(crate) fn exact_denominator(s: &ExactFraction, alpha: &TiltParameter) -> ExactFraction {
    let d = ExactFraction::one() - alpha.alpha_bar() * s;
    debug_assert!(
        d >= *alpha.alpha().min(&ExactFraction::one()),
        "tilt denominator {d} below min(alpha, 1) for s={s}, alpha={alpha}"
    );
    d
}

/// Tilted survival value at a point.
pub fn tilt_survival_at(survival: &ExactFraction, alpha: &TiltParameter) -> ExactFraction {
    alpha.alpha() * survival / exact_denominator(survival, alpha)
}

/// Tilted distribution-function value at a point, `F / (1 - alpha_bar (1 - F))`.
pub fn tilt_distribution_at(cdf: &ExactFraction, alpha: &TiltParameter) -> ExactFraction {
    let survival = ExactFraction::one() - cdf;
    cdf / exact_denominator(&survival, alpha)
}

pub fn tilt_survival_at_real(survival: f64, alpha: RealTilt) -> f64 {
    let d = 1.0 - alpha.alpha_bar() * survival;
    debug_assert!(d >= alpha.alpha().min(1.0) - 1e-12);
    alpha.alpha() * survival / d
}

pub fn tilt_distribution_at_real(cdf: f64, alpha: RealTilt) -> f64 {
    let d = 1.0 - alpha.alpha_bar() * (1.0 - cdf);
    debug_assert!(d >= alpha.alpha().min(1.0) - 1e-12);
    cdf / d
}

/// Exact pmf of the tilted variable, on the same support.
pub fn tilt_pmf(d: &FinitePmf, alpha: &TiltParameter) -> FinitePmf {
    if alpha.is_identity() {
        return d.clone();
    }
    let weights = (1..=d.len())
        .map(|k| {
            let lower = exact_denominator(&d.survival(k - 1), alpha);
            let upper = exact_denominator(&d.survival(k), alpha);
            alpha.alpha() * d.mass(k) / (lower * upper)
        })
        .collect();
    make_pmf(weights).expect("tilted weights form a pmf")
}

/// Tilted hazard `r(k) / (1 - alpha_bar S(k))`.
pub fn tilt_hazard_at<C: SurvivalCurve>(
    d: &C,
    alpha: &<C::Value as ProbValue>::Tilt,
    k: u64,
) -> Result<C::Value, DistError> {
    if k == 0 {
        return Err(DistError::IndexOutOfRange { k });
    }
    check_horizon(d, k)?;
    let r = d.hazard_at(k).ok_or(DistError::BeyondSupport { k })?;
    Ok(r.mul(&d.survival_at(k).tilt_factor(alpha)))
}

/// Tilted reversed hazard `alpha rr(k) / (1 - alpha_bar S(k-1))`.
pub fn tilt_reversed_hazard_at<C: SurvivalCurve>(
    d: &C,
    alpha: &<C::Value as ProbValue>::Tilt,
    k: u64,
) -> Result<C::Value, DistError> {
    if k == 0 {
        return Err(DistError::IndexOutOfRange { k });
    }
    check_horizon(d, k)?;
    let rr = d.reversed_hazard_at(k).ok_or(DistError::ZeroCdf { k })?;
    Ok(rr
        .scaled(alpha)
        .mul(&d.survival_at(k - 1).tilt_factor(alpha)))
}

fn check_horizon<C: SurvivalCurve>(d: &C, k: u64) -> Result<(), DistError> {
    match d.horizon() {
        Some(h) if k > h => Err(DistError::HorizonExceeded { k, horizon: h }),
        _ => Ok(()),
    }
}

/// A lazily evaluated tilted survival curve.
#[derive(Debug, Clone)]
pub struct Tilted<C: SurvivalCurve> {
    base: C,
    alpha: <C::Value as ProbValue>::Tilt,
}

impl<C: SurvivalCurve> Tilted<C> {
    pub fn new(base: C, alpha: <C::Value as ProbValue>::Tilt) -> Self {
        Tilted { base, alpha }
    }

    pub fn base(&self) -> &C {
        &self.base
    }

    pub fn alpha(&self) -> &<C::Value as ProbValue>::Tilt {
        &self.alpha
    }
}

impl<C: SurvivalCurve> SurvivalCurve for Tilted<C> {
    type Value = C::Value;

    fn support_end(&self) -> Option<u64> {
        self.base.support_end()
    }
    fn default_end(&self) -> u64 {
        self.base.default_end()
    }
    fn horizon(&self) -> Option<u64> {
        self.base.horizon()
    }
    fn survival_at(&self, k: u64) -> C::Value {
        self.base.survival_at(k).tilted(&self.alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::LogValue;
    use crate::dist::ParametricSurvival;
    use crate::fraction::frac;

    fn fr(v: &[&str]) -> Vec<ExactFraction> {
        v.iter().map(|s| frac(s)).collect()
    }

    fn pmf(v: &[&str]) -> FinitePmf {
        make_pmf(fr(v)).unwrap()
    }

    #[test]
    fn tilt_parameter_validation() {
        assert!(TiltParameter::new(frac("0")).is_err());
        assert!(TiltParameter::new(frac("-1/2")).is_err());
        assert!("1/5".parse::<TiltParameter>().is_ok());
        assert!("x".parse::<TiltParameter>().is_err());
        assert_eq!(TiltParameter::ratio(1, 5).alpha_bar(), frac("4/5"));
        assert!(RealTilt::new(0.0).is_err());
        assert!(RealTilt::new(f64::NAN).is_err());
    }

    #[test]
    fn survival_point_values() {
        let a = TiltParameter::ratio(1, 5);
        assert_eq!(tilt_survival_at(&frac("1/2"), &a), frac("1/6"));
        let a5 = TiltParameter::ratio(5, 1);
        assert_eq!(tilt_survival_at(&frac("1/2"), &a5), frac("5/6"));
        for s in ["0", "1/3", "1"] {
            assert_eq!(
                tilt_survival_at(&frac(s), &TiltParameter::identity()),
                frac(s)
            );
        }
        assert_eq!(tilt_survival_at(&frac("0"), &a5), frac("0"));
        assert_eq!(tilt_survival_at(&frac("1"), &a5), frac("1"));
    }

    #[test]
    fn distribution_point_values() {
        let a4 = TiltParameter::ratio(4, 1);
        assert_eq!(tilt_distribution_at(&frac("5/24"), &a4), frac("5/81"));
        assert_eq!(tilt_distribution_at(&frac("2/5"), &a4), frac("1/7"));
        assert_eq!(tilt_distribution_at(&frac("1"), &a4), frac("1"));
        assert_eq!(
            tilt_distribution_at(&frac("1"), &TiltParameter::ratio(1, 7)),
            frac("1")
        );
    }

    #[test]
    fn real_point_values() {
        let a = RealTilt::new(0.2).unwrap();
        assert!((tilt_survival_at_real(0.5, a) - 1.0 / 6.0).abs() < 1e-15);
        assert!((tilt_distribution_at_real(0.5, a) - 5.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn pmf_fixtures() {
        let d = pmf(&["0", "1/10", "1/4", "7/20", "3/10"]);
        let g = tilt_pmf(&d, &TiltParameter::ratio(5, 1));
        assert_eq!(
            g.weights(),
            fr(&["0", "1/46", "125/1656", "175/792", "15/22"]).as_slice()
        );

        let d = pmf(&["9/25", "13/50", "21/100", "17/100"]);
        let g = tilt_pmf(&d, &TiltParameter::ratio(2, 1));
        assert_eq!(
            g.weights(),
            fr(&["9/41", "650/2829", "700/2691", "34/117"]).as_slice()
        );

        assert_eq!(tilt_pmf(&d, &TiltParameter::identity()), d);
    }

    #[test]
    fn pmf_matches_survival_differences() {
        let d = pmf(&["1/7", "0", "2/7", "4/7"]);
        let a = TiltParameter::ratio(3, 2);
        let g = tilt_pmf(&d, &a);
        let lazy = Tilted::new(&d, a.clone());
        for k in 1..=4 {
            assert_eq!(g.mass(k), lazy.mass_at(k));
        }
    }

    #[test]
    fn reversed_hazard_two_routes() {
        let d = pmf(&["9/25", "13/50", "21/100", "17/100"]);
        let a = TiltParameter::ratio(2, 1);
        let direct = tilt_reversed_hazard_at(&d, &a, 1).unwrap();
        assert!(direct.is_one());
        let g = tilt_pmf(&d, &a);
        for k in 1..=4 {
            let direct = tilt_reversed_hazard_at(&d, &a, k).unwrap();
            assert_eq!(direct, g.reversed_hazard_at(k).unwrap(), "k={k}");
        }
        let z = pmf(&["0", "1/10", "1/4", "7/20", "3/10"]);
        assert_eq!(
            tilt_reversed_hazard_at(&z, &TiltParameter::ratio(5, 1), 1),
            Err(DistError::ZeroCdf { k: 1 })
        );
    }

    #[test]
    fn hazard_identity_and_support() {
        let d = pmf(&["9/25", "13/50", "21/100", "17/100"]);
        let id = TiltParameter::identity();
        for k in 1..=4 {
            assert_eq!(tilt_hazard_at(&d, &id, k).unwrap(), d.hazard_at(k).unwrap());
            assert_eq!(
                tilt_reversed_hazard_at(&d, &id, k).unwrap(),
                d.reversed_hazard_at(k).unwrap()
            );
        }
        assert_eq!(
            tilt_hazard_at(&d, &TiltParameter::ratio(2, 1), 5),
            Err(DistError::BeyondSupport { k: 5 })
        );
    }

    #[test]
    fn parametric_hazard_values() {
        let sb = ParametricSurvival::salvia_bollinger(0.8).unwrap();
        let r: LogValue = tilt_hazard_at(&sb, &RealTilt::new(0.2).unwrap(), 2).unwrap();
        assert!((r.real() - 0.8064516).abs() < 5e-7);
        let wb = ParametricSurvival::discrete_weibull(0.5, 0.8).unwrap();
        let r = tilt_hazard_at(&wb, &RealTilt::new(5.0).unwrap(), 10).unwrap();
        assert!((r.real() - 0.2834942).abs() < 5e-7);
        assert!(matches!(
            tilt_hazard_at(&wb, &RealTilt::new(5.0).unwrap(), 201),
            Err(DistError::HorizonExceeded { .. })
        ));
    }
}
