use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::ageing::Window;
use crate::curve::{ProbValue, SurvivalCurve};
use crate::dist::DistError;

use super::LabError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Constant,
    Nondecreasing,
    Nonincreasing,
    Neither,
}

/// `r_Y(k) / r_X(k) = 1 / (1 - alpha_bar S(k))` over a window.
#[derive(Debug, Clone, PartialEq)]
pub struct HazardRatioProfile<V> {
    pub points: Vec<(u64, V)>,
    pub trend: Trend,
    /// Nondecreasing for `alpha > 1`, nonincreasing for `alpha < 1`,
    /// constant for `alpha = 1`.
    pub conforms: bool,
    /// `|ratio(end) - 1|`; tends to 0 as the survival vanishes.
    pub gap_at_end: f64,
}

/// The hazard ratio of the tilt on `window`. Every hazard in the window must
/// be defined.
pub fn hazard_ratio_profile<C: SurvivalCurve>(
    curve: &C,
    alpha: &<C::Value as ProbValue>::Tilt,
    window: Window,
) -> Result<HazardRatioProfile<C::Value>, LabError> {
    if let Some(h) = curve.horizon() {
        if window.end > h {
            return Err(DistError::HorizonExceeded {
                k: window.end,
                horizon: h,
            }
            .into());
        }
    }
    let mut points = Vec::new();
    for k in window.start..=window.end {
        if curve.hazard_at(k).is_none() {
            return Err(DistError::BeyondSupport { k }.into());
        }
        points.push((k, curve.survival_at(k).tilt_factor(alpha)));
    }
    let (mut up, mut down) = (true, true);
    for w in points.windows(2) {
        let (a, b) = (&w[0].1, &w[1].1);
        up &= a.not_greater(b);
        down &= b.not_greater(a);
    }
    let trend = match (up, down) {
        (true, true) => Trend::Constant,
        (true, false) => Trend::Nondecreasing,
        (false, true) => Trend::Nonincreasing,
        (false, false) => Trend::Neither,
    };
    let conforms = match <C::Value as ProbValue>::tilt_cmp_one(alpha) {
        Ordering::Greater => up,
        Ordering::Less => down,
        Ordering::Equal => up && down,
    };
    let gap_at_end = points
        .last()
        .map(|(_, v)| (v.approx() - 1.0).abs())
        .unwrap_or(0.0);
    Ok(HazardRatioProfile {
        points,
        trend,
        conforms,
        gap_at_end,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{make_pmf, ParametricSurvival};
    use crate::fraction::{frac, ExactFraction};
    use crate::tilt::{tilt_hazard_at, RealTilt, TiltParameter};

    #[test]
    fn identity_is_constant_one() {
        let d = make_pmf(["1/4", "1/4", "1/2"].map(frac).to_vec()).unwrap();
        let p = hazard_ratio_profile(&d, &TiltParameter::identity(), Window::new(1, 3).unwrap())
            .unwrap();
        assert_eq!(p.trend, Trend::Constant);
        assert!(p.conforms);
        assert!(p.points.iter().all(|(_, v)| v.is_one()));
    }

    #[test]
    fn pareto_alpha_six_increases_toward_one() {
        let s = ParametricSurvival::discrete_pareto(3.0, 2.0).unwrap();
        let a = RealTilt::new(6.0).unwrap();
        let p = hazard_ratio_profile(&s, &a, Window::new(1, 10).unwrap()).unwrap();
        assert_eq!(p.trend, Trend::Nondecreasing);
        assert!(p.conforms);
        for w in p.points.windows(2) {
            assert!(w[0].1.real() < w[1].1.real());
        }
        assert!(p.points.iter().all(|(_, v)| v.real() < 1.0));
        // oracle: direct evaluation of 1 / (1 + 5 S(k)) with S(k) = (2 / (2 + k))^3
        for (k, v) in &p.points {
            let sk = (2.0 / (2.0 + *k as f64)).powi(3);
            assert!((v.real() - 1.0 / (1.0 + 5.0 * sk)).abs() < 1e-12);
        }
    }

    #[test]
    fn ratio_matches_tilted_hazard() {
        let d = make_pmf(["1/10", "1/5", "3/10", "2/5"].map(frac).to_vec()).unwrap();
        let a = TiltParameter::ratio(5, 1);
        let p = hazard_ratio_profile(&d, &a, Window::new(1, 3).unwrap()).unwrap();
        assert!(p.conforms);
        for (k, ratio) in &p.points {
            let ry: ExactFraction = tilt_hazard_at(&d, &a, *k).unwrap();
            assert_eq!(&(ry / d.hazard_at(*k).unwrap()), ratio);
        }
        let below =
            hazard_ratio_profile(&d, &TiltParameter::ratio(1, 3), Window::new(1, 4).unwrap())
                .unwrap();
        assert_eq!(below.trend, Trend::Nonincreasing);
        assert!(below.conforms);
        assert_eq!(below.gap_at_end, 0.0);
    }

    #[test]
    fn undefined_hazard_is_an_error() {
        let d = make_pmf(["1/2", "1/2"].map(frac).to_vec()).unwrap();
        let e = hazard_ratio_profile(&d, &TiltParameter::ratio(2, 1), Window::new(1, 3).unwrap());
        assert!(matches!(
            e,
            Err(LabError::Dist(DistError::BeyondSupport { k: 3 }))
        ));
    }
}
