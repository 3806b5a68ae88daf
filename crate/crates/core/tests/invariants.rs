//! Algebraic properties of the tilt, checked against formulas written out
//! independently of the library's evaluation routes.

use motilt::ageing::Window;
use motilt::lab::{hazard_ratio_profile, Trend};
use motilt::tilt::{
    tilt_distribution_at, tilt_distribution_at_real, tilt_hazard_at, tilt_pmf,
    tilt_reversed_hazard_at, tilt_survival_at, tilt_survival_at_real, RealTilt, TiltParameter,
    Tilted,
};
use motilt::{
    make_pmf, ExactFraction, FamilyParams, FinitePmf, LogValue, ParametricSurvival, ProbValue,
    SurvivalCurve,
};
use proptest::prelude::*;

fn pmf_strategy() -> impl Strategy<Value = FinitePmf> {
    prop::collection::vec(0u64..=12, 1..=7)
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

fn tilt_strategy() -> impl Strategy<Value = TiltParameter> {
    (1i64..=12, 1i64..=12).prop_map(|(p, q)| TiltParameter::ratio(p, q))
}

/// `alpha S / (1 - (1 - alpha) S)`, written out.
fn oracle_survival(s: &ExactFraction, alpha: &ExactFraction) -> ExactFraction {
    let one = ExactFraction::one();
    alpha * s / (&one - (&one - alpha) * s)
}

fn one() -> ExactFraction {
    ExactFraction::one()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn composition(d in pmf_strategy(), a in tilt_strategy(), b in tilt_strategy()) {
        let twice = tilt_pmf(&tilt_pmf(&d, &a), &b);
        prop_assert_eq!(&twice, &tilt_pmf(&d, &a.compose(&b)));
        prop_assert_eq!(&tilt_pmf(&tilt_pmf(&d, &a), &a.inverse()), &d);
    }

    #[test]
    fn identity(d in pmf_strategy()) {
        prop_assert_eq!(&tilt_pmf(&d, &TiltParameter::identity()), &d);
    }

    #[test]
    fn pmf_matches_survival_differences(d in pmf_strategy(), a in tilt_strategy()) {
        let y = tilt_pmf(&d, &a);
        for k in 1..=d.len() + 1 {
            let before = oracle_survival(&d.survival(k - 1), a.alpha());
            let after = oracle_survival(&d.survival(k), a.alpha());
            prop_assert_eq!(y.mass(k), before - after);
        }
    }

    #[test]
    fn complementarity(d in pmf_strategy(), a in tilt_strategy()) {
        let y = tilt_pmf(&d, &a);
        for k in 0..=d.len() {
            prop_assert_eq!(y.cdf(k) + y.survival(k), one());
            // the distribution-function route is independent of the survival route
            let g = tilt_distribution_at(&d.cdf(k), &a);
            let gbar = tilt_survival_at(&d.survival(k), &a);
            prop_assert_eq!(&g + &gbar, one());
            prop_assert_eq!(g, y.cdf(k));
        }
    }

    #[test]
    fn hazard_shift_direction(d in pmf_strategy(), a in tilt_strategy()) {
        let y = tilt_pmf(&d, &a);
        for k in 1..=d.len() {
            let (rx, ry) = (d.hazard_at(k).unwrap(), y.hazard_at(k).unwrap());
            prop_assert_eq!(&tilt_hazard_at(&d, &a, k).unwrap(), &ry);
            if a.alpha() > &one() {
                prop_assert!(ry <= rx);
            } else {
                prop_assert!(ry >= rx);
            }
        }
    }

    #[test]
    fn hazard_ratio_monotone(d in pmf_strategy(), a in tilt_strategy()) {
        let y = tilt_pmf(&d, &a);
        let ratios: Vec<ExactFraction> = (1..=d.len())
            .filter_map(|k| {
                let rx = d.hazard_at(k).unwrap();
                (!rx.is_zero()).then(|| y.hazard_at(k).unwrap() / rx)
            })
            .collect();
        for w in ratios.windows(2) {
            if a.alpha() > &one() {
                prop_assert!(w[0] <= w[1]);
            } else {
                prop_assert!(w[0] >= w[1]);
            }
        }
        let p = hazard_ratio_profile(&d, &a, Window::new(1, d.len()).unwrap()).unwrap();
        prop_assert!(p.conforms);
        if a.is_identity() {
            prop_assert_eq!(p.trend, Trend::Constant);
        }
    }

    #[test]
    fn reversed_hazard_routes(d in pmf_strategy(), a in tilt_strategy()) {
        let y = tilt_pmf(&d, &a);
        for k in d.first_positive()..=d.len() {
            let direct = tilt_reversed_hazard_at(&d, &a, k).unwrap();
            prop_assert_eq!(direct, y.reversed_hazard_at(k).unwrap());
        }
    }

    #[test]
    fn lazy_tilt_matches_materialized(d in pmf_strategy(), a in tilt_strategy()) {
        let y = tilt_pmf(&d, &a);
        let lazy = Tilted::new(&d, a.clone());
        for k in 0..=d.len() + 1 {
            prop_assert_eq!(lazy.survival_at(k), y.survival(k));
            prop_assert_eq!(lazy.mass_at(k), y.mass(k));
        }
    }

    #[test]
    fn real_tilt_matches_exact(d in pmf_strategy(), a in tilt_strategy()) {
        let rt = a.to_real();
        for k in 0..=d.len() {
            let exact = tilt_survival_at(&d.survival(k), &a).to_f64();
            let real = tilt_survival_at_real(d.survival(k).to_f64(), rt);
            prop_assert!((exact - real).abs() < 1e-12);
            let log = LogValue::from_real(d.survival(k).to_f64()).tilted(&rt).real();
            prop_assert!((exact - log).abs() < 1e-12);
            let g = tilt_distribution_at_real(d.cdf(k).to_f64(), rt);
            prop_assert!((g + real - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn family_survival_strictly_decreasing(
        pick in 0usize..4,
        u in 0.01f64..0.99,
        v in 0.01f64..0.99,
        w in 0.1f64..5.0,
    ) {
        let params = match pick {
            // c = 1 is excluded: S(1) = S(0) there
            0 => FamilyParams::SalviaBollinger { c: u },
            1 => FamilyParams::DiscreteWeibull { q: u, beta: w },
            2 => FamilyParams::DiscreteS { p: u, a: v },
            _ => FamilyParams::DiscretePareto { c: w, d: w * v + 0.1 },
        };
        let s = ParametricSurvival::with_default_horizon(params).unwrap();
        prop_assert_eq!(s.log_survival(0), 0.0);
        for k in 1..=s.horizon() {
            prop_assert!(s.log_survival(k) < s.log_survival(k - 1), "{} at k={}", &s, k);
        }
    }

    #[test]
    fn parametric_composition(q in 0.05f64..0.95, beta in 0.3f64..2.5, a in 0.1f64..8.0, b in 0.1f64..8.0) {
        let s = ParametricSurvival::discrete_weibull(q, beta).unwrap();
        let (ta, tb, tab) = (
            RealTilt::new(a).unwrap(),
            RealTilt::new(b).unwrap(),
            RealTilt::new(a * b).unwrap(),
        );
        let once = Tilted::new(&s, tab);
        let twice = Tilted::new(Tilted::new(&s, ta), tb);
        for k in [1, 2, 5, 20, 100, 200] {
            let (x, y) = (once.survival_at(k).ln(), twice.survival_at(k).ln());
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0), "k={} {} {}", k, x, y);
        }
    }
}
