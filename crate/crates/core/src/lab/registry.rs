//! Pinned counterexamples: twelve for ageing classes, four for orders.
//!
//! Each case recomputes its printed values from the baseline and tilt.
//! Rational values must match exactly. Decimal values were printed
//! truncated, so a decimal with `d` digits after the point passes when
//! within `max(5e-7, 10^-d)` of the computed value.

use serde::{Deserialize, Serialize};

use crate::ageing::{check_ageing, AgeingProperty, Window};
use crate::curve::{SurvivalCurve, Value};
use crate::dist::{make_pmf, FinitePmf, ParametricSurvival};
use crate::fraction::{frac, ExactFraction};
use crate::orders::{check_order, OrderRelation};
use crate::tilt::{tilt_hazard_at, tilt_pmf, RealTilt, TiltParameter, Tilted};

use super::{
    check_preservation, AlphaRegime, ClaimKind, LabError, Origin, Preservation,
    PreservationCertificate, PreservationClaim, Subject,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Printed {
    Exact(ExactFraction),
    Decimal(String),
}

impl Printed {
    /// Allowed absolute error for a decimal print.
    pub fn tolerance(&self) -> f64 {
        match self {
            Printed::Exact(_) => 0.0,
            Printed::Decimal(s) => {
                let digits = s.split_once('.').map(|(_, f)| f.len()).unwrap_or(0);
                5e-7_f64.max(10f64.powi(-(digits as i32)))
            }
        }
    }

    fn matches(&self, computed: &Value) -> bool {
        match (self, computed) {
            (Printed::Exact(e), Value::Exact(c)) => e == c,
            (Printed::Decimal(s), c) => {
                let printed: f64 = s.parse().expect("registry decimals are valid");
                (printed - c.approx()).abs() < self.tolerance()
            }
            (Printed::Exact(_), Value::Real(_)) => false,
        }
    }
}

impl std::fmt::Display for Printed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Printed::Exact(e) => write!(f, "{e}"),
            Printed::Decimal(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueCheck {
    pub label: String,
    pub printed: Printed,
    pub computed: Value,
    pub passed: bool,
}

/// A yes/no statement about the case, as printed and as recomputed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConclusionCheck {
    pub statement: String,
    pub printed: bool,
    pub computed: bool,
}

impl ConclusionCheck {
    pub fn confirmed(&self) -> bool {
        self.printed == self.computed
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub id: String,
    pub description: String,
    pub values: Vec<ValueCheck>,
    pub conclusions: Vec<ConclusionCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Box<PreservationCertificate>>,
}

impl CaseReport {
    /// Every printed value reproduces.
    pub fn passed(&self) -> bool {
        self.values.iter().all(|v| v.passed)
    }

    pub fn conclusions_confirmed(&self) -> bool {
        self.conclusions.iter().all(ConclusionCheck::confirmed)
    }
}

const CASES: [&str; 16] = [
    "ilr-alpha5",
    "ilr-alpha02",
    "dlr-alpha2",
    "dlr-alpha04",
    "ifr-sb-alpha02",
    "dfr-weibull-alpha5",
    "nbu-sdist-alpha02",
    "nwu-weibull-alpha5",
    "ifra-sdist-alpha02",
    "dfra-pareto-alpha6",
    "drhr-alpha4",
    "nbafr-alpha04",
    "hr-alpha02",
    "rhr-alpha4",
    "lr-alpha5",
    "lr-alpha02",
];

pub fn case_ids() -> &'static [&'static str] {
    &CASES
}

struct Case {
    report: CaseReport,
}

impl Case {
    fn new(id: &str, description: &str) -> Case {
        Case {
            report: CaseReport {
                id: id.to_string(),
                description: description.to_string(),
                values: Vec::new(),
                conclusions: Vec::new(),
                certificate: None,
            },
        }
    }

    fn value(&mut self, label: String, computed: Value, printed: Printed) {
        let passed = printed.matches(&computed);
        self.report.values.push(ValueCheck {
            label,
            printed,
            computed,
            passed,
        });
    }

    fn exact(&mut self, label: String, computed: ExactFraction, printed: &str) {
        self.value(label, Value::Exact(computed), Printed::Exact(frac(printed)));
    }

    fn exact_list(
        &mut self,
        name: &str,
        computed: impl Fn(u64) -> ExactFraction,
        printed: &[(u64, &str)],
    ) {
        for &(k, p) in printed {
            self.exact(format!("{name}({k})"), computed(k), p);
        }
    }

    fn decimal(&mut self, label: String, computed: f64, printed: &str) {
        self.value(
            label,
            Value::Real(computed),
            Printed::Decimal(printed.to_string()),
        );
    }

    fn conclude(&mut self, statement: impl Into<String>, printed: bool, computed: bool) {
        self.report.conclusions.push(ConclusionCheck {
            statement: statement.into(),
            printed,
            computed,
        });
    }

    fn certify(&mut self, cell: &str, subject: Subject, alpha: &TiltParameter) {
        let claim = PreservationClaim::from_cell_id(cell).expect("registry cells exist");
        if let Ok(Preservation::Violated(cert)) = check_preservation(&claim, &subject, alpha) {
            let origin = Origin::Registry {
                case: self.report.id.clone(),
            };
            self.report.certificate = Some(Box::new(cert.with_origin(origin, None)));
        }
    }

    fn done(self) -> CaseReport {
        self.report
    }
}

fn fr(v: &[&str]) -> Vec<ExactFraction> {
    v.iter().map(|s| frac(s)).collect()
}

fn pmf(v: &[&str]) -> FinitePmf {
    make_pmf(fr(v)).expect("registry pmfs are valid")
}

fn holds<C: SurvivalCurve>(p: AgeingProperty, c: &C, w: Option<Window>) -> bool {
    check_ageing(p, c, w)
        .expect("registry windows are valid")
        .holds
}

fn win(a: u64, b: u64) -> Option<Window> {
    Some(Window { start: a, end: b })
}

/// An exact pmf case: baseline masses, tilt, printed tilted masses.
fn mass_case(
    id: &str,
    description: &str,
    weights: &[&str],
    alpha: TiltParameter,
    printed: &[&str],
    property: AgeingProperty,
    other: AgeingProperty,
) -> CaseReport {
    let mut c = Case::new(id, description);
    let x = pmf(weights);
    let y = tilt_pmf(&x, &alpha);
    let list: Vec<(u64, &str)> = printed
        .iter()
        .enumerate()
        .map(|(i, p)| (i as u64 + 1, *p))
        .collect();
    c.exact_list("g", |k| y.mass(k), &list);
    c.conclude(format!("X is {property}"), true, holds(property, &x, None));
    c.conclude(format!("Y is {property}"), false, holds(property, &y, None));
    c.conclude(format!("Y is {other}"), false, holds(other, &y, None));
    let cell = PreservationClaim::cell(ClaimKind::Ageing(property), regime_of(&alpha)).cell_id();
    c.certify(&cell, Subject::finite(x), &alpha);
    c.done()
}

fn regime_of(alpha: &TiltParameter) -> AlphaRegime {
    if alpha.alpha() < &ExactFraction::one() {
        AlphaRegime::BelowOne
    } else {
        AlphaRegime::AboveOne
    }
}

fn real(alpha: &TiltParameter) -> RealTilt {
    alpha.to_real()
}

fn tilted_hazard(s: &ParametricSurvival, alpha: &TiltParameter, k: u64) -> f64 {
    tilt_hazard_at(s, &real(alpha), k)
        .expect("hazard defined inside the horizon")
        .real()
}

/// An ageing case on a parametric family: Y fails both directions of a
/// monotone pair on `window`.
#[allow(clippy::too_many_arguments)]
fn family_case(
    id: &str,
    description: &str,
    s: ParametricSurvival,
    alpha: TiltParameter,
    window: Option<Window>,
    property: AgeingProperty,
    other: AgeingProperty,
    values: impl FnOnce(&mut Case, &ParametricSurvival, &TiltParameter),
) -> CaseReport {
    let mut c = Case::new(id, description);
    values(&mut c, &s, &alpha);
    let y = Tilted::new(&s, real(&alpha));
    let on = window.map(|w| format!(" on {w}")).unwrap_or_default();
    c.conclude(
        format!("X is {property}{on}"),
        true,
        holds(property, &s, window),
    );
    c.conclude(
        format!("Y is {property}{on}"),
        false,
        holds(property, &y, window),
    );
    if other != property {
        c.conclude(format!("Y is {other}{on}"), false, holds(other, &y, window));
    }
    let cell = PreservationClaim::cell(ClaimKind::Ageing(property), regime_of(&alpha)).cell_id();
    c.certify(&cell, Subject::parametric(s.clone(), window), &alpha);
    c.done()
}

fn tilted_survival(s: &ParametricSurvival, alpha: &TiltParameter, k: u64) -> f64 {
    Tilted::new(s, real(alpha)).survival_at(k).real()
}

fn tilted_root(s: &ParametricSurvival, alpha: &TiltParameter, k: u64) -> f64 {
    (Tilted::new(s, real(alpha)).survival_at(k).ln() / k as f64).exp()
}

/// An order case on two finite baselines.
fn order_case(
    c: &mut Case,
    relation: OrderRelation,
    x1: &FinitePmf,
    x2: &FinitePmf,
    alpha: &TiltParameter,
    printed_after: bool,
) {
    let (y1, y2) = (tilt_pmf(x1, alpha), tilt_pmf(x2, alpha));
    let tag = relation.tag();
    c.conclude(
        format!("X1 <={tag} X2"),
        true,
        check_order(relation, x1, x2).holds,
    );
    c.conclude(
        format!("Y1 <={tag} Y2"),
        printed_after,
        check_order(relation, &y1, &y2).holds,
    );
    let cell = PreservationClaim::cell(ClaimKind::Order(relation), regime_of(alpha)).cell_id();
    c.certify(&cell, Subject::pair(x1.clone(), x2.clone()), alpha);
}

fn lr_case(
    id: &str,
    w1: &[&str],
    w2: &[&str],
    alpha: TiltParameter,
    g1: &[&str],
    g2: &[&str],
) -> CaseReport {
    let mut c = Case::new(
        id,
        "likelihood-ratio ordered pair whose tilts are not likelihood-ratio ordered",
    );
    let (x1, x2) = (pmf(w1), pmf(w2));
    let (y1, y2) = (tilt_pmf(&x1, &alpha), tilt_pmf(&x2, &alpha));
    let idx = |v: &[&str]| -> Vec<(u64, String)> {
        v.iter()
            .enumerate()
            .map(|(i, p)| (i as u64 + 1, p.to_string()))
            .collect()
    };
    for (k, p) in idx(g1) {
        c.exact(format!("g1({k})"), y1.mass(k), &p);
    }
    for (k, p) in idx(g2) {
        c.exact(format!("g2({k})"), y2.mass(k), &p);
    }
    order_case(&mut c, OrderRelation::Lr, &x1, &x2, &alpha, false);
    c.done()
}

/// Recomputes one registry case.
pub fn reproduce_case(id: &str) -> Result<CaseReport, LabError> {
    use AgeingProperty::*;
    let r = TiltParameter::ratio;
    let report = match id {
        "ilr-alpha5" => mass_case(
            id,
            "ILR pmf with a zero first mass, tilted by alpha = 5",
            &["0", "1/10", "1/4", "7/20", "3/10"],
            r(5, 1),
            &["0", "1/46", "125/1656", "175/792", "15/22"],
            Ilr,
            Dlr,
        ),
        "ilr-alpha02" => mass_case(
            id,
            "ILR pmf with a zero first mass, tilted by alpha = 1/5",
            &["0", "3/10", "17/50", "13/50", "1/10"],
            r(1, 5),
            &["0", "15/22", "425/1958", "325/4094", "1/46"],
            Ilr,
            Dlr,
        ),
        "dlr-alpha2" => mass_case(
            id,
            "DLR pmf on four points, tilted by alpha = 2",
            &["9/25", "13/50", "21/100", "17/100"],
            r(2, 1),
            &["9/41", "650/2829", "700/2691", "34/117"],
            Dlr,
            Ilr,
        ),
        "dlr-alpha04" => mass_case(
            id,
            "DLR pmf on four points, tilted by alpha = 2/5",
            &["13/50", "9/50", "6/25", "8/25"],
            r(2, 5),
            &["65/139", "2250/11537", "1500/8383", "16/101"],
            Dlr,
            Ilr,
        ),
        "ifr-sb-alpha02" => family_case(
            id,
            "Salvia-Bollinger c = 0.8 (IFR) tilted by alpha = 1/5; hazards at k = 2, 3, 4",
            ParametricSurvival::salvia_bollinger(0.8)?,
            r(1, 5),
            win(2, 4),
            Ifr,
            Dfr,
            |c, s, a| {
                for (k, p) in [(2, "0.8064516"), (3, "0.7870635"), (4, "0.8110739")] {
                    c.decimal(format!("r_Y({k})"), tilted_hazard(s, a, k), p);
                }
            },
        ),
        "dfr-weibull-alpha5" => family_case(
            id,
            "discrete Weibull q = 0.5, beta = 0.8 (DFR) tilted by alpha = 5; hazards at k = 7, 10, 13",
            ParametricSurvival::discrete_weibull(0.5, 0.8)?,
            r(5, 1),
            win(7, 13),
            Dfr,
            Ifr,
            |c, s, a| {
                for (k, p) in [(7, "0.2759209"), (10, "0.2834942"), (13, "0.2793229")] {
                    c.decimal(format!("r_Y({k})"), tilted_hazard(s, a, k), p);
                }
            },
        ),
        "nbu-sdist-alpha02" => family_case(
            id,
            "S-distribution p = 0.3, a = 0.6 (NBU) tilted by alpha = 1/5; j = 2, k = 3",
            ParametricSurvival::discrete_s(0.3, 0.6)?,
            r(1, 5),
            None,
            Nbu,
            Nbu,
            |c, s, a| {
                c.decimal("G(5)".into(), tilted_survival(s, a, 5), "0.075737");
                let prod = tilted_survival(s, a, 2) * tilted_survival(s, a, 3);
                c.decimal("G(2) G(3)".into(), prod, "0.063494");
            },
        ),
        "nwu-weibull-alpha5" => family_case(
            id,
            "discrete Weibull q = 0.5, beta = 0.8 (NWU) tilted by alpha = 5; j = 2, k = 3",
            ParametricSurvival::discrete_weibull(0.5, 0.8)?,
            r(5, 1),
            None,
            Nwu,
            Nwu,
            |c, s, a| {
                c.decimal("G(5)".into(), tilted_survival(s, a, 5), "0.3062174");
                let prod = tilted_survival(s, a, 2) * tilted_survival(s, a, 3);
                c.decimal("G(2) G(3)".into(), prod, "0.3657684");
            },
        ),
        "ifra-sdist-alpha02" => family_case(
            id,
            "S-distribution p = 0.5, a = 0.6 (IFRA) tilted by alpha = 1/5; roots at k = 1, 2, 4",
            ParametricSurvival::discrete_s(0.5, 0.6)?,
            r(1, 5),
            win(1, 4),
            Ifra,
            Dfra,
            |c, s, a| {
                for (k, p) in [(1, "0.44444"), (2, "0.438901"), (4, "0.457806")] {
                    c.decimal(format!("G({k})^(1/{k})"), tilted_root(s, a, k), p);
                }
            },
        ),
        "dfra-pareto-alpha6" => family_case(
            id,
            "discrete Pareto c = 3, d = 2 (DFRA) tilted by alpha = 6; roots at k = 1, 4, 8",
            ParametricSurvival::discrete_pareto(3.0, 2.0)?,
            r(6, 1),
            win(1, 8),
            Dfra,
            Ifra,
            |c, s, a| {
                for (k, p) in [(1, "0.7164179"), (4, "0.658037"), (8, "0.68081")] {
                    c.decimal(format!("G({k})^(1/{k})"), tilted_root(s, a, k), p);
                }
            },
        ),
        "drhr-alpha4" => {
            let mut c = Case::new(id, "DRHR cdf (0, 4/25, 2/5, 2/3, 1) tilted by alpha = 4");
            let x = FinitePmf::from_cdf(&fr(&["0", "4/25", "2/5", "2/3", "1"]))?;
            let alpha = r(4, 1);
            let y = tilt_pmf(&x, &alpha);
            c.exact_list(
                "G",
                |k| y.cdf(k),
                &[(1, "0"), (2, "1/22"), (3, "1/7"), (4, "1/3"), (5, "1")],
            );
            c.conclude("X is DRHR", true, holds(Drhr, &x, None));
            c.conclude("Y is DRHR", false, holds(Drhr, &y, None));
            c.certify("drhr-gt1", Subject::finite(x), &alpha);
            c.done()
        }
        "nbafr-alpha04" => {
            let mut c = Case::new(id, "NBAFR survival (4/5, 8/13, 1/2, 0) tilted by alpha = 2/5");
            let x = FinitePmf::from_survival(&fr(&["4/5", "8/13", "1/2", "0"]))?;
            let alpha = r(2, 5);
            let y = tilt_pmf(&x, &alpha);
            c.exact_list("G_bar", |k| y.survival(k), &[(1, "8/13"), (2, "16/41"), (3, "2/7")]);
            c.conclude("X is NBAFR", true, holds(Nbafr, &x, None));
            c.conclude("Y is NBAFR", false, holds(Nbafr, &y, None));
            c.certify("nbafr-lt1", Subject::finite(x), &alpha);
            c.done()
        }
        "hr-alpha02" => {
            let mut c = Case::new(
                id,
                "hazard-rate ordered pair tilted by alpha = 1/5; the tilted pair stays \
                 hazard-rate ordered, so the printed conclusion is not confirmed",
            );
            let x1 = FinitePmf::from_survival(&fr(&["1", "1/2", "2/5", "0"]))?;
            let x2 = FinitePmf::from_survival(&fr(&["1", "5/8", "11/20", "0"]))?;
            let alpha = r(1, 5);
            let (y1, y2) = (tilt_pmf(&x1, &alpha), tilt_pmf(&x2, &alpha));
            c.exact_list("G1_bar", |k| y1.survival(k), &[(2, "1/6"), (3, "2/17")]);
            c.exact_list("G2_bar", |k| y2.survival(k), &[(2, "1/4"), (3, "11/56")]);
            order_case(&mut c, OrderRelation::Hr, &x1, &x2, &alpha, false);
            c.done()
        }
        "rhr-alpha4" => {
            let mut c = Case::new(
                id,
                "reversed-hazard ordered pair whose tilts by alpha = 4 are not",
            );
            let x1 = FinitePmf::from_cdf(&fr(&["0", "5/24", "1/2", "3/4", "1"]))?;
            let x2 = FinitePmf::from_cdf(&fr(&["0", "1/6", "5/12", "2/3", "1"]))?;
            let alpha = r(4, 1);
            let (y1, y2) = (tilt_pmf(&x1, &alpha), tilt_pmf(&x2, &alpha));
            c.exact_list("G1", |k| y1.cdf(k), &[(2, "5/81"), (3, "1/5"), (4, "3/7")]);
            c.exact_list("G2", |k| y2.cdf(k), &[(2, "1/21"), (3, "5/33"), (4, "1/3")]);
            order_case(&mut c, OrderRelation::Rhr, &x1, &x2, &alpha, false);
            c.done()
        }
        "lr-alpha5" => lr_case(
            id,
            &["0", "3/10", "2/5", "1/5", "1/10"],
            &["0", "1/5", "3/10", "1/5", "3/10"],
            r(5, 1),
            &["0", "3/38", "50/209", "25/77", "5/14"],
            &["0", "1/21", "5/42", "5/33", "15/22"],
        ),
        "lr-alpha02" => lr_case(
            id,
            &["0", "3/10", "3/10", "1/5", "1/5"],
            &["0", "1/5", "3/10", "6/25", "13/50"],
            r(1, 5),
            &["0", "15/22", "75/374", "25/357", "1/21"],
            &["0", "5/9", "5/18", "10/99", "13/198"],
        ),
        _ => return Err(LabError::UnknownCase(id.to_string())),
    };
    Ok(report)
}

pub fn reproduce_all() -> Vec<CaseReport> {
    CASES
        .iter()
        .map(|id| reproduce_case(id).expect("every listed case exists"))
        .collect()
}
