//! Exact analysis of the discrete proportional-odds (Marshall-Olkin) family.
//!
//! Given a baseline `X` on `{1, 2, ...}` and a tilt `alpha > 0`, the tilted
//! variable `Y` has survival `alpha S(k) / (1 - (1 - alpha) S(k))`. The crate
//! applies the tilt ([`tilt`]), classifies discrete ageing behaviour
//! ([`ageing`]), checks stochastic orders ([`orders`]) and runs preservation
//! experiments that confirm or refute each ageing class and order under the
//! tilt ([`lab`]).
//!
//! Finite-support distributions are exact ([`ExactFraction`]), so their
//! verdicts are too. The four closed-form families in [`dist`] are evaluated
//! in floating point in log space.
//!
//! ```
//! use motilt::{ageing::{check_ageing, AgeingProperty}, frac, make_pmf, tilt::*};
//!
//! let x = make_pmf(["0", "1/10", "1/4", "7/20", "3/10"].map(frac).to_vec()).unwrap();
//! let y = tilt_pmf(&x, &TiltParameter::ratio(5, 1));
//! assert_eq!(y.weights()[2], frac("125/1656"));
//! assert!(check_ageing(AgeingProperty::Ilr, &x, None).unwrap().holds);
//! assert!(!check_ageing(AgeingProperty::Ilr, &y, None).unwrap().holds);
//! ```

pub mod ageing;
pub mod curve;
pub mod dist;
pub mod fraction;
pub mod interchange;
pub mod lab;
pub mod orders;
pub mod tilt;
pub mod verdict;

pub use curve::{LogValue, ProbValue, SurvivalCurve, Value};
pub use dist::{
    family_survival, make_pmf, DistError, Family, FamilyParams, FinitePmf, ParametricSurvival,
};
pub use fraction::{frac, ExactFraction};
pub use tilt::{RealTilt, TiltParameter, Tilted};
pub use verdict::{Relation, Verdict, Witness, WitnessIndex};
