//! JSON interchange format for distributions.
//!
//! Finite: `{"support_start": 1, "weights": ["0", "1/10", "1/4", "7/20", "3/10"]}`
//! with weights as exact `"p/q"` strings. Parametric:
//! `{"family": "discrete_pareto", "params": {"c": 3, "d": 2}, "horizon": 200}`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Map, Value as Json};
use thiserror::Error;

use crate::dist::{
    DistError, Family, FamilyParams, FinitePmf, ParametricSurvival, DEFAULT_HORIZON,
};
use crate::fraction::ExactFraction;

/// A parse failure, naming the offending field.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{path}: {message}")]
pub struct InterchangeError {
    pub path: String,
    pub message: String,
}

impl InterchangeError {
    fn at(path: impl Into<String>, message: impl Into<String>) -> Self {
        InterchangeError {
            path: path.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DistributionSpec {
    Finite(FinitePmf),
    Parametric(ParametricSurvival),
}

impl DistributionSpec {
    pub fn from_json_str(text: &str) -> Result<Self, InterchangeError> {
        let value: Json = serde_json::from_str(text).map_err(|e| {
            InterchangeError::at(
                format!("line {} column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?;
        Self::from_json(&value)
    }

    pub fn from_json(value: &Json) -> Result<Self, InterchangeError> {
        let obj = value
            .as_object()
            .ok_or_else(|| InterchangeError::at("$", "expected a JSON object"))?;
        if obj.contains_key("weights") {
            finite_from_json(obj).map(DistributionSpec::Finite)
        } else if obj.contains_key("family") {
            parametric_from_json(obj).map(DistributionSpec::Parametric)
        } else {
            Err(InterchangeError::at(
                "$",
                "expected either a \"weights\" or a \"family\" field",
            ))
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            DistributionSpec::Finite(d) => finite_to_json(d),
            DistributionSpec::Parametric(s) => parametric_to_json(s),
        }
    }
}

pub fn finite_to_json(d: &FinitePmf) -> Json {
    json!({
        "support_start": 1,
        "weights": d.weights().iter().map(|w| w.to_string()).collect::<Vec<_>>(),
    })
}

pub fn parametric_to_json(s: &ParametricSurvival) -> Json {
    let params: Map<String, Json> = s
        .params()
        .named()
        .into_iter()
        .map(|(k, v)| (k.to_string(), json!(v)))
        .collect();
    json!({
        "family": s.family().name(),
        "params": params,
        "horizon": s.horizon(),
    })
}

fn finite_from_json(obj: &Map<String, Json>) -> Result<FinitePmf, InterchangeError> {
    if let Some(start) = obj.get("support_start") {
        if start.as_u64() != Some(1) {
            return Err(InterchangeError::at(
                "support_start",
                format!("support must start at 1, got {start}"),
            ));
        }
    }
    let list = obj
        .get("weights")
        .and_then(Json::as_array)
        .ok_or_else(|| InterchangeError::at("weights", "expected an array of \"p/q\" strings"))?;
    let mut weights = Vec::with_capacity(list.len());
    for (i, w) in list.iter().enumerate() {
        let path = format!("weights[{i}]");
        let parsed: ExactFraction = match w {
            Json::String(s) => s
                .parse()
                .map_err(|e| InterchangeError::at(&path, format!("{e}")))?,
            Json::Number(n) if n.is_u64() || n.is_i64() => n
                .to_string()
                .parse()
                .map_err(|e| InterchangeError::at(&path, format!("{e}")))?,
            other => {
                return Err(InterchangeError::at(
                    path,
                    format!("expected an exact \"p/q\" string, got {other}"),
                ))
            }
        };
        weights.push(parsed);
    }
    FinitePmf::new(weights).map_err(|e| {
        let path = match &e {
            DistError::NegativeWeight { point, .. } => format!("weights[{}]", point - 1),
            _ => "weights".to_string(),
        };
        InterchangeError::at(path, e.to_string())
    })
}

fn parametric_from_json(obj: &Map<String, Json>) -> Result<ParametricSurvival, InterchangeError> {
    let family: Family = obj
        .get("family")
        .cloned()
        .map(serde_json::from_value)
        .transpose()
        .map_err(|e| InterchangeError::at("family", e.to_string()))?
        .ok_or_else(|| InterchangeError::at("family", "missing"))?;
    let params = obj
        .get("params")
        .and_then(Json::as_object)
        .ok_or_else(|| InterchangeError::at("params", "expected an object"))?;
    let get = |name: &str| -> Result<f64, InterchangeError> {
        params
            .get(name)
            .and_then(Json::as_f64)
            .ok_or_else(|| InterchangeError::at(format!("params.{name}"), "expected a number"))
    };
    let fp = match family {
        Family::SalviaBollinger => FamilyParams::SalviaBollinger { c: get("c")? },
        Family::DiscreteWeibull => FamilyParams::DiscreteWeibull {
            q: get("q")?,
            beta: get("beta")?,
        },
        Family::DiscreteS => FamilyParams::DiscreteS {
            p: get("p")?,
            a: get("a")?,
        },
        Family::DiscretePareto => FamilyParams::DiscretePareto {
            c: get("c")?,
            d: get("d")?,
        },
    };
    let horizon = match obj.get("horizon") {
        None => DEFAULT_HORIZON,
        Some(h) => h
            .as_u64()
            .ok_or_else(|| InterchangeError::at("horizon", "expected a positive integer"))?,
    };
    ParametricSurvival::new(fp, horizon).map_err(|e| {
        let path = match &e {
            DistError::InvalidParameter { name, .. } => format!("params.{name}"),
            DistError::ZeroHorizon => "horizon".to_string(),
            _ => "params".to_string(),
        };
        InterchangeError::at(path, e.to_string())
    })
}

impl Serialize for FinitePmf {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        finite_to_json(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FinitePmf {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = Json::deserialize(deserializer)?;
        let obj = v
            .as_object()
            .ok_or_else(|| D::Error::custom("expected a finite distribution object"))?;
        finite_from_json(obj).map_err(D::Error::custom)
    }
}

impl Serialize for ParametricSurvival {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        parametric_to_json(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ParametricSurvival {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = Json::deserialize(deserializer)?;
        let obj = v
            .as_object()
            .ok_or_else(|| D::Error::custom("expected a parametric distribution object"))?;
        parametric_from_json(obj).map_err(D::Error::custom)
    }
}
