//! JSON-lines record layout. Field order is fixed by declaration order.

use std::collections::BTreeMap;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use posfis_core::{Bits, Forecast};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputRecord {
    pub variable: String,
    pub category: String,
    pub degree: f64,
    pub phrase: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivationRecord {
    pub rule_id: String,
    pub consequent: String,
    pub level: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRecord {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawRecord {
    pub max: f64,
    pub per_category: IndexMap<String, f64>,
    pub grid: GridRecord,
    pub pi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualRecord {
    pub category: String,
    pub possibility: f64,
    pub necessity: f64,
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioRecord {
    pub p: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenariosRecord {
    pub total_auc: f64,
    pub percentiles: Vec<ScenarioRecord>,
}

/// Surprise in bits, or the string `"inf"` / `"-inf"` when unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BitsValue {
    Finite(f64),
    Unbounded(Unbounded),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unbounded {
    #[serde(rename = "inf")]
    Positive,
    #[serde(rename = "-inf")]
    Negative,
}

impl From<Bits> for BitsValue {
    fn from(b: Bits) -> Self {
        let v = b.value();
        if v.is_finite() {
            BitsValue::Finite(v)
        } else if v > 0.0 {
            BitsValue::Unbounded(Unbounded::Positive)
        } else {
            BitsValue::Unbounded(Unbounded::Negative)
        }
    }
}

impl BitsValue {
    pub fn as_f64(self) -> f64 {
        match self {
            BitsValue::Finite(v) => v,
            BitsValue::Unbounded(Unbounded::Positive) => f64::INFINITY,
            BitsValue::Unbounded(Unbounded::Negative) => f64::NEG_INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainRecord {
    pub bits: BitsValue,
    pub baseline: f64,
    pub experimental: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecordOut {
    pub observed: String,
    pub forecast_value: f64,
    pub ignorance_bits: BitsValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub info_gain: Option<GainRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub row: usize,
    pub timestamp: Option<String>,
    pub observation: BTreeMap<String, f64>,
    pub inputs: Vec<InputRecord>,
    pub activations: Vec<ActivationRecord>,
    pub raw: RawRecord,
    pub unsure: f64,
    pub necessity_defined: bool,
    pub normalized: Option<IndexMap<String, f64>>,
    pub duals: Vec<DualRecord>,
    pub scenarios: Option<ScenariosRecord>,
    pub verbalizations: IndexMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score: Option<ScoreRecordOut>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub row: usize,
    pub timestamp: Option<String>,
    pub error: String,
}

impl RunRecord {
    pub fn from_forecast(
        row: usize,
        timestamp: Option<String>,
        observation: BTreeMap<String, f64>,
        f: &Forecast,
    ) -> Self {
        let grid = f.raw.grid();
        RunRecord {
            row,
            timestamp,
            observation,
            inputs: f
                .inputs
                .iter()
                .map(|i| InputRecord {
                    variable: i.variable.clone(),
                    category: i.category.clone(),
                    degree: i.degree.value(),
                    phrase: i.phrase.clone(),
                })
                .collect(),
            activations: f
                .activations
                .iter()
                .map(|a| ActivationRecord {
                    rule_id: a.rule_id.clone(),
                    consequent: a.consequent_category.clone(),
                    level: a.level.value(),
                })
                .collect(),
            raw: RawRecord {
                max: f.raw.max().value(),
                per_category: f
                    .raw
                    .per_category()
                    .iter()
                    .map(|(k, v)| (k.clone(), v.value()))
                    .collect(),
                grid: GridRecord {
                    min: grid[0],
                    max: grid[grid.len() - 1],
                    points: grid.len(),
                },
                pi: f.raw.pi().iter().map(|p| p.value()).collect(),
            },
            unsure: f.unsure.value(),
            necessity_defined: f.necessity_defined(),
            normalized: f.assessment.as_ref().map(|a| {
                a.normalized
                    .per_category()
                    .iter()
                    .map(|(k, v)| (k.clone(), v.value()))
                    .collect()
            }),
            duals: f
                .duals
                .iter()
                .map(|d| DualRecord {
                    category: d.category.clone(),
                    possibility: d.possibility.value(),
                    necessity: d.necessity.value(),
                    valid: d.valid,
                })
                .collect(),
            scenarios: f.scenarios.as_ref().map(|s| ScenariosRecord {
                total_auc: s.total_auc,
                percentiles: s
                    .percentiles
                    .iter()
                    .map(|sc| ScenarioRecord {
                        p: sc.p,
                        value: sc.value,
                    })
                    .collect(),
            }),
            verbalizations: f.output_phrases(),
            score: None,
        }
    }
}
