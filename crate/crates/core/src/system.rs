//! End-to-end evaluation of one observation against a validated rule base.

use std::sync::Arc;

use indexmap::IndexMap;

use crate::defuzz::{percentile_defuzz, ScenarioSet, DEFAULT_PERCENTILES};
use crate::degree::FuzzyDegree;
use crate::error::{DefuzzError, Error, InferenceError};
use crate::inference::{activate, Activation, Observation, OutputFrame, PossibilityDistribution};
use crate::possibility::{assess, descriptor, DualMeasure, PossibilityReport};
use crate::rules::{validate_ruleset, RuleSet, ValidationReport};
use crate::variable::LinguisticVariable;

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub percentiles: Vec<f64>,
    pub unsure_in_necessity: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            percentiles: DEFAULT_PERCENTILES.to_vec(),
            unsure_in_necessity: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct InferenceSystem {
    variables: Vec<LinguisticVariable>,
    rules: RuleSet,
    output: Arc<OutputFrame>,
    settings: Settings,
    report: ValidationReport,
}

/// Degree of one input category, with its phrase (e.g. "Somewhat deep").
#[derive(Debug, Clone, PartialEq)]
pub struct InputDegree {
    pub variable: String,
    pub category: String,
    pub degree: FuzzyDegree,
    pub phrase: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Forecast {
    pub inputs: Vec<InputDegree>,
    pub activations: Vec<Activation>,
    pub raw: PossibilityDistribution,
    pub unsure: FuzzyDegree,
    /// `None` when no rule fired at all; the rule base is then silent and the
    /// whole plausibility sits in `unsure`.
    pub assessment: Option<PossibilityReport>,
    pub duals: Vec<DualMeasure>,
    pub scenarios: Option<ScenarioSet>,
}

impl Forecast {
    /// Raw per-category possibilities in words, e.g. "Somewhat possible".
    pub fn output_phrases(&self) -> IndexMap<String, String> {
        self.raw
            .per_category()
            .iter()
            .map(|(c, p)| (c.clone(), format!("{} possible", descriptor(*p))))
            .collect()
    }

    pub fn necessity_defined(&self) -> bool {
        self.assessment
            .as_ref()
            .is_some_and(|a| a.necessity_defined)
    }
}

impl InferenceSystem {
    pub fn new(
        variables: Vec<LinguisticVariable>,
        rules: RuleSet,
        settings: Settings,
    ) -> Result<Self, Error> {
        let report = validate_ruleset(&rules, &variables);
        if !report.is_valid() {
            let msg = report
                .errors()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; ");
            return Err(Error::InvalidRuleSet(msg));
        }
        if let Some(&p) = settings
            .percentiles
            .iter()
            .find(|p| !(**p > 0.0 && **p < 1.0))
        {
            return Err(DefuzzError::InvalidPercentile(p).into());
        }
        let output_var = variables
            .iter()
            .find(|v| v.name() == rules.output_variable)
            .expect("validated output variable");
        let output = Arc::new(OutputFrame::new(output_var));
        Ok(InferenceSystem {
            variables,
            rules,
            output,
            settings,
            report,
        })
    }

    pub fn variables(&self) -> &[LinguisticVariable] {
        &self.variables
    }

    pub fn variable(&self, name: &str) -> Option<&LinguisticVariable> {
        self.variables.iter().find(|v| v.name() == name)
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    pub fn settings(&self) -> &Settings {
        &self.settings
    }

    pub fn output_frame(&self) -> &Arc<OutputFrame> {
        &self.output
    }

    /// Findings from construction; only informational ones remain.
    pub fn validation(&self) -> &ValidationReport {
        &self.report
    }

    /// Variables read by at least one antecedent, in declaration order.
    pub fn input_variables(&self) -> Vec<&str> {
        self.variables
            .iter()
            .map(LinguisticVariable::name)
            .filter(|name| {
                self.rules
                    .rules
                    .iter()
                    .any(|r| r.antecedent.iter().any(|c| c.variable == *name))
            })
            .collect()
    }

    pub fn activate_all(&self, obs: &Observation) -> Result<Vec<Activation>, InferenceError> {
        self.rules
            .rules
            .iter()
            .map(|r| activate(r, obs, &self.variables))
            .collect()
    }

    pub fn evaluate(&self, obs: &Observation) -> Result<Forecast, Error> {
        let activations = self.activate_all(obs)?;
        let mut inputs = Vec::new();
        for name in self.input_variables() {
            let var = self.variable(name).expect("listed variable");
            let value = obs.get(name).expect("activation checked presence");
            for category in var.category_names() {
                let degree = var.membership(category, value)?;
                inputs.push(InputDegree {
                    variable: name.to_owned(),
                    category: category.to_owned(),
                    degree,
                    phrase: format!("{} {}", descriptor(degree), category),
                });
            }
        }
        let raw = self.output.aggregate(&activations);
        if raw.max().value() <= 0.0 {
            let duals = raw
                .per_category()
                .keys()
                .map(|c| DualMeasure::new(c.clone(), FuzzyDegree::ZERO, FuzzyDegree::ZERO))
                .collect();
            return Ok(Forecast {
                inputs,
                activations,
                raw,
                unsure: FuzzyDegree::ONE,
                assessment: None,
                duals,
                scenarios: None,
            });
        }
        let assessment = assess(&raw, self.settings.unsure_in_necessity)?;
        let scenarios = percentile_defuzz(&raw, &self.settings.percentiles)?;
        Ok(Forecast {
            inputs,
            activations,
            unsure: assessment.unsure,
            duals: assessment.duals.clone(),
            raw,
            assessment: Some(assessment),
            scenarios: Some(scenarios),
        })
    }
}
