//! Max-min inference: fuzzify observations, fire rules, clip consequents and
//! unite them into a possibility distribution over the output universe.

use std::collections::BTreeMap;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::Serialize;

use crate::degree::FuzzyDegree;
use crate::error::{InferenceError, PossibilityError};
use crate::rules::{Clause, Connective, Rule};
use crate::variable::{sample, LinguisticVariable};

/// Observed values keyed by variable name.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Observation(BTreeMap<String, f64>);

impl Observation {
    pub fn new() -> Self {
        Observation::default()
    }

    pub fn with(mut self, variable: impl Into<String>, value: f64) -> Self {
        self.insert(variable, value);
        self
    }

    pub fn insert(&mut self, variable: impl Into<String>, value: f64) {
        self.0.insert(variable.into(), value);
    }

    pub fn get(&self, variable: &str) -> Option<f64> {
        self.0.get(variable).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl<K: Into<String>> FromIterator<(K, f64)> for Observation {
    fn from_iter<I: IntoIterator<Item = (K, f64)>>(iter: I) -> Self {
        Observation(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Activation {
    pub rule_id: String,
    pub level: FuzzyDegree,
    pub consequent_category: String,
}

fn find<'a>(vars: &'a [LinguisticVariable], name: &str) -> Option<&'a LinguisticVariable> {
    vars.iter().find(|v| v.name() == name)
}

/// Degree to which the observation satisfies one clause, with the value
/// clamped to the variable's universe and NOT applied as `1 - mu`.
pub fn fuzzify(
    obs: &Observation,
    rule_id: &str,
    clause: &Clause,
    vars: &[LinguisticVariable],
) -> Result<FuzzyDegree, InferenceError> {
    let var = find(vars, &clause.variable).ok_or_else(|| InferenceError::UnknownVariable {
        rule: rule_id.to_owned(),
        variable: clause.variable.clone(),
    })?;
    let value = obs
        .get(&clause.variable)
        .ok_or_else(|| InferenceError::MissingObservation {
            rule: rule_id.to_owned(),
            variable: clause.variable.clone(),
        })?;
    if !value.is_finite() {
        return Err(InferenceError::NonFiniteObservation {
            variable: clause.variable.clone(),
            value,
        });
    }
    let degree =
        var.membership(&clause.category, value)
            .map_err(|_| InferenceError::UnknownCategory {
                rule: rule_id.to_owned(),
                variable: clause.variable.clone(),
                category: clause.category.clone(),
            })?;
    Ok(if clause.negated { degree.not() } else { degree })
}

/// Fires a rule: min over clause degrees for AND, max for OR.
pub fn activate(
    rule: &Rule,
    obs: &Observation,
    vars: &[LinguisticVariable],
) -> Result<Activation, InferenceError> {
    let mut degrees = rule
        .antecedent
        .iter()
        .map(|c| fuzzify(obs, &rule.id, c, vars));
    let first = degrees
        .next()
        .expect("a parsed rule has at least one clause")?;
    let level = degrees.try_fold(first, |acc, d| {
        let d = d?;
        Ok::<_, InferenceError>(match rule.connective {
            Connective::And => acc.and(d),
            Connective::Or => acc.or(d),
        })
    })?;
    Ok(Activation {
        rule_id: rule.id.clone(),
        level,
        consequent_category: rule.consequent.category.clone(),
    })
}

/// Output universe grid with every category's membership curve sampled once.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputFrame {
    variable: String,
    grid: Vec<f64>,
    curves: IndexMap<String, Vec<FuzzyDegree>>,
}

impl OutputFrame {
    pub fn new(var: &LinguisticVariable) -> Self {
        let grid = var.grid();
        let curves = var
            .categories()
            .map(|(name, mf)| (name.to_owned(), sample(mf, &grid)))
            .collect();
        OutputFrame {
            variable: var.name().to_owned(),
            grid,
            curves,
        }
    }

    /// A bare grid with no categories, for distributions built by hand.
    pub fn bare(grid: Vec<f64>) -> Result<Self, PossibilityError> {
        let increasing = grid.windows(2).all(|w| w[0] < w[1]);
        if grid.len() < 2 || !increasing || grid.iter().any(|x| !x.is_finite()) {
            return Err(PossibilityError::BadGrid);
        }
        Ok(OutputFrame {
            variable: String::new(),
            grid,
            curves: IndexMap::new(),
        })
    }

    pub fn variable(&self) -> &str {
        &self.variable
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn curve(&self, category: &str) -> Option<&[FuzzyDegree]> {
        self.curves.get(category).map(Vec::as_slice)
    }

    pub fn categories(&self) -> impl Iterator<Item = &str> {
        self.curves.keys().map(String::as_str)
    }

    /// Consequent curve truncated at the activation level.
    pub fn clipped(&self, activation: &Activation) -> Option<Vec<FuzzyDegree>> {
        let curve = self.curve(&activation.consequent_category)?;
        Some(curve.iter().map(|mu| mu.and(activation.level)).collect())
    }

    /// `pi(x) = max_k min(level_k, mu_k(x))`.
    ///
    /// Panics if an activation names a category the frame does not have;
    /// rule sets are validated before inference.
    pub fn aggregate(self: &Arc<Self>, activations: &[Activation]) -> PossibilityDistribution {
        let mut pi = vec![FuzzyDegree::ZERO; self.grid.len()];
        for act in activations {
            let curve = self
                .curve(&act.consequent_category)
                .unwrap_or_else(|| panic!("unknown output category `{}`", act.consequent_category));
            for (p, mu) in pi.iter_mut().zip(curve) {
                *p = p.or(mu.and(act.level));
            }
        }
        PossibilityDistribution::from_frame(Arc::clone(self), pi, false)
    }
}

/// Sampled possibility distribution over the output universe.
#[derive(Debug, Clone, PartialEq)]
pub struct PossibilityDistribution {
    frame: Arc<OutputFrame>,
    pi: Vec<FuzzyDegree>,
    per_category: IndexMap<String, FuzzyDegree>,
    normalized: bool,
}

impl PossibilityDistribution {
    pub(crate) fn from_frame(
        frame: Arc<OutputFrame>,
        pi: Vec<FuzzyDegree>,
        normalized: bool,
    ) -> Self {
        debug_assert_eq!(frame.grid.len(), pi.len());
        let per_category = frame
            .curves
            .iter()
            .map(|(name, curve)| {
                let sup = curve
                    .iter()
                    .zip(&pi)
                    .map(|(mu, p)| mu.and(*p))
                    .fold(FuzzyDegree::ZERO, FuzzyDegree::or);
                (name.clone(), sup)
            })
            .collect();
        PossibilityDistribution {
            frame,
            pi,
            per_category,
            normalized,
        }
    }

    /// Distribution over a bare grid (no categories).
    pub fn from_samples(grid: Vec<f64>, pi: Vec<FuzzyDegree>) -> Result<Self, PossibilityError> {
        if grid.len() != pi.len() {
            return Err(PossibilityError::LengthMismatch {
                grid: grid.len(),
                pi: pi.len(),
            });
        }
        let frame = Arc::new(OutputFrame::bare(grid)?);
        Ok(PossibilityDistribution::from_frame(frame, pi, false))
    }

    pub fn frame(&self) -> &Arc<OutputFrame> {
        &self.frame
    }

    pub fn grid(&self) -> &[f64] {
        &self.frame.grid
    }

    pub fn pi(&self) -> &[FuzzyDegree] {
        &self.pi
    }

    pub fn per_category(&self) -> &IndexMap<String, FuzzyDegree> {
        &self.per_category
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn max(&self) -> FuzzyDegree {
        self.pi
            .iter()
            .copied()
            .fold(FuzzyDegree::ZERO, FuzzyDegree::or)
    }

    pub(crate) fn with_pi(&self, pi: Vec<FuzzyDegree>, normalized: bool) -> Self {
        PossibilityDistribution::from_frame(Arc::clone(&self.frame), pi, normalized)
    }
}

pub fn aggregate(
    activations: &[Activation],
    output_var: &LinguisticVariable,
) -> PossibilityDistribution {
    Arc::new(OutputFrame::new(output_var)).aggregate(activations)
}
