//! Possibilistic fuzzy inference.
//!
//! Observations are fuzzified through piecewise-linear membership functions,
//! rules fire with min/max/complement, clipped consequents are united into a
//! possibility distribution, and that distribution is summarised as an unsure
//! residual, per-category possibility/necessity pairs and percentile cut
//! points of its area.

pub mod defuzz;
pub mod degree;
pub mod error;
pub mod evaluation;
pub mod inference;
pub mod membership;
pub mod possibility;
pub mod rules;
pub mod system;
pub mod variable;

pub use defuzz::{auc, percentile_defuzz, Scenario, ScenarioSet, DEFAULT_PERCENTILES};
pub use degree::{fuzzy_and, fuzzy_not, fuzzy_or, FuzzyDegree};
pub use error::Error;
pub use evaluation::{ignorance, notional_info_gain, Bits, InfoGain, ScoreRecord};
pub use inference::{
    activate, aggregate, fuzzify, Activation, Observation, OutputFrame, PossibilityDistribution,
};
pub use membership::{Direction, LinearSigmoid, MembershipFunction, Trapezoid};
pub use possibility::{
    check_validity, necessity, normalize, unsure_residual, verbalize, DualMeasure,
    PossibilityReport, Validity,
};
pub use rules::{parse_rule, parse_rules, Clause, Connective, Rule, RuleSet};
pub use system::{Forecast, InferenceSystem, InputDegree, Settings};
pub use variable::{sample_on_grid, LinguisticVariable, DEFAULT_GRID_POINTS};
