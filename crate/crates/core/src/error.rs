use thiserror::Error;

pub use crate::rules::ParseError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DegreeError {
    #[error("degree {0} is outside [0, 1]")]
    OutOfRange(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MembershipError {
    #[error("invalid membership parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("cannot evaluate membership at non-finite input {0}")]
    NonFiniteInput(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VariableError {
    #[error("variable `{variable}`: universe [{min}, {max}] is empty or not finite")]
    InvalidUniverse {
        variable: String,
        min: f64,
        max: f64,
    },
    #[error("variable `{variable}`: grid needs at least 2 points, got {points}")]
    TooFewGridPoints { variable: String, points: usize },
    #[error("variable `{variable}`: duplicate category `{category}`")]
    DuplicateCategory { variable: String, category: String },
    #[error("variable `{variable}`: support of category `{category}` misses the universe")]
    SupportOutsideUniverse { variable: String, category: String },
    #[error("variable `{variable}` has no category `{category}`")]
    UnknownCategory { variable: String, category: String },
    #[error("variable `{variable}`: {source}")]
    Membership {
        variable: String,
        #[source]
        source: MembershipError,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InferenceError {
    #[error("rule {rule}: observation has no value for variable `{variable}`")]
    MissingObservation { rule: String, variable: String },
    #[error("observation for `{variable}` is not finite ({value})")]
    NonFiniteObservation { variable: String, value: f64 },
    #[error("rule {rule}: unknown variable `{variable}`")]
    UnknownVariable { rule: String, variable: String },
    #[error("rule {rule}: variable `{variable}` has no category `{category}`")]
    UnknownCategory {
        rule: String,
        variable: String,
        category: String,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PossibilityError {
    #[error("distribution is identically zero and cannot be normalized")]
    AllZero,
    #[error("distribution is already normalized; the unsure residual is taken from the raw distribution")]
    AlreadyNormalized,
    #[error("necessity is undefined: largest possibility {max} is below 1")]
    Subnormal { max: f64 },
    #[error("unknown category `{0}`")]
    UnknownCategory(String),
    #[error("grid and possibility vectors differ in length ({grid} vs {pi})")]
    LengthMismatch { grid: usize, pi: usize },
    #[error("grid must be finite and strictly increasing")]
    BadGrid,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DefuzzError {
    #[error("distribution has zero area; no scenarios can be cut")]
    NoMass,
    #[error("percentile {0} is outside (0, 1)")]
    InvalidPercentile(f64),
    #[error("need at least 2 grid points to integrate")]
    TooFewPoints,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvaluationError {
    #[error("information gain is undefined when both forecast and baseline give zero support")]
    UndefinedGain,
}

/// Umbrella error for callers driving the whole pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Degree(#[from] DegreeError),
    #[error(transparent)]
    Membership(#[from] MembershipError),
    #[error(transparent)]
    Variable(#[from] VariableError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Inference(#[from] InferenceError),
    #[error(transparent)]
    Possibility(#[from] PossibilityError),
    #[error(transparent)]
    Defuzz(#[from] DefuzzError),
    #[error(transparent)]
    Evaluation(#[from] EvaluationError),
    #[error("invalid rule set: {0}")]
    InvalidRuleSet(String),
}
