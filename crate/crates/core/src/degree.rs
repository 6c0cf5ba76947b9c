//! Degrees of truth and the min/max/complement operators over them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::DegreeError;

/// A membership or possibility degree in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FuzzyDegree(f64);

impl FuzzyDegree {
    pub const ZERO: FuzzyDegree = FuzzyDegree(0.0);
    pub const ONE: FuzzyDegree = FuzzyDegree(1.0);

    pub fn new(value: f64) -> Result<Self, DegreeError> {
        if (0.0..=1.0).contains(&value) {
            // normalise -0.0 so serialized output never shows a sign
            Ok(FuzzyDegree(value + 0.0))
        } else {
            Err(DegreeError::OutOfRange(value))
        }
    }

    /// Clamps into `[0, 1]`; NaN maps to zero.
    pub fn saturating(value: f64) -> Self {
        if value.is_nan() {
            FuzzyDegree::ZERO
        } else {
            FuzzyDegree(value.clamp(0.0, 1.0) + 0.0)
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Intersection (t-norm): minimum.
    #[inline]
    pub fn and(self, other: FuzzyDegree) -> FuzzyDegree {
        FuzzyDegree(self.0.min(other.0))
    }

    /// Union (t-conorm): maximum.
    #[inline]
    pub fn or(self, other: FuzzyDegree) -> FuzzyDegree {
        FuzzyDegree(self.0.max(other.0))
    }

    /// Complement: `1 - a`.
    #[inline]
    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> FuzzyDegree {
        FuzzyDegree(1.0 - self.0)
    }
}

impl TryFrom<f64> for FuzzyDegree {
    type Error = DegreeError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        FuzzyDegree::new(value)
    }
}

impl From<FuzzyDegree> for f64 {
    fn from(d: FuzzyDegree) -> f64 {
        d.0
    }
}

impl fmt::Display for FuzzyDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

pub fn fuzzy_and(a: FuzzyDegree, b: FuzzyDegree) -> FuzzyDegree {
    a.and(b)
}

pub fn fuzzy_or(a: FuzzyDegree, b: FuzzyDegree) -> FuzzyDegree {
    a.or(b)
}

pub fn fuzzy_not(a: FuzzyDegree) -> FuzzyDegree {
    a.not()
}
