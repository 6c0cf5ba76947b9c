//! Ignorance scoring.
//!
//! `ignorance(f) = -log2 f` is the surprise, in bits, at the verifying outcome
//! when the forecast gave it support `f`. The information-gain difference built
//! on top of it is experimental: there is no settled possibilistic scoring rule,
//! so every gain carries an explicit experimental marker.

use serde::{Serialize, Serializer};

use crate::degree::FuzzyDegree;
use crate::error::EvaluationError;

/// Surprise in bits. Zero support gives [`Bits::INFINITE`].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Bits(f64);

impl Bits {
    pub const INFINITE: Bits = Bits(f64::INFINITY);

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

impl Serialize for Bits {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else if self.0 > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

pub fn ignorance(f: FuzzyDegree) -> Bits {
    if f.value() == 0.0 {
        Bits::INFINITE
    } else {
        Bits(0.0 - f.value().log2())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScoreRecord {
    pub forecast_value: FuzzyDegree,
    pub ignorance_bits: Bits,
}

impl ScoreRecord {
    pub fn new(forecast_value: FuzzyDegree) -> Self {
        ScoreRecord {
            forecast_value,
            ignorance_bits: ignorance(forecast_value),
        }
    }
}

/// Gain of a forecast over a baseline, tagged experimental wherever it goes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InfoGain {
    pub bits: Bits,
    pub experimental: bool,
}

/// `ignorance(baseline) - ignorance(forecast)`; positive when the forecast
/// was less surprised than the baseline.
pub fn notional_info_gain(
    f_forecast: FuzzyDegree,
    f_baseline: FuzzyDegree,
) -> Result<InfoGain, EvaluationError> {
    if f_forecast.value() == 0.0 && f_baseline.value() == 0.0 {
        return Err(EvaluationError::UndefinedGain);
    }
    let bits = ignorance(f_baseline).value() - ignorance(f_forecast).value();
    Ok(InfoGain {
        bits: Bits(bits + 0.0),
        experimental: true,
    })
}
