//! Configuration loading, single and batch runs, and curve export for the
//! `posfis` command-line tool.

pub mod config;
pub mod curves;
pub mod error;
pub mod record;
pub mod run;

pub use config::{load_config, parse_config, Overrides, SystemConfig, Violation};
pub use curves::export_curves;
pub use error::CliError;
pub use record::RunRecord;
pub use run::{run_batch, run_single, BatchSummary};

use posfis_core::Observation;

/// The reference ozone configuration shipped with the tool.
pub const REFERENCE_CONFIG: &str = include_str!("../assets/ozone_reference.json");

/// Parses `name=value` pairs into an observation.
pub fn parse_assignments<S: AsRef<str>>(pairs: &[S]) -> Result<Observation, CliError> {
    let mut obs = Observation::new();
    for pair in pairs {
        let pair = pair.as_ref();
        let (name, value) = pair
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected name=value, got `{pair}`")))?;
        let value: f64 = value
            .trim()
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| CliError::Usage(format!("`{pair}`: value is not a finite number")))?;
        obs.insert(name.trim(), value);
    }
    Ok(obs)
}
