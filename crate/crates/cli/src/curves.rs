//! CSV export of membership curves and, for an observation, the clipped
//! consequents and the aggregated distribution.

use std::fs::File;
use std::path::{Path, PathBuf};

use posfis_core::Observation;

use crate::config::SystemConfig;
use crate::error::CliError;

fn writer(path: &Path) -> Result<csv::Writer<File>, CliError> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn write_err(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        other => CliError::Data(format!("{}: {other:?}", path.display())),
    }
}

/// Writes `<variable>.csv` (columns `category,x,mu`) for every variable, or
/// only for `only` when given. With an observation, also writes
/// `<output>_clipped.csv` (`rule_id,category,level,x,mu`) and
/// `<output>_aggregated.csv` (`x,pi`). Returns the files written.
pub fn export_curves(
    config: &SystemConfig,
    observation: Option<&Observation>,
    out_dir: &Path,
    only: Option<&str>,
) -> Result<Vec<PathBuf>, CliError> {
    let system = config.system();
    if let Some(name) = only {
        if system.variable(name).is_none() {
            let known: Vec<&str> = system.variables().iter().map(|v| v.name()).collect();
            return Err(CliError::Usage(format!(
                "unknown variable `{name}`; known variables: {}",
                known.join(", ")
            )));
        }
    }
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let mut written = Vec::new();

    for var in system.variables() {
        if only.is_some_and(|n| n != var.name()) {
            continue;
        }
        let path = out_dir.join(format!("{}.csv", var.name()));
        let mut w = writer(&path)?;
        let err = write_err(&path);
        w.write_record(["category", "x", "mu"]).map_err(&err)?;
        let grid = var.grid();
        for category in var.category_names() {
            let mu = var.sample_on_grid(category).expect("listed category");
            for (x, m) in grid.iter().zip(mu) {
                w.write_record([category, &x.to_string(), &m.value().to_string()])
                    .map_err(&err)?;
            }
        }
        w.flush().map_err(|e| CliError::io(&path, e))?;
        written.push(path.clone());
    }

    if let Some(obs) = observation {
        let frame = system.output_frame();
        let activations = system
            .activate_all(obs)
            .map_err(|e| CliError::Data(e.to_string()))?;
        let out = &config.output_variable;

        let path = out_dir.join(format!("{out}_clipped.csv"));
        let mut w = writer(&path)?;
        let err = write_err(&path);
        w.write_record(["rule_id", "category", "level", "x", "mu"])
            .map_err(&err)?;
        for act in &activations {
            let clipped = frame.clipped(act).expect("validated consequent");
            let level = act.level.value().to_string();
            for (x, m) in frame.grid().iter().zip(clipped) {
                w.write_record([
                    act.rule_id.as_str(),
                    &act.consequent_category,
                    &level,
                    &x.to_string(),
                    &m.value().to_string(),
                ])
                .map_err(&err)?;
            }
        }
        w.flush().map_err(|e| CliError::io(&path, e))?;
        written.push(path.clone());

        let path = out_dir.join(format!("{out}_aggregated.csv"));
        let mut w = writer(&path)?;
        let err = write_err(&path);
        w.write_record(["x", "pi"]).map_err(&err)?;
        let dist = frame.aggregate(&activations);
        for (x, p) in dist.grid().iter().zip(dist.pi()) {
            w.write_record([x.to_string(), p.value().to_string()])
                .map_err(&err)?;
        }
        w.flush().map_err(|e| CliError::io(&path, e))?;
        written.push(path.clone());
    }
    Ok(written)
}
