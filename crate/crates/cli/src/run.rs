use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use posfis_core::{ignorance, notional_info_gain, Observation};

use crate::config::SystemConfig;
use crate::error::CliError;
use crate::record::{BitsValue, ErrorRecord, GainRecord, RunRecord, ScoreRecordOut};

/// Column names recognised as the row timestamp, in priority order.
pub const TIMESTAMP_COLUMNS: [&str; 4] = ["timestamp", "time", "date", "datetime"];

/// Column read for verification when the config does not name one.
pub const DEFAULT_VERIFY_COLUMN: &str = "observed";

/// Runs the full pipeline for one observation.
pub fn run_single(config: &SystemConfig, observation: &Observation) -> Result<RunRecord, CliError> {
    run_row(config, 0, None, observation)
}

fn run_row(
    config: &SystemConfig,
    row: usize,
    timestamp: Option<String>,
    observation: &Observation,
) -> Result<RunRecord, CliError> {
    let forecast = config
        .system()
        .evaluate(observation)
        .map_err(|e| CliError::Data(e.to_string()))?;
    let values: BTreeMap<String, f64> =
        observation.iter().map(|(k, v)| (k.to_owned(), v)).collect();
    Ok(RunRecord::from_forecast(row, timestamp, values, &forecast))
}

fn score(config: &SystemConfig, record: &mut RunRecord, observed: &str) -> Result<(), String> {
    let f = record
        .raw
        .per_category
        .get(observed)
        .copied()
        .ok_or_else(|| {
            format!(
                "observed category `{observed}` is not a category of `{}`",
                config.output_variable
            )
        })?;
    let f = posfis_core::FuzzyDegree::saturating(f);
    let info_gain = match config.evaluation.baseline.get(observed) {
        Some(&base) => match notional_info_gain(f, base) {
            Ok(g) => Some(GainRecord {
                bits: g.bits.into(),
                baseline: base.value(),
                experimental: g.experimental,
            }),
            Err(_) => None,
        },
        None => None,
    };
    record.score = Some(ScoreRecordOut {
        observed: observed.to_owned(),
        forecast_value: f.value(),
        ignorance_bits: ignorance(f).into(),
        info_gain,
    });
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GainSummary {
    pub rows: usize,
    pub mean_bits: Option<f64>,
    pub unbounded: usize,
    pub experimental: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchSummary {
    pub rows: usize,
    pub errors: usize,
    pub mean_unsure: Option<f64>,
    pub scored: usize,
    pub mean_ignorance_bits: Option<f64>,
    pub infinite_ignorance: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub information_gain: Option<GainSummary>,
}

struct RowInput {
    row: usize,
    timestamp: Option<String>,
    parsed: Result<(Observation, Option<String>), String>,
}

enum RowOutput {
    Ok(Box<RunRecord>),
    Err(ErrorRecord),
}

fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

fn read_rows(config: &SystemConfig, csv_path: &Path) -> Result<Vec<RowInput>, CliError> {
    let file = File::open(csv_path).map_err(|e| CliError::io(csv_path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let headers = reader
        .headers()
        .map_err(|e| csv_error(csv_path, e))?
        .clone();
    let column = |name: &str| headers.iter().position(|h| h == name);

    let inputs = config.system().input_variables();
    let missing: Vec<&str> = inputs
        .iter()
        .copied()
        .filter(|v| column(v).is_none())
        .collect();
    if !missing.is_empty() {
        return Err(CliError::Data(format!(
            "{}: CSV header lacks column(s) {} required by the rules; header has [{}]",
            csv_path.display(),
            missing.join(", "),
            headers.iter().collect::<Vec<_>>().join(", ")
        )));
    }
    let input_cols: Vec<(String, usize)> = inputs
        .iter()
        .map(|v| (v.to_string(), column(v).expect("checked above")))
        .collect();
    let ts_col = TIMESTAMP_COLUMNS.iter().find_map(|c| column(c));
    let verify_name = config
        .evaluation
        .verify_column
        .as_deref()
        .unwrap_or(DEFAULT_VERIFY_COLUMN);
    let verify_col = column(verify_name);
    if config.evaluation.verify_column.is_some() && verify_col.is_none() {
        return Err(CliError::Data(format!(
            "{}: verification column `{verify_name}` is not in the header",
            csv_path.display()
        )));
    }

    let mut rows = Vec::new();
    for (row, result) in reader.records().enumerate() {
        let record = match result {
            Ok(r) => r,
            Err(e) if e.is_io_error() => return Err(csv_error(csv_path, e)),
            Err(e) => {
                rows.push(RowInput {
                    row,
                    timestamp: None,
                    parsed: Err(format!("malformed CSV row: {e}")),
                });
                continue;
            }
        };
        let timestamp = ts_col.and_then(|c| record.get(c)).map(str::to_owned);
        let parsed = input_cols
            .iter()
            .map(|(name, c)| {
                let cell = record.get(*c).unwrap_or("");
                match cell.parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok((name.clone(), v)),
                    _ => Err(format!("column `{name}`: `{cell}` is not a finite number")),
                }
            })
            .collect::<Result<Observation, String>>()
            .map(|obs| {
                let observed = verify_col
                    .and_then(|c| record.get(c))
                    .filter(|s| !s.is_empty())
                    .map(str::to_owned);
                (obs, observed)
            });
        rows.push(RowInput {
            row,
            timestamp,
            parsed,
        });
    }
    Ok(rows)
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        other => CliError::Data(format!("{}: {other:?}", path.display())),
    }
}

fn process(config: &SystemConfig, input: &RowInput) -> RowOutput {
    let error = |msg: String| {
        RowOutput::Err(ErrorRecord {
            row: input.row,
            timestamp: input.timestamp.clone(),
            error: msg,
        })
    };
    let (obs, observed) = match &input.parsed {
        Ok(p) => p,
        Err(msg) => return error(msg.clone()),
    };
    let mut record = match run_row(config, input.row, input.timestamp.clone(), obs) {
        Ok(r) => r,
        Err(e) => return error(e.to_string()),
    };
    if let Some(observed) = observed {
        if let Err(msg) = score(config, &mut record, observed) {
            return error(msg);
        }
    }
    RowOutput::Ok(Box::new(record))
}

/// Evaluates every CSV row and writes one JSON line per row, in input order.
///
/// `workers` bounds the thread pool; `None` uses the rayon default. Output is
/// byte-identical for any worker count.
pub fn run_batch(
    config: &SystemConfig,
    csv_path: &Path,
    out_path: &Path,
    workers: Option<usize>,
) -> Result<BatchSummary, CliError> {
    let rows = read_rows(config, csv_path)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        if n == 0 {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let outputs: Vec<(RowOutput, String)> = pool.install(|| {
        rows.par_iter()
            .map(|row| {
                let out = process(config, row);
                let line = match &out {
                    RowOutput::Ok(r) => serde_json::to_string(r),
                    RowOutput::Err(e) => serde_json::to_string(e),
                }
                .expect("records serialize");
                (out, line)
            })
            .collect()
    });

    let file = File::create(out_path).map_err(|e| CliError::io(out_path, e))?;
    let mut w = BufWriter::new(file);
    let mut unsure = Vec::new();
    let mut finite_ign = Vec::new();
    let mut infinite_ignorance = 0;
    let mut scored = 0;
    let mut gains = Vec::new();
    let mut gain_rows = 0;
    let mut unbounded_gain = 0;
    let mut errors = 0;
    for (out, line) in &outputs {
        writeln!(w, "{line}").map_err(|e| CliError::io(out_path, e))?;
        match out {
            RowOutput::Err(_) => errors += 1,
            RowOutput::Ok(r) => {
                unsure.push(r.unsure);
                if let Some(s) = &r.score {
                    scored += 1;
                    match s.ignorance_bits {
                        BitsValue::Finite(b) => finite_ign.push(b),
                        BitsValue::Unbounded(_) => infinite_ignorance += 1,
                    }
                    if let Some(g) = &s.info_gain {
                        gain_rows += 1;
                        match g.bits {
                            BitsValue::Finite(b) => gains.push(b),
                            BitsValue::Unbounded(_) => unbounded_gain += 1,
                        }
                    }
                }
            }
        }
    }
    w.flush().map_err(|e| CliError::io(out_path, e))?;

    Ok(BatchSummary {
        rows: outputs.len(),
        errors,
        mean_unsure: mean(&unsure),
        scored,
        mean_ignorance_bits: mean(&finite_ign),
        infinite_ignorance,
        information_gain: (gain_rows > 0).then(|| GainSummary {
            rows: gain_rows,
            mean_bits: mean(&gains),
            unbounded: unbounded_gain,
            experimental: true,
        }),
    })
}
