use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use posfis_cli::{
    export_curves, load_config, parse_assignments, run_batch, run_single, CliError, Overrides,
    SystemConfig,
};

/// Possibilistic fuzzy inference over linguistic rules.
#[derive(Debug, Parser)]
#[command(name = "posfis", version, about)]
struct Cli {
    #[command(flatten)]
    global: GlobalFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalFlags {
    /// Override the number of output grid points (at least 2).
    #[arg(long, global = true, value_name = "N")]
    grid_points: Option<usize>,
    /// Override the scenario percentiles, e.g. `0.1,0.5,0.9`.
    #[arg(long, global = true, value_delimiter = ',', value_name = "P,...")]
    percentiles: Option<Vec<f64>>,
    /// Leave the unsure residual out of the necessity competition.
    #[arg(long, global = true)]
    no_unsure_necessity: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load and check a configuration, reporting every problem found.
    Validate { config: PathBuf },
    /// Evaluate one observation given as `--set var=value` pairs.
    Eval {
        config: PathBuf,
        #[arg(long = "set", value_name = "VAR=VALUE", required = true)]
        set: Vec<String>,
        /// Write the record here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Indent the JSON record.
        #[arg(long)]
        pretty: bool,
    },
    /// Evaluate every row of a CSV file into a JSON-lines file.
    Batch {
        config: PathBuf,
        csv: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Worker threads (defaults to the number of cores).
        #[arg(long, value_name = "N")]
        workers: Option<usize>,
    },
    /// Export sampled membership curves as CSV files.
    Curves {
        config: PathBuf,
        /// Directory receiving the CSV files.
        #[arg(long)]
        output: PathBuf,
        /// Also export clipped consequents and the aggregated distribution.
        #[arg(long = "set", value_name = "VAR=VALUE")]
        set: Vec<String>,
        /// Only export this variable's curves.
        #[arg(long, value_name = "NAME")]
        variable: Option<String>,
    },
}

impl GlobalFlags {
    fn overrides(&self) -> Overrides {
        Overrides {
            grid_points: self.grid_points,
            percentiles: self.percentiles.clone(),
            unsure_in_necessity: self.no_unsure_necessity.then_some(false),
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| CliError::Io {
            path: p.to_path_buf(),
            source: e,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}").map_err(|e| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source: e,
            })
        }
    }
}

fn print_notes(config: &SystemConfig) {
    for note in &config.notes {
        eprintln!("note: {note}");
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let overrides = cli.global.overrides();
    match cli.command {
        Command::Validate { config } => {
            let cfg = load_config(&config, &overrides)?;
            print_notes(&cfg);
            println!(
                "{}: ok ({} variables, {} rules, output `{}`)",
                config.display(),
                cfg.variables().len(),
                cfg.rules().rules.len(),
                cfg.output_variable
            );
        }
        Command::Eval {
            config,
            set,
            output,
            pretty,
        } => {
            let cfg = load_config(&config, &overrides)?;
            let obs = parse_assignments(&set)?;
            let record = run_single(&cfg, &obs)?;
            let text = if pretty {
                serde_json::to_string_pretty(&record)
            } else {
                serde_json::to_string(&record)
            }
            .expect("records serialize");
            write_output(output.as_deref(), &text)?;
        }
        Command::Batch {
            config,
            csv,
            output,
            workers,
        } => {
            let cfg = load_config(&config, &overrides)?;
            let summary = run_batch(&cfg, &csv, &output, workers)?;
            let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
            write_output(None, &text)?;
        }
        Command::Curves {
            config,
            output,
            set,
            variable,
        } => {
            let cfg = load_config(&config, &overrides)?;
            let obs = if set.is_empty() {
                None
            } else {
                Some(parse_assignments(&set)?)
            };
            let files = export_curves(&cfg, obs.as_ref(), &output, variable.as_deref())?;
            for f in files {
                println!("{}", f.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
