use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::info;
use transducer_experiments::acceptance;
use transducer_experiments::config::{self, parse_override, REFERENCE_CONFIG};
use transducer_experiments::fit::{fit_columns, read_columns, FitModel};
use transducer_experiments::{scenarios, ExperimentError, Scenario};

#[derive(Parser)]
#[command(name = "transducer", version, about = "Qubit-assisted SAW to microwave transducer model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its CSV files, summary and manifest.
    Run {
        scenario: Scenario,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Seed for scenarios with synthetic noise.
        #[arg(long)]
        seed: Option<u64>,
        /// Override a config entry, `key=value`. Repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE", value_parser = parse_set)]
        overrides: Vec<(String, String)>,
    },
    /// Evaluate the acceptance criteria and print one line per criterion.
    SelfCheck {
        /// Defaults to the built-in reference device.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Comma-separated criterion numbers, all by default.
        #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u8).range(1..=i64::from(acceptance::COUNT)))]
        criteria: Vec<u8>,
        #[arg(long = "set", value_name = "KEY=VALUE", value_parser = parse_set)]
        overrides: Vec<(String, String)>,
    },
    /// Fit a model to a CSV trace and print the result as JSON.
    Fit { model: FitModel, csv: PathBuf },
}

fn parse_set(s: &str) -> Result<(String, String), String> {
    parse_override(s).map_err(|e| e.to_string())
}

fn read(path: &Path) -> Result<String, ExperimentError> {
    std::fs::read_to_string(path).map_err(|source| ExperimentError::Io { path: path.to_path_buf(), source })
}

fn execute(command: Command) -> Result<bool, ExperimentError> {
    match command {
        Command::Run { scenario, config: path, out, seed, overrides } => {
            let (text, params) = config::load(&read(&path)?, &overrides)?;
            info!("running {scenario} into {}", out.display());
            let manifest = scenarios::run(scenario, &params, &text, &out, seed)?;
            print!("{}", std::fs::read_to_string(out.join("summary.txt")).unwrap_or_default());
            Ok(manifest.checks_passed)
        }
        Command::SelfCheck { config: path, criteria, overrides } => {
            let text = match path {
                Some(p) => read(&p)?,
                None => REFERENCE_CONFIG.to_string(),
            };
            let (_, params) = config::load(&text, &overrides)?;
            let ids: Vec<u8> = if criteria.is_empty() { (1..=acceptance::COUNT).collect() } else { criteria };
            let mut all = true;
            for id in ids {
                let r = acceptance::run_criterion(id, &params);
                println!("{}", r.line());
                all &= r.pass;
            }
            Ok(all)
        }
        Command::Fit { model, csv } => {
            let file = std::fs::File::open(&csv).map_err(|source| ExperimentError::Io { path: csv.clone(), source })?;
            let report = fit_columns(model, &read_columns(file)?)?;
            println!("{}", serde_json::to_string_pretty(&report).map_err(|e| ExperimentError::Data(e.to_string()))?);
            Ok(report.converged)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
