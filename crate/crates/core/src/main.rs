use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use outerpress::harness::{
    fit_csv_column, preset, print_results, print_summary, render_report, run_pipeline, run_suite,
    RunConfig, Suite, PRESET_NAMES,
};
use outerpress::Error;

/// Simulation laboratory for a viscous heat-conducting gas column driven by
/// an outer pressure at both ends.
#[derive(Parser)]
#[command(name = "outerpress", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Suppress informational output.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a run from a config file or a named preset.
    Run {
        /// Path to a TOML run configuration.
        #[arg(long, conflicts_with = "preset")]
        config: Option<PathBuf>,
        /// Built-in scenario name.
        #[arg(long, value_parser = PRESET_NAMES.to_vec())]
        preset: Option<String>,
        /// Directory for series.csv, summary.json and the config copy.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named verification suite at desk scale.
    Verify {
        /// One of: conservation, oracles, mms, convergence-to-stationary,
        /// bounds, or "all".
        #[arg(long)]
        suite: String,
    },
    /// Fit an exponential decay rate to a column of a series CSV.
    Fit {
        /// Path to a series.csv file.
        csv: PathBuf,
        /// Column to fit (e.g. h1_u, int_ux2).
        #[arg(long)]
        column: String,
        /// Restrict the window to t >= this value.
        #[arg(long)]
        window_start: Option<f64>,
        /// Restrict the window to t <= this value.
        #[arg(long)]
        window_end: Option<f64>,
    },
    /// Render a verification report for a completed run directory.
    Report {
        /// Run directory containing config.toml, summary.json, series.csv.
        dir: PathBuf,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Config(_)
        | Error::InvalidSchedule(_)
        | Error::InvalidArgument(_)
        | Error::InvalidInitialData { .. }
        | Error::NonPositive { .. } => 2,
        Error::TemperatureFloor { .. } => 3,
        Error::VolumeCollapse { .. } | Error::NonFinite { .. } => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Run {
            config,
            preset: preset_name,
            out,
        } => {
            let config = match (config, preset_name) {
                (Some(path), None) => RunConfig::from_file(&path)?,
                (None, Some(name)) => preset(&name)?,
                _ => {
                    return Err(Error::InvalidArgument(
                        "pass exactly one of --config PATH or --preset NAME".into(),
                    ))
                }
            };
            let base_dir = std::env::current_dir().map_err(|e| Error::io(".", e))?;
            let outcome = run_pipeline(&config, &base_dir, out.as_deref())?;
            if !cli.quiet {
                print_summary(&outcome.summary, out.as_ref());
            }
            Ok(outcome.exit_code as u8)
        }
        Command::Verify { suite } => {
            let suites: Vec<Suite> = if suite == "all" {
                Suite::all().to_vec()
            } else {
                vec![Suite::from_name(&suite)?]
            };
            let mut all_pass = true;
            for s in suites {
                if !cli.quiet {
                    println!("== suite: {} ==", s.name());
                }
                let results = run_suite(s)?;
                all_pass &= print_results(&results);
            }
            Ok(if all_pass { 0 } else { 1 })
        }
        Command::Fit {
            csv,
            column,
            window_start,
            window_end,
        } => {
            let (fit, points) = fit_csv_column(&csv, &column, window_start, window_end)?;
            let json = serde_json::json!({
                "column": column,
                "points": points,
                "lambda": fit.lambda,
                "r_squared": fit.r_squared,
                "window_start": fit.window.0,
                "window_end": fit.window.1,
            });
            println!("{}", serde_json::to_string_pretty(&json).unwrap());
            Ok(0)
        }
        Command::Report { dir } => {
            let text = render_report(&dir)?;
            print!("{text}");
            Ok(0)
        }
    }
}
