//! `goi`: extract stay regions, destinations, and Geometries of Interest
//! from GPS trajectories, partition the trajectory area, and produce
//! Sequences of Visited Locations.

mod artifacts;
mod commands;
mod params;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{LabelSource, PipelineArgs};
use params::ParamArgs;

#[derive(Parser)]
#[command(name = "goi", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic trajectory with ground-truth GOIs.
    Synth {
        /// Scenario spec file (flat key=value); defaults apply when omitted.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Override the spec's RNG seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output trajectory CSV.
        #[arg(long = "out")]
        out: PathBuf,
        /// Output ground-truth GeoJSON.
        #[arg(long = "truth-out")]
        truth_out: PathBuf,
    },
    /// Phase 1: extract stay regions from a trajectory.
    ExtractStays {
        #[arg(long = "in")]
        input: PathBuf,
        /// twc | refpoint | diameter
        #[arg(long, default_value = "twc")]
        method: String,
        #[arg(long = "out")]
        out: PathBuf,
        /// Optional CSV manifest (id, at, dt, point_count, centroid).
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Phase 2: merge stay regions into destination regions.
    ExtractDestinations {
        /// Stays GeoJSON from extract-stays.
        #[arg(long = "in")]
        input: PathBuf,
        /// The trajectory the stays were extracted from.
        #[arg(long)]
        traj: PathBuf,
        /// geometric | optics | diameter
        #[arg(long, default_value = "geometric")]
        method: String,
        #[arg(long = "out")]
        out: PathBuf,
    },
    /// Phase 3: build the final grid over the trajectory MBR.
    Partition {
        #[arg(long)]
        traj: PathBuf,
        #[arg(long)]
        destinations: PathBuf,
        #[arg(long = "out")]
        out: PathBuf,
    },
    /// Produce the Sequence of Visited Locations.
    Label {
        #[arg(long)]
        traj: PathBuf,
        /// intersection | nnq
        #[arg(long, default_value = "intersection")]
        strategy: String,
        /// Final grid (intersection strategy).
        #[arg(long)]
        grid: Option<PathBuf>,
        /// Destinations (nnq strategy).
        #[arg(long)]
        destinations: Option<PathBuf>,
        /// Collapse consecutive equal labels.
        #[arg(long)]
        collapse: bool,
        #[arg(long = "out")]
        out: PathBuf,
        /// Also write JSON-lines.
        #[arg(long)]
        jsonl: Option<PathBuf>,
    },
    /// Score estimated GOIs against ground truth (or run a seeded batch).
    Evaluate {
        /// Batch mode: run all three pipelines over seeded scenarios.
        #[arg(long)]
        batch: bool,
        #[arg(long, required_unless_present = "batch")]
        truth: Option<PathBuf>,
        /// Final grid holding the estimated GOIs.
        #[arg(long, required_unless_present = "batch")]
        gois: Option<PathBuf>,
        #[arg(long)]
        stays: Option<PathBuf>,
        #[arg(long)]
        destinations: Option<PathBuf>,
        #[arg(long)]
        traj: Option<PathBuf>,
        /// Scenario spec for batch mode.
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// Number of seeds in batch mode.
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        #[arg(long = "out")]
        out: PathBuf,
    },
    /// Run every stage: stays, destinations, partition, label, evaluate.
    Pipeline {
        #[arg(long = "in")]
        input: PathBuf,
        /// Ground truth for the final evaluation step.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long = "out-dir")]
        out_dir: PathBuf,
        #[arg(long, default_value = "twc")]
        stay_method: String,
        #[arg(long, default_value = "geometric")]
        dest_method: String,
        /// intersection | nnq
        #[arg(long, default_value = "intersection")]
        strategy: String,
        #[arg(long)]
        collapse: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", commands::error_record(&err));
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let params = cli.params.resolve()?;
    match cli.command {
        Command::Synth {
            spec,
            seed,
            out,
            truth_out,
        } => commands::synth(spec.as_deref(), seed, &out, &truth_out),
        Command::ExtractStays {
            input,
            method,
            out,
            manifest,
        } => commands::extract_stays_cmd(
            &input,
            commands::parse_stay_method(&method)?,
            &params,
            &out,
            manifest.as_deref(),
        ),
        Command::ExtractDestinations {
            input,
            traj,
            method,
            out,
        } => commands::extract_destinations_cmd(
            &input,
            &traj,
            commands::parse_merge_method(&method)?,
            &params,
            &out,
        ),
        Command::Partition {
            traj,
            destinations,
            out,
        } => commands::partition_cmd(&traj, &destinations, &params, &out),
        Command::Label {
            traj,
            strategy,
            grid,
            destinations,
            collapse,
            out,
            jsonl,
        } => {
            let source = match strategy.as_str() {
                "intersection" => LabelSource::Grid(grid.as_deref().ok_or_else(|| {
                    anyhow::anyhow!("--grid is required for --strategy intersection")
                })?),
                "nnq" => LabelSource::Destinations(destinations.as_deref().ok_or_else(|| {
                    anyhow::anyhow!("--destinations is required for --strategy nnq")
                })?),
                other => anyhow::bail!("unknown labeling strategy `{other}`"),
            };
            commands::label_cmd(&traj, source, collapse, &out, jsonl.as_deref())
        }
        Command::Evaluate {
            batch,
            truth,
            gois,
            stays,
            destinations,
            traj,
            scenario,
            seeds,
            out,
        } => {
            if batch {
                commands::evaluate_batch_cmd(scenario.as_deref(), seeds, &params, &out)
            } else {
                commands::evaluate_cmd(
                    truth.as_deref().expect("clap enforces --truth"),
                    gois.as_deref().expect("clap enforces --gois"),
                    stays.as_deref(),
                    destinations.as_deref(),
                    traj.as_deref(),
                    &params,
                    &out,
                )
            }
        }
        Command::Pipeline {
            input,
            truth,
            out_dir,
            stay_method,
            dest_method,
            strategy,
            collapse,
        } => {
            let nnq = match strategy.as_str() {
                "intersection" => false,
                "nnq" => true,
                other => anyhow::bail!("unknown labeling strategy `{other}`"),
            };
            commands::pipeline_cmd(
                &PipelineArgs {
                    input: &input,
                    truth: truth.as_deref(),
                    out_dir: &out_dir,
                    stay_method: commands::parse_stay_method(&stay_method)?,
                    dest_method: commands::parse_merge_method(&dest_method)?,
                    nnq,
                    collapse,
                },
                &params,
            )?;
            Ok(())
        }
    }
}
