//! Subcommand implementations. Every stage reads the previous stage's files,
//! verifies the digest chain, and writes its artifact plus a metadata
//! sidecar.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde_json::json;

use goi_core::destination::{extract_destinations, optics_cluster_with_diagnostics, MergeMethod};
use goi_core::eval::{
    self, destination_stats, generate_scenario, geometric_similarity, stay_stats, PipelineMethod,
    PipelineParams, ScenarioSpec,
};
use goi_core::io;
use goi_core::io::Sidecar;
use goi_core::partition::{assign_cells, build_final_grid, build_micro_grid, validate_partition};
use goi_core::stay::{extract_stays, StayMethod};
use goi_core::svl::{label_by_intersection, label_by_nnq};

use crate::artifacts::{file_digest, load_trajectory, verify_trajectory_digest, VERSION};
use crate::params::params_json;

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn synth(
    spec_path: Option<&Path>,
    seed: Option<u64>,
    out: &Path,
    truth_out: &Path,
) -> Result<()> {
    let mut spec = match spec_path {
        Some(p) => ScenarioSpec::parse(
            &std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        )?,
        None => ScenarioSpec::default(),
    };
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    let scenario = generate_scenario(&spec)?;

    io::write_trajectory_csv(out, scenario.trajectory.fixes())?;
    let spec_echo = serde_json::to_value(spec)?;
    Sidecar::new("trajectory", VERSION)
        .with_origin(scenario.trajectory.origin())
        .with_param("scenario", spec_echo.clone())
        .save(out)?;

    let truth_sidecar = Sidecar::new("truth", VERSION)
        .with_origin(scenario.trajectory.origin())
        .with_param("scenario", spec_echo)
        .with_input("trajectory", &file_digest(out)?);
    io::save_ground_truth(truth_out, &scenario.truth, &truth_sidecar)?;
    println!(
        "synth: {} fixes, {} GOIs -> {}, {}",
        scenario.trajectory.len(),
        scenario.truth.len(),
        out.display(),
        truth_out.display()
    );
    Ok(())
}

pub fn extract_stays_cmd(
    input: &Path,
    method: StayMethod,
    params: &PipelineParams,
    out: &Path,
    manifest: Option<&Path>,
) -> Result<()> {
    let traj = load_trajectory(input, None)?;
    let stays = extract_stays(&traj, &params.stay, method)?;
    let sidecar = Sidecar::new("stays", VERSION)
        .with_origin(traj.origin())
        .with_param("method", method.name())
        .with_param("params", params_json(params))
        .with_input("trajectory", &file_digest(input)?);
    io::save_stays(out, &stays, &sidecar)?;
    if let Some(manifest) = manifest {
        io::write_stay_manifest_csv(manifest, &stays)?;
    }
    let stats = stay_stats(&stays);
    println!(
        "extract-stays[{}]: {} stays ({} single-point) -> {}",
        method.name(),
        stats.count,
        stats.single_point_count,
        out.display()
    );
    Ok(())
}

pub fn extract_destinations_cmd(
    stays_path: &Path,
    traj_path: &Path,
    method: MergeMethod,
    params: &PipelineParams,
    out: &Path,
) -> Result<()> {
    let stays_sidecar = Sidecar::load(stays_path)
        .with_context(|| format!("sidecar for {}", stays_path.display()))?;
    let traj_digest = verify_trajectory_digest(&stays_sidecar, traj_path, stays_path)?;
    let traj = load_trajectory(traj_path, stays_sidecar.origin)?;
    let (stays, _) = io::load_stays(stays_path, &traj)?;

    let mut sidecar = Sidecar::new("destinations", VERSION)
        .with_origin(traj.origin())
        .with_param("method", method.name())
        .with_param("params", params_json(params))
        .with_input("trajectory", &traj_digest)
        .with_input("stays", &file_digest(stays_path)?);
    let dests = if method == MergeMethod::Optics {
        // Surface the reachability diagnostics alongside the artifact.
        let (dests, optics) = optics_cluster_with_diagnostics(&stays, &params.merge)?;
        sidecar = sidecar.with_param(
            "optics_diagnostics",
            json!({
                "ordering": optics.ordering,
                "reachability": optics
                    .reachability
                    .iter()
                    .map(|r| if r.is_finite() { json!(r) } else { serde_json::Value::Null })
                    .collect::<Vec<_>>(),
                "noise": optics.noise,
            }),
        );
        dests
    } else {
        extract_destinations(&stays, &params.merge, method)?
    };
    let method_params = match method {
        MergeMethod::GeometricSimilarity => {
            json!({"j_min": params.merge.j_min, "f_min": params.merge.f_min})
        }
        MergeMethod::Optics => {
            json!({"eps": params.merge.eps, "min_pts": params.merge.min_pts, "f_min": params.merge.f_min})
        }
        MergeMethod::Diameter => {
            json!({"diameter_min": params.merge.diameter_min, "f_min": params.merge.f_min})
        }
    };
    io::save_destinations(out, &dests, method.name(), method_params, &sidecar)?;
    let stats = destination_stats(&dests);
    println!(
        "extract-destinations[{}]: {} destinations -> {}",
        method.name(),
        stats.count,
        out.display()
    );
    Ok(())
}

pub fn partition_cmd(
    traj_path: &Path,
    dests_path: &Path,
    params: &PipelineParams,
    out: &Path,
) -> Result<()> {
    let dests_sidecar = Sidecar::load(dests_path)
        .with_context(|| format!("sidecar for {}", dests_path.display()))?;
    let traj_digest = verify_trajectory_digest(&dests_sidecar, traj_path, dests_path)?;
    let traj = load_trajectory(traj_path, dests_sidecar.origin)?;
    let (dests, _) = io::load_destinations(dests_path, &traj)?;

    let micro = build_micro_grid(&traj.mbr(), params.cell_size)?;
    let goi_grid = assign_cells(&micro, &dests, params.metric)?;
    let grid = build_final_grid(&goi_grid, &micro);
    let report = validate_partition(&grid, &traj);

    let sidecar = Sidecar::new("grid", VERSION)
        .with_origin(traj.origin())
        .with_param(
            "label_namespace",
            "goi cells carry their destination id; filler ids are allocated above the largest goi id",
        )
        .with_param("params", params_json(params))
        .with_param("validation", serde_json::to_value(&report)?)
        .with_input("trajectory", &traj_digest)
        .with_input("destinations", &file_digest(dests_path)?);
    io::save_final_grid(out, &grid, &sidecar)?;
    println!(
        "partition: {} cells ({} GOIs) -> {}; validator: overlap {:.3e} m^2, uncovered {:.3e} m^2, unmatched {}",
        grid.cells().len(),
        grid.goi_cells().count(),
        out.display(),
        report.max_pairwise_overlap_m2,
        report.uncovered_area_m2,
        report.unmatched_points
    );
    if !report.pass {
        bail!("partition validation failed: {report:?}");
    }
    Ok(())
}

pub enum LabelSource<'a> {
    Grid(&'a Path),
    Destinations(&'a Path),
}

pub fn label_cmd(
    traj_path: &Path,
    source: LabelSource<'_>,
    collapse: bool,
    out: &Path,
    jsonl: Option<&Path>,
) -> Result<()> {
    let (entries, strategy, input_role, input_path, origin) = match source {
        LabelSource::Grid(grid_path) => {
            let sidecar = Sidecar::load(grid_path)
                .with_context(|| format!("sidecar for {}", grid_path.display()))?;
            verify_trajectory_digest(&sidecar, traj_path, grid_path)?;
            let traj = load_trajectory(traj_path, sidecar.origin)?;
            let (grid, _) = io::load_final_grid(grid_path)?;
            (
                label_by_intersection(&traj, &grid, collapse)?,
                "intersection",
                "grid",
                grid_path,
                traj.origin(),
            )
        }
        LabelSource::Destinations(dests_path) => {
            let sidecar = Sidecar::load(dests_path)
                .with_context(|| format!("sidecar for {}", dests_path.display()))?;
            verify_trajectory_digest(&sidecar, traj_path, dests_path)?;
            let traj = load_trajectory(traj_path, sidecar.origin)?;
            let (dests, _) = io::load_destinations(dests_path, &traj)?;
            let mut entries = label_by_nnq(&traj, &dests)?;
            if collapse {
                entries = goi_core::svl::collapse(&entries);
            }
            (entries, "nnq", "destinations", dests_path, traj.origin())
        }
    };
    io::write_svl_csv(out, &entries)?;
    if let Some(jsonl) = jsonl {
        io::write_svl_jsonl(jsonl, &entries)?;
    }
    Sidecar::new("svl", VERSION)
        .with_origin(origin)
        .with_param("strategy", strategy)
        .with_param("collapse", collapse)
        .with_input("trajectory", &file_digest(traj_path)?)
        .with_input(input_role, &file_digest(input_path)?)
        .save(out)?;
    println!(
        "label[{strategy}]: {} entries -> {}",
        entries.len(),
        out.display()
    );
    Ok(())
}

pub fn evaluate_cmd(
    truth_path: &Path,
    gois_path: &Path,
    stays_path: Option<&Path>,
    dests_path: Option<&Path>,
    traj_path: Option<&Path>,
    params: &PipelineParams,
    out: &Path,
) -> Result<()> {
    let (truth, _) = io::load_ground_truth(truth_path)?;
    let (grid, _) = io::load_final_grid(gois_path)?;
    let gois: Vec<_> = grid.goi_cells().map(|c| c.geometry.clone()).collect();
    let gs = geometric_similarity(&truth, &gois)?;

    let mut report = json!({
        "tool": "goi",
        "version": VERSION,
        "params": params_json(params),
        "gs": gs,
        "goi_count": gois.len(),
        "inputs": {
            "truth": file_digest(truth_path)?,
            "gois": file_digest(gois_path)?,
        },
    });
    if let (Some(stays_path), Some(traj_path)) = (stays_path, traj_path) {
        let sidecar = Sidecar::load(stays_path)?;
        let traj = load_trajectory(traj_path, sidecar.origin)?;
        let (stays, _) = io::load_stays(stays_path, &traj)?;
        report["stay_stats"] = serde_json::to_value(stay_stats(&stays))?;
        if let Some(dests_path) = dests_path {
            let (dests, _) = io::load_destinations(dests_path, &traj)?;
            report["destination_stats"] = serde_json::to_value(destination_stats(&dests))?;
        }
    }
    write_json(out, &report)?;
    println!("evaluate: GS = {gs:.4} -> {}", out.display());
    Ok(())
}

/// Batch evaluation over seeded scenarios: all three pipelines per seed,
/// geometric similarity against the known truth.
pub fn evaluate_batch_cmd(
    scenario_path: Option<&Path>,
    seeds: u64,
    params: &PipelineParams,
    out: &Path,
) -> Result<()> {
    let base_spec = match scenario_path {
        Some(p) => ScenarioSpec::parse(
            &std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        )?,
        None => ScenarioSpec::default(),
    };
    let methods = [
        PipelineMethod::Proposed,
        PipelineMethod::DiameterBased,
        PipelineMethod::DensityBased,
    ];
    let mut per_method: BTreeMap<&str, serde_json::Value> = BTreeMap::new();
    let mut means: Vec<(&str, f64)> = Vec::new();
    for method in methods {
        let mut gs_per_seed = Vec::new();
        let mut stay_counts = Vec::new();
        let mut single_counts = Vec::new();
        let mut dest_counts = Vec::new();
        for i in 0..seeds {
            let spec = ScenarioSpec {
                seed: base_spec.seed + i,
                ..base_spec
            };
            let scenario = generate_scenario(&spec)?;
            let outcome = eval::run_pipeline_scored(&scenario.trajectory, method, params)?;
            let gs = geometric_similarity(&scenario.truth, &outcome.gois)?;
            gs_per_seed.push(gs);
            let ss = stay_stats(&outcome.stays);
            stay_counts.push(ss.count as f64);
            single_counts.push(ss.single_point_count as f64);
            dest_counts.push(outcome.destinations.len() as f64);
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len().max(1) as f64;
        means.push((method.name(), mean(&gs_per_seed)));
        per_method.insert(
            method.name(),
            json!({
                "gs_per_seed": gs_per_seed,
                "gs_mean": mean(&gs_per_seed),
                "stay_count_mean": mean(&stay_counts),
                "single_point_stay_mean": mean(&single_counts),
                "destination_count_mean": mean(&dest_counts),
            }),
        );
    }
    let report = json!({
        "tool": "goi",
        "version": VERSION,
        "params": params_json(params),
        "scenario": serde_json::to_value(base_spec)?,
        "seeds": (0..seeds).map(|i| base_spec.seed + i).collect::<Vec<_>>(),
        "methods": per_method,
    });
    write_json(out, &report)?;
    for (name, gs) in means {
        println!("evaluate[batch]: {name} mean GS = {gs:.4}");
    }
    println!("-> {}", out.display());
    Ok(())
}

pub struct PipelineArgs<'a> {
    pub input: &'a Path,
    pub truth: Option<&'a Path>,
    pub out_dir: &'a Path,
    pub stay_method: StayMethod,
    pub dest_method: MergeMethod,
    pub nnq: bool,
    pub collapse: bool,
}

/// Runs every stage in sequence, chaining through the files in `out_dir`
/// exactly as the individual subcommands would.
pub fn pipeline_cmd(args: &PipelineArgs<'_>, params: &PipelineParams) -> Result<PathBuf> {
    std::fs::create_dir_all(args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    let stays = args.out_dir.join("stays.geojson");
    let manifest = args.out_dir.join("stays.csv");
    let dests = args.out_dir.join("destinations.geojson");
    let grid = args.out_dir.join("grid.geojson");
    let svl = args.out_dir.join("svl.csv");
    let svl_jsonl = args.out_dir.join("svl.jsonl");

    extract_stays_cmd(
        args.input,
        args.stay_method,
        params,
        &stays,
        Some(&manifest),
    )?;
    extract_destinations_cmd(&stays, args.input, args.dest_method, params, &dests)?;
    partition_cmd(args.input, &dests, params, &grid)?;
    if args.nnq {
        label_cmd(
            args.input,
            LabelSource::Destinations(&dests),
            args.collapse,
            &svl,
            Some(&svl_jsonl),
        )?;
    } else {
        label_cmd(
            args.input,
            LabelSource::Grid(&grid),
            args.collapse,
            &svl,
            Some(&svl_jsonl),
        )?;
    }
    if let Some(truth) = args.truth {
        let report = args.out_dir.join("evaluation.json");
        evaluate_cmd(
            truth,
            &grid,
            Some(&stays),
            Some(&dests),
            Some(args.input),
            params,
            &report,
        )?;
    }
    Ok(args.out_dir.to_path_buf())
}

/// Maps an error to the machine-readable record printed on failure.
pub fn error_record(err: &anyhow::Error) -> serde_json::Value {
    let kind = err
        .downcast_ref::<goi_core::Error>()
        .map(error_kind)
        .unwrap_or("error");
    json!({"error": {"kind": kind, "message": format!("{err:#}")}})
}

fn error_kind(err: &goi_core::Error) -> &'static str {
    use goi_core::Error::*;
    match err {
        CoordinateOutOfRange { .. } => "coordinate_out_of_range",
        OriginNearPole { .. } => "origin_near_pole",
        NonMonotonicTimestamp { .. } => "non_monotonic_timestamp",
        DuplicateTimestamp { .. } => "duplicate_timestamp",
        EmptyInput { .. } => "empty_input",
        Parse { .. } => "parse",
        InvalidParameter { .. } => "invalid_parameter",
        ZeroAreaJaccard => "zero_area_jaccard",
        NoDestinations => "no_destinations",
        GridTooFine { .. } => "grid_too_fine",
        DegenerateBbox(_) => "degenerate_bbox",
        PointOutsideGrid { .. } => "point_outside_grid",
        InfeasiblePlacement { .. } => "infeasible_placement",
        OracleSizeGuard { .. } => "oracle_size_guard",
        StageMismatch { .. } => "stage_mismatch",
        MalformedArtifact { .. } => "malformed_artifact",
        Io(_) => "io",
        Csv(_) => "csv",
        Json(_) => "json",
        GeoJson(_) => "geojson",
    }
}

pub fn parse_stay_method(s: &str) -> Result<StayMethod> {
    s.parse::<StayMethod>().map_err(|e| anyhow!(e))
}

pub fn parse_merge_method(s: &str) -> Result<MergeMethod> {
    s.parse::<MergeMethod>().map_err(|e| anyhow!(e))
}
