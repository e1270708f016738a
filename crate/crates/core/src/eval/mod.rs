//! Evaluation: the geometric-similarity score against ground truth,
//! comparative statistics, an in-memory pipeline harness, a seeded synthetic
//! scenario generator, and brute-force oracles for the test suites.

pub mod oracle;
pub mod synth;

pub use synth::{generate_scenario, Scenario, ScenarioSpec, VisitRecord};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::destination::{extract_destinations, Destination, MergeMethod, MergeParams};
use crate::error::{Error, Result};
use crate::geo::Region;
use crate::partition::{
    assign_cells, build_final_grid, build_micro_grid, AssignMetric, FinalGrid, GoiGrid,
};
use crate::stay::{extract_stays, Stay, StayMethod, StayParams};
use crate::trajectory::Trajectory;

/// The real GOIs a scenario or dataset is evaluated against.
#[derive(Debug, Clone)]
pub struct GroundTruth {
    gois: Vec<(u64, Region)>,
}

impl GroundTruth {
    pub fn new(gois: Vec<(u64, Region)>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for (id, region) in &gois {
            if region.area() <= 0.0 {
                return Err(Error::InvalidParameter {
                    name: "ground_truth",
                    message: format!("GOI {id} has zero area"),
                });
            }
            if !seen.insert(*id) {
                return Err(Error::InvalidParameter {
                    name: "ground_truth",
                    message: format!("duplicate GOI id {id}"),
                });
            }
        }
        Ok(Self { gois })
    }

    pub fn gois(&self) -> &[(u64, Region)] {
        &self.gois
    }

    pub fn len(&self) -> usize {
        self.gois.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gois.is_empty()
    }
}

/// Mean-per-real-GOI sum of pairwise area Jaccards between real and
/// estimated GOIs:
///
/// `(1/n) * Σ_i Σ_j Area(r_i ∩ g_j) / Area(r_i ∪ g_j)`
///
/// The double sum is evaluated as written. For disjoint estimates (the only
/// shape the partition phase produces) it behaves as a best-match Jaccard;
/// overlapping estimates can accumulate cross terms.
pub fn geometric_similarity(truth: &GroundTruth, estimated: &[Region]) -> Result<f64> {
    if truth.is_empty() {
        return Err(Error::EmptyInput {
            context: "geometric_similarity",
        });
    }
    if estimated.is_empty() {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for (_, real) in truth.gois() {
        for est in estimated {
            let inter = real.intersection_area(est);
            if inter > 0.0 {
                total += inter / real.union(est).area();
            }
        }
    }
    Ok(total / truth.len() as f64)
}

/// Stay extraction summary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StayStats {
    pub count: usize,
    pub single_point_count: usize,
}

pub fn stay_stats(stays: &[Stay]) -> StayStats {
    StayStats {
        count: stays.len(),
        single_point_count: stays.iter().filter(|s| s.is_single_point()).count(),
    }
}

/// Destination extraction summary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DestinationStats {
    pub count: usize,
    /// visit frequency -> number of destinations with that frequency
    pub frequency_histogram: BTreeMap<u32, usize>,
}

pub fn destination_stats(dests: &[Destination]) -> DestinationStats {
    let mut histogram = BTreeMap::new();
    for d in dests {
        *histogram.entry(d.frequency).or_insert(0) += 1;
    }
    DestinationStats {
        count: dests.len(),
        frequency_histogram: histogram,
    }
}

/// A full extraction pipeline: stay method + destination method + cell
/// assignment metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PipelineMethod {
    /// Time-weighted centroid stays + geometric-similarity merge.
    Proposed,
    /// Diameter stays + diameter merge.
    DiameterBased,
    /// Reference-point stays + OPTICS clustering.
    DensityBased,
}

impl PipelineMethod {
    pub fn name(&self) -> &'static str {
        match self {
            PipelineMethod::Proposed => "proposed",
            PipelineMethod::DiameterBased => "diameter_based",
            PipelineMethod::DensityBased => "density_based",
        }
    }

    pub fn stay_method(&self) -> StayMethod {
        match self {
            PipelineMethod::Proposed => StayMethod::Twc,
            PipelineMethod::DiameterBased => StayMethod::Diameter,
            PipelineMethod::DensityBased => StayMethod::ReferencePoint,
        }
    }

    pub fn merge_method(&self) -> MergeMethod {
        match self {
            PipelineMethod::Proposed => MergeMethod::GeometricSimilarity,
            PipelineMethod::DiameterBased => MergeMethod::Diameter,
            PipelineMethod::DensityBased => MergeMethod::Optics,
        }
    }
}

/// Shared parameter bundle for a full pipeline run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineParams {
    pub stay: StayParams,
    pub merge: MergeParams,
    pub cell_size: f64,
    pub metric: AssignMetric,
}

impl Default for PipelineParams {
    fn default() -> Self {
        Self {
            stay: StayParams::default(),
            merge: MergeParams::default(),
            cell_size: 5.0,
            metric: AssignMetric::Gs,
        }
    }
}

/// Everything a pipeline run produces.
pub struct PipelineOutcome {
    pub stays: Vec<Stay>,
    pub destinations: Vec<Destination>,
    pub goi_grid: GoiGrid,
    pub final_grid: FinalGrid,
}

impl PipelineOutcome {
    /// The estimated GOIs, the unit of evaluation.
    pub fn gois(&self) -> Vec<Region> {
        self.goi_grid
            .gois
            .iter()
            .map(|g| g.region.clone())
            .collect()
    }
}

/// A pipeline run reduced to what evaluation needs. A method that finds no
/// destinations produces no GOIs (and scores zero) instead of erroring.
pub struct ScoredPipeline {
    pub stays: Vec<Stay>,
    pub destinations: Vec<Destination>,
    pub gois: Vec<Region>,
}

/// Runs stays -> destinations -> partition for scoring purposes.
pub fn run_pipeline_scored(
    traj: &Trajectory,
    method: PipelineMethod,
    params: &PipelineParams,
) -> Result<ScoredPipeline> {
    let stays = extract_stays(traj, &params.stay, method.stay_method())?;
    let destinations = extract_destinations(&stays, &params.merge, method.merge_method())?;
    let gois = if destinations.is_empty() {
        Vec::new()
    } else {
        let micro = build_micro_grid(&traj.mbr(), params.cell_size)?;
        let goi_grid = assign_cells(&micro, &destinations, params.metric)?;
        goi_grid.gois.into_iter().map(|g| g.region).collect()
    };
    Ok(ScoredPipeline {
        stays,
        destinations,
        gois,
    })
}

/// Runs stays -> destinations -> partition in memory.
pub fn run_pipeline(
    traj: &Trajectory,
    method: PipelineMethod,
    params: &PipelineParams,
) -> Result<PipelineOutcome> {
    let stays = extract_stays(traj, &params.stay, method.stay_method())?;
    let destinations = extract_destinations(&stays, &params.merge, method.merge_method())?;
    let micro = build_micro_grid(&traj.mbr(), params.cell_size)?;
    let goi_grid = assign_cells(&micro, &destinations, params.metric)?;
    let final_grid = build_final_grid(&goi_grid, &micro);
    Ok(PipelineOutcome {
        stays,
        destinations,
        goi_grid,
        final_grid,
    })
}
