//! Phase 2: merging recurring stay regions into destination regions.
//!
//! The proposed method clusters stays agglomeratively by the Jaccard
//! similarity of their geometries: each round it merges the globally
//! most-similar intersecting pair (points concatenated, geometry unioned,
//! frequencies summed) while the best similarity exceeds `j_min`, then drops
//! destinations visited fewer than `f_min` times. Two baselines are provided:
//! OPTICS density clustering over stay centroids and minimum-merged-diameter
//! clustering over stay point sets.

mod optics;

pub use optics::{optics, OpticsResult};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::{jaccard, Region, SpatialIndex};
use crate::stay::Stay;
use crate::trajectory::TrackPoint;

/// A merged cluster of stay regions.
#[derive(Debug, Clone, PartialEq)]
pub struct Destination {
    /// Smallest member stay id; stable across runs.
    pub id: u64,
    /// Union of the member stay geometries.
    pub geometry: Region,
    /// Concatenation of the member stay point sets (member-id order).
    pub points: Vec<TrackPoint>,
    /// Visit count: the number of source stays merged into this destination.
    pub frequency: u32,
    /// Member stay ids, ascending.
    pub member_stays: Vec<u64>,
    /// Trajectory index ranges of the member stays, member-id order.
    pub point_ranges: Vec<(usize, usize)>,
}

/// Destination-merge parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MergeParams {
    /// Jaccard threshold in [0, 1] (geometric-similarity method).
    pub j_min: f64,
    /// Minimum visit frequency; clusters below it are dropped.
    pub f_min: u32,
    /// Neighborhood radius in meters (OPTICS baseline).
    pub eps: f64,
    /// Minimum neighborhood size to form a dense region (OPTICS baseline).
    pub min_pts: usize,
    /// Maximum merged point-set diameter in meters (diameter baseline).
    pub diameter_min: f64,
}

impl Default for MergeParams {
    fn default() -> Self {
        Self {
            j_min: 0.10,
            f_min: 6,
            eps: 100.0,
            min_pts: 6,
            diameter_min: 200.0,
        }
    }
}

impl MergeParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.j_min) {
            return Err(Error::InvalidParameter {
                name: "j_min",
                message: "must lie in [0, 1]".into(),
            });
        }
        if self.f_min < 1 {
            return Err(Error::InvalidParameter {
                name: "f_min",
                message: "must be >= 1".into(),
            });
        }
        if self.eps <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "eps",
                message: "must be strictly positive".into(),
            });
        }
        if self.min_pts < 1 {
            return Err(Error::InvalidParameter {
                name: "min_pts",
                message: "must be >= 1".into(),
            });
        }
        if self.diameter_min <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "diameter_min",
                message: "must be strictly positive".into(),
            });
        }
        Ok(())
    }
}

/// Destination extraction method selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MergeMethod {
    GeometricSimilarity,
    Optics,
    Diameter,
}

impl MergeMethod {
    pub fn name(&self) -> &'static str {
        match self {
            MergeMethod::GeometricSimilarity => "geometric",
            MergeMethod::Optics => "optics",
            MergeMethod::Diameter => "diameter",
        }
    }
}

impl std::str::FromStr for MergeMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geometric" | "geometric-similarity" => Ok(MergeMethod::GeometricSimilarity),
            "optics" | "density" => Ok(MergeMethod::Optics),
            "diameter" => Ok(MergeMethod::Diameter),
            other => Err(Error::InvalidParameter {
                name: "method",
                message: format!("unknown merge method `{other}`"),
            }),
        }
    }
}

/// Dispatches to the merge method named by `method`.
pub fn extract_destinations(
    stays: &[Stay],
    params: &MergeParams,
    method: MergeMethod,
) -> Result<Vec<Destination>> {
    match method {
        MergeMethod::GeometricSimilarity => merge_geometric_similarity(stays, params),
        MergeMethod::Optics => optics_cluster(stays, params),
        MergeMethod::Diameter => merge_diameter(stays, params),
    }
}

#[derive(Clone)]
struct Cluster {
    members: Vec<u64>,
    geometry: Region,
    frequency: u32,
}

/// Geometric-similarity agglomerative merging (proposed method).
///
/// Every stay starts as its own cluster with frequency 1. Each round the
/// globally most-similar intersecting pair merges, provided its Jaccard
/// exceeds `j_min`; ties break on the smaller `(min id, max id)` key. The
/// spatial index prunes the pairs that can intersect at all. Clusters with
/// frequency below `f_min` are dropped at the end.
pub fn merge_geometric_similarity(
    stays: &[Stay],
    params: &MergeParams,
) -> Result<Vec<Destination>> {
    params.validate()?;
    if stays.is_empty() {
        return Ok(Vec::new());
    }

    let mut clusters: BTreeMap<u64, Cluster> = stays
        .iter()
        .map(|s| {
            (
                s.id,
                Cluster {
                    members: vec![s.id],
                    geometry: s.geometry.clone(),
                    frequency: 1,
                },
            )
        })
        .collect();

    // Jaccard cache for currently-intersecting pairs. Zero-similarity pairs
    // (pure boundary contact) can never beat j_min >= 0 and are not stored.
    let mut pair_sim: BTreeMap<(u64, u64), f64> = BTreeMap::new();
    let index = build_index(&clusters);
    let ids: Vec<u64> = clusters.keys().copied().collect();
    for &a in &ids {
        for b in index.query(&clusters[&a].geometry) {
            if b > a {
                let sim = jaccard(&clusters[&a].geometry, &clusters[&b].geometry)?;
                if sim > 0.0 {
                    pair_sim.insert((a, b), sim);
                }
            }
        }
    }

    loop {
        // Global best pair; BTreeMap iteration order makes the tie-break
        // (smallest key on equal similarity) implicit.
        let best = pair_sim
            .iter()
            .fold(None::<((u64, u64), f64)>, |acc, (&k, &v)| match acc {
                Some((_, bv)) if bv >= v => acc,
                _ => Some((k, v)),
            });
        let Some(((a, b), sim)) = best else { break };
        if sim <= params.j_min {
            break;
        }

        let absorbed = clusters.remove(&b).expect("cluster exists");
        let target = clusters.get_mut(&a).expect("cluster exists");
        target.geometry = target.geometry.union(&absorbed.geometry);
        target.frequency += absorbed.frequency;
        target.members.extend(absorbed.members);

        pair_sim.retain(|&(x, y), _| x != a && y != a && x != b && y != b);
        let index = build_index(&clusters);
        let merged_geom = clusters[&a].geometry.clone();
        for other in index.query(&merged_geom) {
            if other == a {
                continue;
            }
            let key = (a.min(other), a.max(other));
            let sim = jaccard(&merged_geom, &clusters[&other].geometry)?;
            if sim > 0.0 {
                pair_sim.insert(key, sim);
            }
        }
    }

    Ok(finalize(clusters, stays, params.f_min))
}

/// Diameter-based merging (baseline).
///
/// Each round merges the cluster pair whose merged point-set diameter is
/// minimal, while that diameter stays within `diameter_min`. Ties break on
/// the smaller `(min id, max id)` key.
pub fn merge_diameter(stays: &[Stay], params: &MergeParams) -> Result<Vec<Destination>> {
    params.validate()?;
    if stays.is_empty() {
        return Ok(Vec::new());
    }

    let stay_by_id: BTreeMap<u64, &Stay> = stays.iter().map(|s| (s.id, s)).collect();
    let mut clusters: BTreeMap<u64, Cluster> = stays
        .iter()
        .map(|s| {
            (
                s.id,
                Cluster {
                    members: vec![s.id],
                    geometry: s.geometry.clone(),
                    frequency: 1,
                },
            )
        })
        .collect();
    let mut cluster_diam: BTreeMap<u64, f64> = clusters
        .keys()
        .map(|&id| (id, point_set_diameter(&member_points(&[id], &stay_by_id))))
        .collect();

    loop {
        let ids: Vec<u64> = clusters.keys().copied().collect();
        let mut best: Option<((u64, u64), f64)> = None;
        for (ai, &a) in ids.iter().enumerate() {
            for &b in &ids[ai + 1..] {
                let d = merged_diameter(
                    &clusters[&a].members,
                    &clusters[&b].members,
                    cluster_diam[&a].max(cluster_diam[&b]),
                    &stay_by_id,
                );
                match best {
                    Some((_, bd)) if bd <= d => {}
                    _ => best = Some(((a, b), d)),
                }
            }
        }
        let Some(((a, b), d)) = best else { break };
        if d > params.diameter_min {
            break;
        }
        let absorbed = clusters.remove(&b).expect("cluster exists");
        let target = clusters.get_mut(&a).expect("cluster exists");
        target.geometry = target.geometry.union(&absorbed.geometry);
        target.frequency += absorbed.frequency;
        target.members.extend(absorbed.members);
        cluster_diam.remove(&b);
        cluster_diam.insert(a, d);
    }

    Ok(finalize(clusters, stays, params.f_min))
}

/// OPTICS density clustering over stay centroids (baseline).
///
/// Runs OPTICS with Euclidean distance, then extracts clusters with the flat
/// reachability threshold at `eps` (the DBSCAN-equivalent cut). Stays ending
/// up as noise are discarded. Each cluster becomes a destination whose
/// geometry is the union of its member stay geometries.
pub fn optics_cluster(stays: &[Stay], params: &MergeParams) -> Result<Vec<Destination>> {
    params.validate()?;
    if stays.is_empty() {
        return Ok(Vec::new());
    }
    let centroids: Vec<_> = stays.iter().map(|s| s.centroid).collect();
    let result = optics(&centroids, params.eps, params.min_pts);

    let clusters: BTreeMap<u64, Cluster> = result
        .clusters
        .iter()
        .map(|member_idx| {
            let mut members: Vec<u64> = member_idx.iter().map(|&i| stays[i].id).collect();
            members.sort_unstable();
            let geometry = Region::union_all(member_idx.iter().map(|&i| &stays[i].geometry));
            let id = members[0];
            (
                id,
                Cluster {
                    frequency: members.len() as u32,
                    members,
                    geometry,
                },
            )
        })
        .collect();

    Ok(finalize(clusters, stays, params.f_min))
}

/// As [`optics_cluster`], also returning the reachability diagnostics.
pub fn optics_cluster_with_diagnostics(
    stays: &[Stay],
    params: &MergeParams,
) -> Result<(Vec<Destination>, OpticsResult)> {
    params.validate()?;
    let centroids: Vec<_> = stays.iter().map(|s| s.centroid).collect();
    let result = optics(&centroids, params.eps, params.min_pts);
    let dests = optics_cluster(stays, params)?;
    Ok((dests, result))
}

fn build_index(clusters: &BTreeMap<u64, Cluster>) -> SpatialIndex {
    SpatialIndex::build(
        clusters
            .iter()
            .map(|(&id, c)| (id, c.geometry.clone()))
            .collect(),
    )
}

fn member_points(members: &[u64], stay_by_id: &BTreeMap<u64, &Stay>) -> Vec<TrackPoint> {
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    sorted
        .iter()
        .flat_map(|id| stay_by_id[id].points.iter().copied())
        .collect()
}

fn point_set_diameter(points: &[TrackPoint]) -> f64 {
    let mut d = 0.0f64;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            d = d.max(a.p.distance(b.p));
        }
    }
    d
}

/// Diameter of the union of two member sets: the larger of the two cluster
/// diameters and the maximum cross distance.
fn merged_diameter(
    members_a: &[u64],
    members_b: &[u64],
    base: f64,
    stay_by_id: &BTreeMap<u64, &Stay>,
) -> f64 {
    let mut d = base;
    for ia in members_a {
        for ib in members_b {
            for pa in &stay_by_id[ia].points {
                for pb in &stay_by_id[ib].points {
                    d = d.max(pa.p.distance(pb.p));
                }
            }
        }
    }
    d
}

fn finalize(clusters: BTreeMap<u64, Cluster>, stays: &[Stay], f_min: u32) -> Vec<Destination> {
    let stay_by_id: BTreeMap<u64, &Stay> = stays.iter().map(|s| (s.id, s)).collect();
    clusters
        .into_values()
        .filter(|c| c.frequency >= f_min)
        .map(|c| {
            let mut members = c.members;
            members.sort_unstable();
            let points = members
                .iter()
                .flat_map(|id| stay_by_id[id].points.iter().copied())
                .collect();
            let point_ranges = members
                .iter()
                .map(|id| stay_by_id[id].point_range)
                .collect();
            Destination {
                id: members[0],
                geometry: c.geometry,
                points,
                frequency: c.frequency,
                member_stays: members,
                point_ranges,
            }
        })
        .collect()
}
