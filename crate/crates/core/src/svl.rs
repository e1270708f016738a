//! Sequence of Visited Locations: labeling trajectory points against the
//! final grid by geometric intersection, plus the nearest-centroid baseline.

use serde::{Deserialize, Serialize};

use crate::destination::Destination;
use crate::error::{Error, Result};
use crate::partition::{CellKind, FinalGrid};
use crate::trajectory::Trajectory;

/// Label namespace of an SVL entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelKind {
    Goi,
    Filler,
    Destination,
}

impl LabelKind {
    pub fn name(&self) -> &'static str {
        match self {
            LabelKind::Goi => "goi",
            LabelKind::Filler => "filler",
            LabelKind::Destination => "destination",
        }
    }
}

/// One visited-location record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SvlEntry {
    pub t: i64,
    pub label: u64,
    pub kind: LabelKind,
}

/// Labels every trajectory point with the id of the final-grid cell it
/// intersects. GOI cells carry their destination's id, so the labels are
/// comparable with [`label_by_nnq`] output.
///
/// Errors when a point lies outside the grid (the grid must come from the
/// same trajectory's MBR). With `collapse`, consecutive equal labels reduce
/// to their first occurrence.
pub fn label_by_intersection(
    traj: &Trajectory,
    grid: &FinalGrid,
    collapse_runs: bool,
) -> Result<Vec<SvlEntry>> {
    let mut entries = Vec::with_capacity(traj.len());
    for (index, tp) in traj.points().iter().enumerate() {
        let Some(id) = grid.locate(tp.p) else {
            return Err(Error::PointOutsideGrid { index });
        };
        let cell = grid.cell_by_id(id).expect("locate returns a known cell");
        entries.push(SvlEntry {
            t: tp.t,
            label: id,
            kind: match cell.kind {
                CellKind::Goi => LabelKind::Goi,
                CellKind::Filler => LabelKind::Filler,
            },
        });
    }
    Ok(if collapse_runs {
        collapse(&entries)
    } else {
        entries
    })
}

/// Baseline labeling: each point gets the destination with the nearest
/// geometry centroid; distance ties go to the smallest id.
pub fn label_by_nnq(traj: &Trajectory, destinations: &[Destination]) -> Result<Vec<SvlEntry>> {
    if destinations.is_empty() {
        return Err(Error::NoDestinations);
    }
    let centroids: Vec<(u64, crate::geo::PlanarPoint)> = destinations
        .iter()
        .map(|d| (d.id, d.geometry.centroid().expect("destination has area")))
        .collect();
    Ok(traj
        .points()
        .iter()
        .map(|tp| {
            let mut best = (centroids[0].0, tp.p.distance(centroids[0].1));
            for &(id, c) in &centroids[1..] {
                let dist = tp.p.distance(c);
                if dist < best.1 || (dist == best.1 && id < best.0) {
                    best = (id, dist);
                }
            }
            SvlEntry {
                t: tp.t,
                label: best.0,
                kind: LabelKind::Destination,
            }
        })
        .collect())
}

/// Reduces consecutive entries with an equal label to the first occurrence.
pub fn collapse(entries: &[SvlEntry]) -> Vec<SvlEntry> {
    let mut out: Vec<SvlEntry> = Vec::new();
    for &e in entries {
        match out.last() {
            Some(last) if last.label == e.label && last.kind == e.kind => {}
            _ => out.push(e),
        }
    }
    out
}
