//! Phase 3: partitioning the trajectory's bounding rectangle.
//!
//! A fine uniform *micro-grid* tiles the MBR. Every micro cell that overlaps
//! at least one destination is labeled with the destination that maximizes a
//! similarity metric (area Jaccard, or reciprocal centroid distance), and the
//! cells sharing a label dissolve into one GOI. Unlabeled cells are kept as
//! filler cells, so the *final grid* — GOIs plus fillers — covers the MBR
//! with pairwise interior-disjoint cells. [`validate_partition`] checks both
//! properties geometrically and verifies every trajectory point maps to
//! exactly one cell.

use serde::{Deserialize, Serialize};

use crate::destination::Destination;
use crate::error::{Error, Result};
use crate::geo::{jaccard, BoundingBox, PlanarPoint, Region, SpatialIndex};
use crate::trajectory::Trajectory;

/// Hard cap on micro-grid size; finer granularity is refused.
pub const MAX_MICRO_CELLS: u128 = 100_000_000;

/// Slack applied by [`FinalGrid::locate`] when an exact containment probe
/// finds nothing, meters.
pub const LOCATE_SLACK_M: f64 = 1e-6;

/// Pass threshold for the maximum pairwise cell overlap, m².
pub const MAX_PAIRWISE_OVERLAP_M2: f64 = 1e-3;
/// Pass threshold for uncovered bounding-box area, m².
pub const MAX_UNCOVERED_M2: f64 = 1e-3;

/// Uniform rectangular tiling of a bounding box. Cells are row-major; the
/// last row/column is clipped to the box. Cell geometry is materialized on
/// demand from the shared grid lines, so adjacent cells share bit-identical
/// edges.
#[derive(Debug, Clone)]
pub struct MicroGrid {
    bbox: BoundingBox,
    cell_size: f64,
    nx: usize,
    ny: usize,
    /// Column edges, nx + 1 values from min_x to max_x.
    xs: Vec<f64>,
    /// Row edges, ny + 1 values from min_y to max_y.
    ys: Vec<f64>,
}

impl MicroGrid {
    pub fn bbox(&self) -> BoundingBox {
        self.bbox
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn columns(&self) -> usize {
        self.nx
    }

    pub fn rows(&self) -> usize {
        self.ny
    }

    pub fn cell_count(&self) -> usize {
        self.nx * self.ny
    }

    /// Bounding box of cell `idx` (row-major).
    pub fn cell_bbox(&self, idx: usize) -> BoundingBox {
        let (r, c) = (idx / self.nx, idx % self.nx);
        BoundingBox::new(self.xs[c], self.ys[r], self.xs[c + 1], self.ys[r + 1])
    }

    pub fn cell_region(&self, idx: usize) -> Region {
        Region::rect(&self.cell_bbox(idx))
    }

    /// Row-major indices of all cells whose bbox intersects `bb`.
    fn cells_touching(&self, bb: &BoundingBox) -> Vec<usize> {
        let col_range = edge_range(&self.xs, bb.min_x, bb.max_x);
        let row_range = edge_range(&self.ys, bb.min_y, bb.max_y);
        let mut out = Vec::new();
        for r in row_range.clone() {
            for c in col_range.clone() {
                out.push(r * self.nx + c);
            }
        }
        out
    }
}

/// Indices of cells [lo, hi) whose [edges[i], edges[i+1]] interval overlaps
/// [min, max].
fn edge_range(edges: &[f64], min: f64, max: f64) -> std::ops::Range<usize> {
    let n = edges.len() - 1;
    let lo = edges[..n].partition_point(|&e| e < min).saturating_sub(1);
    let hi = edges[1..]
        .partition_point(|&e| e <= max)
        .saturating_add(1)
        .min(n);
    lo..hi.max(lo)
}

/// Builds the micro-grid: ceil(width/cell) x ceil(height/cell) cells with the
/// last row/column clipped to the box.
pub fn build_micro_grid(bbox: &BoundingBox, cell_size: f64) -> Result<MicroGrid> {
    if cell_size <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "cell_size",
            message: "must be strictly positive".into(),
        });
    }
    if bbox.width() <= 0.0 || bbox.height() <= 0.0 {
        return Err(Error::DegenerateBbox(format!(
            "{} x {} m",
            bbox.width(),
            bbox.height()
        )));
    }
    let mut nx = (bbox.width() / cell_size).ceil() as u128;
    let mut ny = (bbox.height() / cell_size).ceil() as u128;
    // A box extent within float noise of an exact multiple of cell_size
    // would produce a sliver stripe narrower than any representable cell;
    // fold sub-millimeter stripes into their neighbor instead.
    const MIN_EDGE_STRIPE_M: f64 = 1e-3;
    if nx > 1 && bbox.min_x + (nx - 1) as f64 * cell_size + MIN_EDGE_STRIPE_M > bbox.max_x {
        nx -= 1;
    }
    if ny > 1 && bbox.min_y + (ny - 1) as f64 * cell_size + MIN_EDGE_STRIPE_M > bbox.max_y {
        ny -= 1;
    }
    if nx * ny > MAX_MICRO_CELLS {
        return Err(Error::GridTooFine {
            cells: nx * ny,
            limit: MAX_MICRO_CELLS,
        });
    }
    let (nx, ny) = (nx as usize, ny as usize);
    let xs: Vec<f64> = (0..=nx)
        .map(|c| {
            if c == nx {
                bbox.max_x
            } else {
                (bbox.min_x + c as f64 * cell_size).min(bbox.max_x)
            }
        })
        .collect();
    let ys: Vec<f64> = (0..=ny)
        .map(|r| {
            if r == ny {
                bbox.max_y
            } else {
                (bbox.min_y + r as f64 * cell_size).min(bbox.max_y)
            }
        })
        .collect();
    Ok(MicroGrid {
        bbox: *bbox,
        cell_size,
        nx,
        ny,
        xs,
        ys,
    })
}

/// Cell-to-destination similarity metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum AssignMetric {
    /// Area Jaccard between the cell and the destination geometry.
    Gs,
    /// Reciprocal distance between the cell centroid and the destination
    /// centroid, restricted to destinations the cell overlaps.
    Pcs,
}

impl AssignMetric {
    pub fn name(&self) -> &'static str {
        match self {
            AssignMetric::Gs => "GS",
            AssignMetric::Pcs => "PCS",
        }
    }
}

impl std::str::FromStr for AssignMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "GS" => Ok(AssignMetric::Gs),
            "PCS" => Ok(AssignMetric::Pcs),
            other => Err(Error::InvalidParameter {
                name: "metric",
                message: format!("unknown metric `{other}`"),
            }),
        }
    }
}

/// One GOI: the dissolved union of every micro cell assigned to one
/// destination.
#[derive(Debug, Clone, PartialEq)]
pub struct Goi {
    pub destination_id: u64,
    pub region: Region,
    pub cell_count: usize,
}

/// Result of cell assignment over a micro-grid.
#[derive(Debug, Clone)]
pub struct GoiGrid {
    /// GOIs ascending by destination id. Destinations that won no cell do
    /// not appear.
    pub gois: Vec<Goi>,
    /// Per micro cell: the owning destination id, if any.
    pub labels: Vec<Option<u64>>,
    pub metric: AssignMetric,
}

/// Labels every micro cell that overlaps at least one destination with the
/// destination maximizing `metric`, then dissolves the cells per label.
///
/// Ties (equal metric) go to the smallest destination id, as does the PCS
/// coincident-centroid case. Cells overlapping no destination stay unlabeled.
pub fn assign_cells(
    micro: &MicroGrid,
    destinations: &[Destination],
    metric: AssignMetric,
) -> Result<GoiGrid> {
    if destinations.is_empty() {
        return Err(Error::NoDestinations);
    }
    let mut labels: Vec<Option<u64>> = vec![None; micro.cell_count()];

    // Only cells under some destination envelope can be labeled.
    let mut candidates: Vec<usize> = destinations
        .iter()
        .filter_map(|d| d.geometry.envelope())
        .flat_map(|bb| micro.cells_touching(&bb))
        .collect();
    candidates.sort_unstable();
    candidates.dedup();

    let by_id: std::collections::BTreeMap<u64, &Destination> =
        destinations.iter().map(|d| (d.id, d)).collect();
    let index = SpatialIndex::build(
        destinations
            .iter()
            .map(|d| (d.id, d.geometry.clone()))
            .collect(),
    );

    for idx in candidates {
        let cell = micro.cell_region(idx);
        let cell_centroid = micro.cell_bbox(idx).center();
        let mut best: Option<(u64, f64)> = None;
        let mut coincident: Option<u64> = None;
        for id in index.query(&cell) {
            let dest = by_id[&id];
            if cell.intersection_area(&dest.geometry) <= 0.0 {
                continue; // pure boundary contact
            }
            let score = match metric {
                AssignMetric::Gs => jaccard(&cell, &dest.geometry)?,
                AssignMetric::Pcs => {
                    let dc = dest.geometry.centroid().expect("destination has area");
                    let dist = cell_centroid.distance(dc);
                    if dist == 0.0 {
                        if coincident.is_none() {
                            coincident = Some(id);
                        }
                        continue;
                    }
                    1.0 / dist
                }
            };
            match best {
                Some((_, bs)) if bs >= score => {}
                _ => best = Some((id, score)),
            }
        }
        labels[idx] = coincident.or(best.map(|(id, _)| id));
    }

    let mut per_dest: std::collections::BTreeMap<u64, Vec<usize>> = Default::default();
    for (idx, label) in labels.iter().enumerate() {
        if let Some(id) = label {
            per_dest.entry(*id).or_default().push(idx);
        }
    }
    let gois = per_dest
        .into_iter()
        .map(|(destination_id, cells)| {
            let regions: Vec<Region> = cells.iter().map(|&i| micro.cell_region(i)).collect();
            Goi {
                destination_id,
                region: Region::union_all(regions.iter()),
                cell_count: cells.len(),
            }
        })
        .collect();

    Ok(GoiGrid {
        gois,
        labels,
        metric,
    })
}

/// Cell role within the final grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellKind {
    Goi,
    Filler,
}

/// One cell of the final grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCell {
    pub id: u64,
    pub geometry: Region,
    /// Exact rectangle for filler cells; enables arithmetic overlap checks.
    pub rect: Option<BoundingBox>,
    pub kind: CellKind,
    pub source_destination: Option<u64>,
}

/// The labeling substrate: GOIs plus filler cells covering the MBR with
/// pairwise interior-disjoint geometries. GOI cells reuse their destination
/// id; filler ids are allocated past the largest GOI id.
pub struct FinalGrid {
    cells: Vec<GridCell>,
    bbox: BoundingBox,
    cell_size: f64,
    metric: AssignMetric,
    lookup: SpatialIndex,
}

impl FinalGrid {
    pub fn cells(&self) -> &[GridCell] {
        &self.cells
    }

    pub fn bbox(&self) -> BoundingBox {
        self.bbox
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn metric(&self) -> AssignMetric {
        self.metric
    }

    pub fn cell_by_id(&self, id: u64) -> Option<&GridCell> {
        self.cells.iter().find(|c| c.id == id)
    }

    pub fn goi_cells(&self) -> impl Iterator<Item = &GridCell> {
        self.cells.iter().filter(|c| c.kind == CellKind::Goi)
    }

    /// Assembles a grid from explicit cells (used by loaders); the caller is
    /// responsible for their validity — run [`validate_partition`] to check.
    pub fn from_cells(
        cells: Vec<GridCell>,
        bbox: BoundingBox,
        cell_size: f64,
        metric: AssignMetric,
    ) -> Self {
        let lookup =
            SpatialIndex::build(cells.iter().map(|c| (c.id, c.geometry.clone())).collect());
        Self {
            cells,
            bbox,
            cell_size,
            metric,
            lookup,
        }
    }

    /// Id of the cell owning `p`: among all cells containing or touching the
    /// point, the smallest id wins, making boundary assignment unique.
    ///
    /// Dissolved GOI boundaries carry the boolean-ops backend's coordinate
    /// snapping, so a point sitting bit-exactly on the outermost grid line
    /// can land a few ulps outside every cell; a failed exact probe retries
    /// with [`LOCATE_SLACK_M`] of slack.
    pub fn locate(&self, p: PlanarPoint) -> Option<u64> {
        if let Some(&id) = self.lookup.query_point(p).first() {
            return Some(id);
        }
        let probe = BoundingBox::new(
            p.x - LOCATE_SLACK_M,
            p.y - LOCATE_SLACK_M,
            p.x + LOCATE_SLACK_M,
            p.y + LOCATE_SLACK_M,
        );
        self.lookup.query_rect(&probe).into_iter().next()
    }
}

/// Assembles the final grid: one cell per GOI plus one filler cell per
/// unlabeled micro cell.
pub fn build_final_grid(goi: &GoiGrid, micro: &MicroGrid) -> FinalGrid {
    let mut cells: Vec<GridCell> = goi
        .gois
        .iter()
        .map(|g| GridCell {
            id: g.destination_id,
            geometry: g.region.clone(),
            rect: None,
            kind: CellKind::Goi,
            source_destination: Some(g.destination_id),
        })
        .collect();
    let mut next_id = cells.iter().map(|c| c.id + 1).max().unwrap_or(0);
    for (idx, label) in goi.labels.iter().enumerate() {
        if label.is_none() {
            let bb = micro.cell_bbox(idx);
            cells.push(GridCell {
                id: next_id,
                geometry: Region::rect(&bb),
                rect: Some(bb),
                kind: CellKind::Filler,
                source_destination: None,
            });
            next_id += 1;
        }
    }
    FinalGrid::from_cells(cells, micro.bbox(), micro.cell_size(), goi.metric)
}

/// Geometric validation report for a final grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionReport {
    /// Largest pairwise intersection area across cells, m².
    pub max_pairwise_overlap_m2: f64,
    /// Bounding-box area not covered by any cell, m².
    pub uncovered_area_m2: f64,
    /// Trajectory points that resolve to no cell under the lookup rule.
    pub unmatched_points: usize,
    pub pass: bool,
}

/// Checks the two partition-validity constraints — pairwise disjointness and
/// full coverage of the MBR — plus point-assignment totality for `traj`.
pub fn validate_partition(grid: &FinalGrid, traj: &Trajectory) -> PartitionReport {
    let cells = grid.cells();
    let index = SpatialIndex::build(
        cells
            .iter()
            .enumerate()
            .map(|(i, c)| (i as u64, c.geometry.clone()))
            .collect(),
    );

    let mut max_overlap = 0.0f64;
    for (i, cell) in cells.iter().enumerate() {
        for j in index.query(&cell.geometry) {
            let j = j as usize;
            if j <= i {
                continue;
            }
            let other = &cells[j];
            let overlap = match (cell.rect, other.rect) {
                (Some(a), Some(b)) => a.overlap_area(&b),
                _ => cell.geometry.intersection_area(&other.geometry),
            };
            max_overlap = max_overlap.max(overlap);
        }
    }

    let covered = Region::union_all(cells.iter().map(|c| &c.geometry));
    let uncovered = Region::rect(&grid.bbox()).difference(&covered).area();

    let unmatched = traj
        .points()
        .iter()
        .filter(|tp| grid.locate(tp.p).is_none())
        .count();

    PartitionReport {
        max_pairwise_overlap_m2: max_overlap,
        uncovered_area_m2: uncovered,
        unmatched_points: unmatched,
        pass: max_overlap < MAX_PAIRWISE_OVERLAP_M2
            && uncovered < MAX_UNCOVERED_M2
            && unmatched == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::destination::Destination;
    use approx::assert_relative_eq;

    fn dest(id: u64, min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Destination {
        Destination {
            id,
            geometry: Region::rect(&BoundingBox::new(min_x, min_y, max_x, max_y)),
            points: Vec::new(),
            frequency: 1,
            member_stays: vec![id],
            point_ranges: Vec::new(),
        }
    }

    #[test]
    fn micro_grid_10x10_cell_5() {
        let g = build_micro_grid(&BoundingBox::new(0.0, 0.0, 10.0, 10.0), 5.0).unwrap();
        assert_eq!((g.columns(), g.rows()), (2, 2));
        for idx in 0..4 {
            let bb = g.cell_bbox(idx);
            assert_relative_eq!(bb.area(), 25.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn micro_grid_clips_last_row() {
        let g = build_micro_grid(&BoundingBox::new(0.0, 0.0, 10.0, 7.0), 5.0).unwrap();
        assert_eq!((g.columns(), g.rows()), (2, 2));
        assert_relative_eq!(g.cell_bbox(0).area(), 25.0, max_relative = 1e-12);
        // second row is 5 x 2
        assert_relative_eq!(g.cell_bbox(2).area(), 10.0, max_relative = 1e-12);
    }

    #[test]
    fn micro_grid_total_area_matches_bbox() {
        for (w, h, s) in [(10.0, 7.0, 5.0), (103.7, 55.1, 9.3), (1.0, 1.0, 0.4)] {
            let bb = BoundingBox::new(-3.0, 2.0, -3.0 + w, 2.0 + h);
            let g = build_micro_grid(&bb, s).unwrap();
            let total: f64 = (0..g.cell_count()).map(|i| g.cell_bbox(i).area()).sum();
            assert_relative_eq!(total, bb.area(), max_relative = 1e-9);
        }
    }

    #[test]
    fn micro_grid_guards() {
        assert!(build_micro_grid(&BoundingBox::new(0.0, 0.0, 0.0, 5.0), 1.0).is_err());
        assert!(build_micro_grid(&BoundingBox::new(0.0, 0.0, 1e8, 1e8), 0.5).is_err());
        assert!(build_micro_grid(&BoundingBox::new(0.0, 0.0, 1.0, 1.0), 0.0).is_err());
    }

    #[test]
    fn one_destination_covering_everything() {
        let bb = BoundingBox::new(0.0, 0.0, 20.0, 20.0);
        let micro = build_micro_grid(&bb, 5.0).unwrap();
        let grid =
            assign_cells(&micro, &[dest(3, -1.0, -1.0, 21.0, 21.0)], AssignMetric::Gs).unwrap();
        assert_eq!(grid.gois.len(), 1);
        assert_eq!(grid.gois[0].cell_count, micro.cell_count());
        assert_relative_eq!(grid.gois[0].region.area(), bb.area(), max_relative = 1e-9);
        let final_grid = build_final_grid(&grid, &micro);
        assert_eq!(final_grid.cells().len(), 1);
    }

    #[test]
    fn disjoint_cell_aligned_destinations_reproduce_themselves() {
        let bb = BoundingBox::new(0.0, 0.0, 40.0, 20.0);
        let micro = build_micro_grid(&bb, 5.0).unwrap();
        let dests = vec![
            dest(0, 0.0, 0.0, 10.0, 10.0),
            dest(1, 25.0, 5.0, 40.0, 20.0),
        ];
        let grid = assign_cells(&micro, &dests, AssignMetric::Gs).unwrap();
        assert_eq!(grid.gois.len(), 2);
        for (goi, d) in grid.gois.iter().zip(&dests) {
            assert_eq!(goi.destination_id, d.id);
            assert_relative_eq!(goi.region.area(), d.geometry.area(), max_relative = 1e-9);
            assert!(goi.region.intersection_area(&d.geometry) > 0.99 * d.geometry.area());
        }
    }

    #[test]
    fn overlapping_destinations_argmax_matches_exhaustive_oracle() {
        let bb = BoundingBox::new(0.0, 0.0, 20.0, 20.0);
        let micro = build_micro_grid(&bb, 5.0).unwrap();
        let dests = vec![dest(0, 0.0, 0.0, 12.0, 20.0), dest(1, 8.0, 0.0, 20.0, 20.0)];
        for metric in [AssignMetric::Gs, AssignMetric::Pcs] {
            let grid = assign_cells(&micro, &dests, metric).unwrap();
            // Oracle: evaluate the metric for every (cell, destination) pair.
            for idx in 0..micro.cell_count() {
                let cell = micro.cell_region(idx);
                let mut best: Option<(u64, f64)> = None;
                for d in &dests {
                    if cell.intersection_area(&d.geometry) <= 0.0 {
                        continue;
                    }
                    let score = match metric {
                        AssignMetric::Gs => jaccard(&cell, &d.geometry).unwrap(),
                        AssignMetric::Pcs => {
                            1.0 / micro
                                .cell_bbox(idx)
                                .center()
                                .distance(d.geometry.centroid().unwrap())
                        }
                    };
                    match best {
                        Some((_, bs)) if bs >= score => {}
                        _ => best = Some((d.id, score)),
                    }
                }
                assert_eq!(grid.labels[idx], best.map(|(id, _)| id), "cell {idx}");
            }
            // Resulting GOIs are interior-disjoint.
            for (i, a) in grid.gois.iter().enumerate() {
                for b in &grid.gois[i + 1..] {
                    assert!(a.region.intersection_area(&b.region) < 1e-6);
                }
            }
        }
    }

    #[test]
    fn final_grid_single_cell_destination() {
        let bb = BoundingBox::new(0.0, 0.0, 20.0, 20.0);
        let micro = build_micro_grid(&bb, 5.0).unwrap();
        // Destination exactly covering the first cell.
        let grid = assign_cells(&micro, &[dest(9, 0.0, 0.0, 5.0, 5.0)], AssignMetric::Gs).unwrap();
        let final_grid = build_final_grid(&grid, &micro);
        let gois = final_grid.goi_cells().count();
        assert_eq!(gois, 1);
        assert_eq!(final_grid.cells().len(), micro.cell_count()); // 1 goi + 15 fillers
                                                                  // Filler ids start past the goi id.
        assert!(final_grid
            .cells()
            .iter()
            .all(|c| c.kind == CellKind::Goi || c.id > 9));
    }

    #[test]
    fn validator_passes_constructed_grid() {
        let traj = crate::stay::tests::planar_trajectory(&[
            (0, 1.0, 1.0),
            (10, 8.0, 3.0),
            (20, 15.0, 15.0),
            (30, 19.0, 19.0),
        ]);
        let bb = traj.mbr();
        let micro = build_micro_grid(&bb, 4.0).unwrap();
        let grid =
            assign_cells(&micro, &[dest(0, 5.0, 5.0, 12.0, 12.0)], AssignMetric::Gs).unwrap();
        let final_grid = build_final_grid(&grid, &micro);
        let report = validate_partition(&final_grid, &traj);
        assert!(report.pass, "{report:?}");
        assert_eq!(report.unmatched_points, 0);
    }

    #[test]
    fn validator_fails_overlapping_cells() {
        let bb = BoundingBox::new(0.0, 0.0, 10.0, 10.0);
        let cells = vec![
            GridCell {
                id: 0,
                geometry: Region::rect(&BoundingBox::new(0.0, 0.0, 6.0, 10.0)),
                rect: Some(BoundingBox::new(0.0, 0.0, 6.0, 10.0)),
                kind: CellKind::Filler,
                source_destination: None,
            },
            GridCell {
                id: 1,
                geometry: Region::rect(&BoundingBox::new(4.0, 0.0, 10.0, 10.0)),
                rect: Some(BoundingBox::new(4.0, 0.0, 10.0, 10.0)),
                kind: CellKind::Filler,
                source_destination: None,
            },
        ];
        let grid = FinalGrid::from_cells(cells, bb, 10.0, AssignMetric::Gs);
        let traj = crate::stay::tests::planar_trajectory(&[(0, 5.0, 5.0)]);
        let report = validate_partition(&grid, &traj);
        assert!(!report.pass);
        assert!(report.max_pairwise_overlap_m2 > 1.0);
    }

    #[test]
    fn validator_fails_missing_cell() {
        let bb = BoundingBox::new(0.0, 0.0, 10.0, 10.0);
        let cells = vec![GridCell {
            id: 0,
            geometry: Region::rect(&BoundingBox::new(0.0, 0.0, 5.0, 10.0)),
            rect: Some(BoundingBox::new(0.0, 0.0, 5.0, 10.0)),
            kind: CellKind::Filler,
            source_destination: None,
        }];
        let grid = FinalGrid::from_cells(cells, bb, 5.0, AssignMetric::Gs);
        let traj = crate::stay::tests::planar_trajectory(&[(0, 8.0, 5.0)]);
        let report = validate_partition(&grid, &traj);
        assert!(!report.pass);
        assert!(report.uncovered_area_m2 > 1.0);
        assert_eq!(report.unmatched_points, 1);
    }

    #[test]
    fn boundary_points_resolve_to_smallest_id() {
        let bb = BoundingBox::new(0.0, 0.0, 10.0, 10.0);
        let micro = build_micro_grid(&bb, 5.0).unwrap();
        let grid = assign_cells(&micro, &[dest(0, 0.0, 0.0, 5.0, 5.0)], AssignMetric::Gs).unwrap();
        let final_grid = build_final_grid(&grid, &micro);
        // (5, 2.5) sits on the shared edge between the goi cell (id 0) and a
        // filler; the goi id is smaller.
        assert_eq!(final_grid.locate(PlanarPoint::new(5.0, 2.5)), Some(0));
        // A corner shared by four cells still resolves uniquely.
        assert!(final_grid.locate(PlanarPoint::new(5.0, 5.0)).is_some());
        // Outside the bbox: no cell.
        assert_eq!(final_grid.locate(PlanarPoint::new(11.0, 5.0)), None);
    }
}
