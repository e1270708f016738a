use geo::Intersects;
use rstar::{RTree, RTreeObject, AABB};

use super::{BoundingBox, PlanarPoint, Region};

struct Entry {
    id: u64,
    region: Region,
    envelope: AABB<[f64; 2]>,
}

impl RTreeObject for Entry {
    type Envelope = AABB<[f64; 2]>;

    fn envelope(&self) -> Self::Envelope {
        self.envelope
    }
}

/// R-tree over `(id, Region)` entries. Envelope candidates are re-verified
/// with exact geometry before being returned, so callers never see false
/// positives.
pub struct SpatialIndex {
    tree: RTree<Entry>,
}

impl SpatialIndex {
    /// Builds the index; empty regions are unindexable and skipped.
    pub fn build(entries: Vec<(u64, Region)>) -> Self {
        let items: Vec<Entry> = entries
            .into_iter()
            .filter_map(|(id, region)| {
                region.envelope().map(|bb| Entry {
                    id,
                    region,
                    envelope: AABB::from_corners([bb.min_x, bb.min_y], [bb.max_x, bb.max_y]),
                })
            })
            .collect();
        Self {
            tree: RTree::bulk_load(items),
        }
    }

    pub fn len(&self) -> usize {
        self.tree.size()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.size() == 0
    }

    /// Ids of all indexed regions that truly intersect `probe` (boundary
    /// contact included), in ascending order.
    pub fn query(&self, probe: &Region) -> Vec<u64> {
        let Some(bb) = probe.envelope() else {
            return Vec::new();
        };
        let envelope = AABB::from_corners([bb.min_x, bb.min_y], [bb.max_x, bb.max_y]);
        let mut ids: Vec<u64> = self
            .tree
            .locate_in_envelope_intersecting(envelope)
            .filter(|e| e.region.intersects(probe))
            .map(|e| e.id)
            .collect();
        ids.sort_unstable();
        ids
    }

    /// Ids of all indexed regions intersecting the rectangle `bb` (boundary
    /// contact included), ascending. Unlike [`SpatialIndex::query`] the probe
    /// is taken as-is, so degenerate or sliver-thin rectangles work.
    pub fn query_rect(&self, bb: &BoundingBox) -> Vec<u64> {
        let envelope = AABB::from_corners([bb.min_x, bb.min_y], [bb.max_x, bb.max_y]);
        let rect = geo::Rect::new(
            geo::coord! { x: bb.min_x, y: bb.min_y },
            geo::coord! { x: bb.max_x, y: bb.max_y },
        );
        let mut ids: Vec<u64> = self
            .tree
            .locate_in_envelope_intersecting(envelope)
            .filter(|e| e.region.as_multi_polygon().intersects(&rect))
            .map(|e| e.id)
            .collect();
        ids.sort_unstable();
        ids
    }

    /// Ids of all indexed regions containing or touching `p`, ascending.
    pub fn query_point(&self, p: PlanarPoint) -> Vec<u64> {
        let envelope = AABB::from_corners([p.x, p.y], [p.x, p.y]);
        let mut ids: Vec<u64> = self
            .tree
            .locate_in_envelope_intersecting(envelope)
            .filter(|e| e.region.contains_point(p))
            .map(|e| e.id)
            .collect();
        ids.sort_unstable();
        ids
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::BoundingBox;

    fn square(x0: f64, y0: f64, side: f64) -> Region {
        Region::rect(&BoundingBox::new(x0, y0, x0 + side, y0 + side))
    }

    #[test]
    fn probe_equal_to_single_entry() {
        let idx = SpatialIndex::build(vec![(7, square(0.0, 0.0, 1.0))]);
        assert_eq!(idx.query(&square(0.0, 0.0, 1.0)), vec![7]);
    }

    #[test]
    fn disjoint_probe_returns_nothing() {
        let idx = SpatialIndex::build(vec![(1, square(0.0, 0.0, 1.0)), (2, square(3.0, 3.0, 1.0))]);
        assert!(idx.query(&square(10.0, 10.0, 1.0)).is_empty());
    }

    #[test]
    fn query_on_empty_index() {
        let idx = SpatialIndex::build(Vec::new());
        assert!(idx.is_empty());
        assert!(idx.query(&square(0.0, 0.0, 1.0)).is_empty());
        assert!(idx.query_point(PlanarPoint::new(0.0, 0.0)).is_empty());
    }

    #[test]
    fn envelope_overlap_is_not_enough() {
        // Two triangles whose envelopes overlap but geometries do not.
        let a = Region::from_exterior_ring(&[
            PlanarPoint::new(0.0, 0.0),
            PlanarPoint::new(4.0, 0.0),
            PlanarPoint::new(0.0, 4.0),
        ]);
        let b = Region::from_exterior_ring(&[
            PlanarPoint::new(4.0, 4.0),
            PlanarPoint::new(3.9, 4.0),
            PlanarPoint::new(4.0, 3.9),
        ]);
        let idx = SpatialIndex::build(vec![(1, a)]);
        assert!(idx.query(&b).is_empty());
    }

    #[test]
    fn matches_brute_force_on_random_rectangles() {
        // Deterministic pseudo-random rectangles; oracle is the pairwise scan.
        let mut state = 0x243F6A8885A308D3u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..20 {
            let entries: Vec<(u64, Region)> = (0..50)
                .map(|i| {
                    let x = next() * 100.0;
                    let y = next() * 100.0;
                    let w = next() * 20.0 + 0.5;
                    let h = next() * 20.0 + 0.5;
                    (i, Region::rect(&BoundingBox::new(x, y, x + w, y + h)))
                })
                .collect();
            let px = next() * 100.0;
            let py = next() * 100.0;
            let probe = Region::rect(&BoundingBox::new(px, py, px + 15.0, py + 15.0));
            let expected: Vec<u64> = entries
                .iter()
                .filter(|(_, r)| r.intersects(&probe))
                .map(|(id, _)| *id)
                .collect();
            let idx = SpatialIndex::build(entries);
            assert_eq!(idx.query(&probe), expected);
        }
    }
}
