use geo::algorithm::orient::{Direction, Orient};
use geo::algorithm::unary_union;
use geo::{
    Area, BooleanOps, BoundingRect, Centroid, Intersects, LineString, MultiPolygon, Point, Polygon,
};

use super::{BoundingBox, PlanarPoint};
use crate::error::{Error, Result};

/// Boolean-operation results with less area than this are snapped to empty so
/// numerical slivers cannot violate disjointness checks downstream.
pub const SLIVER_AREA_M2: f64 = 1e-6;

/// A planar polygon or multipolygon (outer rings with optional holes) with
/// area/intersection/union semantics. May be empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Region(MultiPolygon<f64>);

impl Default for Region {
    fn default() -> Self {
        Self::empty()
    }
}

impl Region {
    pub fn empty() -> Self {
        Self(MultiPolygon::new(Vec::new()))
    }

    /// Normalizes ring orientation and drops sliver parts.
    pub fn from_multi_polygon(mp: MultiPolygon<f64>) -> Self {
        let polys: Vec<Polygon<f64>> =
            mp.0.into_iter()
                .filter(|p| p.unsigned_area().abs() >= SLIVER_AREA_M2)
                .map(|p| p.orient(Direction::Default))
                .collect();
        Self(MultiPolygon::new(polys))
    }

    pub fn from_polygon(p: Polygon<f64>) -> Self {
        Self::from_multi_polygon(MultiPolygon::new(vec![p]))
    }

    /// Simple polygon from an exterior ring; the ring need not be closed.
    pub fn from_exterior_ring(ring: &[PlanarPoint]) -> Self {
        let coords: Vec<geo::Coord<f64>> = ring.iter().map(|&p| p.into()).collect();
        Self::from_polygon(Polygon::new(LineString::from(coords), Vec::new()))
    }

    pub fn rect(bb: &BoundingBox) -> Self {
        Self::from_exterior_ring(&[
            PlanarPoint::new(bb.min_x, bb.min_y),
            PlanarPoint::new(bb.max_x, bb.min_y),
            PlanarPoint::new(bb.max_x, bb.max_y),
            PlanarPoint::new(bb.min_x, bb.max_y),
        ])
    }

    pub fn is_empty(&self) -> bool {
        self.0 .0.is_empty()
    }

    /// Total area in square meters (outer rings minus holes).
    pub fn area(&self) -> f64 {
        self.0.unsigned_area()
    }

    pub fn intersection(&self, other: &Region) -> Region {
        if self.is_empty() || other.is_empty() {
            return Region::empty();
        }
        Region::from_multi_polygon(self.0.intersection(&other.0))
    }

    pub fn union(&self, other: &Region) -> Region {
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        Region::from_multi_polygon(self.0.union(&other.0))
    }

    pub fn difference(&self, other: &Region) -> Region {
        if self.is_empty() || other.is_empty() {
            return self.clone();
        }
        Region::from_multi_polygon(self.0.difference(&other.0))
    }

    pub fn intersection_area(&self, other: &Region) -> f64 {
        self.intersection(other).area()
    }

    /// True when the regions share any point, including pure boundary contact.
    pub fn intersects(&self, other: &Region) -> bool {
        self.0.intersects(&other.0)
    }

    /// Closed-set containment: boundary points count as inside.
    pub fn contains_point(&self, p: PlanarPoint) -> bool {
        self.0.intersects(&Point::new(p.x, p.y))
    }

    /// Area centroid; `None` for empty regions.
    pub fn centroid(&self) -> Option<PlanarPoint> {
        self.0.centroid().map(|c| PlanarPoint::new(c.x(), c.y()))
    }

    pub fn envelope(&self) -> Option<BoundingBox> {
        self.0
            .bounding_rect()
            .map(|r| BoundingBox::new(r.min().x, r.min().y, r.max().x, r.max().y))
    }

    /// Dissolved union of many regions.
    pub fn union_all<'a, I: IntoIterator<Item = &'a Region>>(regions: I) -> Region {
        let polys: Vec<&Polygon<f64>> = regions.into_iter().flat_map(|r| r.0 .0.iter()).collect();
        if polys.is_empty() {
            return Region::empty();
        }
        Region::from_multi_polygon(unary_union(polys))
    }

    pub fn polygons(&self) -> impl Iterator<Item = &Polygon<f64>> {
        self.0 .0.iter()
    }

    pub fn polygon_count(&self) -> usize {
        self.0 .0.len()
    }

    pub fn as_multi_polygon(&self) -> &MultiPolygon<f64> {
        &self.0
    }
}

/// Area(a ∩ b) / Area(a ∪ b). Errors when both regions have zero area.
pub fn jaccard(a: &Region, b: &Region) -> Result<f64> {
    let union = a.union(b).area();
    if union <= 0.0 {
        return Err(Error::ZeroAreaJaccard);
    }
    Ok(a.intersection_area(b) / union)
}
