//! Planar geometry kernel shared by every pipeline phase.
//!
//! All coordinates are meters in a local Cartesian frame produced by
//! [`project`]. Polygon set operations are backed by the `geo` crate; the
//! rectangle index by `rstar`. Results of boolean operations are snapped so
//! that slivers below [`SLIVER_AREA_M2`] never leak into downstream
//! disjointness checks.

mod hull;
mod index;
mod project;
mod region;

pub use hull::{buffer_region, buffered_convex_hull, convex_hull, Hull, SEGMENTS_PER_QUARTER_ARC};
pub use index::SpatialIndex;
pub use project::{project, unproject, LatLon, EARTH_RADIUS_M};
pub use region::{jaccard, Region, SLIVER_AREA_M2};

use serde::{Deserialize, Serialize};

/// A point in the local planar frame, meters east/north of the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarPoint {
    pub x: f64,
    pub y: f64,
}

impl PlanarPoint {
    pub fn new(x: f64, y: f64) -> Self {
        debug_assert!(x.is_finite() && y.is_finite(), "non-finite coordinate");
        Self { x, y }
    }

    /// Euclidean distance in meters.
    pub fn distance(&self, other: PlanarPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl From<PlanarPoint> for geo::Coord<f64> {
    fn from(p: PlanarPoint) -> Self {
        geo::Coord { x: p.x, y: p.y }
    }
}

impl From<geo::Coord<f64>> for PlanarPoint {
    fn from(c: geo::Coord<f64>) -> Self {
        PlanarPoint::new(c.x, c.y)
    }
}

/// Axis-aligned bounding rectangle in the local planar frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl BoundingBox {
    pub fn new(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Self {
        assert!(min_x <= max_x && min_y <= max_y, "inverted bounding box");
        Self {
            min_x,
            min_y,
            max_x,
            max_y,
        }
    }

    /// Tight bounds over a non-empty point set.
    pub fn from_points<I: IntoIterator<Item = PlanarPoint>>(points: I) -> Option<Self> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut bb = Self::new(first.x, first.y, first.x, first.y);
        for p in it {
            bb.expand(p);
        }
        Some(bb)
    }

    pub fn expand(&mut self, p: PlanarPoint) {
        self.min_x = self.min_x.min(p.x);
        self.min_y = self.min_y.min(p.y);
        self.max_x = self.max_x.max(p.x);
        self.max_y = self.max_y.max(p.y);
    }

    pub fn width(&self) -> f64 {
        self.max_x - self.min_x
    }

    pub fn height(&self) -> f64 {
        self.max_y - self.min_y
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> PlanarPoint {
        PlanarPoint::new(
            (self.min_x + self.max_x) / 2.0,
            (self.min_y + self.max_y) / 2.0,
        )
    }

    /// Closed-set containment: boundary points count as inside.
    pub fn contains_point(&self, p: PlanarPoint) -> bool {
        p.x >= self.min_x && p.x <= self.max_x && p.y >= self.min_y && p.y <= self.max_y
    }

    pub fn intersects(&self, other: &BoundingBox) -> bool {
        self.min_x <= other.max_x
            && other.min_x <= self.max_x
            && self.min_y <= other.max_y
            && other.min_y <= self.max_y
    }

    /// Overlap area of two axis-aligned boxes (exact arithmetic, no geometry ops).
    pub fn overlap_area(&self, other: &BoundingBox) -> f64 {
        let w = (self.max_x.min(other.max_x) - self.min_x.max(other.min_x)).max(0.0);
        let h = (self.max_y.min(other.max_y) - self.min_y.max(other.min_y)).max(0.0);
        w * h
    }
}

/// Euclidean distance between two planar points, meters.
pub fn euclidean_distance(p: PlanarPoint, q: PlanarPoint) -> f64 {
    p.distance(q)
}
