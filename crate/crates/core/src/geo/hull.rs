use super::{PlanarPoint, Region};
use crate::error::{Error, Result};

/// Arc approximation used when dilating geometry: 16 segments per
/// quarter-circle, i.e. a 64-gon stands in for a disk. Keeps the area error of
/// a buffered region under 0.2%.
pub const SEGMENTS_PER_QUARTER_ARC: usize = 16;

/// Convex hull of a point set. Degenerate inputs (a single point, or all
/// points collinear) have no polygonal hull; they are represented explicitly
/// and gain area once buffered.
#[derive(Debug, Clone, PartialEq)]
pub enum Hull {
    Point(PlanarPoint),
    Segment(PlanarPoint, PlanarPoint),
    Polygon(Region),
}

impl Hull {
    /// Hull vertices; for the polygon case the exterior ring without the
    /// closing point.
    pub fn vertices(&self) -> Vec<PlanarPoint> {
        match self {
            Hull::Point(p) => vec![*p],
            Hull::Segment(a, b) => vec![*a, *b],
            Hull::Polygon(r) => r
                .polygons()
                .flat_map(|p| {
                    let coords = &p.exterior().0;
                    coords[..coords.len().saturating_sub(1)]
                        .iter()
                        .map(|c| PlanarPoint::new(c.x, c.y))
                })
                .collect(),
        }
    }

    /// True if `p` lies inside or on the hull (with `tol` slack for the
    /// degenerate cases).
    pub fn contains(&self, p: PlanarPoint, tol: f64) -> bool {
        match self {
            Hull::Point(q) => p.distance(*q) <= tol,
            Hull::Segment(a, b) => point_segment_distance(p, *a, *b) <= tol,
            Hull::Polygon(r) => r.contains_point(p),
        }
    }

    /// Minkowski dilation by a disk of radius `width`.
    ///
    /// The hull is convex, so the dilation is the convex hull of every vertex
    /// translated by every vertex of the approximating disk polygon. This is
    /// exact for the polygonal disk and never degenerate for `width > 0`.
    pub fn buffer(&self, width: f64) -> Region {
        assert!(width > 0.0, "buffer width must be positive");
        let disk = disk_offsets(width);
        let vertices = self.vertices();
        let mut cloud = Vec::with_capacity(vertices.len() * disk.len());
        for v in &vertices {
            for (dx, dy) in &disk {
                cloud.push(PlanarPoint::new(v.x + dx, v.y + dy));
            }
        }
        match convex_hull(&cloud).expect("buffer cloud is non-empty") {
            Hull::Polygon(r) => r,
            // width > 0 always yields a 2D hull
            _ => unreachable!("disk dilation produced a degenerate hull"),
        }
    }
}

/// Convex hull via monotone chain on the deduplicated input.
pub fn convex_hull(points: &[PlanarPoint]) -> Result<Hull> {
    if points.is_empty() {
        return Err(Error::EmptyInput {
            context: "convex_hull",
        });
    }
    let mut pts: Vec<PlanarPoint> = points.to_vec();
    pts.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).expect("finite coords"));
    pts.dedup_by(|a, b| a.x == b.x && a.y == b.y);

    if pts.len() == 1 {
        return Ok(Hull::Point(pts[0]));
    }

    let cross = |o: PlanarPoint, a: PlanarPoint, b: PlanarPoint| {
        (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
    };

    let mut lower: Vec<PlanarPoint> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<PlanarPoint> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);

    match lower.len() {
        0 | 1 => unreachable!("hull of >=2 distinct points has >=2 vertices"),
        2 => Ok(Hull::Segment(lower[0], lower[1])),
        _ => {
            // A near-collinear cloud can enclose less area than the sliver
            // threshold Region snaps away; treat it as its diameter segment
            // (buffering then covers the sub-micrometer deviations).
            if ring_area(&lower) < crate::geo::SLIVER_AREA_M2 {
                let (a, b) = farthest_pair(&lower);
                Ok(Hull::Segment(a, b))
            } else {
                Ok(Hull::Polygon(Region::from_exterior_ring(&lower)))
            }
        }
    }
}

fn ring_area(ring: &[PlanarPoint]) -> f64 {
    let mut twice = 0.0;
    for i in 0..ring.len() {
        let a = ring[i];
        let b = ring[(i + 1) % ring.len()];
        twice += a.x * b.y - b.x * a.y;
    }
    (twice / 2.0).abs()
}

fn farthest_pair(points: &[PlanarPoint]) -> (PlanarPoint, PlanarPoint) {
    let mut best = (points[0], points[1], 0.0f64);
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            let d = a.distance(b);
            if d > best.2 {
                best = (a, b, d);
            }
        }
    }
    (best.0, best.1)
}

/// Convenience for the stay pipeline: buffered convex hull of raw points.
pub fn buffered_convex_hull(points: &[PlanarPoint], width: f64) -> Result<Region> {
    Ok(convex_hull(points)?.buffer(width))
}

/// Minkowski dilation of an arbitrary region: the region unioned with a
/// capsule along every boundary edge (holes shrink accordingly).
pub fn buffer_region(region: &Region, width: f64) -> Region {
    assert!(width > 0.0, "buffer width must be positive");
    let mut pieces: Vec<Region> = vec![region.clone()];
    for poly in region.polygons() {
        for ring in std::iter::once(poly.exterior()).chain(poly.interiors()) {
            let coords = &ring.0;
            for w in coords.windows(2) {
                let a = PlanarPoint::new(w[0].x, w[0].y);
                let b = PlanarPoint::new(w[1].x, w[1].y);
                pieces.push(Hull::Segment(a, b).buffer(width));
            }
        }
    }
    Region::union_all(pieces.iter())
}

fn disk_offsets(radius: f64) -> Vec<(f64, f64)> {
    let n = 4 * SEGMENTS_PER_QUARTER_ARC;
    (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64);
            (radius * theta.cos(), radius * theta.sin())
        })
        .collect()
}

fn point_segment_distance(p: PlanarPoint, a: PlanarPoint, b: PlanarPoint) -> f64 {
    let (vx, vy) = (b.x - a.x, b.y - a.y);
    let len2 = vx * vx + vy * vy;
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = (((p.x - a.x) * vx + (p.y - a.y) * vy) / len2).clamp(0.0, 1.0);
    p.distance(PlanarPoint::new(a.x + t * vx, a.y + t * vy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::BoundingBox;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn pp(x: f64, y: f64) -> PlanarPoint {
        PlanarPoint::new(x, y)
    }

    #[test]
    fn square_hull_drops_interior_point() {
        let hull = convex_hull(&[
            pp(0.0, 0.0),
            pp(4.0, 0.0),
            pp(4.0, 4.0),
            pp(0.0, 4.0),
            pp(2.0, 2.0),
        ])
        .unwrap();
        match hull {
            Hull::Polygon(r) => {
                assert_relative_eq!(r.area(), 16.0, max_relative = 1e-12);
                let verts = convex_hull(&[pp(0.0, 0.0), pp(4.0, 0.0), pp(4.0, 4.0), pp(0.0, 4.0)])
                    .unwrap()
                    .vertices();
                assert_eq!(verts.len(), 4);
            }
            other => panic!("expected polygon hull, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_hulls() {
        assert_eq!(
            convex_hull(&[pp(1.0, 2.0)]).unwrap(),
            Hull::Point(pp(1.0, 2.0))
        );
        assert_eq!(
            convex_hull(&[pp(1.0, 2.0), pp(1.0, 2.0)]).unwrap(),
            Hull::Point(pp(1.0, 2.0))
        );
        match convex_hull(&[pp(0.0, 0.0), pp(1.0, 1.0), pp(2.0, 2.0)]).unwrap() {
            Hull::Segment(a, b) => {
                assert_eq!((a, b), (pp(0.0, 0.0), pp(2.0, 2.0)));
            }
            other => panic!("expected segment hull, got {other:?}"),
        }
        assert!(convex_hull(&[]).is_err());
    }

    #[test]
    fn point_buffer_approximates_disk() {
        let r = Hull::Point(pp(3.0, -2.0)).buffer(10.0);
        let expected = PI * 100.0;
        assert!(
            (r.area() - expected).abs() / expected < 0.02,
            "area {}",
            r.area()
        );
        assert!(r.contains_point(pp(3.0, -2.0)));
    }

    #[test]
    fn square_buffer_matches_dilated_rectangle_formula() {
        let square = Region::rect(&BoundingBox::new(0.0, 0.0, 10.0, 10.0));
        let buffered = buffer_region(&square, 10.0);
        // 10x10 square dilated by 10: A + P*w + pi*w^2
        let expected = 100.0 + 4.0 * 10.0 * 10.0 + PI * 100.0;
        assert!(
            (buffered.area() - expected).abs() / expected < 0.02,
            "area {} vs {}",
            buffered.area(),
            expected
        );
    }

    #[test]
    fn buffer_is_expansive() {
        let square = Region::rect(&BoundingBox::new(-5.0, 2.0, 7.0, 9.0));
        let buffered = buffer_region(&square, 3.0);
        assert!(buffered.area() > square.area());
        assert!(square.difference(&buffered).area() < 1e-9);
    }

    #[test]
    fn sliver_triangle_degrades_to_segment() {
        let pts = [pp(0.0, 0.0), pp(1.0, 0.0), pp(0.5, 1e-9)];
        match convex_hull(&pts).unwrap() {
            Hull::Segment(a, b) => assert_eq!((a, b), (pp(0.0, 0.0), pp(1.0, 0.0))),
            other => panic!("expected segment, got {other:?}"),
        }
        let buffered = buffered_convex_hull(&pts, 10.0).unwrap();
        for p in pts {
            assert!(buffered.contains_point(p));
        }
    }

    #[test]
    fn segment_buffer_is_a_capsule() {
        let r = Hull::Segment(pp(0.0, 0.0), pp(100.0, 0.0)).buffer(5.0);
        let expected = 100.0 * 10.0 + PI * 25.0;
        assert!((r.area() - expected).abs() / expected < 0.02);
        assert!(r.contains_point(pp(50.0, 4.9)));
        assert!(!r.contains_point(pp(50.0, 5.1)));
    }
}
