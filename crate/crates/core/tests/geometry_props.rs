//! Property tests for the geometry kernel.

mod common;

use proptest::prelude::*;

use goi_core::geo::{
    buffer_region, buffered_convex_hull, convex_hull, euclidean_distance, jaccard, BoundingBox,
    Hull, PlanarPoint, Region, SpatialIndex,
};

fn planar_point() -> impl Strategy<Value = PlanarPoint> {
    (-1000.0..1000.0f64, -1000.0..1000.0f64).prop_map(|(x, y)| PlanarPoint::new(x, y))
}

/// Random convex region: buffered hull of a small point cloud.
fn convex_region() -> impl Strategy<Value = Region> {
    (
        prop::collection::vec((-100.0..100.0f64, -100.0..100.0f64), 1..10),
        1.0..30.0f64,
    )
        .prop_map(|(pts, width)| {
            let pts: Vec<PlanarPoint> = pts.iter().map(|&(x, y)| PlanarPoint::new(x, y)).collect();
            buffered_convex_hull(&pts, width).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jaccard_symmetric_bounded(a in convex_region(), b in convex_region()) {
        let ab = jaccard(&a, &b).unwrap();
        let ba = jaccard(&b, &a).unwrap();
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert!((ab - ba).abs() < 1e-12);
        prop_assert_eq!(jaccard(&a, &a).unwrap(), 1.0);
    }

    #[test]
    fn inclusion_exclusion_identity(a in convex_region(), b in convex_region()) {
        let lhs = a.area() + b.area();
        let rhs = a.union(&b).area() + a.intersection_area(&b);
        prop_assert!((lhs - rhs).abs() <= 1e-6 * lhs.max(1.0), "lhs={lhs} rhs={rhs}");
    }

    #[test]
    fn hull_contains_every_input(pts in prop::collection::vec((-500.0..500.0f64, -500.0..500.0f64), 1..100)) {
        let pts: Vec<PlanarPoint> = pts.iter().map(|&(x, y)| PlanarPoint::new(x, y)).collect();
        let hull = convex_hull(&pts).unwrap();
        for p in &pts {
            prop_assert!(hull.contains(*p, 1e-9), "{p:?} escapes the hull");
        }
        if let Hull::Polygon(region) = &hull {
            // Hull of points in a disk of radius r has area <= pi r^2; the
            // bounding check below is the cheap version of that bound.
            let bb = BoundingBox::from_points(pts.iter().copied()).unwrap();
            prop_assert!(region.area() <= bb.area() + 1e-9);
        }
    }

    #[test]
    fn buffer_contains_original(r in convex_region(), w in 0.5..20.0f64) {
        let buffered = buffer_region(&r, w);
        prop_assert!(buffered.area() > r.area());
        prop_assert!(r.difference(&buffered).area() < 1e-9);
    }

    #[test]
    fn triangle_inequality(a in planar_point(), b in planar_point(), c in planar_point()) {
        let ab = euclidean_distance(a, b);
        let bc = euclidean_distance(b, c);
        let ac = euclidean_distance(a, c);
        prop_assert!(ac <= ab + bc + 1e-9);
        prop_assert!((euclidean_distance(a, b) - euclidean_distance(b, a)).abs() == 0.0);
    }

    #[test]
    fn index_query_equals_brute_force(
        rects in prop::collection::vec((0.0..500.0f64, 0.0..500.0f64, 1.0..80.0f64, 1.0..80.0f64), 1..60),
        probe in (0.0..500.0f64, 0.0..500.0f64, 1.0..120.0f64, 1.0..120.0f64),
    ) {
        let entries: Vec<(u64, Region)> = rects
            .iter()
            .enumerate()
            .map(|(i, &(x, y, w, h))| (i as u64, Region::rect(&BoundingBox::new(x, y, x + w, y + h))))
            .collect();
        let probe = Region::rect(&BoundingBox::new(probe.0, probe.1, probe.0 + probe.2, probe.1 + probe.3));
        let expected: Vec<u64> = entries
            .iter()
            .filter(|(_, r)| r.intersects(&probe))
            .map(|(id, _)| *id)
            .collect();
        let index = SpatialIndex::build(entries);
        prop_assert_eq!(index.query(&probe), expected);
    }
}

#[test]
fn hull_of_unit_disk_cloud_bounded_by_disk_area() {
    // 100 deterministic pseudo-random points in the unit disk.
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
    let mut pts = Vec::new();
    while pts.len() < 100 {
        let x = rng.random_range(-1.0..1.0);
        let y = rng.random_range(-1.0..1.0);
        if x * x + y * y <= 1.0 {
            pts.push(PlanarPoint::new(x, y));
        }
    }
    let hull = convex_hull(&pts).unwrap();
    for p in &pts {
        assert!(hull.contains(*p, 1e-12));
    }
    match hull {
        Hull::Polygon(region) => assert!(region.area() <= std::f64::consts::PI),
        other => panic!("expected polygon, got {other:?}"),
    }
}
