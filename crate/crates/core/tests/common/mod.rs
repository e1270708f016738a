//! Shared generators for the integration suites. Each suite uses its own
//! subset, so the unused-code lint is off.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use goi_core::geo::{buffered_convex_hull, unproject, LatLon, PlanarPoint};
use goi_core::stay::Stay;
use goi_core::trajectory::{ingest, RawFix, TrackPoint, Trajectory};

pub const ORIGIN: LatLon = LatLon { lat: 0.0, lon: 0.0 };

/// Trajectory from (t, x, y) planar meters around the 0,0 origin.
pub fn planar_trajectory(points: &[(i64, f64, f64)]) -> Trajectory {
    let fixes: Vec<RawFix> = points
        .iter()
        .map(|&(t, x, y)| {
            let ll = unproject(PlanarPoint::new(x, y), ORIGIN).unwrap();
            RawFix {
                t,
                lat: ll.lat,
                lon: ll.lon,
            }
        })
        .collect();
    ingest(&fixes, Some(ORIGIN)).unwrap()
}

/// A random stop-and-move trajectory: dwell bursts around anchors separated
/// by jumps, with irregular sampling and occasional long gaps. Exercises
/// every branch of the stay extractors.
pub fn random_trajectory(seed: u64, max_points: usize) -> Trajectory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<(i64, f64, f64)> = Vec::with_capacity(max_points);
    let mut t: i64 = 0;
    let mut anchor = (0.0f64, 0.0f64);

    while pts.len() < max_points {
        if rng.random_range(0.0..1.0) < 0.55 {
            // dwell burst near the anchor
            let burst = rng.random_range(1..=12usize);
            let radius = rng.random_range(5.0..90.0);
            for _ in 0..burst.min(max_points - pts.len()) {
                let x = anchor.0 + rng.random_range(-radius..radius);
                let y = anchor.1 + rng.random_range(-radius..radius);
                pts.push((t, x, y));
                t += rng.random_range(10..=600);
                if rng.random_range(0.0..1.0) < 0.05 {
                    t += rng.random_range(1800..=14400);
                }
            }
        } else {
            // jump to a new anchor, sometimes sampling along the way
            let dx = rng.random_range(-2000.0..2000.0);
            let dy = rng.random_range(-2000.0..2000.0);
            let steps = rng.random_range(0..=4usize);
            for s in 1..=steps {
                if pts.len() >= max_points {
                    break;
                }
                let f = s as f64 / (steps + 1) as f64;
                pts.push((t, anchor.0 + dx * f, anchor.1 + dy * f));
                t += rng.random_range(10..=120);
            }
            anchor = (anchor.0 + dx, anchor.1 + dy);
        }
    }
    pts.truncate(max_points);
    planar_trajectory(&pts)
}

/// Random stays with controllable overlap, for the merge oracles. Centers
/// cluster around a few sites so Jaccard values span (0, 1).
pub fn random_stays(seed: u64, count: usize) -> Vec<Stay> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let site_count = rng.random_range(1..=3.max(count / 3));
    let sites: Vec<(f64, f64)> = (0..site_count)
        .map(|_| {
            (
                rng.random_range(-400.0..400.0),
                rng.random_range(-400.0..400.0),
            )
        })
        .collect();
    (0..count as u64)
        .map(|id| {
            let site = sites[rng.random_range(0..sites.len())];
            let cx = site.0 + rng.random_range(-40.0..40.0);
            let cy = site.1 + rng.random_range(-40.0..40.0);
            let spread = rng.random_range(5.0..50.0);
            let n = rng.random_range(1..=6usize);
            let t0 = id as i64 * 100_000;
            let points: Vec<TrackPoint> = (0..n)
                .map(|k| TrackPoint {
                    t: t0 + k as i64 * 60,
                    p: PlanarPoint::new(
                        cx + rng.random_range(-spread..spread),
                        cy + rng.random_range(-spread..spread),
                    ),
                    tv: 60,
                })
                .collect();
            let coords: Vec<PlanarPoint> = points.iter().map(|p| p.p).collect();
            let geometry = buffered_convex_hull(&coords, 10.0).unwrap();
            Stay {
                id,
                centroid: geometry.centroid().unwrap(),
                geometry,
                point_range: (id as usize * 10, id as usize * 10 + n),
                points,
                arrival: t0,
                departure: t0 + 3600,
            }
        })
        .collect()
}
