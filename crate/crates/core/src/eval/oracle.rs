//! Brute-force reference implementations used only by tests.
//!
//! These re-implement the extraction loops literally — no spatial index, no
//! incremental centroid or diameter updates — so the optimized paths can be
//! checked against them on randomized instances. Keep them boring.

use std::collections::BTreeMap;

use crate::destination::{Destination, MergeParams};
use crate::error::{Error, Result};
use crate::geo::{buffered_convex_hull, jaccard, Region};
use crate::stay::{Stay, StayMethod, StayParams};
use crate::trajectory::{time_weighted_centroid, TrackPoint, Trajectory};

/// Test-scale guard for the stay oracle.
pub const ORACLE_MAX_POINTS: usize = 2000;

/// Literal simulation of the stay extraction loops.
pub fn brute_force_stay_oracle(
    traj: &Trajectory,
    params: &StayParams,
    method: StayMethod,
) -> Result<Vec<Stay>> {
    params.validate()?;
    let pts = traj.points();
    if pts.len() > ORACLE_MAX_POINTS {
        return Err(Error::OracleSizeGuard {
            size: pts.len(),
            limit: ORACLE_MAX_POINTS,
        });
    }

    let mut stays = Vec::new();
    let mut next_id = 0u64;
    let mut i = 0usize;
    let n = pts.len();

    while i < n {
        let mut working: Vec<TrackPoint> = vec![pts[i]];
        let mut emitted = false;
        let mut j = i + 1;
        while j < n {
            let breaks = match method {
                StayMethod::Twc => {
                    let reference = time_weighted_centroid(&working)?;
                    reference.distance(pts[j].p) > params.d_max
                }
                StayMethod::ReferencePoint => pts[i].p.distance(pts[j].p) > params.d_max,
                StayMethod::Diameter => {
                    let mut with_candidate = working.clone();
                    with_candidate.push(pts[j]);
                    diameter(&with_candidate) > params.diam_max
                }
            };
            if breaks {
                let (dwell, departure) = match method {
                    StayMethod::Twc => {
                        let d = (pts[j].t + pts[j].tv) - pts[i].t;
                        (d, pts[j].t + pts[j].tv)
                    }
                    _ => (pts[j].t - pts[i].t, pts[j].t),
                };
                let enough_members = match method {
                    StayMethod::Twc => true,
                    _ => j - i >= 2,
                };
                if dwell >= params.t_min && enough_members {
                    let coords: Vec<_> = working.iter().map(|m| m.p).collect();
                    let geometry = buffered_convex_hull(&coords, params.buffer_width)?;
                    stays.push(Stay {
                        id: next_id,
                        centroid: geometry.centroid().expect("positive area"),
                        geometry,
                        points: working.clone(),
                        point_range: (i, j),
                        arrival: pts[i].t,
                        departure,
                    });
                    next_id += 1;
                    i = j;
                    emitted = true;
                    break;
                }
                match method {
                    // The TWC method admits the out-of-radius point and keeps
                    // scanning; the baselines abandon the candidate.
                    StayMethod::Twc => {}
                    _ => break,
                }
            }
            working.push(pts[j]);
            j += 1;
        }
        if !emitted {
            i += 1;
        }
    }
    Ok(stays)
}

#[derive(Clone)]
struct OracleCluster {
    members: Vec<u64>,
    geometry: Region,
    frequency: u32,
}

/// Global agglomeration that re-scans every live cluster pair each round.
pub fn brute_force_merge_oracle(stays: &[Stay], params: &MergeParams) -> Result<Vec<Destination>> {
    params.validate()?;
    let mut clusters: BTreeMap<u64, OracleCluster> = stays
        .iter()
        .map(|s| {
            (
                s.id,
                OracleCluster {
                    members: vec![s.id],
                    geometry: s.geometry.clone(),
                    frequency: 1,
                },
            )
        })
        .collect();

    loop {
        let ids: Vec<u64> = clusters.keys().copied().collect();
        let mut best: Option<((u64, u64), f64)> = None;
        for (ai, &a) in ids.iter().enumerate() {
            for &b in &ids[ai + 1..] {
                if !clusters[&a].geometry.intersects(&clusters[&b].geometry) {
                    continue;
                }
                let sim = jaccard(&clusters[&a].geometry, &clusters[&b].geometry)?;
                match best {
                    Some((_, bs)) if bs >= sim => {}
                    _ => best = Some(((a, b), sim)),
                }
            }
        }
        let Some(((a, b), sim)) = best else { break };
        if sim <= params.j_min {
            break;
        }
        let absorbed = clusters.remove(&b).expect("cluster exists");
        let target = clusters.get_mut(&a).expect("cluster exists");
        target.geometry = target.geometry.union(&absorbed.geometry);
        target.frequency += absorbed.frequency;
        target.members.extend(absorbed.members);
    }

    let stay_by_id: BTreeMap<u64, &Stay> = stays.iter().map(|s| (s.id, s)).collect();
    Ok(clusters
        .into_values()
        .filter(|c| c.frequency >= params.f_min)
        .map(|c| {
            let mut members = c.members;
            members.sort_unstable();
            Destination {
                id: members[0],
                geometry: c.geometry,
                points: members
                    .iter()
                    .flat_map(|id| stay_by_id[id].points.iter().copied())
                    .collect(),
                frequency: c.frequency,
                point_ranges: members
                    .iter()
                    .map(|id| stay_by_id[id].point_range)
                    .collect(),
                member_stays: members,
            }
        })
        .collect())
}

fn diameter(points: &[TrackPoint]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            d = d.max(a.p.distance(b.p));
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stay::tests::planar_trajectory;
    use crate::stay::{extract_stays, StayMethod};

    #[test]
    fn empty_ish_trajectory_yields_no_stays() {
        let traj = planar_trajectory(&[(0, 0.0, 0.0)]);
        for method in [
            StayMethod::Twc,
            StayMethod::ReferencePoint,
            StayMethod::Diameter,
        ] {
            assert!(
                brute_force_stay_oracle(&traj, &StayParams::default(), method)
                    .unwrap()
                    .is_empty()
            );
        }
    }

    #[test]
    fn coincident_points_match_both_paths() {
        let mut pts: Vec<(i64, f64, f64)> = (0..6).map(|i| (i * 1200, 0.0, 0.0)).collect();
        pts.push((7200, 3000.0, 0.0));
        pts.push((7300, 3000.0, 2.0));
        let traj = planar_trajectory(&pts);
        let params = StayParams::default();
        for method in [
            StayMethod::Twc,
            StayMethod::ReferencePoint,
            StayMethod::Diameter,
        ] {
            let fast = extract_stays(&traj, &params, method).unwrap();
            let slow = brute_force_stay_oracle(&traj, &params, method).unwrap();
            assert_eq!(fast.len(), slow.len(), "{method:?}");
            assert_eq!(fast.len(), 1);
            for (f, s) in fast.iter().zip(&slow) {
                assert_eq!(f.point_range, s.point_range);
                assert_eq!((f.arrival, f.departure), (s.arrival, s.departure));
            }
        }
    }

    #[test]
    fn size_guard_enforced() {
        let pts: Vec<(i64, f64, f64)> = (0..2001).map(|i| (i as i64, 0.0, 0.0)).collect();
        let traj = planar_trajectory(&pts);
        assert!(matches!(
            brute_force_stay_oracle(&traj, &StayParams::default(), StayMethod::Twc),
            Err(Error::OracleSizeGuard { .. })
        ));
    }
}
