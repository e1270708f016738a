//! Phase 1: segmenting a trajectory into stay regions.
//!
//! A stay is an event during which the object remains within roaming distance
//! `d_max` of a reference point for at least `t_min` seconds. The proposed
//! extractor uses the *time-weighted centroid* of the growing point set as
//! the reference and folds each point's time-value into the dwell test; the
//! two baseline extractors it is compared against use a fixed first-point
//! reference or a point-set diameter bound, raw timestamps only, and require
//! at least two member points to form a stay.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::{buffered_convex_hull, PlanarPoint, Region};
use crate::trajectory::{TrackPoint, Trajectory};

/// A stay region: contiguous point run, buffered convex hull, and dwell span.
#[derive(Debug, Clone, PartialEq)]
pub struct Stay {
    pub id: u64,
    /// Buffered convex hull of the member points.
    pub geometry: Region,
    /// Member points, a contiguous sub-sequence of the source trajectory.
    pub points: Vec<TrackPoint>,
    /// Half-open index range of the members within the source trajectory.
    pub point_range: (usize, usize),
    /// Area centroid of `geometry`.
    pub centroid: PlanarPoint,
    /// Arrival time, epoch seconds.
    pub arrival: i64,
    /// Departure time, epoch seconds.
    pub departure: i64,
}

impl Stay {
    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn is_single_point(&self) -> bool {
        self.points.len() == 1
    }
}

/// Extraction parameters. All values strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StayParams {
    /// Roaming radius in meters (reference-point methods).
    pub d_max: f64,
    /// Minimum dwell in seconds.
    pub t_min: i64,
    /// Hull buffer width in meters, compensating GPS noise.
    pub buffer_width: f64,
    /// Maximum point-set diameter in meters (diameter baseline only).
    pub diam_max: f64,
}

impl Default for StayParams {
    fn default() -> Self {
        Self {
            d_max: 100.0,
            t_min: 3600,
            buffer_width: 10.0,
            diam_max: 200.0,
        }
    }
}

impl StayParams {
    pub fn validate(&self) -> Result<()> {
        let check = |name: &'static str, ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    message: "must be strictly positive".into(),
                })
            }
        };
        check("d_max", self.d_max > 0.0)?;
        check("t_min", self.t_min > 0)?;
        check("buffer_width", self.buffer_width > 0.0)?;
        check("diam_max", self.diam_max > 0.0)
    }
}

/// Stay extraction method selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StayMethod {
    /// Time-weighted-centroid reference (proposed method).
    Twc,
    /// Fixed first-point reference (baseline).
    ReferencePoint,
    /// Point-set diameter bound (baseline).
    Diameter,
}

impl StayMethod {
    pub fn name(&self) -> &'static str {
        match self {
            StayMethod::Twc => "twc",
            StayMethod::ReferencePoint => "refpoint",
            StayMethod::Diameter => "diameter",
        }
    }
}

impl std::str::FromStr for StayMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "twc" => Ok(StayMethod::Twc),
            "refpoint" | "reference-point" => Ok(StayMethod::ReferencePoint),
            "diameter" => Ok(StayMethod::Diameter),
            other => Err(Error::InvalidParameter {
                name: "method",
                message: format!("unknown stay method `{other}`"),
            }),
        }
    }
}

/// Counters surfaced by the time-weighted-centroid extractor.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TwcDiagnostics {
    /// Points admitted into a working set even though they sat outside the
    /// roaming radius (the dwell span had not yet reached `t_min`). This
    /// admission is part of the method's definition; the counter makes it
    /// observable.
    pub out_of_radius_admissions: u64,
}

/// Dispatches to the extractor named by `method`.
pub fn extract_stays(
    traj: &Trajectory,
    params: &StayParams,
    method: StayMethod,
) -> Result<Vec<Stay>> {
    match method {
        StayMethod::Twc => extract_stays_twc(traj, params),
        StayMethod::ReferencePoint => extract_stays_reference_point(traj, params),
        StayMethod::Diameter => extract_stays_diameter(traj, params),
    }
}

/// Time-weighted-centroid stay extraction (proposed method).
pub fn extract_stays_twc(traj: &Trajectory, params: &StayParams) -> Result<Vec<Stay>> {
    extract_stays_twc_with_diagnostics(traj, params).map(|(stays, _)| stays)
}

/// As [`extract_stays_twc`], also returning diagnostic counters.
///
/// The outer cursor seeds a fresh working set at `p_i`; the inner cursor
/// tests each successor `p_j` against the current time-weighted centroid.
/// When `p_j` strays beyond `d_max` and the dwell span `(t_j + tv_j) - t_i`
/// reaches `t_min`, the working set becomes a stay (departure extends past
/// the breakout observation by its time-value) and the scan restarts at `j`.
/// An out-of-radius `p_j` that fails the dwell test is still admitted into
/// the working set. Single-point stays are possible: a lone point whose
/// successor is both far away and long after it qualifies on its own.
pub fn extract_stays_twc_with_diagnostics(
    traj: &Trajectory,
    params: &StayParams,
) -> Result<(Vec<Stay>, TwcDiagnostics)> {
    params.validate()?;
    let pts = traj.points();
    let n = pts.len();
    let mut stays = Vec::new();
    let mut diag = TwcDiagnostics::default();
    let mut next_id = 0u64;
    let mut i = 0usize;

    while i < n {
        // Working set = pts[i..j], tracked via running weighted sums.
        let mut sum_w = pts[i].tv as f64;
        let mut sum_x = pts[i].p.x * pts[i].tv as f64;
        let mut sum_y = pts[i].p.y * pts[i].tv as f64;
        let mut emitted = false;
        let mut j = i + 1;

        while j < n {
            let twc = if sum_w > 0.0 {
                PlanarPoint::new(sum_x / sum_w, sum_y / sum_w)
            } else {
                // All weights zero: fall back to the plain centroid.
                crate::trajectory::centroid(&pts[i..j])?
            };
            if twc.distance(pts[j].p) > params.d_max {
                let dwell = (pts[j].t + pts[j].tv) - pts[i].t;
                if dwell >= params.t_min {
                    stays.push(build_stay(
                        next_id,
                        pts,
                        i,
                        j,
                        pts[i].t,
                        pts[j].t + pts[j].tv,
                        params.buffer_width,
                    )?);
                    next_id += 1;
                    i = j;
                    emitted = true;
                    break;
                }
                diag.out_of_radius_admissions += 1;
            }
            sum_w += pts[j].tv as f64;
            sum_x += pts[j].p.x * pts[j].tv as f64;
            sum_y += pts[j].p.y * pts[j].tv as f64;
            j += 1;
        }

        if !emitted {
            i += 1;
        }
    }
    Ok((stays, diag))
}

/// Baseline: fixed first-point reference (no time-values).
///
/// The reference never refreshes; the dwell span is the raw timestamp gap to
/// the breakout observation; a failed candidate advances the cursor by one.
/// A valid stay needs at least two member points, so single-point stays
/// cannot occur.
pub fn extract_stays_reference_point(traj: &Trajectory, params: &StayParams) -> Result<Vec<Stay>> {
    params.validate()?;
    extract_baseline(traj, params, |pts, i, j| {
        pts[i].p.distance(pts[j].p) > params.d_max
    })
}

/// Baseline: point-set diameter bound (no time-values).
///
/// The window grows while the max pairwise distance stays within `diam_max`;
/// otherwise identical to the reference-point baseline.
pub fn extract_stays_diameter(traj: &Trajectory, params: &StayParams) -> Result<Vec<Stay>> {
    params.validate()?;
    let pts = traj.points();
    let n = pts.len();
    let mut stays = Vec::new();
    let mut next_id = 0u64;
    let mut i = 0usize;

    while i < n {
        let mut emitted = false;
        let mut diameter = 0.0f64;
        let mut j = i + 1;
        while j < n {
            let candidate = pts[i..j]
                .iter()
                .map(|m| m.p.distance(pts[j].p))
                .fold(diameter, f64::max);
            if candidate > params.diam_max {
                if pts[j].t - pts[i].t >= params.t_min && j - i >= 2 {
                    stays.push(build_stay(
                        next_id,
                        pts,
                        i,
                        j,
                        pts[i].t,
                        pts[j].t,
                        params.buffer_width,
                    )?);
                    next_id += 1;
                    i = j;
                    emitted = true;
                }
                break;
            }
            diameter = candidate;
            j += 1;
        }
        if !emitted {
            i += 1;
        }
    }
    Ok(stays)
}

fn extract_baseline(
    traj: &Trajectory,
    params: &StayParams,
    breaks: impl Fn(&[TrackPoint], usize, usize) -> bool,
) -> Result<Vec<Stay>> {
    let pts = traj.points();
    let n = pts.len();
    let mut stays = Vec::new();
    let mut next_id = 0u64;
    let mut i = 0usize;

    while i < n {
        let mut emitted = false;
        for j in i + 1..n {
            if breaks(pts, i, j) {
                if pts[j].t - pts[i].t >= params.t_min && j - i >= 2 {
                    stays.push(build_stay(
                        next_id,
                        pts,
                        i,
                        j,
                        pts[i].t,
                        pts[j].t,
                        params.buffer_width,
                    )?);
                    next_id += 1;
                    i = j;
                    emitted = true;
                }
                break;
            }
        }
        if !emitted {
            i += 1;
        }
    }
    Ok(stays)
}

fn build_stay(
    id: u64,
    pts: &[TrackPoint],
    start: usize,
    end: usize,
    arrival: i64,
    departure: i64,
    buffer_width: f64,
) -> Result<Stay> {
    let members = &pts[start..end];
    let coords: Vec<PlanarPoint> = members.iter().map(|m| m.p).collect();
    let geometry = buffered_convex_hull(&coords, buffer_width)?;
    let centroid = geometry
        .centroid()
        .expect("buffered hull has positive area");
    Ok(Stay {
        id,
        geometry,
        points: members.to_vec(),
        point_range: (start, end),
        centroid,
        arrival,
        departure,
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::geo::LatLon;
    use crate::trajectory::{ingest, RawFix};

    pub(crate) const ORIGIN: LatLon = LatLon { lat: 0.0, lon: 0.0 };

    /// Builds a trajectory directly from planar meters (projected back to
    /// degrees around the 0,0 origin so ingest validation still applies).
    pub(crate) fn planar_trajectory(points: &[(i64, f64, f64)]) -> Trajectory {
        let fixes: Vec<RawFix> = points
            .iter()
            .map(|&(t, x, y)| {
                let ll = crate::geo::unproject(PlanarPoint::new(x, y), ORIGIN).unwrap();
                RawFix {
                    t,
                    lat: ll.lat,
                    lon: ll.lon,
                }
            })
            .collect();
        ingest(&fixes, Some(ORIGIN)).unwrap()
    }

    fn params(d_max: f64, t_min: i64) -> StayParams {
        StayParams {
            d_max,
            t_min,
            ..StayParams::default()
        }
    }

    /// Hand-traced instance: three points near the origin, a breakout at
    /// t=100 500 m away, and a trailing point giving the breakout tv=50.
    fn breakout_instance() -> Trajectory {
        planar_trajectory(&[
            (0, 0.0, 0.0),
            (30, 10.0, 0.0),
            (70, 0.0, 10.0),
            (100, 500.0, 0.0),
            (150, 500.0, 10.0),
        ])
    }

    #[test]
    fn twc_emits_stay_with_time_value_extended_departure() {
        let traj = breakout_instance();
        let stays = extract_stays_twc(&traj, &params(100.0, 60)).unwrap();
        assert_eq!(stays.len(), 1);
        let s = &stays[0];
        assert_eq!(s.point_range, (0, 3));
        assert_eq!(s.arrival, 0);
        // departure = t_j + tv_j = 100 + 50
        assert_eq!(s.departure, 150);
        assert!(s.departure - s.arrival >= 60);
        for tp in &s.points {
            assert!(s.geometry.contains_point(tp.p));
        }
    }

    #[test]
    fn refpoint_emits_same_members_with_raw_departure() {
        let traj = breakout_instance();
        let stays = extract_stays_reference_point(&traj, &params(100.0, 60)).unwrap();
        assert_eq!(stays.len(), 1);
        assert_eq!(stays[0].point_range, (0, 3));
        // departure = t_j without the breakout's time-value
        assert_eq!(stays[0].departure, 100);
    }

    #[test]
    fn twc_dwell_never_reaches_t_min() {
        // Two points 10 s apart then nothing within reach.
        let traj = planar_trajectory(&[(0, 0.0, 0.0), (10, 5.0, 0.0)]);
        let stays = extract_stays_twc(&traj, &params(100.0, 3600)).unwrap();
        assert!(stays.is_empty());
    }

    #[test]
    fn twc_single_point_stay_from_long_gap() {
        // Lone point whose successor is 2 h later and 5 km away.
        let traj = planar_trajectory(&[(0, 0.0, 0.0), (7200, 5000.0, 0.0)]);
        let stays = extract_stays_twc(&traj, &params(100.0, 3600)).unwrap();
        assert_eq!(stays.len(), 1);
        assert!(stays[0].is_single_point());
        assert_eq!(stays[0].point_range, (0, 1));
        assert_eq!((stays[0].arrival, stays[0].departure), (0, 7200));
    }

    #[test]
    fn baselines_cannot_emit_single_point_stays() {
        let traj = planar_trajectory(&[(0, 0.0, 0.0), (7200, 5000.0, 0.0)]);
        let p = params(100.0, 3600);
        assert!(extract_stays_reference_point(&traj, &p).unwrap().is_empty());
        assert!(extract_stays_diameter(&traj, &p).unwrap().is_empty());
    }

    #[test]
    fn refpoint_drifting_walk_emits_on_late_breakout() {
        // Points creep away from p0 but stay within d_max of it; the breakout
        // arrives after t_min has elapsed.
        let traj = planar_trajectory(&[
            (0, 0.0, 0.0),
            (50, 40.0, 0.0),
            (100, 80.0, 0.0),
            (150, 95.0, 0.0),
            (200, 300.0, 0.0),
            (210, 300.0, 5.0),
        ]);
        let stays = extract_stays_reference_point(&traj, &params(100.0, 120)).unwrap();
        assert_eq!(stays.len(), 1);
        assert_eq!(stays[0].point_range, (0, 4));
        assert_eq!((stays[0].arrival, stays[0].departure), (0, 200));
    }

    #[test]
    fn twc_out_of_radius_admission_is_counted() {
        // Breakout occurs before t_min: the far point joins the working set.
        let traj = planar_trajectory(&[
            (0, 0.0, 0.0),
            (10, 150.0, 0.0),
            (20, 150.0, 10.0),
            (5000, 4000.0, 0.0),
            (5010, 4000.0, 5.0),
        ]);
        let (_, diag) = extract_stays_twc_with_diagnostics(&traj, &params(100.0, 3600)).unwrap();
        assert!(diag.out_of_radius_admissions > 0);
    }

    #[test]
    fn diameter_three_close_points_form_one_window() {
        let traj = planar_trajectory(&[
            (0, 0.0, 0.0),
            (100, 30.0, 0.0),
            (200, 0.0, 40.0),
            (400, 1000.0, 0.0),
            (410, 1000.0, 5.0),
        ]);
        let stays = extract_stays_diameter(
            &traj,
            &StayParams {
                diam_max: 200.0,
                t_min: 300,
                ..StayParams::default()
            },
        )
        .unwrap();
        assert_eq!(stays.len(), 1);
        assert_eq!(stays[0].point_range, (0, 3));
    }

    #[test]
    fn diameter_collinear_points_window_capped_by_spacing() {
        // Collinear points spaced 150 m: any 3-point window has diameter 300.
        let traj = planar_trajectory(&[
            (0, 0.0, 0.0),
            (1000, 150.0, 0.0),
            (2000, 300.0, 0.0),
            (3000, 450.0, 0.0),
        ]);
        let stays = extract_stays_diameter(
            &traj,
            &StayParams {
                diam_max: 200.0,
                t_min: 500,
                ..StayParams::default()
            },
        )
        .unwrap();
        for s in &stays {
            assert!(s.point_count() <= 2);
        }
        // First window: {p0, p1}, breakout at p2 with dwell 2000 >= 500.
        assert_eq!(stays[0].point_range, (0, 2));
    }

    #[test]
    fn diameter_alternating_spots_break_every_window() {
        // Alternating between two spots 300 m apart with diam_max=200: no
        // window ever holds points from both spots.
        let traj = planar_trajectory(&[
            (0, 0.0, 0.0),
            (10, 300.0, 0.0),
            (20, 0.0, 0.5),
            (30, 300.0, 0.5),
            (40, 0.0, 1.0),
        ]);
        let stays = extract_stays_diameter(
            &traj,
            &StayParams {
                diam_max: 200.0,
                t_min: 5,
                ..StayParams::default()
            },
        )
        .unwrap();
        // Size-1 windows cannot become stays.
        assert!(stays.is_empty());
    }

    #[test]
    fn coincident_points_agree_across_methods() {
        // All points coincide with uniform gaps: every method emits the same
        // single stay once a breakout arrives.
        let mut pts: Vec<(i64, f64, f64)> = (0..5).map(|i| (i * 100, 0.0, 0.0)).collect();
        pts.push((500, 2000.0, 0.0));
        pts.push((600, 2000.0, 1.0));
        let traj = planar_trajectory(&pts);
        let p = params(100.0, 300);
        let twc = extract_stays_twc(&traj, &p).unwrap();
        let rp = extract_stays_reference_point(&traj, &p).unwrap();
        let dm = extract_stays_diameter(&traj, &p).unwrap();
        assert_eq!(twc.len(), 1);
        assert_eq!(rp.len(), 1);
        assert_eq!(dm.len(), 1);
        assert_eq!(twc[0].point_range, rp[0].point_range);
        assert_eq!(twc[0].point_range, dm[0].point_range);
        assert_eq!(twc[0].point_range, (0, 5));
    }

    #[test]
    fn stay_ranges_never_overlap_and_are_ordered() {
        let traj = planar_trajectory(&[
            (0, 0.0, 0.0),
            (2000, 10.0, 0.0),
            (4000, 0.0, 10.0),
            (4100, 800.0, 0.0),
            (6000, 810.0, 0.0),
            (8000, 800.0, 10.0),
            (8100, 1600.0, 0.0),
            (8200, 1600.0, 5.0),
        ]);
        for method in [
            StayMethod::Twc,
            StayMethod::ReferencePoint,
            StayMethod::Diameter,
        ] {
            let stays = extract_stays(&traj, &params(100.0, 1800), method).unwrap();
            for w in stays.windows(2) {
                assert!(w[0].point_range.1 <= w[1].point_range.0);
                assert!(w[0].arrival < w[1].arrival);
            }
            for s in &stays {
                assert!(s.departure - s.arrival >= 1800);
            }
        }
    }

    #[test]
    fn invalid_params_rejected() {
        let traj = planar_trajectory(&[(0, 0.0, 0.0)]);
        let bad = StayParams {
            d_max: 0.0,
            ..StayParams::default()
        };
        assert!(extract_stays_twc(&traj, &bad).is_err());
    }
}
