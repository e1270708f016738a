//! Trajectory data model: ingestion, validation, time-values, and centroids.
//!
//! A trajectory is an ordered sequence of time-stamped planar observations.
//! Timestamps must be strictly increasing; nothing downstream assumes a
//! constant sampling rate. Each point carries a *time-value*: the gap in
//! seconds to its successor, used as the weight of that point's evidence
//! about dwelling. The final point has no successor and gets time-value 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::{project, BoundingBox, LatLon, PlanarPoint};

/// A raw input record: epoch seconds plus WGS84 degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawFix {
    pub t: i64,
    pub lat: f64,
    pub lon: f64,
}

/// A projected observation. `tv` is the time-value in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackPoint {
    pub t: i64,
    pub p: PlanarPoint,
    pub tv: i64,
}

/// A validated, projected trajectory. Never empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    points: Vec<TrackPoint>,
    fixes: Vec<RawFix>,
    origin: LatLon,
}

impl Trajectory {
    pub fn points(&self) -> &[TrackPoint] {
        &self.points
    }

    /// The original lat/lon records, preserved verbatim for exact re-export.
    pub fn fixes(&self) -> &[RawFix] {
        &self.fixes
    }

    pub fn origin(&self) -> LatLon {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Minimum bounding rectangle over all points.
    pub fn mbr(&self) -> BoundingBox {
        BoundingBox::from_points(self.points.iter().map(|tp| tp.p))
            .expect("trajectory is never empty")
    }
}

/// Validates and projects raw records into a trajectory.
///
/// Records must arrive in strictly increasing timestamp order; unordered or
/// duplicate timestamps are rejected rather than repaired, since silent
/// re-sorting would mask upstream corruption. The projection origin defaults
/// to the centroid of the input fixes.
pub fn ingest(records: &[RawFix], origin: Option<LatLon>) -> Result<Trajectory> {
    if records.is_empty() {
        return Err(Error::EmptyInput {
            context: "trajectory ingest",
        });
    }
    for (i, r) in records.iter().enumerate() {
        if !LatLon::new(r.lat, r.lon).is_valid() {
            return Err(Error::CoordinateOutOfRange {
                index: i,
                lat: r.lat,
                lon: r.lon,
            });
        }
        if i > 0 {
            let prev = records[i - 1].t;
            if r.t == prev {
                return Err(Error::DuplicateTimestamp {
                    index: i,
                    timestamp: r.t,
                });
            }
            if r.t < prev {
                return Err(Error::NonMonotonicTimestamp {
                    index: i,
                    previous: prev,
                    current: r.t,
                });
            }
        }
    }

    let origin = origin.unwrap_or_else(|| {
        let n = records.len() as f64;
        LatLon::new(
            records.iter().map(|r| r.lat).sum::<f64>() / n,
            records.iter().map(|r| r.lon).sum::<f64>() / n,
        )
    });

    let mut points = Vec::with_capacity(records.len());
    for (i, r) in records.iter().enumerate() {
        let p = project(LatLon::new(r.lat, r.lon), origin).map_err(|e| match e {
            Error::CoordinateOutOfRange { lat, lon, .. } => {
                Error::CoordinateOutOfRange { index: i, lat, lon }
            }
            other => other,
        })?;
        points.push(TrackPoint { t: r.t, p, tv: 0 });
    }
    compute_time_values(&mut points);

    Ok(Trajectory {
        points,
        fixes: records.to_vec(),
        origin,
    })
}

/// Assigns each point the gap to its successor; the final point gets 0.
pub fn compute_time_values(points: &mut [TrackPoint]) {
    let n = points.len();
    for i in 0..n {
        points[i].tv = if i + 1 < n {
            points[i + 1].t - points[i].t
        } else {
            0
        };
    }
}

/// Arithmetic mean of the point coordinates.
pub fn centroid(points: &[TrackPoint]) -> Result<PlanarPoint> {
    if points.is_empty() {
        return Err(Error::EmptyInput {
            context: "centroid",
        });
    }
    let n = points.len() as f64;
    Ok(PlanarPoint::new(
        points.iter().map(|tp| tp.p.x).sum::<f64>() / n,
        points.iter().map(|tp| tp.p.y).sum::<f64>() / n,
    ))
}

/// Time-value-weighted mean of the point coordinates.
///
/// Falls back to the plain centroid when every weight is zero (a set holding
/// only the trajectory's final point).
pub fn time_weighted_centroid(points: &[TrackPoint]) -> Result<PlanarPoint> {
    if points.is_empty() {
        return Err(Error::EmptyInput {
            context: "time_weighted_centroid",
        });
    }
    let mut sum_w = 0.0;
    let mut sum_x = 0.0;
    let mut sum_y = 0.0;
    for tp in points {
        let w = tp.tv as f64;
        sum_w += w;
        sum_x += tp.p.x * w;
        sum_y += tp.p.y * w;
    }
    if sum_w <= 0.0 {
        return centroid(points);
    }
    Ok(PlanarPoint::new(sum_x / sum_w, sum_y / sum_w))
}
