use serde::{Deserialize, Serialize};

use super::PlanarPoint;
use crate::error::{Error, Result};

/// IERS mean Earth radius, meters.
pub const EARTH_RADIUS_M: f64 = 6_371_008.8;

/// A WGS84 position in decimal degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatLon {
    pub lat: f64,
    pub lon: f64,
}

impl LatLon {
    pub fn new(lat: f64, lon: f64) -> Self {
        Self { lat, lon }
    }

    pub fn is_valid(&self) -> bool {
        self.lat.is_finite()
            && self.lon.is_finite()
            && self.lat.abs() <= 90.0
            && self.lon.abs() <= 180.0
    }
}

/// Local equirectangular projection around `origin`.
///
/// x = R * cos(origin_lat) * dlon, y = R * dlat (angles in radians). Adequate
/// for the tens-of-kilometers extents of a single object's trajectory, and
/// exactly invertible via [`unproject`].
pub fn project(fix: LatLon, origin: LatLon) -> Result<PlanarPoint> {
    if !fix.is_valid() {
        return Err(Error::CoordinateOutOfRange {
            index: 0,
            lat: fix.lat,
            lon: fix.lon,
        });
    }
    let k = origin_scale(origin)?;
    Ok(PlanarPoint::new(
        k * (fix.lon - origin.lon).to_radians(),
        EARTH_RADIUS_M * (fix.lat - origin.lat).to_radians(),
    ))
}

/// Inverse of [`project`].
pub fn unproject(p: PlanarPoint, origin: LatLon) -> Result<LatLon> {
    let k = origin_scale(origin)?;
    Ok(LatLon::new(
        origin.lat + (p.y / EARTH_RADIUS_M).to_degrees(),
        origin.lon + (p.x / k).to_degrees(),
    ))
}

fn origin_scale(origin: LatLon) -> Result<f64> {
    if !origin.is_valid() {
        return Err(Error::CoordinateOutOfRange {
            index: 0,
            lat: origin.lat,
            lon: origin.lon,
        });
    }
    let k = EARTH_RADIUS_M * origin.lat.to_radians().cos();
    // A near-polar origin collapses the east axis and the inverse blows up.
    if k < 1.0 {
        return Err(Error::OriginNearPole { lat: origin.lat });
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const ORIGIN: LatLon = LatLon {
        lat: 61.2181,
        lon: -149.8903,
    };

    #[test]
    fn origin_maps_to_origin() {
        let p = project(ORIGIN, ORIGIN).unwrap();
        assert_eq!((p.x, p.y), (0.0, 0.0));
    }

    #[test]
    fn pure_north_displacement() {
        let p = project(LatLon::new(ORIGIN.lat + 0.01, ORIGIN.lon), ORIGIN).unwrap();
        assert_eq!(p.x, 0.0);
        // R * 0.01 deg in radians, evaluated with 30-digit arithmetic.
        assert_abs_diff_eq!(p.y, 1111.950802335329, epsilon = 1e-6);
    }

    #[test]
    fn west_displacement_at_anchorage_latitude() {
        // 0.01 degrees west of the origin at lat 61.2181; expected value from a
        // high-precision evaluation of R*cos(lat)*dlon.
        let p = project(LatLon::new(61.2181, -149.9003), ORIGIN).unwrap();
        assert_abs_diff_eq!(p.x, -535.378537151424, epsilon = 1e-6);
        assert_eq!(p.y, 0.0);
    }

    #[test]
    fn round_trip_city_scale() {
        for (dlat, dlon) in [(0.05, -0.12), (-0.2, 0.3), (0.0, 0.0), (0.3, 0.3)] {
            let fix = LatLon::new(ORIGIN.lat + dlat, ORIGIN.lon + dlon);
            let back = unproject(project(fix, ORIGIN).unwrap(), ORIGIN).unwrap();
            assert_abs_diff_eq!(back.lat, fix.lat, epsilon = 1e-6);
            assert_abs_diff_eq!(back.lon, fix.lon, epsilon = 1e-6);
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(project(LatLon::new(91.0, 0.0), ORIGIN).is_err());
        assert!(project(LatLon::new(0.0, 180.5), ORIGIN).is_err());
        assert!(project(LatLon::new(0.0, 0.0), LatLon::new(90.0, 0.0)).is_err());
    }
}
