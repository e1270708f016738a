use std::path::Path;

use geojson::{Feature, FeatureCollection, GeoJson, Geometry, GeometryValue, JsonObject};
use serde_json::json;

use crate::destination::Destination;
use crate::error::{Error, Result};
use crate::eval::GroundTruth;
use crate::geo::{BoundingBox, Region};
use crate::partition::{AssignMetric, CellKind, FinalGrid, GridCell};
use crate::stay::Stay;
use crate::trajectory::Trajectory;

use super::Sidecar;

fn region_to_geometry(region: &Region) -> Geometry {
    let rings_of = |poly: &geo::Polygon<f64>| -> Vec<Vec<(f64, f64)>> {
        std::iter::once(poly.exterior())
            .chain(poly.interiors())
            .map(|ring| ring.0.iter().map(|c| (c.x, c.y)).collect())
            .collect()
    };
    let polys: Vec<Vec<Vec<(f64, f64)>>> = region.polygons().map(rings_of).collect();
    if polys.len() == 1 {
        Geometry::new(GeometryValue::new_polygon(
            polys.into_iter().next().unwrap(),
        ))
    } else {
        Geometry::new(GeometryValue::new_multi_polygon(polys))
    }
}

fn geometry_to_region(geometry: &Geometry) -> Result<Region> {
    let ring_to_coords = |ring: &Vec<geojson::Position>| -> Result<Vec<geo::Coord<f64>>> {
        ring.iter()
            .map(|pos| {
                let s = pos.as_slice();
                if s.len() < 2 {
                    return Err(malformed("geometry", "position with fewer than 2 values"));
                }
                Ok(geo::Coord { x: s[0], y: s[1] })
            })
            .collect()
    };
    let poly_from = |rings: &Vec<Vec<geojson::Position>>| -> Result<geo::Polygon<f64>> {
        if rings.is_empty() {
            return Err(malformed("geometry", "polygon without rings"));
        }
        let exterior = geo::LineString(ring_to_coords(&rings[0])?);
        let holes = rings[1..]
            .iter()
            .map(|r| Ok(geo::LineString(ring_to_coords(r)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(geo::Polygon::new(exterior, holes))
    };
    match &geometry.value {
        GeometryValue::Polygon { coordinates } => Ok(Region::from_polygon(poly_from(coordinates)?)),
        GeometryValue::MultiPolygon { coordinates } => {
            let parts = coordinates
                .iter()
                .map(poly_from)
                .collect::<Result<Vec<_>>>()?;
            Ok(Region::from_multi_polygon(geo::MultiPolygon::new(parts)))
        }
        other => Err(malformed(
            "geometry",
            &format!("expected (Multi)Polygon, found {}", other.type_name()),
        )),
    }
}

fn malformed(kind: &'static str, message: &str) -> Error {
    Error::MalformedArtifact {
        kind,
        message: message.into(),
    }
}

fn write_collection(path: &Path, fc: FeatureCollection, sidecar: &Sidecar) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&GeoJson::from(fc))?;
    text.push('\n');
    std::fs::write(path, text)?;
    sidecar.save(path)
}

fn read_collection(path: &Path, kind: &'static str) -> Result<FeatureCollection> {
    let text = std::fs::read_to_string(path)?;
    let geojson: GeoJson = text.parse().map_err(|e| Error::GeoJson(Box::new(e)))?;
    match geojson {
        GeoJson::FeatureCollection(fc) => Ok(fc),
        _ => Err(malformed(kind, "expected a FeatureCollection")),
    }
}

fn prop_u64(props: &JsonObject, key: &str, kind: &'static str) -> Result<u64> {
    props
        .get(key)
        .and_then(|v| v.as_u64())
        .ok_or_else(|| malformed(kind, &format!("missing integer property `{key}`")))
}

fn prop_i64(props: &JsonObject, key: &str, kind: &'static str) -> Result<i64> {
    props
        .get(key)
        .and_then(|v| v.as_i64())
        .ok_or_else(|| malformed(kind, &format!("missing integer property `{key}`")))
}

fn prop_range(props: &JsonObject, key: &str, kind: &'static str) -> Result<(usize, usize)> {
    let arr = props
        .get(key)
        .and_then(|v| v.as_array())
        .ok_or_else(|| malformed(kind, &format!("missing range property `{key}`")))?;
    match (
        arr.first().and_then(|v| v.as_u64()),
        arr.get(1).and_then(|v| v.as_u64()),
    ) {
        (Some(a), Some(b)) if arr.len() == 2 && a <= b => Ok((a as usize, b as usize)),
        _ => Err(malformed(
            kind,
            &format!("malformed range property `{key}`"),
        )),
    }
}

/// One polygon feature per stay. `point_range` indexes into the source
/// trajectory so later stages can reconstitute the member points.
pub fn save_stays(path: &Path, stays: &[Stay], sidecar: &Sidecar) -> Result<()> {
    let features = stays
        .iter()
        .map(|s| {
            let mut props = JsonObject::new();
            props.insert("id".into(), json!(s.id));
            props.insert("at".into(), json!(s.arrival));
            props.insert("dt".into(), json!(s.departure));
            props.insert("point_count".into(), json!(s.point_count()));
            props.insert(
                "point_range".into(),
                json!([s.point_range.0, s.point_range.1]),
            );
            Feature {
                bbox: None,
                geometry: Some(region_to_geometry(&s.geometry)),
                id: None,
                properties: Some(props),
                foreign_members: None,
            }
        })
        .collect();
    write_collection(
        path,
        FeatureCollection {
            bbox: None,
            features,
            foreign_members: None,
        },
        sidecar,
    )
}

/// Loads stays, reconstituting member points from `traj` by index range.
pub fn load_stays(path: &Path, traj: &Trajectory) -> Result<(Vec<Stay>, Sidecar)> {
    let fc = read_collection(path, "stays")?;
    let mut stays = Vec::with_capacity(fc.features.len());
    for feature in &fc.features {
        let props = feature
            .properties
            .as_ref()
            .ok_or_else(|| malformed("stays", "feature without properties"))?;
        let geometry = feature
            .geometry
            .as_ref()
            .ok_or_else(|| malformed("stays", "feature without geometry"))?;
        let (start, end) = prop_range(props, "point_range", "stays")?;
        if end > traj.len() || start >= end {
            return Err(malformed("stays", "point_range outside trajectory"));
        }
        let geometry = geometry_to_region(geometry)?;
        stays.push(Stay {
            id: prop_u64(props, "id", "stays")?,
            centroid: geometry
                .centroid()
                .ok_or_else(|| malformed("stays", "empty geometry"))?,
            geometry,
            points: traj.points()[start..end].to_vec(),
            point_range: (start, end),
            arrival: prop_i64(props, "at", "stays")?,
            departure: prop_i64(props, "dt", "stays")?,
        });
    }
    Ok((stays, Sidecar::load(path)?))
}

/// One feature per destination; `method` and a compact parameter echo ride
/// along as properties, member ranges allow point reconstitution.
pub fn save_destinations(
    path: &Path,
    dests: &[Destination],
    method: &str,
    params: serde_json::Value,
    sidecar: &Sidecar,
) -> Result<()> {
    let features = dests
        .iter()
        .map(|d| {
            let mut props = JsonObject::new();
            props.insert("id".into(), json!(d.id));
            props.insert("frequency".into(), json!(d.frequency));
            props.insert("method".into(), json!(method));
            props.insert("params".into(), params.clone());
            props.insert("member_stays".into(), json!(d.member_stays));
            let ranges: Vec<Vec<usize>> = d.point_ranges.iter().map(|&(a, b)| vec![a, b]).collect();
            props.insert("point_ranges".into(), json!(ranges));
            Feature {
                bbox: None,
                geometry: Some(region_to_geometry(&d.geometry)),
                id: None,
                properties: Some(props),
                foreign_members: None,
            }
        })
        .collect();
    write_collection(
        path,
        FeatureCollection {
            bbox: None,
            features,
            foreign_members: None,
        },
        sidecar,
    )
}

pub fn load_destinations(path: &Path, traj: &Trajectory) -> Result<(Vec<Destination>, Sidecar)> {
    let fc = read_collection(path, "destinations")?;
    let mut dests = Vec::with_capacity(fc.features.len());
    for feature in &fc.features {
        let props = feature
            .properties
            .as_ref()
            .ok_or_else(|| malformed("destinations", "feature without properties"))?;
        let geometry = feature
            .geometry
            .as_ref()
            .ok_or_else(|| malformed("destinations", "feature without geometry"))?;
        let ranges_json = props
            .get("point_ranges")
            .and_then(|v| v.as_array())
            .ok_or_else(|| malformed("destinations", "missing `point_ranges`"))?;
        let mut point_ranges = Vec::with_capacity(ranges_json.len());
        let mut points = Vec::new();
        for r in ranges_json {
            let pair = r
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| malformed("destinations", "malformed point range"))?;
            let (a, b) = (
                pair[0].as_u64().unwrap_or(u64::MAX) as usize,
                pair[1].as_u64().unwrap_or(0) as usize,
            );
            if a >= b || b > traj.len() {
                return Err(malformed("destinations", "point range outside trajectory"));
            }
            point_ranges.push((a, b));
            points.extend_from_slice(&traj.points()[a..b]);
        }
        let member_stays: Vec<u64> = props
            .get("member_stays")
            .and_then(|v| v.as_array())
            .map(|a| a.iter().filter_map(|v| v.as_u64()).collect())
            .ok_or_else(|| malformed("destinations", "missing `member_stays`"))?;
        dests.push(Destination {
            id: prop_u64(props, "id", "destinations")?,
            geometry: geometry_to_region(geometry)?,
            points,
            frequency: prop_u64(props, "frequency", "destinations")? as u32,
            member_stays,
            point_ranges,
        });
    }
    Ok((dests, Sidecar::load(path)?))
}

/// One feature per final-grid cell (GOIs and fillers). The sidecar must carry
/// the grid's cell size and metric for exact reloads.
pub fn save_final_grid(path: &Path, grid: &FinalGrid, sidecar: &Sidecar) -> Result<()> {
    let mut sidecar = sidecar.clone();
    sidecar.cell_size = Some(grid.cell_size());
    sidecar.metric = Some(grid.metric().name().into());
    let bb = grid.bbox();
    let features = grid
        .cells()
        .iter()
        .map(|c| {
            let mut props = JsonObject::new();
            props.insert("id".into(), json!(c.id));
            props.insert("kind".into(), json!(kind_name(c.kind)));
            match c.source_destination {
                Some(d) => props.insert("source_destination".into(), json!(d)),
                None => props.insert("source_destination".into(), serde_json::Value::Null),
            };
            Feature {
                bbox: None,
                geometry: Some(region_to_geometry(&c.geometry)),
                id: None,
                properties: Some(props),
                foreign_members: None,
            }
        })
        .collect();
    write_collection(
        path,
        FeatureCollection {
            bbox: Some(vec![bb.min_x, bb.min_y, bb.max_x, bb.max_y]),
            features,
            foreign_members: None,
        },
        &sidecar,
    )
}

pub fn load_final_grid(path: &Path) -> Result<(FinalGrid, Sidecar)> {
    let fc = read_collection(path, "grid")?;
    let sidecar = Sidecar::load(path)?;
    let bbox = fc
        .bbox
        .as_ref()
        .filter(|b| b.len() == 4)
        .map(|b| BoundingBox::new(b[0], b[1], b[2], b[3]))
        .ok_or_else(|| malformed("grid", "missing collection bbox"))?;
    let cell_size = sidecar
        .cell_size
        .ok_or_else(|| malformed("grid", "sidecar missing cell_size"))?;
    let metric: AssignMetric = sidecar
        .metric
        .as_deref()
        .ok_or_else(|| malformed("grid", "sidecar missing metric"))?
        .parse()?;

    let mut cells = Vec::with_capacity(fc.features.len());
    for feature in &fc.features {
        let props = feature
            .properties
            .as_ref()
            .ok_or_else(|| malformed("grid", "feature without properties"))?;
        let geometry = feature
            .geometry
            .as_ref()
            .ok_or_else(|| malformed("grid", "feature without geometry"))?;
        let kind = match props.get("kind").and_then(|v| v.as_str()) {
            Some("goi") => CellKind::Goi,
            Some("filler") => CellKind::Filler,
            _ => return Err(malformed("grid", "missing or unknown `kind`")),
        };
        let geometry = geometry_to_region(geometry)?;
        let rect = if kind == CellKind::Filler {
            geometry.envelope()
        } else {
            None
        };
        cells.push(GridCell {
            id: prop_u64(props, "id", "grid")?,
            geometry,
            rect,
            kind,
            source_destination: props.get("source_destination").and_then(|v| v.as_u64()),
        });
    }
    Ok((
        FinalGrid::from_cells(cells, bbox, cell_size, metric),
        sidecar,
    ))
}

fn kind_name(kind: CellKind) -> &'static str {
    match kind {
        CellKind::Goi => "goi",
        CellKind::Filler => "filler",
    }
}

/// Ground-truth GOIs, one feature per region.
pub fn save_ground_truth(path: &Path, truth: &GroundTruth, sidecar: &Sidecar) -> Result<()> {
    let features = truth
        .gois()
        .iter()
        .map(|(id, region)| {
            let mut props = JsonObject::new();
            props.insert("id".into(), json!(id));
            Feature {
                bbox: None,
                geometry: Some(region_to_geometry(region)),
                id: None,
                properties: Some(props),
                foreign_members: None,
            }
        })
        .collect();
    write_collection(
        path,
        FeatureCollection {
            bbox: None,
            features,
            foreign_members: None,
        },
        sidecar,
    )
}

pub fn load_ground_truth(path: &Path) -> Result<(GroundTruth, Sidecar)> {
    let fc = read_collection(path, "truth")?;
    let mut gois = Vec::with_capacity(fc.features.len());
    for feature in &fc.features {
        let props = feature
            .properties
            .as_ref()
            .ok_or_else(|| malformed("truth", "feature without properties"))?;
        let geometry = feature
            .geometry
            .as_ref()
            .ok_or_else(|| malformed("truth", "feature without geometry"))?;
        gois.push((
            prop_u64(props, "id", "truth")?,
            geometry_to_region(geometry)?,
        ));
    }
    Ok((GroundTruth::new(gois)?, Sidecar::load(path)?))
}
