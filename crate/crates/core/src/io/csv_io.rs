use std::path::Path;

use crate::error::{Error, Result};
use crate::stay::Stay;
use crate::svl::SvlEntry;
use crate::trajectory::RawFix;

/// Reads `t,lat,lon` records: integer epoch seconds and decimal degrees.
/// `#`-prefixed lines are comments; a header line is detected by a
/// non-numeric first field. Parse failures name the offending line.
pub fn read_trajectory_csv(path: &Path) -> Result<Vec<RawFix>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)?;

    let mut fixes = Vec::new();
    let mut first = true;
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        if first {
            first = false;
            // Header line: first field does not parse as a timestamp.
            if record.get(0).is_some_and(|f| f.parse::<i64>().is_err()) {
                continue;
            }
        }
        if record.len() < 3 {
            return Err(Error::Parse {
                line,
                message: format!("expected `t,lat,lon`, found {} fields", record.len()),
            });
        }
        let field = |i: usize| record.get(i).unwrap_or("");
        let t: i64 = field(0).parse().map_err(|_| Error::Parse {
            line,
            message: format!("bad timestamp `{}`", field(0)),
        })?;
        let lat: f64 = field(1).parse().map_err(|_| Error::Parse {
            line,
            message: format!("bad latitude `{}`", field(1)),
        })?;
        let lon: f64 = field(2).parse().map_err(|_| Error::Parse {
            line,
            message: format!("bad longitude `{}`", field(2)),
        })?;
        fixes.push(RawFix { t, lat, lon });
    }
    Ok(fixes)
}

/// Writes `t,lat,lon` with a header. Floats use the shortest round-trip
/// form, so saving a loaded file is byte-identical.
pub fn write_trajectory_csv(path: &Path, fixes: &[RawFix]) -> Result<()> {
    let mut out = String::from("t,lat,lon\n");
    for f in fixes {
        out.push_str(&format!("{},{},{}\n", f.t, f.lat, f.lon));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Stay manifest: id, arrival, departure, point count, and geometry centroid.
pub fn write_stay_manifest_csv(path: &Path, stays: &[Stay]) -> Result<()> {
    let mut out = String::from("id,at,dt,point_count,centroid_x,centroid_y\n");
    for s in stays {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            s.id,
            s.arrival,
            s.departure,
            s.point_count(),
            s.centroid.x,
            s.centroid.y
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// SVL as `t,label,kind`.
pub fn write_svl_csv(path: &Path, entries: &[SvlEntry]) -> Result<()> {
    let mut out = String::from("t,label,kind\n");
    for e in entries {
        out.push_str(&format!("{},{},{}\n", e.t, e.label, e.kind.name()));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// SVL as JSON lines, one entry per line.
pub fn write_svl_jsonl(path: &Path, entries: &[SvlEntry]) -> Result<()> {
    let mut out = String::new();
    for e in entries {
        out.push_str(&serde_json::to_string(e)?);
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}
