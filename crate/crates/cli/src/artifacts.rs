//! Artifact plumbing: content digests, trajectory loading with a consistent
//! projection origin, and the digest chain that ties every stage to one
//! trajectory.

use std::path::Path;

use anyhow::{Context, Result};
use sha2::{Digest, Sha256};

use goi_core::geo::LatLon;
use goi_core::io::{read_trajectory_csv, Sidecar};
use goi_core::trajectory::{ingest, Trajectory};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn file_digest(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Loads and projects a trajectory CSV.
///
/// The projection origin must agree across stages, so the priority is:
/// an explicit override (from the sidecar of the artifact being consumed),
/// then the trajectory's own sidecar, then the mean of the input fixes.
pub fn load_trajectory(path: &Path, origin_override: Option<LatLon>) -> Result<Trajectory> {
    let fixes = read_trajectory_csv(path)
        .with_context(|| format!("reading trajectory {}", path.display()))?;
    let origin = origin_override.or_else(|| Sidecar::load(path).ok().and_then(|sc| sc.origin));
    Ok(ingest(&fixes, origin)?)
}

/// Verifies that `sidecar` was derived from the trajectory at `traj_path`.
pub fn verify_trajectory_digest(
    sidecar: &Sidecar,
    traj_path: &Path,
    artifact: &Path,
) -> Result<String> {
    let actual = file_digest(traj_path)?;
    match sidecar.inputs.get("trajectory") {
        Some(expected) if *expected != actual => Err(goi_core::Error::StageMismatch {
            role: format!("trajectory (consumed by {})", artifact.display()),
            expected: expected.clone(),
            actual,
        }
        .into()),
        _ => Ok(actual),
    }
}
