use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geo::LatLon;

/// Metadata written next to every artifact: tool version, parameter echo,
/// projection origin, and content digests of the inputs the artifact was
/// derived from. Digest chaining lets later stages refuse artifacts built
/// from a different trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub tool: String,
    pub version: String,
    pub stage: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub origin: Option<LatLon>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cell_size: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric: Option<String>,
    /// Parameter echo, serialized verbatim into every output.
    #[serde(default)]
    pub params: BTreeMap<String, serde_json::Value>,
    /// role -> sha256 hex digest of the input file.
    #[serde(default)]
    pub inputs: BTreeMap<String, String>,
}

impl Sidecar {
    pub fn new(stage: &str, version: &str) -> Self {
        Self {
            tool: "goi".into(),
            version: version.into(),
            stage: stage.into(),
            origin: None,
            cell_size: None,
            metric: None,
            params: BTreeMap::new(),
            inputs: BTreeMap::new(),
        }
    }

    pub fn with_origin(mut self, origin: LatLon) -> Self {
        self.origin = Some(origin);
        self
    }

    pub fn with_param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(
            key.into(),
            serde_json::to_value(value).expect("serializable param"),
        );
        self
    }

    pub fn with_input(mut self, role: &str, digest: &str) -> Self {
        self.inputs.insert(role.into(), digest.into());
        self
    }

    pub fn save(&self, artifact: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(sidecar_path(artifact), text)?;
        Ok(())
    }

    pub fn load(artifact: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(sidecar_path(artifact))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// `<artifact>.meta.json`
pub fn sidecar_path(artifact: &Path) -> PathBuf {
    let mut name = artifact.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    artifact.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidecar_round_trip_is_byte_stable() {
        let dir = std::env::temp_dir().join("goi-sidecar-test");
        std::fs::create_dir_all(&dir).unwrap();
        let artifact = dir.join("stays.geojson");
        let sc = Sidecar::new("stays", "0.1.0")
            .with_origin(LatLon::new(61.0, -149.0))
            .with_param("d_max", 100.0)
            .with_input("trajectory", "abc123");
        sc.save(&artifact).unwrap();
        let loaded = Sidecar::load(&artifact).unwrap();
        assert_eq!(loaded, sc);
        let bytes_a = std::fs::read(sidecar_path(&artifact)).unwrap();
        loaded.save(&artifact).unwrap();
        let bytes_b = std::fs::read(sidecar_path(&artifact)).unwrap();
        assert_eq!(bytes_a, bytes_b);
    }
}
