//! File formats for every pipeline artifact.
//!
//! GeoJSON geometries are written in the local planar frame (meters east and
//! north of the projection origin); the accompanying sidecar records the
//! origin, so coordinates stay bit-exact through save/load cycles and
//! downstream tools can georeference when needed. Floats serialize via the
//! shortest round-trip representation, making re-runs byte-identical.

mod csv_io;
mod geojson_io;
mod sidecar;

pub use csv_io::{
    read_trajectory_csv, write_stay_manifest_csv, write_svl_csv, write_svl_jsonl,
    write_trajectory_csv,
};
pub use geojson_io::{
    load_destinations, load_final_grid, load_ground_truth, load_stays, save_destinations,
    save_final_grid, save_ground_truth, save_stays,
};
pub use sidecar::{sidecar_path, Sidecar};
