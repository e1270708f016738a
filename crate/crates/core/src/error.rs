use thiserror::Error;

/// Errors produced by trajectory ingestion, geometry operations, and the
/// extraction pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("record {index}: coordinate out of range (lat={lat}, lon={lon})")]
    CoordinateOutOfRange { index: usize, lat: f64, lon: f64 },

    #[error("projection origin too close to a pole (lat={lat})")]
    OriginNearPole { lat: f64 },

    #[error("record {index}: timestamp {current} is not after {previous}")]
    NonMonotonicTimestamp {
        index: usize,
        previous: i64,
        current: i64,
    },

    #[error("record {index}: duplicate timestamp {timestamp}")]
    DuplicateTimestamp { index: usize, timestamp: i64 },

    #[error("{context}: input is empty")]
    EmptyInput { context: &'static str },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid parameter {name}: {message}")]
    InvalidParameter { name: &'static str, message: String },

    #[error("jaccard undefined: both regions have zero area")]
    ZeroAreaJaccard,

    #[error("cannot assign grid cells: no destinations")]
    NoDestinations,

    #[error("grid would have {cells} cells (limit {limit}); increase cell size")]
    GridTooFine { cells: u128, limit: u128 },

    #[error("degenerate bounding box: {0}")]
    DegenerateBbox(String),

    #[error("trajectory point {index} lies outside the grid bounding box")]
    PointOutsideGrid { index: usize },

    #[error("scenario placement infeasible after {attempts} attempts")]
    InfeasiblePlacement { attempts: usize },

    #[error("oracle size guard: {size} points exceeds limit {limit}")]
    OracleSizeGuard { size: usize, limit: usize },

    #[error("artifact mismatch for {role}: expected digest {expected}, found {actual}")]
    StageMismatch {
        role: String,
        expected: String,
        actual: String,
    },

    #[error("malformed {kind} artifact: {message}")]
    MalformedArtifact { kind: &'static str, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("geojson: {0}")]
    GeoJson(#[from] Box<geojson::Error>),
}

pub type Result<T> = std::result::Result<T, Error>;
