//! Extraction of stay regions, destination regions, and Geometries of
//! Interest (GOIs) from raw GPS trajectories.
//!
//! The pipeline has three phases:
//!
//! 1. [`stay`] — segment a trajectory into stay regions (buffered convex
//!    hulls of dwell point sets), via the time-weighted-centroid method or
//!    one of two baseline extractors.
//! 2. [`destination`] — merge recurring stay regions into destination
//!    regions, via geometric-similarity agglomerative clustering, OPTICS, or
//!    diameter-based merging.
//! 3. [`partition`] — tessellate the trajectory's bounding rectangle into a
//!    fine micro-grid, carve per-destination GOIs out of it, and fill the
//!    rest with unit cells, yielding a valid (disjoint, covering) partition.
//!
//! [`svl`] turns a partitioned area plus a trajectory into a time-stamped
//! Sequence of Visited Locations by geometric intersection (with a
//! nearest-neighbor baseline), and [`eval`] provides the geometric-similarity
//! metric, summary statistics, a seeded synthetic scenario generator, and
//! brute-force oracles used by the test suites.

pub mod destination;
pub mod error;
pub mod eval;
pub mod geo;
pub mod io;
pub mod partition;
pub mod stay;
pub mod svl;
pub mod trajectory;

pub use error::{Error, Result};
