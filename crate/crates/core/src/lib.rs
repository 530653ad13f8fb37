//! Metric constructions from Alexandrov geometry with curvature bounded
//! below, together with numerical estimators of their invariants.
//!
//! The crate is split the way the workbench is used:
//!
//! - [`metric`]: primitive spaces, points, ε-nets and metric audits.
//! - [`constructions`]: spherical joins, curvature-k cones, suspensions,
//!   lenses, doubles and finite quotients.
//! - [`invariants`]: radius, diameter, soul, edge, spine, dual pairs and
//!   boundary volume on finite nets.
//! - [`comparison`]: model convexity functions, Riccati integration,
//!   λ₀-convexity probes, comparison traces and hinge comparison.
//! - [`harness`]: the example catalogue and JSON reporting used by the CLI.

pub mod comparison;
pub mod constructions;
pub mod error;
pub mod harness;
pub mod invariants;
pub mod metric;

pub use error::{GeoError, Result};
pub use metric::{FiniteNet, Point, Space, SpaceDescriptor};
