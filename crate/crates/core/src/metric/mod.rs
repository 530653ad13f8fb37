//! Primitive spaces, point coordinates, ε-nets and metric audits.

pub mod audit;
pub mod cover;
pub mod descriptor;
pub mod ellipsoid;
pub mod net;
pub mod point;
pub mod primitives;
pub mod space;

pub use audit::{verify_metric, MetricAudit, METRIC_TOL};
pub use descriptor::SpaceDescriptor;
pub use ellipsoid::EllipsoidSurface;
pub use net::{epsilon_net, FiniteNet, NetMetadata};
pub use point::Point;
pub use primitives::{interval_distance, sphere_distance};
pub use space::Space;

use crate::error::Result;

/// Intrinsic distance between two points of the ellipsoid with semi-axes
/// `a, b, c`, using a surface graph of the given resolution.
pub fn ellipsoid_distance(p: [f64; 3], q: [f64; 3], a: f64, b: f64, c: f64, resolution: f64) -> Result<f64> {
    let e = EllipsoidSurface::new(a, b, c)?;
    e.check_point(&p)?;
    e.check_point(&q)?;
    let g = e.graph(resolution, 0)?;
    Ok(e.distance_in(&g, &p, &q))
}
