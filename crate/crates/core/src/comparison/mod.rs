//! Model convexity functions, Riccati integration, λ0-convexity probes,
//! comparison traces and hinge comparison.

pub mod convexity;
pub mod geodesic;
pub mod hinge;
pub mod model;
pub mod trace;

pub use convexity::{convexity_check, ConvexityReport};
pub use geodesic::{boundary_distance, sample_geodesics, GeodesicKind};
pub use hinge::{hinge_audit, hinge_comparison, HingeAudit};
pub use model::{
    fbar, focal_radius, model_lambda, model_lambda0, model_phi, psi, riccati_integrate, rigidity_value,
};
pub use trace::{comparison_trace, ComparisonTrace};
