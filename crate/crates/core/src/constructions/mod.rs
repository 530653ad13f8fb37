//! Composite metrics: joins, curvature-k cones, suspensions, lenses,
//! doubles and finite quotients.

pub mod formulas;
pub mod group;
pub mod lens;

pub use formulas::{cone_distance, join_distance, law_of_cosines, suspension_distance};
pub use group::{cyclic_approximation, ActionSpec, GroupAction, Isometry};
pub use lens::{double_join, lens_distance, lens_embedding, quotient_distance};
