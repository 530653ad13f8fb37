use serde::{Deserialize, Serialize};

use crate::constructions::group::ActionSpec;

/// Algebraic description of a metric space, serialized as tagged JSON:
/// `{"kind":"join","left":{"kind":"sphere","dim":0,"radius":1.0},"right":{"kind":"interval","length":1.5707963}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceDescriptor {
    Sphere {
        dim: usize,
        radius: f64,
    },
    Interval {
        length: f64,
    },
    Ellipsoid {
        a: f64,
        b: f64,
        c: f64,
    },
    /// Alexandrov lens `L_α^n = S^{n−2}(1) * [−α/2, α/2]`.
    Lens {
        dim: usize,
        alpha: f64,
    },
    Join {
        left: Box<SpaceDescriptor>,
        right: Box<SpaceDescriptor>,
    },
    Cone {
        k: f64,
        base: Box<SpaceDescriptor>,
        r0: f64,
    },
    Suspension {
        base: Box<SpaceDescriptor>,
    },
    Quotient {
        base: Box<SpaceDescriptor>,
        action: ActionSpec,
    },
    /// Closed ball `B̄_k(r0)` in the `dim`-dimensional space form.
    ModelBall {
        k: f64,
        r0: f64,
        dim: usize,
    },
}

impl SpaceDescriptor {
    pub fn sphere(dim: usize, radius: f64) -> Self {
        Self::Sphere { dim, radius }
    }

    pub fn interval(length: f64) -> Self {
        Self::Interval { length }
    }

    pub fn lens(dim: usize, alpha: f64) -> Self {
        Self::Lens { dim, alpha }
    }

    pub fn join(left: SpaceDescriptor, right: SpaceDescriptor) -> Self {
        Self::Join {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn cone(k: f64, base: SpaceDescriptor, r0: f64) -> Self {
        Self::Cone {
            k,
            base: Box::new(base),
            r0,
        }
    }

    pub fn suspension(base: SpaceDescriptor) -> Self {
        Self::Suspension {
            base: Box::new(base),
        }
    }

    pub fn quotient(base: SpaceDescriptor, action: ActionSpec) -> Self {
        Self::Quotient {
            base: Box::new(base),
            action,
        }
    }

    pub fn model_ball(k: f64, r0: f64, dim: usize) -> Self {
        Self::ModelBall { k, r0, dim }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("descriptor serialization is infallible")
    }

    pub fn from_json(s: &str) -> crate::Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
