//! Monte-Carlo boundary volume from analytic boundary parameterizations.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};
use crate::metric::cover::sn;
use crate::metric::{Space, SpaceDescriptor};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Volume of the unit sphere `S^d`.
pub fn sphere_volume(d: usize) -> f64 {
    match d {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI / (d as f64 - 1.0) * sphere_volume(d - 2),
    }
}

/// Mean and standard error of `f(U)` with `U` uniform on `[lo, hi]`, scaled
/// by the interval length (Welford accumulation).
fn mc_integral<R: Rng>(rng: &mut R, samples: usize, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let (mut mean, mut m2) = (0.0, 0.0);
    for i in 0..samples {
        let x = f(lo + (hi - lo) * rng.random::<f64>());
        let delta = x - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (x - mean);
    }
    let var = if samples > 1 { m2 / (samples - 1) as f64 } else { 0.0 };
    let w = hi - lo;
    (w * mean, w * (var / samples as f64).sqrt())
}

/// Volume of a sphere `S^d(r)` as an integral over the polar angle, with
/// density `r^d sin^{d−1}θ · vol S^{d−1}`.
fn sphere_mc<R: Rng>(rng: &mut R, samples: usize, d: usize, r: f64) -> (f64, f64) {
    if d == 0 {
        return (2.0, 0.0);
    }
    let c = r.powi(d as i32) * sphere_volume(d - 1);
    mc_integral(rng, samples, 0.0, PI, |th| c * th.sin().powi(d as i32 - 1))
}

/// `(n−1)`-volume of the boundary of a lens, model ball or cone over a
/// round sphere, with standard error. Deterministic given `seed`.
pub fn boundary_volume(space: &SpaceDescriptor, samples: usize, seed: u64) -> Result<VolumeEstimate> {
    if samples == 0 {
        return Err(GeoError::Precondition("at least one sample is needed".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let compiled = Space::from_descriptor(space)?;
    if !compiled.has_boundary() {
        return Err(GeoError::Precondition("space has no boundary".into()));
    }
    let (value, stderr) = if let Some((n, _alpha)) = compiled.as_lens() {
        // each of the two congruent faces is {(x, t, endpoint)}, x ∈ S^{n−2},
        // t ∈ [0, π/2], with area element cos^{n−2}t dt dx
        let c = 2.0 * sphere_volume(n - 2);
        mc_integral(&mut rng, samples, 0.0, FRAC_PI_2, |t| c * t.cos().powi(n as i32 - 2))
    } else {
        match &compiled {
            Space::Cone { k, base, r0 } => match base.as_ref() {
                Space::Sphere { dim, radius } => {
                    // ∂C_k(S^d(ρ))(r0) is S^d(ρ) scaled by sn_k(r0)
                    sphere_mc(&mut rng, samples, *dim, radius * sn(*k, *r0))
                }
                _ => {
                    return Err(GeoError::Unsupported(
                        "boundary volume of a cone over a non-sphere base".into(),
                    ))
                }
            },
            _ => {
                return Err(GeoError::Unsupported(format!(
                    "no analytic boundary parameterization for {}",
                    compiled.kind_name()
                )))
            }
        }
    };
    Ok(VolumeEstimate { value, stderr, samples })
}
