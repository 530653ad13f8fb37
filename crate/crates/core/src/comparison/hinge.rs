//! Toponogov hinge comparison and sampled hinge audits.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::{law_of_cosines, lens_embedding};
use crate::error::{domain, GeoError, Result};
use crate::metric::primitives::unit_angle;
use crate::metric::{Point, Space, SpaceDescriptor};

/// Side opposite the angle `gamma` of a hinge with sides `a`, `b` in the
/// model plane of curvature `k`.
pub fn hinge_comparison(k: f64, a: f64, b: f64, gamma: f64) -> Result<f64> {
    if !(a >= 0.0 && b >= 0.0) || !a.is_finite() || !b.is_finite() {
        return domain(format!("hinge sides must be finite and non-negative, got {a}, {b}"));
    }
    if !(0.0..=PI).contains(&gamma) {
        return domain(format!("hinge angle must lie in [0, π], got {gamma}"));
    }
    if !k.is_finite() {
        return domain(format!("curvature must be finite, got {k}"));
    }
    if k > 0.0 {
        let cap = PI / k.sqrt();
        if a > cap || b > cap {
            return domain(format!("hinge sides {a}, {b} exceed π/√k = {cap}"));
        }
    }
    Ok(law_of_cosines(k, a, b, gamma))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HingeAudit {
    pub hinges: usize,
    /// `max(|xy| − model side)`, possibly negative.
    pub max_excess: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Unit tangent at `p` of the great circle towards `x`, both unit vectors.
fn tangent(p: &[f64], x: &[f64]) -> Option<Vec<f64>> {
    let c: f64 = p.iter().zip(x).map(|(a, b)| a * b).sum();
    let v: Vec<f64> = x.iter().zip(p).map(|(xi, pi)| xi - c * pi).collect();
    let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    (n > 1e-12).then(|| v.iter().map(|a| a / n).collect())
}

fn angle_between(a: Option<Vec<f64>>, b: Option<Vec<f64>>) -> Option<f64> {
    Some(unit_angle(&a?, &b?))
}

/// Hinge angle at `p` between minimal geodesics to `x` and `y`, for the
/// spaces where geodesics are explicit.
fn hinge_angle(space: &Space, p: &Point, x: &Point, y: &Point) -> Result<Option<f64>> {
    if let Some((_, alpha)) = space.as_lens() {
        let (p, x, y) = (lens_embedding(alpha, p)?, lens_embedding(alpha, x)?, lens_embedding(alpha, y)?);
        return Ok(angle_between(tangent(&p, &x), tangent(&p, &y)));
    }
    match (space, p, x, y) {
        (Space::Sphere { .. }, Point::Sphere { u: p }, Point::Sphere { u: x }, Point::Sphere { u: y }) => {
            Ok(angle_between(tangent(p, x), tangent(p, y)))
        }
        (Space::Cone { k, base, .. }, Point::Cone { t: tp, base: bp }, Point::Cone { t: tx, base: bx }, Point::Cone { t: ty, base: by })
            if *k == 1.0 =>
        {
            let Space::Sphere { dim: 1, radius } = base.as_ref() else {
                return Err(GeoError::Unsupported("hinge angles on cones need a circle base".into()));
            };
            let az = |b: &Point| match b {
                Point::Sphere { u } => u[1].atan2(u[0]),
                _ => 0.0,
            };
            if *tp == 0.0 {
                return Ok((*tx > 0.0 && *ty > 0.0).then(|| (radius * unit_angle_of(bx, by)).min(PI)));
            }
            // develop onto the unit sphere with p on the zero meridian; the
            // circumference 2πρ ≤ 2π keeps every short arc inside one sheet
            let develop = |t: f64, b: &Point| {
                let mut d = az(b) - az(bp);
                d = (d + PI).rem_euclid(2.0 * PI) - PI;
                let phi = radius * d;
                vec![t.sin() * phi.cos(), t.sin() * phi.sin(), t.cos()]
            };
            let pp = develop(*tp, bp);
            Ok(angle_between(tangent(&pp, &develop(*tx, bx)), tangent(&pp, &develop(*ty, by))))
        }
        _ => Err(GeoError::Unsupported(format!("hinge angles on {} spaces", space.kind_name()))),
    }
}

fn unit_angle_of(a: &Point, b: &Point) -> f64 {
    match (a, b) {
        (Point::Sphere { u }, Point::Sphere { u: v }) => unit_angle(u, v),
        _ => 0.0,
    }
}

/// Samples `hinges` random hinges `(p; x, y)` and checks
/// `|xy| ≤ hinge_comparison(k, |px|, |py|, ∠xpy) + tol`.
///
/// Supported spaces: round spheres, lenses and curvature-1 cones over
/// circles.
pub fn hinge_audit(desc: &SpaceDescriptor, k: f64, hinges: usize, seed: u64, tol: f64) -> Result<HingeAudit> {
    let space = Space::from_descriptor(desc)?;
    if let Space::Cone { base, .. } = &space {
        if let Space::Sphere { dim: 1, radius } = base.as_ref() {
            if *radius > 1.0 {
                return Err(GeoError::Precondition("a cone over a circle longer than 2π has curvature below 1".into()));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_excess = f64::NEG_INFINITY;
    let mut done = 0;
    while done < hinges {
        let (p, x, y) = (space.sample(&mut rng), space.sample(&mut rng), space.sample(&mut rng));
        let Some(gamma) = hinge_angle(&space, &p, &x, &y)? else {
            continue;
        };
        let a = space.dist(&p, &x);
        let b = space.dist(&p, &y);
        let model = hinge_comparison(k, a, b, gamma.min(PI))?;
        max_excess = max_excess.max(space.dist(&x, &y) - model);
        done += 1;
    }
    Ok(HingeAudit { hinges, max_excess, tol, pass: hinges == 0 || max_excess <= tol })
}
