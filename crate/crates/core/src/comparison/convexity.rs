//! Metric λ0-convexity probes at boundary foot points.
//!
//! A probe picks an interior `x`, its nearest boundary point `p` and
//! boundary points `q` with `|pq| = h, h/2, h/4`, and records the defect
//! ratio `(|pq| cos∠(px, pq) − (λ0/2)|pq|²) / |pq|²`. The remainder in the
//! definition is `o(|pq|²)`, so a probe passes when every ratio is at least
//! `−tol` and the negative part does not grow as the scale shrinks.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::formulas::cos_angle_from_sides;
use crate::error::{GeoError, Result};
use crate::metric::cover::sn;
use crate::metric::space::random_unit;
use crate::metric::{Point, Space, SpaceDescriptor};

pub const DEFAULT_SCALE: f64 = 1e-2;
pub const DEFAULT_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub probes: usize,
    pub lambda0: f64,
    pub scale: f64,
    pub tol: f64,
    /// Smallest defect ratio over all probes and scales.
    pub worst_ratio: f64,
    pub worst_probe: usize,
    pub failures: usize,
    pub pass: bool,
}

/// Rotate the unit vector `u` by `angle` towards a random direction.
fn rotate_random<R: Rng>(u: &[f64], angle: f64, rng: &mut R) -> Vec<f64> {
    loop {
        let w = random_unit(u.len(), rng);
        let c: f64 = w.iter().zip(u).map(|(a, b)| a * b).sum();
        let v: Vec<f64> = w.iter().zip(u).map(|(a, b)| a - c * b).collect();
        let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if n > 1e-6 {
            return u.iter().zip(&v).map(|(a, b)| angle.cos() * a + angle.sin() * b / n).collect();
        }
    }
}

/// `(x, p, [q_h, q_h/2, q_h/4])` for one probe; `k` is the curvature of the
/// constant-curvature region containing the triangles.
type Probe = (Point, Point, Vec<Point>);

fn cone_probe<R: Rng>(k: f64, rho: f64, r0: f64, scales: &[f64], rng: &mut R, base_dim: usize) -> Probe {
    let u = random_unit(base_dim + 1, rng);
    let tx = rng.random::<f64>() * 0.9 * r0 + 0.05 * r0;
    let x = Point::cone(tx, Point::sphere(u.clone()));
    let p = Point::cone(r0, Point::sphere(u.clone()));
    let qs = scales
        .iter()
        .map(|&h| {
            // |pq| = h on the boundary sphere: sin(β/2) = sn(h/2) / sn(r0)
            let beta = 2.0 * (sn(k, 0.5 * h) / sn(k, r0)).min(1.0).asin();
            Point::cone(r0, Point::sphere(rotate_random(&u, beta / rho, rng)))
        })
        .collect();
    (x, p, qs)
}

fn lens_probe<R: Rng>(space: &Space, alpha: f64, scales: &[f64], rng: &mut R) -> Option<Probe> {
    let x = space.sample(rng);
    let Point::Join { left, t, right } = &x else { return None };
    let (Point::Sphere { u: y }, Point::Interval { s }) = (left.as_ref(), right.as_ref()) else {
        return None;
    };
    if *t < 1e-3 || *s < 1e-3 || *s > alpha - 1e-3 {
        return None;
    }
    // use the face s = 0; the reflection s ↦ α − s is an isometry
    let s = s.min(alpha - s);
    let x = Point::join(Point::sphere(y.clone()), *t, Point::interval(s));
    let tp = (t.tan() * s.cos()).atan();
    // the face is the closed upper hemisphere {(cos τ·y, sin τ)} of S^{n−1}
    let mut pv: Vec<f64> = y.iter().map(|c| tp.cos() * c).collect();
    pv.push(tp.sin());
    let p = Point::join(Point::sphere(y.clone()), tp, Point::interval(0.0));
    let mut qs = Vec::new();
    for &h in scales {
        let mut qv = rotate_random(&pv, h, rng);
        if qv[qv.len() - 1] < 0.0 {
            return None;
        }
        let last = qv.pop().unwrap();
        let n = qv.iter().map(|a| a * a).sum::<f64>().sqrt();
        if n < 1e-9 {
            return None;
        }
        let yq: Vec<f64> = qv.iter().map(|a| a / n).collect();
        qs.push(Point::join(Point::sphere(yq), last.atan2(n), Point::interval(0.0)));
    }
    Some((x, p, qs))
}

/// Runs `probes` convexity probes on a model ball, a curvature-k cone over
/// a round sphere, or a lens.
pub fn convexity_check(
    desc: &SpaceDescriptor,
    lambda0: f64,
    probes: usize,
    scale: f64,
    seed: u64,
    tol: f64,
) -> Result<ConvexityReport> {
    let space = Space::from_descriptor(desc)?;
    if !space.has_boundary() {
        return Err(GeoError::Precondition("space has no boundary".into()));
    }
    if !(scale > 0.0) {
        return Err(GeoError::Domain(format!("probe scale must be positive, got {scale}")));
    }
    let scales = [scale, 0.5 * scale, 0.25 * scale];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lens = space.as_lens();
    let (k, mut make): (f64, Box<dyn FnMut(&mut ChaCha8Rng) -> Option<Probe>>) = if let Some((_, alpha)) = lens {
        if alpha > PI {
            return Err(GeoError::Unsupported("lens probes need α ≤ π".into()));
        }
        let sp = space.clone();
        (1.0, Box::new(move |r| lens_probe(&sp, alpha, &scales, r)))
    } else {
        match &space {
            Space::Cone { k, base, r0 } => match base.as_ref() {
                Space::Sphere { dim, radius } => {
                    let (k, rho, r0, dim) = (*k, *radius, *r0, *dim);
                    (k, Box::new(move |r| Some(cone_probe(k, rho, r0, &scales, r, dim))))
                }
                _ => return Err(GeoError::Unsupported("convexity probes need a cone over a round sphere".into())),
            },
            _ => {
                return Err(GeoError::Unsupported(format!(
                    "convexity probes on {} spaces",
                    space.kind_name()
                )))
            }
        }
    };
    let mut worst = (f64::INFINITY, 0);
    let mut failures = 0;
    let mut i = 0;
    while i < probes {
        let Some((x, p, qs)) = make(&mut rng) else { continue };
        let px = space.dist(&p, &x);
        let ratios: Vec<f64> = qs
            .iter()
            .map(|q| {
                let pq = space.dist(&p, q);
                let cos = cos_angle_from_sides(k, px, pq, space.dist(&x, q));
                (pq * cos - 0.5 * lambda0 * pq * pq) / (pq * pq)
            })
            .collect();
        let neg = |r: f64| r.min(0.0);
        let ok = ratios.iter().all(|&r| r >= -tol)
            && ratios.windows(2).all(|w| neg(w[1]) >= neg(w[0]) - tol);
        if !ok {
            failures += 1;
        }
        for &r in &ratios {
            if r < worst.0 {
                worst = (r, i);
            }
        }
        i += 1;
    }
    Ok(ConvexityReport {
        probes,
        lambda0,
        scale,
        tol,
        worst_ratio: worst.0,
        worst_probe: worst.1,
        failures,
        pass: failures == 0,
    })
}
