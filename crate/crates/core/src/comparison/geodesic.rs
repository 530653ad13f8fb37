//! Analytic unit-speed geodesics in model balls and cones, and the
//! distance to the boundary along them.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};
use crate::metric::space::random_unit;
use crate::metric::{Point, Space};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeodesicKind {
    /// Starts at the cone point and runs straight to the boundary.
    Radial,
    /// Starts at a random interior point in a random direction.
    Chord,
}

/// Distance from `p` to the boundary, for cones and lenses.
pub fn boundary_distance(space: &Space, p: &Point) -> Result<f64> {
    if let Some((_, alpha)) = space.as_lens() {
        let Point::Join { t, right, .. } = p else {
            return Err(GeoError::Domain(format!("{p:?} is not a lens point")));
        };
        let Point::Interval { s } = right.as_ref() else {
            return Err(GeoError::Domain(format!("{p:?} is not a lens point")));
        };
        // distance to a totally geodesic face through the edge
        let face = |s: f64| (t.sin() * s.min(PI).sin()).clamp(0.0, 1.0).asin();
        return Ok(face(*s).min(face(alpha - s)));
    }
    match (space, p) {
        (Space::Cone { r0, .. }, Point::Cone { t, .. }) => Ok((r0 - t).max(0.0)),
        (Space::Cone { .. }, _) => Err(GeoError::Domain(format!("{p:?} is not a cone point"))),
        _ if !space.has_boundary() => Err(GeoError::Precondition("space has no boundary".into())),
        _ => Err(GeoError::Unsupported(format!(
            "no analytic boundary distance on {} spaces",
            space.kind_name()
        ))),
    }
}

/// Points of the simply connected model space of curvature `k ∈ {−1, 0, 1}`
/// in ambient coordinates: the unit sphere, the plane, or the hyperboloid
/// `−x0² + |x|² = −1`.
struct Model {
    k: i8,
}

impl Model {
    fn minkowski(&self, a: &[f64], b: &[f64]) -> f64 {
        let s: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        if self.k < 0 {
            s - 2.0 * a[0] * b[0]
        } else {
            s
        }
    }

    /// `(t, u)` polar coordinates around the center to ambient coordinates.
    fn embed(&self, t: f64, u: &[f64]) -> Vec<f64> {
        let (c, s) = match self.k {
            1 => (t.cos(), t.sin()),
            0 => (1.0, t),
            _ => (t.cosh(), t.sinh()),
        };
        std::iter::once(c).chain(u.iter().map(|x| s * x)).collect()
    }

    fn polar(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let n = x[1..].iter().map(|a| a * a).sum::<f64>().sqrt();
        let t = match self.k {
            1 => n.atan2(x[0]),
            0 => n,
            _ => n.asinh(),
        };
        let mut u: Vec<f64> = x[1..].iter().map(|a| a / n).collect();
        if !(n > 0.0) {
            u = vec![0.0; x.len() - 1];
            u[0] = 1.0;
        }
        (t, u)
    }

    /// Point at arc length `s` along the geodesic from `x` with unit
    /// tangent `v`; in the flat case `x[0] = 1`, `v[0] = 0`.
    fn walk(&self, x: &[f64], v: &[f64], s: f64) -> Vec<f64> {
        let (c, sn) = match self.k {
            1 => (s.cos(), s.sin()),
            0 => (1.0, s),
            _ => (s.cosh(), s.sinh()),
        };
        x.iter().zip(v).map(|(a, b)| c * a + sn * b).collect()
    }

    /// Random unit tangent at `x`.
    fn tangent<R: Rng>(&self, x: &[f64], rng: &mut R) -> Vec<f64> {
        loop {
            let mut w = random_unit(x.len(), rng);
            if self.k == 0 {
                w[0] = 0.0;
            } else {
                let c = self.minkowski(&w, x) / self.minkowski(x, x);
                for (wi, xi) in w.iter_mut().zip(x) {
                    *wi -= c * xi;
                }
            }
            let n = self.minkowski(&w, &w);
            if n > 1e-6 {
                let n = n.sqrt();
                return w.iter().map(|a| a / n).collect();
            }
        }
    }
}

/// `(k, base dimension, base radius, r0)` for cones whose geodesics are
/// generated here: model balls, and curvature-k cones over circles.
fn cone_shape(space: &Space) -> Result<(i8, usize, f64, f64)> {
    if let Space::Cone { k, base, r0 } = space {
        if let Space::Sphere { dim, radius } = base.as_ref() {
            let kk = match *k {
                k if k == 1.0 => Some(1),
                k if k == 0.0 => Some(0),
                k if k == -1.0 => Some(-1),
                _ => None,
            };
            if let Some(kk) = kk {
                if *radius == 1.0 || *dim == 1 {
                    return Ok((kk, *dim, *radius, *r0));
                }
            }
        }
    }
    Err(GeoError::Unsupported(format!(
        "analytic geodesics need a model ball or a cone over a circle with k ∈ {{−1, 0, 1}}, got {}",
        space.kind_name()
    )))
}

/// Samples `count` geodesics with points `step` apart, each running until
/// the next sample would leave the space. Chords stay at least
/// `0.05·r0` away from the cone point so circle cones stay developable.
pub fn sample_geodesics(space: &Space, kind: GeodesicKind, count: usize, step: f64, seed: u64) -> Result<Vec<Vec<Point>>> {
    if !(step > 0.0) {
        return Err(GeoError::Domain(format!("step must be positive, got {step}")));
    }
    let (k, dim, rho, r0) = cone_shape(space)?;
    let model = Model { k };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let to_point = |t: f64, u: &[f64], phi: f64| {
        if dim == 1 {
            // development of the circle cone: azimuth φ ↦ base angle φ/ρ
            let th = phi / rho;
            Point::cone(t, Point::sphere(vec![th.cos(), th.sin()]))
        } else {
            Point::cone(t, Point::sphere(u.to_vec()))
        }
    };
    while out.len() < count {
        let u0 = random_unit(dim + 1, &mut rng);
        let (x0, v) = match kind {
            GeodesicKind::Radial => {
                let o = model.embed(0.0, &u0);
                let mut v = vec![0.0];
                v.extend(&u0);
                (o, v)
            }
            GeodesicKind::Chord => {
                let t0 = rng.random::<f64>() * 0.9 * r0 + 0.05 * r0;
                let x0 = model.embed(t0, &u0);
                let v = model.tangent(&x0, &mut rng);
                (x0, v)
            }
        };
        let mut path = Vec::new();
        let mut phi = u0[1].atan2(u0[0]) * if dim == 1 { 1.0 } else { 0.0 };
        let mut prev_az = phi;
        let mut ok = true;
        for i in 0.. {
            let x = model.walk(&x0, &v, i as f64 * step);
            let (t, u) = model.polar(&x);
            if t > r0 {
                break;
            }
            if kind == GeodesicKind::Chord && t < 0.05 * r0 {
                ok = false;
                break;
            }
            if dim == 1 {
                let az = u[1].atan2(u[0]);
                let mut d = az - prev_az;
                d = (d + PI).rem_euclid(2.0 * PI) - PI;
                phi += d;
                prev_az = az;
            }
            let u = if kind == GeodesicKind::Radial { u0.clone() } else { u };
            path.push(to_point(t, &u, if kind == GeodesicKind::Radial { u0[1].atan2(u0[0]) } else { phi }));
        }
        if ok && path.len() >= 3 {
            out.push(path);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::SpaceDescriptor;
    use std::f64::consts::FRAC_PI_2;

    fn space(d: SpaceDescriptor) -> Space {
        Space::from_descriptor(&d).unwrap()
    }

    #[test]
    fn geodesics_have_unit_speed() {
        for (d, kind) in [
            (SpaceDescriptor::model_ball(1.0, 0.8, 3), GeodesicKind::Chord),
            (SpaceDescriptor::model_ball(0.0, 1.0, 2), GeodesicKind::Chord),
            (SpaceDescriptor::model_ball(-1.0, 1.0, 2), GeodesicKind::Chord),
            (SpaceDescriptor::model_ball(-1.0, 1.0, 2), GeodesicKind::Radial),
            (SpaceDescriptor::cone(1.0, SpaceDescriptor::sphere(1, 0.75), FRAC_PI_2), GeodesicKind::Chord),
        ] {
            let s = space(d.clone());
            for path in sample_geodesics(&s, kind, 20, 0.01, 4).unwrap() {
                for w in path.windows(2) {
                    assert!((s.dist(&w[0], &w[1]) - 0.01).abs() < 1e-9, "{d:?}");
                }
                // minimizing over short spans
                let n = path.len().min(40);
                assert!((s.dist(&path[0], &path[n - 1]) - 0.01 * (n - 1) as f64).abs() < 1e-9, "{d:?}");
            }
        }
    }

    #[test]
    fn lens_boundary_distance() {
        let s = space(SpaceDescriptor::lens(2, PI));
        let pole = Point::join(Point::sphere(vec![1.0]), FRAC_PI_2, Point::interval(FRAC_PI_2));
        assert!((boundary_distance(&s, &pole).unwrap() - FRAC_PI_2).abs() < 1e-15);
        let s = space(SpaceDescriptor::lens(3, 1.0));
        let spine_mid = Point::join(Point::sphere(vec![1.0, 0.0]), FRAC_PI_2, Point::interval(0.5));
        assert!((boundary_distance(&s, &spine_mid).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn closed_space_has_no_boundary_distance() {
        let s = space(SpaceDescriptor::sphere(2, 1.0));
        assert!(matches!(
            boundary_distance(&s, &Point::sphere(vec![1.0, 0.0, 0.0])),
            Err(GeoError::Precondition(_))
        ));
    }
}
