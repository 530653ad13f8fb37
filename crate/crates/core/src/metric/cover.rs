//! Point sets covering a space to a prescribed resolution.
//!
//! Spheres use Fibonacci lattices (circles and higher spheres via joins),
//! intervals uniform grids, and composite spaces product sampling over a
//! latitude grid with per-row factor resolutions chosen from the haversine
//! form of the distance formula.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{GeoError, Result};
use crate::metric::{Point, Space};

/// Safety factor applied to the requested resolution.
const SHRINK: f64 = 0.98;
/// Fibonacci point count per unit of `area / θ²`.
const FIB_DENSITY: f64 = 0.6;

/// Sine-like function of the curvature-`k` plane.
pub fn sn(k: f64, t: f64) -> f64 {
    if k > 0.0 {
        let s = k.sqrt();
        (s * t).sin() / s
    } else if k < 0.0 {
        let s = (-k).sqrt();
        (s * t).sinh() / s
    } else {
        t
    }
}

fn grid(length: f64, step: f64) -> (usize, f64) {
    let n = (length / step).ceil().max(1.0) as usize;
    (n, length / n as f64)
}

fn sin_max(lo: f64, hi: f64) -> f64 {
    if lo <= FRAC_PI_2 && hi >= FRAC_PI_2 {
        1.0
    } else {
        lo.sin().max(hi.sin())
    }
}

/// A point whose distance to everything is at most the diameter bound.
pub fn anchor(space: &Space) -> Point {
    match space {
        Space::Sphere { dim, .. } => {
            let mut u = vec![0.0; dim + 1];
            u[0] = 1.0;
            Point::Sphere { u }
        }
        Space::Interval { length } => Point::Interval { s: 0.5 * length },
        Space::Ellipsoid(e) => Point::Ellipsoid { xyz: [e.a, 0.0, 0.0] },
        Space::Join(l, r) => Point::join(anchor(l), FRAC_PI_2 * 0.5, anchor(r)),
        Space::Cone { base, .. } => Point::cone(0.0, anchor(base)),
        Space::Suspension(b) => Point::suspension(FRAC_PI_2, anchor(b)),
        Space::Quotient { base, .. } => anchor(base),
    }
}

fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let rho = (1.0 - z * z).sqrt();
            let th = golden * i as f64;
            [rho * th.cos(), rho * th.sin(), z]
        })
        .collect()
}

fn fibonacci_count(theta: f64) -> usize {
    (FIB_DENSITY * 4.0 * PI / (theta * theta)).ceil().max(12.0) as usize
}

/// Closed upper hemisphere `{z ≥ 0}` covered to angle `theta`.
pub fn hemisphere(theta: f64) -> Vec<[f64; 3]> {
    fibonacci_sphere(fibonacci_count(theta))
        .into_iter()
        .filter(|p| p[2] >= -theta)
        .map(|p| [p[0], p[1], p[2].abs()])
        .collect()
}

/// Hopf section of `S³`: `(cos a, 0, sin a cos φ, sin a sin φ)`, covering
/// `S³/Z_m` when combined with the rotation by at most `π/m`.
pub fn hopf_section(theta: f64) -> Vec<Point> {
    hemisphere(theta)
        .into_iter()
        .map(|h| Point::Sphere { u: vec![h[2], 0.0, h[0], h[1]] })
        .collect()
}

fn hopf_section_resolution(space: &Space, eps: f64) -> Option<f64> {
    if let Space::Quotient { base, action } = space {
        if let (Some(m), Space::Sphere { dim: 3, radius }) = (action.hopf_order(), base.as_ref()) {
            let theta = (eps - PI * radius / m as f64) / radius;
            if theta * radius >= 0.5 * eps {
                return Some(theta);
            }
        }
    }
    None
}

/// Number of points `cover` will produce, computed without generating them.
pub fn count(space: &Space, eps: f64) -> f64 {
    if eps >= space.diameter_bound() {
        return 1.0;
    }
    match space {
        Space::Sphere { dim, radius } => {
            let theta = eps / radius;
            match dim {
                0 => 2.0,
                1 => (PI / theta).ceil().max(3.0),
                2 => fibonacci_count(theta) as f64,
                d => count(&sphere_as_join(*d), theta),
            }
        }
        Space::Interval { length } => (length / eps).ceil().max(2.0),
        Space::Ellipsoid(e) => e.estimated_nodes(eps) as f64,
        Space::Join(l, r) => join_rows(eps).map(|(_, a, b)| count_or_one(l, a) * count_or_one(r, b)).sum(),
        Space::Cone { k, base, r0 } => cone_rows(*k, *r0, eps).map(|(_, b)| count_or_one(base, b)).sum(),
        Space::Suspension(b) => suspension_rows(eps).map(|(_, r)| count_or_one(b, r)).sum(),
        Space::Quotient { base, .. } => match hopf_section_resolution(space, eps) {
            Some(theta) => hemisphere_count(theta),
            None => count(base, eps),
        },
    }
}

fn hemisphere_count(theta: f64) -> f64 {
    hemisphere(theta).len() as f64
}

fn count_or_one(space: &Space, res: Option<f64>) -> f64 {
    res.map_or(1.0, |r| count(space, r))
}

fn sphere_as_join(dim: usize) -> Space {
    Space::Join(
        Box::new(Space::Sphere { dim: 1, radius: 1.0 }),
        Box::new(Space::Sphere { dim: dim - 2, radius: 1.0 }),
    )
}

/// Latitude rows of a join net with the left and right factor resolutions
/// (`None` where the factor collapses).
fn join_rows(eps: f64) -> impl Iterator<Item = (f64, Option<f64>, Option<f64>)> {
    let e = SHRINK * eps;
    let (n, d) = grid(FRAC_PI_2, e);
    (0..=n).map(move |i| {
        let t = if i == n { FRAC_PI_2 } else { i as f64 * d };
        let lo = (t - 0.5 * d).max(0.0);
        let hi = (t + 0.5 * d).min(FRAC_PI_2);
        let wl = lo.cos() * t.cos();
        let wr = hi.sin() * t.sin();
        let a = (i < n).then(|| e * (0.375 / wl).sqrt());
        let b = (i > 0).then(|| e * (0.375 / wr).sqrt());
        (t, a, b)
    })
}

fn cone_rows(k: f64, r0: f64, eps: f64) -> impl Iterator<Item = (f64, Option<f64>)> {
    let e = SHRINK * eps;
    let (n, d) = grid(r0, e);
    (0..=n).map(move |i| {
        let t = if i == n { r0 } else { i as f64 * d };
        let hi = (t + 0.5 * d).min(r0);
        let w = sn(k, hi) * sn(k, t);
        (t, (i > 0).then(|| e * (0.75 / w).sqrt()))
    })
}

fn suspension_rows(eps: f64) -> impl Iterator<Item = (f64, Option<f64>)> {
    let e = SHRINK * eps;
    let (n, d) = grid(PI, e);
    (0..=n).map(move |i| {
        let s = if i == n { PI } else { i as f64 * d };
        let w = sin_max((s - 0.5 * d).max(0.0), (s + 0.5 * d).min(PI)) * s.sin();
        (s, (i > 0 && i < n).then(|| e * (0.75 / w).sqrt()))
    })
}

fn cover_or_anchor(space: &Space, res: Option<f64>, seed: u64) -> Result<Vec<Point>> {
    match res {
        Some(r) => cover(space, r, seed),
        None => Ok(vec![anchor(space)]),
    }
}

/// Points of `space` such that every point lies within `eps` of one of
/// them. Deterministic in `(space, eps, seed)`.
pub fn cover(space: &Space, eps: f64, seed: u64) -> Result<Vec<Point>> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(GeoError::Domain(format!("resolution must be positive, got {eps}")));
    }
    if eps >= space.diameter_bound() {
        return Ok(vec![anchor(space)]);
    }
    Ok(match space {
        Space::Sphere { dim, radius } => {
            let theta = eps / radius;
            match dim {
                0 => vec![Point::sphere(vec![1.0]), Point::sphere(vec![-1.0])],
                1 => {
                    let n = (PI / theta).ceil().max(3.0) as usize;
                    (0..n)
                        .map(|i| {
                            let a = 2.0 * PI * i as f64 / n as f64;
                            Point::sphere(vec![a.cos(), a.sin()])
                        })
                        .collect()
                }
                2 => fibonacci_sphere(fibonacci_count(theta))
                    .into_iter()
                    .map(|p| Point::sphere(p.to_vec()))
                    .collect(),
                d => cover(&sphere_as_join(*d), theta, seed)?
                    .into_iter()
                    .map(|p| match p {
                        Point::Join { left, t, right } => {
                            let (Point::Sphere { u: x }, Point::Sphere { u: y }) = (*left, *right) else {
                                unreachable!("sphere join factors are spheres")
                            };
                            let (s, c) = t.sin_cos();
                            let mut u: Vec<f64> = x.iter().map(|v| c * v).collect();
                            u.extend(y.iter().map(|v| s * v));
                            Point::Sphere { u }
                        }
                        _ => unreachable!("join cover yields join points"),
                    })
                    .collect(),
            }
        }
        Space::Interval { length } => {
            // spacing L/(n−1) ≤ 2ε, so the covering radius is at most ε
            let n = (length / eps).ceil().max(2.0) as usize;
            (0..n)
                .map(|i| Point::interval(if i == n - 1 { *length } else { length * i as f64 / (n - 1) as f64 }))
                .collect()
        }
        Space::Ellipsoid(e) => e
            .graph(eps, seed)?
            .nodes
            .iter()
            .map(|&xyz| Point::Ellipsoid { xyz })
            .collect(),
        Space::Join(l, r) => {
            let mut out = Vec::new();
            for (t, a, b) in join_rows(eps) {
                let xs = cover_or_anchor(l, a, seed)?;
                let ys = cover_or_anchor(r, b, seed)?;
                for x in &xs {
                    for y in &ys {
                        out.push(Point::join(x.clone(), t, y.clone()));
                    }
                }
            }
            out
        }
        Space::Cone { k, base, r0 } => {
            let mut out = Vec::new();
            for (t, b) in cone_rows(*k, *r0, eps) {
                for y in cover_or_anchor(base, b, seed)? {
                    out.push(Point::cone(t, y));
                }
            }
            out
        }
        Space::Suspension(base) => {
            let mut out = Vec::new();
            for (s, b) in suspension_rows(eps) {
                for y in cover_or_anchor(base, b, seed)? {
                    out.push(Point::suspension(s, y));
                }
            }
            out
        }
        Space::Quotient { base, .. } => match hopf_section_resolution(space, eps) {
            Some(theta) => hopf_section(theta),
            None => cover(base, eps, seed)?,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::SpaceDescriptor;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn covering_radius(space: &Space, pts: &[Point], probes: usize) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        (0..probes)
            .map(|_| {
                let x = space.sample(&mut rng);
                pts.iter().map(|p| space.dist(&x, p)).fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }

    fn check(desc: SpaceDescriptor, eps: f64) {
        let s = Space::from_descriptor(&desc).unwrap();
        let pts = cover(&s, eps, 0).unwrap();
        assert_eq!(pts.len() as f64, count(&s, eps), "count mismatch for {desc:?}");
        for p in &pts {
            s.validate_point(p).unwrap();
        }
        let r = covering_radius(&s, &pts, 3000);
        assert!(r <= eps, "{desc:?}: covering radius {r} > {eps}");
    }

    #[test]
    fn interval_grid() {
        let s = Space::Interval { length: PI };
        let pts = cover(&s, 0.1, 0).unwrap();
        assert_eq!(pts.len(), 32);
        assert_eq!(pts[0], Point::interval(0.0));
        assert_eq!(pts[31], Point::interval(PI));
    }

    #[test]
    fn spheres_are_covered() {
        check(SpaceDescriptor::sphere(1, 1.0), 0.1);
        check(SpaceDescriptor::sphere(2, 1.0), 0.2);
        check(SpaceDescriptor::sphere(2, 0.5), 0.1);
        check(SpaceDescriptor::sphere(3, 1.0), 0.3);
    }

    #[test]
    fn composites_are_covered() {
        check(SpaceDescriptor::lens(2, 1.0), 0.1);
        check(SpaceDescriptor::lens(3, 2.0), 0.25);
        check(SpaceDescriptor::model_ball(1.0, FRAC_PI_2, 2), 0.1);
        check(SpaceDescriptor::model_ball(-1.0, 1.0, 2), 0.1);
        check(SpaceDescriptor::model_ball(0.0, 1.0, 2), 0.1);
        check(SpaceDescriptor::suspension(SpaceDescriptor::sphere(1, 1.0)), 0.15);
        check(SpaceDescriptor::cone(1.0, SpaceDescriptor::sphere(1, 0.75), FRAC_PI_2), 0.1);
    }

    #[test]
    fn hopf_section_covers_the_quotient() {
        let base = Space::Sphere { dim: 3, radius: 1.0 };
        let g = crate::constructions::group::cyclic_approximation(&base, 64).unwrap();
        let q = Space::quotient(base, g);
        let pts = cover(&q, 0.2, 0).unwrap();
        assert!(covering_radius(&q, &pts, 2000) <= 0.2);
    }
}
