//! Lenses, the join-with-interval double, and brute-force quotient distance.

use std::f64::consts::PI;

use crate::constructions::group::Isometry;
use crate::error::{domain, GeoError, Result};
use crate::metric::{Point, Space, SpaceDescriptor};

fn lens_space(n: usize, alpha: f64) -> Result<Space> {
    Space::from_descriptor(&SpaceDescriptor::lens(n, alpha))
}

/// Distance in `L_α^n = S^{n−2}(1) * [0, α]`, the interval coordinate
/// measured from one face.
pub fn lens_distance(n: usize, alpha: f64, p: &Point, q: &Point) -> Result<f64> {
    lens_space(n, alpha)?.distance(p, q)
}

/// Image of a lens point in the unit sphere `S^n ⊂ R^{n+1}`: the edge
/// `S^{n−2}` sits in the first `n − 1` coordinates and the interval
/// coordinate `s` becomes the angle `s − α/2` in the last plane.
pub fn lens_embedding(alpha: f64, p: &Point) -> Result<Vec<f64>> {
    let Point::Join { left, t, right } = p else {
        return domain(format!("{p:?} is not a lens point"));
    };
    let (Point::Sphere { u: x }, Point::Interval { s }) = (left.as_ref(), right.as_ref()) else {
        return domain(format!("{p:?} is not a lens point"));
    };
    let (st, ct) = t.sin_cos();
    let phi = s - 0.5 * alpha;
    let mut v: Vec<f64> = x.iter().map(|c| ct * c).collect();
    v.push(st * phi.cos());
    v.push(st * phi.sin());
    Ok(v)
}

/// `D(A * [0, L]) = A * S¹(L/π)`; also `D([0, L]) = S¹(L/π)` and
/// `D(L_α^n) = S^{n−2}(1) * S¹(α/π)`.
pub fn double_join(space: &SpaceDescriptor) -> Result<SpaceDescriptor> {
    let circle = |l: f64| SpaceDescriptor::sphere(1, l / PI);
    match space {
        SpaceDescriptor::Interval { length } => Ok(circle(*length)),
        SpaceDescriptor::Lens { dim, alpha } => {
            Ok(SpaceDescriptor::join(SpaceDescriptor::sphere(dim - 2, 1.0), circle(*alpha)))
        }
        SpaceDescriptor::Join { left, right } => match right.as_ref() {
            SpaceDescriptor::Interval { length } => Ok(SpaceDescriptor::join(left.as_ref().clone(), circle(*length))),
            other => Err(GeoError::Unsupported(format!(
                "doubling needs an interval right factor, got {other:?}"
            ))),
        },
        other => Err(GeoError::Unsupported(format!(
            "doubling is only implemented for joins with an interval, got {other:?}"
        ))),
    }
}

/// Image of a point of `A * [0, L]` (or of `[0, L]`) in its double, as the
/// fundamental domain `{θ ∈ [0, π]}` of the circle factor.
pub fn double_point(p: &Point, length: f64) -> Result<Point> {
    match p {
        Point::Interval { s } => {
            let th = s * PI / length;
            Ok(Point::sphere(vec![th.cos(), th.sin()]))
        }
        Point::Join { left, t, right } => Ok(Point::join(left.as_ref().clone(), *t, double_point(right, length)?)),
        _ => domain(format!("{p:?} has no interval coordinate to double")),
    }
}

/// `min_g d(x, g·y)` over an explicit element list.
pub fn quotient_distance(base: &Space, elements: &[Isometry], x: &Point, y: &Point) -> Result<f64> {
    if elements.is_empty() {
        return Err(GeoError::Construction("quotient by an empty element list".into()));
    }
    base.validate_point(x)?;
    base.validate_point(y)?;
    Ok(elements
        .iter()
        .map(|g| base.dist(x, &g.apply(y)))
        .fold(f64::INFINITY, f64::min))
}
