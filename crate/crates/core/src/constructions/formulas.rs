//! Closed-form distances of the composite constructions.
//!
//! All formulas are evaluated in haversine form, `sin²(d/2) = …`, which is
//! algebraically identical to the cosine laws but keeps full precision for
//! nearby points.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{domain, Result};
use crate::metric::primitives::{angle_from_haversine, clamp_recorded, sin_half_sq};

const LAT_TOL: f64 = 1e-12;

fn check_latitude(t: f64, hi: f64, what: &str) -> Result<f64> {
    if !t.is_finite() || t < -LAT_TOL || t > hi + LAT_TOL {
        return domain(format!("{what} {t} outside [0, {hi}]"));
    }
    Ok(t.clamp(0.0, hi))
}

/// Join distance from latitudes and factor distances, without validation.
///
/// `cos|pq| = cos t1 cos t2 cos a + sin t1 sin t2 cos b`, with the factor
/// distances `a`, `b` clamped at π.
#[inline]
pub fn join_formula(t1: f64, t2: f64, a: f64, b: f64) -> f64 {
    let h = sin_half_sq(t1 - t2)
        + t1.cos() * t2.cos() * sin_half_sq(a.min(PI))
        + t1.sin() * t2.sin() * sin_half_sq(b.min(PI));
    angle_from_haversine(h)
}

/// Spherical join distance between `(x1, t1, y1)` and `(x2, t2, y2)` given
/// `left = |x1 x2|` and `right = |y1 y2|`.
pub fn join_distance(t1: f64, t2: f64, left: f64, right: f64) -> Result<f64> {
    let t1 = check_latitude(t1, FRAC_PI_2, "join latitude")?;
    let t2 = check_latitude(t2, FRAC_PI_2, "join latitude")?;
    if !(left >= 0.0) || !(right >= 0.0) {
        return domain(format!("factor distances must be non-negative, got {left}, {right}"));
    }
    Ok(join_formula(t1, t2, left, right))
}

/// Suspension distance, without validation. `s` is the polar angle from the
/// first pole.
#[inline]
pub fn suspension_formula(s1: f64, s2: f64, base: f64) -> f64 {
    angle_from_haversine(sin_half_sq(s1 - s2) + s1.sin() * s2.sin() * sin_half_sq(base.min(PI)))
}

/// Distance in `Σ₁Y = {0, π} * Y` between `(s1, y1)` and `(s2, y2)`.
pub fn suspension_distance(s1: f64, s2: f64, base: f64) -> Result<f64> {
    let s1 = check_latitude(s1, PI, "suspension coordinate")?;
    let s2 = check_latitude(s2, PI, "suspension coordinate")?;
    if !(base >= 0.0) {
        return domain(format!("base distance must be non-negative, got {base}"));
    }
    Ok(suspension_formula(s1, s2, base))
}

/// Side opposite the angle `gamma` in a hinge with sides `a`, `b` in the
/// simply connected plane of constant curvature `k`. Unchecked.
pub fn law_of_cosines(k: f64, a: f64, b: f64, gamma: f64) -> f64 {
    let g = sin_half_sq(gamma);
    if k > 0.0 {
        let s = k.sqrt();
        let h = sin_half_sq(s * (a - b)) + (s * a).sin() * (s * b).sin() * g;
        angle_from_haversine(h) / s
    } else if k < 0.0 {
        let s = (-k).sqrt();
        let half = (0.5 * s * (a - b)).sinh();
        let h = half * half + (s * a).sinh() * (s * b).sinh() * g;
        2.0 * h.max(0.0).sqrt().asinh() / s
    } else {
        let d2 = (a - b) * (a - b) + 4.0 * a * b * g;
        d2.max(0.0).sqrt()
    }
}

/// Largest admissible cone radius for curvature `k` (`∞` when `k ≤ 0`).
pub fn max_cone_radius(k: f64) -> f64 {
    if k > 0.0 {
        FRAC_PI_2 / k.sqrt()
    } else {
        f64::INFINITY
    }
}

/// Distance in the curvature-`k` cone `C_k(Y)(r0)` between `(t0, y0)` and
/// `(t1, y1)` with `base = |y0 y1|`. The hinge angle is `min(base, π)`.
pub fn cone_distance(k: f64, t0: f64, t1: f64, base: f64, r0: f64) -> Result<f64> {
    if !(r0 > 0.0) || !r0.is_finite() {
        return Err(crate::GeoError::Construction(format!(
            "cone radius must be positive and finite, got {r0}"
        )));
    }
    if r0 > max_cone_radius(k) * (1.0 + 1e-12) {
        return Err(crate::GeoError::Construction(format!(
            "cone radius {r0} exceeds π/(2√k) = {} for k = {k}",
            max_cone_radius(k)
        )));
    }
    let t0 = check_latitude(t0, r0, "cone radial coordinate")?;
    let t1 = check_latitude(t1, r0, "cone radial coordinate")?;
    if !(base >= 0.0) {
        return domain(format!("base distance must be non-negative, got {base}"));
    }
    Ok(law_of_cosines(k, t0, t1, base.min(PI)))
}

/// Cosine of the angle at the vertex with adjacent sides `a`, `b` and
/// opposite side `c` in the curvature-`k` plane.
pub fn cos_angle_from_sides(k: f64, a: f64, b: f64, c: f64) -> f64 {
    let cos = if k > 0.0 {
        let s = k.sqrt();
        ((s * c).cos() - (s * a).cos() * (s * b).cos()) / ((s * a).sin() * (s * b).sin())
    } else if k < 0.0 {
        let s = (-k).sqrt();
        ((s * a).cosh() * (s * b).cosh() - (s * c).cosh()) / ((s * a).sinh() * (s * b).sinh())
    } else {
        (a * a + b * b - c * c) / (2.0 * a * b)
    };
    clamp_recorded(cos, -1.0, 1.0)
}
