//! Half-perimeter of an ellipse and the semi-axis that makes it `π/2`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{domain, GeoError, Result};

/// Lower and upper ends of the bisection bracket for `a`.
pub const BRACKET: (f64, f64) = (1.0 / 3.0, 0.75);

fn simpson(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
}

#[allow(clippy::too_many_arguments)]
fn adapt(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64, m: f64, fm: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let (lm, flm, left) = simpson(f, a, fa, m, fm);
    let (rm, frm, right) = simpson(f, m, fm, b, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
        + adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(&f, a, fa, b, fb);
    adapt(&f, a, fa, b, fb, m, fm, whole, tol, 48)
}

/// `(1/2)∫₀^{2π} √(a² sin²θ + c² cos²θ) dθ`, the length of the arc from
/// `(a, 0)` to `(−a, 0)`.
pub fn half_perimeter(a: f64, c: f64) -> Result<f64> {
    if !(a > 0.0 && c > 0.0) || !a.is_finite() || !c.is_finite() {
        return domain(format!("semi-axes must be positive, got a = {a}, c = {c}"));
    }
    let f = |th: f64| {
        let (s, co) = th.sin_cos();
        (a * a * s * s + c * c * co * co).sqrt()
    };
    // the integrand is symmetric about π/2
    Ok(2.0 * integrate(f, 0.0, FRAC_PI_2, 1e-14))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseSolution {
    pub a: f64,
    pub half_perimeter: f64,
    pub iterations: usize,
    /// Smallest Gaussian curvature `c²/(a²b²)` of the ellipsoid.
    pub min_curvature: f64,
}

/// Bisection for `half_perimeter(a, c) = π/2` on `a ∈ (1/3, 3/4)`.
pub fn solve_ellipse_parameter(b: f64, c: f64, tol: f64) -> Result<EllipseSolution> {
    if !(tol > 0.0) {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    let g = |a: f64| half_perimeter(a, c).map(|h| h - FRAC_PI_2);
    let (mut lo, mut hi) = BRACKET;
    let (glo, ghi) = (g(lo)?, g(hi)?);
    if !(glo < 0.0 && ghi > 0.0) {
        return Err(GeoError::Bracket(format!(
            "half-perimeter minus π/2 is {glo:e} at a = {lo} and {ghi:e} at a = {hi}; no sign change"
        )));
    }
    let mut iterations = 0;
    let mut mid = 0.5 * (lo + hi);
    let mut gm = g(mid)?;
    while gm.abs() > tol && hi - lo > 4.0 * f64::EPSILON {
        if gm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        mid = 0.5 * (lo + hi);
        gm = g(mid)?;
        iterations += 1;
    }
    Ok(EllipseSolution {
        a: mid,
        half_perimeter: gm + FRAC_PI_2,
        iterations,
        min_curvature: c * c / (mid * mid * b * b),
    })
}

/// The estimate `π(a + c)/2 < half-perimeter < 2(a + c)`.
pub fn perimeter_bounds(a: f64, c: f64) -> (f64, f64) {
    (0.5 * PI * (a + c), 2.0 * (a + c))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Half-perimeter from the arithmetic-geometric mean:
    /// `2a E(e)` with `E(e) = K(e)(1 − Σ 2^{n−1} c_n²)`.
    fn agm_half_perimeter(a: f64, c: f64) -> f64 {
        let (big, small) = if a >= c { (a, c) } else { (c, a) };
        let mut x = 1.0;
        let mut y = small / big;
        let e2 = 1.0 - y * y;
        let mut sum = 0.5 * e2;
        let mut pow = 0.5;
        for _ in 0..40 {
            let cn = 0.5 * (x - y);
            let (nx, ny) = (0.5 * (x + y), (x * y).sqrt());
            x = nx;
            y = ny;
            pow *= 2.0;
            sum += pow * cn * cn;
        }
        let k = PI / (2.0 * x);
        2.0 * big * k * (1.0 - sum)
    }

    #[test]
    fn quadrature_matches_agm() {
        for (a, c) in [(0.6, 0.25), (1.0 / 3.0, 0.25), (0.75, 0.25), (2.0, 0.1), (0.3, 0.9)] {
            let q = half_perimeter(a, c).unwrap();
            let o = agm_half_perimeter(a, c);
            assert!((q - o).abs() < 1e-12, "{a}, {c}: {q} vs {o}");
        }
    }

    #[test]
    fn circle_is_degenerate() {
        assert!((half_perimeter(0.25, 0.25).unwrap() - PI * 0.25).abs() < 1e-14);
    }

    #[test]
    fn bracket_ends_straddle_the_target() {
        assert!(half_perimeter(BRACKET.0, 0.25).unwrap() < FRAC_PI_2);
        assert!(half_perimeter(BRACKET.1, 0.25).unwrap() > FRAC_PI_2);
    }

    #[test]
    fn solution_is_inside_the_bracket() {
        let s = solve_ellipse_parameter(1.0 / 3.0, 0.25, 1e-12).unwrap();
        assert!(s.a > BRACKET.0 && s.a < BRACKET.1);
        assert!((half_perimeter(s.a, 0.25).unwrap() - FRAC_PI_2).abs() <= 1e-12);
        assert!((agm_half_perimeter(s.a, 0.25) - FRAC_PI_2).abs() <= 1e-11);
        assert!(s.min_curvature >= 1.0);
        let (lo, hi) = perimeter_bounds(s.a, 0.25);
        assert!(lo < s.half_perimeter && s.half_perimeter < hi);
    }

    #[test]
    fn missing_sign_change_is_a_bracket_error() {
        assert!(matches!(solve_ellipse_parameter(1.0 / 3.0, 1.0, 1e-10), Err(GeoError::Bracket(_))));
        assert!(matches!(solve_ellipse_parameter(1.0 / 3.0, 0.25, 0.0), Err(GeoError::Domain(_))));
    }
}
