//! Closed forms for the model convexity functions and their ODEs.
//!
//! With `r` the distance to the boundary of the model ball `B̄_k(r0)`:
//!
//! - `λ` solves `λ' + λ² = −k`, `λ(0) = −λ0`;
//! - `φ` solves `φ'' + kφ = −λ0`, `φ(0) = 0`, `φ'(0) = 1`;
//! - `f̄` solves `f̄'' + k f̄ = −λ0` with arbitrary initial data;
//! - `ψ` solves `ψ'' + kψ = 1`, `ψ(0) = ψ'(0) = 0`.

use crate::error::{domain, GeoError, Result};
use crate::metric::cover::sn;

/// Threshold on `|λ|` that counts as a blow-up.
pub const BLOW_UP: f64 = 1e6;

fn canonical(k: f64) -> Result<i8> {
    match k {
        k if k == 0.0 => Ok(0),
        k if k == 1.0 => Ok(1),
        k if k == -1.0 => Ok(-1),
        _ => domain(format!("closed forms are available for k ∈ {{−1, 0, 1}}, got {k}")),
    }
}

/// Cosine-like function of the curvature-`k` plane.
pub fn cs(k: f64, t: f64) -> f64 {
    if k > 0.0 {
        (k.sqrt() * t).cos()
    } else if k < 0.0 {
        ((-k).sqrt() * t).cosh()
    } else {
        1.0
    }
}

/// Boundary principal curvature `λ0(r0, k)` of the model ball.
pub fn model_lambda0(k: f64, r0: f64) -> Result<f64> {
    if !(r0 > 0.0) {
        return domain(format!("ball radius must be positive, got {r0}"));
    }
    match canonical(k)? {
        0 => Ok(1.0 / r0),
        1 if r0 < std::f64::consts::PI => Ok(1.0 / r0.tan()),
        1 => domain(format!("spherical ball radius must be below π, got {r0}")),
        _ => Ok(1.0 / r0.tanh()),
    }
}

/// Depth `r0` at which `λ` blows up, or `None` when the solution exists
/// for all `r ≥ 0`.
pub fn focal_radius(k: f64, lambda0: f64) -> Result<Option<f64>> {
    Ok(match canonical(k)? {
        0 => (lambda0 > 0.0).then(|| 1.0 / lambda0),
        1 => Some(std::f64::consts::FRAC_PI_2 - lambda0.atan()),
        _ => (lambda0 > 1.0).then(|| (1.0 / lambda0).atanh()),
    })
}

/// Closed-form `λ(r)`.
pub fn model_lambda(k: f64, lambda0: f64, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return domain(format!("depth must be non-negative, got {r}"));
    }
    if let Some(r0) = focal_radius(k, lambda0)? {
        if r >= r0 {
            return domain(format!("depth {r} is at or beyond the focal radius {r0}"));
        }
    }
    Ok(match canonical(k)? {
        0 => lambda0 / (lambda0 * r - 1.0),
        1 => {
            let r0 = std::f64::consts::FRAC_PI_2 - lambda0.atan();
            1.0 / (r - r0).tan()
        }
        _ => {
            if lambda0 == 1.0 {
                -1.0
            } else if lambda0.abs() < 1.0 {
                (r - lambda0.atanh()).tanh()
            } else {
                1.0 / (r - (1.0 / lambda0).atanh()).tanh()
            }
        }
    })
}

/// Closed-form `φ(r)`.
pub fn model_phi(k: f64, lambda0: f64, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return domain(format!("depth must be non-negative, got {r}"));
    }
    Ok(match canonical(k)? {
        0 => r - 0.5 * lambda0 * r * r,
        1 => r.sin() + lambda0 * r.cos() - lambda0,
        _ => r.sinh() - lambda0 * r.cosh() + lambda0,
    })
}

/// Fourth-order Runge-Kutta integration of the Riccati equation from 0 to
/// `r`, with a final partial step if `step` does not divide `r`.
pub fn riccati_integrate(k: f64, lambda0: f64, r: f64, step: f64) -> Result<f64> {
    if !(step > 0.0) {
        return domain(format!("step must be positive, got {step}"));
    }
    if !(r >= 0.0) {
        return domain(format!("depth must be non-negative, got {r}"));
    }
    let rhs = |l: f64| -k - l * l;
    let mut l = -lambda0;
    let mut x = 0.0;
    let n = (r / step).ceil() as usize;
    for i in 0..n {
        let h = if i + 1 == n { r - x } else { step };
        let k1 = rhs(l);
        let k2 = rhs(l + 0.5 * h * k1);
        let k3 = rhs(l + 0.5 * h * k2);
        let k4 = rhs(l + h * k3);
        l += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        x = if i + 1 == n { r } else { (i + 1) as f64 * step };
        if !(l.abs() <= BLOW_UP) {
            return Err(GeoError::Singularity { at: x });
        }
    }
    Ok(l)
}

/// Solution of `f̄'' + k f̄ = −λ0` with `f̄(0) = f0`, `f̄'(0) = fdot0`, for
/// any real `k`.
pub fn fbar(k: f64, lambda0: f64, f0: f64, fdot0: f64, t: f64) -> f64 {
    if k == 0.0 {
        f0 + fdot0 * t - 0.5 * lambda0 * t * t
    } else {
        let p = -lambda0 / k;
        p + (f0 - p) * cs(k, t) + fdot0 * sn(k, t)
    }
}

/// `ψ` for any real `k`.
pub fn psi(k: f64, t: f64) -> f64 {
    if k == 0.0 {
        0.5 * t * t
    } else {
        (1.0 - cs(k, t)) / k
    }
}

/// `f̄(r0)` started at the soul depth `r1` with zero initial slope, for the
/// model ball of radius `r0`.
pub fn rigidity_value(k: f64, r0: f64, r1: f64) -> Result<f64> {
    let l0 = model_lambda0(k, r0)?;
    Ok(fbar(k, l0, model_phi(k, l0, r1)?, 0.0, r0))
}
