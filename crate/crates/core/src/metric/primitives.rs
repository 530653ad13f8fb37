//! Round-sphere and interval metrics plus the clamping instrumentation
//! shared by every closed-form distance.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{domain, Result};

/// Unit-norm tolerance accepted on sphere coordinates.
pub const UNIT_TOL: f64 = 1e-12;

static MAX_CLAMP: AtomicU64 = AtomicU64::new(0);
static CLAMP_COUNT: AtomicU64 = AtomicU64::new(0);

/// Largest amount by which any clamped argument left its domain, and the
/// number of clamps that actually moved a value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClampStats {
    pub max_excess: f64,
    pub count: u64,
}

pub fn clamp_stats() -> ClampStats {
    ClampStats {
        max_excess: f64::from_bits(MAX_CLAMP.load(Ordering::Relaxed)),
        count: CLAMP_COUNT.load(Ordering::Relaxed),
    }
}

pub fn reset_clamp_stats() {
    MAX_CLAMP.store(0, Ordering::Relaxed);
    CLAMP_COUNT.store(0, Ordering::Relaxed);
}

#[inline]
fn record(excess: f64) {
    CLAMP_COUNT.fetch_add(1, Ordering::Relaxed);
    // non-negative f64 bit patterns order like the values
    MAX_CLAMP.fetch_max(excess.to_bits(), Ordering::Relaxed);
}

/// Clamp `x` into `[lo, hi]`, recording how far outside it was.
#[inline]
pub fn clamp_recorded(x: f64, lo: f64, hi: f64) -> f64 {
    if x > hi {
        record(x - hi);
        hi
    } else if x < lo {
        record(lo - x);
        lo
    } else {
        x
    }
}

/// `2·asin(√h)` for a haversine value `h ∈ [0, 1]`.
#[inline]
pub fn angle_from_haversine(h: f64) -> f64 {
    2.0 * clamp_recorded(h, 0.0, 1.0).sqrt().asin()
}

#[inline]
pub fn sin_half_sq(x: f64) -> f64 {
    let s = (0.5 * x).sin();
    s * s
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn check_unit(v: &[f64], name: &str) -> Result<()> {
    let n = norm(v);
    if v.is_empty() || !n.is_finite() || (n - 1.0).abs() > UNIT_TOL {
        return domain(format!("{name} = {v:?} is not a unit vector (|{name}| = {n})"));
    }
    Ok(())
}

/// Angle between two unit vectors, via the stable `2·atan2(|u−v|, |u+v|)`.
#[inline]
pub fn unit_angle(u: &[f64], v: &[f64]) -> f64 {
    let (mut diff, mut sum) = (0.0, 0.0);
    for (a, b) in u.iter().zip(v) {
        diff += (a - b) * (a - b);
        sum += (a + b) * (a + b);
    }
    2.0 * diff.sqrt().atan2(sum.sqrt())
}

/// Round-sphere distance `radius · ∠(u, v)` between unit vectors.
pub fn sphere_distance(u: &[f64], v: &[f64], radius: f64) -> Result<f64> {
    if !(radius > 0.0) || !radius.is_finite() {
        return domain(format!("sphere radius must be positive, got {radius}"));
    }
    if u.len() != v.len() {
        return domain(format!(
            "vectors of different ambient dimension: {} vs {}",
            u.len(),
            v.len()
        ));
    }
    check_unit(u, "u")?;
    check_unit(v, "v")?;
    Ok(radius * unit_angle(u, v))
}

/// Distance on an interval `[0, length]`.
pub fn interval_distance(s: f64, t: f64, length: f64) -> Result<f64> {
    for (name, x) in [("s", s), ("t", t)] {
        if !(0.0..=length).contains(&x) {
            return domain(format!("{name} = {x} outside interval [0, {length}]"));
        }
    }
    Ok((s - t).abs())
}
