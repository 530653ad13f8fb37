//! `f = φ∘r` along a discretized geodesic against the model solution `f̄`.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::comparison::geodesic::boundary_distance;
use crate::comparison::model::{fbar, model_phi};
use crate::error::{GeoError, Result};
use crate::metric::{Point, Space, SpaceDescriptor};

/// Allowed deviation of consecutive gaps from `step`.
pub const SPEED_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTrace {
    pub ts: Vec<f64>,
    pub f_vals: Vec<f64>,
    pub fbar_vals: Vec<f64>,
    /// `max(f − f̄)` clipped below at 0.
    pub max_violation: f64,
    /// `max |f − f̄|`, the defect for the equality case.
    pub max_gap: f64,
}

impl ComparisonTrace {
    /// CSV with columns `t,f,fbar,violation`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "t,f,fbar,violation")?;
        for i in 0..self.ts.len() {
            let v = (self.f_vals[i] - self.fbar_vals[i]).max(0.0);
            writeln!(out, "{},{},{},{}", self.ts[i], self.f_vals[i], self.fbar_vals[i], v)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Trace along `path`, whose consecutive points must be `step` apart.
///
/// `f̄` starts at `f(0)` with the one-sided slope estimated by the
/// second-order forward difference.
pub fn comparison_trace(desc: &SpaceDescriptor, lambda0: f64, k: f64, path: &[Point], step: f64) -> Result<ComparisonTrace> {
    let space = Space::from_descriptor(desc)?;
    trace_in(&space, lambda0, k, path, step)
}

pub(crate) fn trace_in(space: &Space, lambda0: f64, k: f64, path: &[Point], step: f64) -> Result<ComparisonTrace> {
    if path.len() < 3 {
        return Err(GeoError::Precondition("a trace needs at least three samples".into()));
    }
    if !(step > 0.0) {
        return Err(GeoError::Domain(format!("step must be positive, got {step}")));
    }
    for (i, w) in path.windows(2).enumerate() {
        let gap = space.distance(&w[0], &w[1])?;
        if (gap - step).abs() > SPEED_TOL {
            return Err(GeoError::Precondition(format!(
                "path is not unit speed: gap {gap} between samples {i} and {} differs from step {step}",
                i + 1
            )));
        }
    }
    let f_vals: Vec<f64> = path
        .iter()
        .map(|p| model_phi(k, lambda0, boundary_distance(space, p)?))
        .collect::<Result<_>>()?;
    let ts: Vec<f64> = (0..path.len()).map(|i| i as f64 * step).collect();
    let fdot0 = (-3.0 * f_vals[0] + 4.0 * f_vals[1] - f_vals[2]) / (2.0 * step);
    let fbar_vals: Vec<f64> = ts.iter().map(|&t| fbar(k, lambda0, f_vals[0], fdot0, t)).collect();
    let diffs = f_vals.iter().zip(&fbar_vals).map(|(f, g)| f - g);
    let max_violation = diffs.clone().fold(0.0, f64::max);
    let max_gap = diffs.map(f64::abs).fold(0.0, f64::max);
    Ok(ComparisonTrace { ts, f_vals, fbar_vals, max_violation, max_gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comparison::geodesic::{sample_geodesics, GeodesicKind};
    use crate::comparison::model::model_lambda0;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn radial_geodesic_in_spherical_ball_is_an_equality() {
        let d = SpaceDescriptor::model_ball(1.0, FRAC_PI_4, 2);
        let s = Space::from_descriptor(&d).unwrap();
        let step = 1e-3;
        let path = &sample_geodesics(&s, GeodesicKind::Radial, 1, step, 0).unwrap()[0];
        let tr = comparison_trace(&d, 1.0, 1.0, path, step).unwrap();
        assert!(tr.max_gap <= 5.0 * step, "{}", tr.max_gap);
        assert_eq!(tr.ts.len(), tr.f_vals.len());
    }

    #[test]
    fn flat_chords_at_the_model_lambda_are_equalities() {
        // f = (1 − |x|²)/2 on the unit disk, so f'' = −λ0 exactly
        let d = SpaceDescriptor::model_ball(0.0, 1.0, 2);
        let s = Space::from_descriptor(&d).unwrap();
        let step = 1e-3;
        let l0 = model_lambda0(0.0, 1.0).unwrap();
        for path in sample_geodesics(&s, GeodesicKind::Chord, 10, step, 1).unwrap() {
            let tr = comparison_trace(&d, l0, 0.0, &path, step).unwrap();
            assert!(tr.max_gap <= 5.0 * step, "{}", tr.max_gap);
        }
    }

    #[test]
    fn flat_chords_at_a_weaker_lambda_have_a_strict_gap() {
        let d = SpaceDescriptor::model_ball(0.0, 1.0, 2);
        let s = Space::from_descriptor(&d).unwrap();
        let step = 1e-3;
        let mut strict = 0.0f64;
        for path in sample_geodesics(&s, GeodesicKind::Chord, 10, step, 1).unwrap() {
            let tr = comparison_trace(&d, 0.5, 0.0, &path, step).unwrap();
            assert!(tr.max_violation <= 5.0 * step);
            let mid = tr.ts.len() / 2;
            strict = strict.max(tr.fbar_vals[mid] - tr.f_vals[mid]);
        }
        assert!(strict > 1e-3, "{strict}");
    }

    #[test]
    fn circle_cone_is_an_equality() {
        let d = SpaceDescriptor::cone(1.0, SpaceDescriptor::sphere(1, 0.75), FRAC_PI_2);
        let s = Space::from_descriptor(&d).unwrap();
        let step = 1e-3;
        for path in sample_geodesics(&s, GeodesicKind::Chord, 5, step, 2).unwrap() {
            let tr = comparison_trace(&d, 0.0, 1.0, &path, step).unwrap();
            assert!(tr.max_gap <= 5.0 * step, "{}", tr.max_gap);
        }
    }

    #[test]
    fn uneven_paths_are_rejected() {
        let d = SpaceDescriptor::model_ball(0.0, 1.0, 2);
        let pts: Vec<Point> = [0.0, 0.1, 0.3]
            .iter()
            .map(|&t| Point::cone(t, Point::sphere(vec![1.0, 0.0])))
            .collect();
        assert!(matches!(comparison_trace(&d, 1.0, 0.0, &pts, 0.1), Err(GeoError::Precondition(_))));
    }

    #[test]
    fn csv_export() {
        let d = SpaceDescriptor::model_ball(0.0, 1.0, 2);
        let pts: Vec<Point> = [0.0, 0.1, 0.2]
            .iter()
            .map(|&t| Point::cone(t, Point::sphere(vec![1.0, 0.0])))
            .collect();
        let tr = comparison_trace(&d, 1.0, 0.0, &pts, 0.1).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("trace.csv");
        tr.write_csv(&p).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.starts_with("t,f,fbar,violation"));
    }
}
