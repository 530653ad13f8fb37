use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};
use crate::metric::primitives::unit_angle;
use crate::metric::{FiniteNet, Point};

/// Result of an edge estimate; `warning` is set when the radius
/// precondition failed and the set was left empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeSet {
    pub indices: Vec<usize>,
    pub warning: bool,
}

/// `E = {x : |xs| ≥ π/2 − tol}`, provided the radius estimate is within
/// `2ε` of `π/2`.
pub fn edge_set(net: &FiniteNet, soul: usize, radius_est: f64, tol: f64) -> EdgeSet {
    if (radius_est - FRAC_PI_2).abs() > 2.0 * net.epsilon {
        return EdgeSet { indices: Vec::new(), warning: true };
    }
    let indices = (0..net.len())
        .into_par_iter()
        .filter(|&x| net.dist(x, soul) >= FRAC_PI_2 - tol)
        .collect();
    EdgeSet { indices, warning: false }
}

/// `S = {x : |xE| ≥ π/2 − tol}`.
pub fn spine_set(net: &FiniteNet, edge: &[usize], tol: f64) -> Result<Vec<usize>> {
    if edge.is_empty() {
        return Err(GeoError::Precondition("spine of an empty edge".into()));
    }
    let cut = FRAC_PI_2 - tol;
    Ok((0..net.len())
        .into_par_iter()
        .filter(|&x| edge.iter().all(|&e| net.dist(x, e) >= cut))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualPairReport {
    /// `max | |ab| − π/2 |` over `a ∈ A, b ∈ B`.
    pub cross_defect: f64,
    pub cross_witness: (usize, usize),
    /// `max | |Ax| + |xB| − π/2 |` over all net points.
    pub sum_defect: f64,
    pub sum_witness: usize,
    pub tol: f64,
    pub pass: bool,
}

fn set_distance(net: &FiniteNet, x: usize, set: &[usize]) -> f64 {
    set.iter().map(|&a| net.dist(x, a)).fold(f64::INFINITY, f64::min)
}

/// Check the hypotheses `|ab| = π/2` and `|Ax| + |xB| = π/2` of the radius
/// criterion on the net.
pub fn dual_pair_check(net: &FiniteNet, a: &[usize], b: &[usize], tol: f64) -> Result<DualPairReport> {
    if a.is_empty() || b.is_empty() {
        return Err(GeoError::Precondition("dual pair sets must be nonempty".into()));
    }
    if let Some(x) = a.iter().find(|x| b.contains(x)) {
        return Err(GeoError::Precondition(format!("dual pair sets overlap at index {x}")));
    }
    let (cross_defect, cross_witness) = a
        .par_iter()
        .map(|&i| {
            b.iter()
                .map(|&j| ((net.dist(i, j) - FRAC_PI_2).abs(), (i, j)))
                .fold((0.0, (i, b[0])), |m, v| if v.0 > m.0 { v } else { m })
        })
        .reduce(|| (0.0, (a[0], b[0])), |m, v| if v.0 > m.0 || (v.0 == m.0 && v.1 < m.1) { v } else { m });
    let (sum_defect, sum_witness) = (0..net.len())
        .into_par_iter()
        .map(|x| ((set_distance(net, x, a) + set_distance(net, x, b) - FRAC_PI_2).abs(), x))
        .reduce(|| (0.0, 0), |m, v| if v.0 > m.0 || (v.0 == m.0 && v.1 < m.1) { v } else { m });
    Ok(DualPairReport {
        cross_defect,
        cross_witness,
        sum_defect,
        sum_witness,
        tol,
        pass: cross_defect <= tol && sum_defect <= tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The radius hypothesis did not hold, so nothing was asserted.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexDiameterReport {
    pub radius: f64,
    pub diameter: f64,
    pub status: CheckStatus,
}

fn sphere_vec(p: &Point) -> Result<&[f64]> {
    match p {
        Point::Sphere { u } => Ok(u),
        _ => Err(GeoError::Precondition("convex diameter check needs a sphere net".into())),
    }
}

/// For a convex `A` in a unit-sphere net: if the radius of `A` (centers
/// anywhere in the net) is at least `π/2 − tol`, assert `diam A ≥ π − 2 tol`.
///
/// Convexity is checked approximately: the midpoint of every pair closer
/// than `π − tol` must lie within `tol` of `A`.
pub fn sphere_convex_diameter_check(net: &FiniteNet, a: &[usize], tol: f64) -> Result<ConvexDiameterReport> {
    if a.is_empty() {
        return Err(GeoError::Precondition("empty subset".into()));
    }
    let vecs: Vec<&[f64]> = a.iter().map(|&i| sphere_vec(&net.points[i])).collect::<Result<_>>()?;
    let bad = (0..a.len()).into_par_iter().find_map_first(|i| {
        for j in i + 1..a.len() {
            if unit_angle(vecs[i], vecs[j]) >= PI - tol {
                continue;
            }
            let mid: Vec<f64> = vecs[i].iter().zip(vecs[j]).map(|(x, y)| x + y).collect();
            let norm = mid.iter().map(|x| x * x).sum::<f64>().sqrt();
            let mid: Vec<f64> = mid.iter().map(|x| x / norm).collect();
            if !vecs.iter().any(|v| unit_angle(v, &mid) <= tol) {
                return Some((a[i], a[j]));
            }
        }
        None
    });
    if let Some((i, j)) = bad {
        return Err(GeoError::Precondition(format!(
            "subset is not convex: the midpoint of {i} and {j} is farther than {tol} from it"
        )));
    }
    let radius = (0..net.len())
        .into_par_iter()
        .map(|x| a.iter().map(|&y| net.dist(x, y)).fold(0.0, f64::max))
        .reduce(|| f64::INFINITY, f64::min);
    let diameter = a
        .par_iter()
        .map(|&x| a.iter().map(|&y| net.dist(x, y)).fold(0.0, f64::max))
        .reduce(|| 0.0, f64::max);
    let status = if radius < FRAC_PI_2 - tol {
        CheckStatus::Skipped
    } else if diameter >= PI - 2.0 * tol {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    };
    Ok(ConvexDiameterReport { radius, diameter, status })
}
