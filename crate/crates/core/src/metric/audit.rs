use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::metric::FiniteNet;

/// Default tolerance for metric-axiom audits.
pub const METRIC_TOL: f64 = 1e-9;
/// Nets up to this size are audited over every triple.
pub const EXHAUSTIVE_LIMIT: usize = 600;
const SAMPLED_PAIRS: usize = 20_000;
/// Midpoints tried per sampled pair on nets without a stored matrix.
const LAZY_MIDPOINTS: usize = 512;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricAudit {
    pub size: usize,
    pub max_symmetry_defect: f64,
    pub max_diagonal: f64,
    pub min_entry: f64,
    /// `max d(i,k) − d(i,j) − d(j,k)`, clipped below at zero.
    pub max_triangle_defect: f64,
    pub witness: Option<(usize, usize, usize)>,
    /// False when triples were sampled rather than enumerated.
    pub exhaustive: bool,
    pub tol: f64,
    pub pass: bool,
}

/// Check symmetry, zero diagonal, non-negativity and the triangle
/// inequality. Every triple is checked for small nets; larger nets check
/// seeded random pairs `(i, k)` against every midpoint `j`, or against a
/// seeded sample of midpoints when distances are evaluated on demand.
pub fn verify_metric(net: &FiniteNet, tol: f64) -> MetricAudit {
    let n = net.len();
    let exhaustive = n <= EXHAUSTIVE_LIMIT;
    let rows: Vec<Vec<f64>> = if exhaustive || net.is_dense() {
        (0..n).into_par_iter().map(|i| net.row(i)).collect()
    } else {
        Vec::new()
    };
    let d = |i: usize, j: usize| if rows.is_empty() { net.dist(i, j) } else { rows[i][j] };

    let mut max_sym: f64 = 0.0;
    let mut max_diag: f64 = 0.0;
    let mut min_entry = f64::INFINITY;
    if !rows.is_empty() {
        for i in 0..n {
            max_diag = max_diag.max(d(i, i).abs());
            for j in 0..n {
                max_sym = max_sym.max((d(i, j) - d(j, i)).abs());
                min_entry = min_entry.min(d(i, j));
            }
        }
    }

    let pairs: Vec<(usize, usize)> = if exhaustive {
        (0..n).flat_map(|i| (0..n).map(move |k| (i, k))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        (0..SAMPLED_PAIRS).map(|_| (rng.random_range(0..n), rng.random_range(0..n))).collect()
    };
    let mids: Vec<usize> = if rows.is_empty() && n > LAZY_MIDPOINTS {
        let mut rng = ChaCha8Rng::seed_from_u64(0x3d1d);
        (0..LAZY_MIDPOINTS).map(|_| rng.random_range(0..n)).collect()
    } else {
        (0..n).collect()
    };
    let worst = pairs
        .par_iter()
        .map(|&(i, k)| {
            let dik = d(i, k);
            let mut best = (f64::NEG_INFINITY, (i, i, k));
            for &j in &mids {
                let defect = dik - d(i, j) - d(j, k);
                if defect > best.0 {
                    best = (defect, (i, j, k));
                }
            }
            best
        })
        .reduce(
            || (f64::NEG_INFINITY, (0, 0, 0)),
            |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        );
    if rows.is_empty() {
        // lazy nets: symmetry and sign are probed on the sampled pairs
        for &(i, k) in pairs.iter().take(2000) {
            max_sym = max_sym.max((d(i, k) - d(k, i)).abs());
            min_entry = min_entry.min(d(i, k));
            max_diag = max_diag.max(d(i, i).abs());
        }
    }
    let tri = worst.0.max(0.0);
    let witness = (n > 0 && tri > 0.0).then_some(worst.1);
    let pass = max_sym <= tol && max_diag <= tol && min_entry >= -tol && tri <= tol;
    MetricAudit {
        size: n,
        max_symmetry_defect: max_sym,
        max_diagonal: max_diag,
        min_entry: if n == 0 { 0.0 } else { min_entry },
        max_triangle_defect: tri,
        witness,
        exhaustive,
        tol,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{epsilon_net, SpaceDescriptor};

    #[test]
    fn constructed_violation_is_found() {
        #[rustfmt::skip]
        let m = vec![
            0.0, 1.0, 10.0,
            1.0, 0.0, 1.0,
            10.0, 1.0, 0.0,
        ];
        let net = FiniteNet::from_matrix(m, vec![false; 3], 0.1).unwrap();
        let a = verify_metric(&net, METRIC_TOL);
        assert!(!a.pass);
        assert_eq!(a.witness, Some((0, 1, 2)));
        assert!((a.max_triangle_defect - 8.0).abs() < 1e-15);
    }

    #[test]
    fn closed_form_nets_pass() {
        for d in [
            SpaceDescriptor::sphere(2, 1.0),
            SpaceDescriptor::lens(2, 1.0),
            SpaceDescriptor::model_ball(-1.0, 1.0, 2),
        ] {
            let net = epsilon_net(&d, 0.2, 0).unwrap();
            let a = verify_metric(&net, METRIC_TOL);
            assert!(a.pass, "{d:?}: {a:?}");
        }
    }
}
