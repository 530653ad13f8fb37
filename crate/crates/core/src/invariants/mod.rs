//! Radius, diameter, soul, edge, spine, dual pairs and boundary volume.

pub mod extremal;
pub mod sets;
pub mod volume;

use serde::{Deserialize, Serialize};

pub use extremal::{diameter, radius, soul, DiameterEstimate, RadiusEstimate};
pub use sets::{
    dual_pair_check, edge_set, spine_set, sphere_convex_diameter_check, CheckStatus, ConvexDiameterReport,
    DualPairReport, EdgeSet,
};
pub use volume::{boundary_volume, sphere_volume, VolumeEstimate};

use crate::error::{GeoError, Result};
use crate::metric::FiniteNet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Radius and diameter accuracy, `2ε`.
    pub estimate: f64,
    /// Membership tolerance for "distance π/2" sets.
    pub set: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witnesses {
    /// Center and a farthest point.
    pub radius: (usize, usize),
    pub diameter: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub radius: f64,
    pub diameter: f64,
    /// `None` for nets without boundary flags.
    pub soul: Option<usize>,
    pub soul_distance: Option<f64>,
    pub edge: Vec<usize>,
    pub spine: Vec<usize>,
    pub edge_warning: bool,
    pub epsilon: f64,
    pub tolerances: Tolerances,
    pub witnesses: Witnesses,
}

impl InvariantReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// All invariants of a net with the default set tolerance `2ε`.
///
/// Edge and spine are only estimated when the net has boundary flags and
/// the radius is within `2ε` of `π/2`.
pub fn analyze(net: &FiniteNet) -> Result<InvariantReport> {
    analyze_with(net, 2.0 * net.epsilon)
}

pub fn analyze_with(net: &FiniteNet, set_tol: f64) -> Result<InvariantReport> {
    let r = radius(net)?;
    let d = diameter(net)?;
    let (soul_idx, soul_dist) = match soul(net) {
        Ok((s, dist)) => (Some(s), Some(dist)),
        Err(GeoError::Precondition(_)) => (None, None),
        Err(e) => return Err(e),
    };
    let (edge, edge_warning) = match soul_idx {
        Some(s) => {
            let e = edge_set(net, s, r.value, set_tol);
            (e.indices, e.warning)
        }
        None => (Vec::new(), false),
    };
    let spine = if edge.is_empty() { Vec::new() } else { spine_set(net, &edge, set_tol)? };
    Ok(InvariantReport {
        radius: r.value,
        diameter: d.value,
        soul: soul_idx,
        soul_distance: soul_dist,
        edge,
        spine,
        edge_warning,
        epsilon: net.epsilon,
        tolerances: Tolerances { estimate: 2.0 * net.epsilon, set: set_tol },
        witnesses: Witnesses { radius: (r.center, r.farthest), diameter: d.pair },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{epsilon_net, SpaceDescriptor};
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn hemisphere_edge_is_the_boundary_and_spine_the_soul() {
        let net = epsilon_net(&SpaceDescriptor::lens(2, PI), 0.1, 0).unwrap();
        let rep = analyze(&net).unwrap();
        let s = rep.soul.unwrap();
        assert!(!rep.edge_warning);
        for i in net.boundary_indices() {
            assert!(rep.edge.contains(&i));
        }
        assert!(rep.spine.contains(&s));
        for &i in &rep.spine {
            assert!(net.dist(i, s) <= 2.0 * rep.tolerances.set);
        }
    }

    #[test]
    fn lens_edge_and_spine_are_the_factors() {
        let net = epsilon_net(&SpaceDescriptor::lens(3, 1.5), 0.1, 0).unwrap();
        let rep = analyze(&net).unwrap();
        assert!((rep.radius - FRAC_PI_2).abs() <= 0.2);
        let lat = |i: usize| net.points[i].latitude().unwrap();
        assert!(rep.edge.iter().any(|&i| lat(i) == 0.0));
        assert!(rep.spine.iter().any(|&i| lat(i) == FRAC_PI_2));
        let dp = dual_pair_check(
            &net,
            &rep.edge.iter().copied().filter(|&i| lat(i) == 0.0).collect::<Vec<_>>(),
            &rep.spine.iter().copied().filter(|&i| lat(i) == FRAC_PI_2).collect::<Vec<_>>(),
            0.3,
        )
        .unwrap();
        assert!(dp.pass, "{dp:?}");
        assert!(dp.cross_defect < 1e-12);
    }

    #[test]
    fn closed_space_report_has_no_soul() {
        let net = epsilon_net(&SpaceDescriptor::sphere(2, 0.5), 0.1, 0).unwrap();
        let rep = analyze(&net).unwrap();
        assert_eq!(rep.soul, None);
        assert!(rep.edge.is_empty() && rep.spine.is_empty());
        let json: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
        for key in ["radius", "diameter", "soul", "edge", "spine", "epsilon", "witnesses"] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }

    fn random_matrix(n: usize, seed: u64) -> Vec<f64> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<[f64; 3]> = (0..n).map(|_| [rng.random(), rng.random(), rng.random()]).collect();
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let d: f64 = (0..3).map(|k| (pts[i][k] - pts[j][k]).powi(2)).sum();
                m[i * n + j] = d.sqrt();
            }
        }
        m
    }

    proptest! {
        #[test]
        fn radius_diameter_sandwich(n in 1usize..60, seed in any::<u64>()) {
            let net = FiniteNet::from_matrix(random_matrix(n, seed), vec![false; n], 0.1).unwrap();
            let r = radius(&net).unwrap().value;
            let d = diameter(&net).unwrap().value;
            prop_assert!(r <= d);
            prop_assert!(d <= 2.0 * r + 1e-12);
        }

        #[test]
        fn soul_maximizes_boundary_distance(n in 3usize..50, seed in any::<u64>()) {
            let mut flags: Vec<bool> = (0..n).map(|i| (seed >> (i % 64)) & 1 == 1).collect();
            flags[0] = true;
            flags[1] = false;
            let net = FiniteNet::from_matrix(random_matrix(n, seed), flags.clone(), 0.1).unwrap();
            let (s, d) = soul(&net).unwrap();
            let to_b = |x: usize| (0..n).filter(|&b| flags[b]).map(|b| net.dist(x, b)).fold(f64::INFINITY, f64::min);
            let best = (0..n).filter(|&x| !flags[x]).map(|x| (to_b(x), x))
                .fold((f64::NEG_INFINITY, 0), |a, b| if b.0 > a.0 { b } else { a });
            prop_assert_eq!((s, d), (best.1, best.0));
        }
    }
}
