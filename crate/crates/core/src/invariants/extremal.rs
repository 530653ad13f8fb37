//! Exact radius, diameter and soul of a finite net with pruning.
//!
//! All three scans return the exact optimum over the net with ties broken
//! to the lowest index; pruning only discards candidates that provably lose.

use rayon::prelude::*;

use crate::error::{GeoError, Result};
use crate::metric::FiniteNet;

const LANDMARKS: usize = 32;
const CHUNK: usize = 64;

/// Farthest-first traversal of `pool`, starting at its first element.
fn landmarks(net: &FiniteNet, pool: &[usize], count: usize) -> Vec<usize> {
    let Some(&first) = pool.first() else {
        return Vec::new();
    };
    let mut chosen = vec![first];
    let mut near: Vec<f64> = pool.par_iter().map(|&j| net.dist(first, j)).collect();
    while chosen.len() < count.min(pool.len()) {
        let (k, &d) = near
            .iter()
            .enumerate()
            .fold((0, &f64::NEG_INFINITY), |acc, x| if *x.1 > *acc.1 { x } else { acc });
        if d <= 0.0 {
            break;
        }
        let next = pool[k];
        chosen.push(next);
        near.par_iter_mut().zip(pool.par_iter()).for_each(|(m, &j)| *m = m.min(net.dist(next, j)));
    }
    chosen
}

/// `rad = min_x max_y |xy|` with the center and a farthest point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusEstimate {
    pub value: f64,
    pub center: usize,
    pub farthest: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiameterEstimate {
    pub value: f64,
    pub pair: (usize, usize),
}

/// Eccentricity of `x` over `order`, abandoned once it provably cannot
/// beat `(bound, bound_idx)`.
fn ecc_bounded(net: &FiniteNet, x: usize, order: &[usize], bound: f64, bound_idx: usize) -> Option<f64> {
    let mut m: f64 = 0.0;
    for &y in order {
        m = m.max(net.dist(x, y));
        if m > bound || (m == bound && x > bound_idx) {
            return None;
        }
    }
    Some(m)
}

fn better_min(a: (f64, usize), b: (f64, usize)) -> bool {
    b.0 < a.0 || (b.0 == a.0 && b.1 < a.1)
}

fn argmax_row(net: &FiniteNet, x: usize) -> (f64, usize) {
    (0..net.len())
        .map(|j| (net.dist(x, j), j))
        .fold((f64::NEG_INFINITY, 0), |a, b| if b.0 > a.0 { b } else { a })
}

/// Minimax radius of the net.
pub fn radius(net: &FiniteNet) -> Result<RadiusEstimate> {
    let n = net.len();
    if n == 0 {
        return Err(GeoError::Precondition("radius of an empty net".into()));
    }
    let all: Vec<usize> = (0..n).collect();
    let marks = landmarks(net, &all, LANDMARKS);
    let lower: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|x| marks.iter().map(|&l| net.dist(x, l)).fold(0.0, f64::max))
        .collect();
    let mut order: Vec<usize> = marks.clone();
    let mut is_mark = vec![false; n];
    for &l in &marks {
        is_mark[l] = true;
    }
    order.extend((0..n).filter(|&j| !is_mark[j]));

    let mut cand = all;
    cand.sort_by(|&a, &b| lower[a].total_cmp(&lower[b]).then(a.cmp(&b)));
    let mut best = (f64::INFINITY, usize::MAX);
    for chunk in cand.chunks(CHUNK) {
        if lower[chunk[0]] > best.0 {
            break;
        }
        let found: Vec<(f64, usize)> = chunk
            .par_iter()
            .filter(|&&x| !(lower[x] > best.0 || (lower[x] == best.0 && x > best.1)))
            .filter_map(|&x| ecc_bounded(net, x, &order, best.0, best.1).map(|e| (e, x)))
            .collect();
        for f in found {
            if better_min(best, f) {
                best = f;
            }
        }
    }
    let (value, farthest) = argmax_row(net, best.1);
    Ok(RadiusEstimate { value, center: best.1, farthest })
}

/// Largest distance in the net, with the lexicographically smallest pair
/// attaining it.
pub fn diameter(net: &FiniteNet) -> Result<DiameterEstimate> {
    let n = net.len();
    if n == 0 {
        return Err(GeoError::Precondition("diameter of an empty net".into()));
    }
    let all: Vec<usize> = (0..n).collect();
    let marks = landmarks(net, &all, LANDMARKS);
    let mark_ecc: Vec<f64> = marks.par_iter().map(|&l| argmax_row(net, l).0).collect();
    let upper: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|x| {
            marks
                .iter()
                .zip(&mark_ecc)
                .map(|(&l, &e)| net.dist(x, l) + e)
                .fold(f64::INFINITY, f64::min)
                // slack for round-off in the triangle inequality
                + 1e-9
        })
        .collect();
    let mut cand = all;
    cand.sort_by(|&a, &b| upper[b].total_cmp(&upper[a]).then(a.cmp(&b)));
    let mut best = (f64::NEG_INFINITY, (usize::MAX, usize::MAX));
    let better = |a: &(f64, (usize, usize)), b: &(f64, (usize, usize))| b.0 > a.0 || (b.0 == a.0 && b.1 < a.1);
    for chunk in cand.chunks(CHUNK) {
        if upper[chunk[0]] < best.0 {
            break;
        }
        let found: Vec<(f64, (usize, usize))> = chunk
            .par_iter()
            .filter(|&&x| upper[x] >= best.0)
            .map(|&x| {
                let (d, y) = argmax_row(net, x);
                (d, (x.min(y), x.max(y)))
            })
            .collect();
        for f in found {
            if better(&best, &f) {
                best = f;
            }
        }
    }
    // the first row attaining the maximum is scanned, so the pair is the
    // lexicographically smallest one
    let (value, pair) = best;
    Ok(DiameterEstimate { value, pair })
}

/// Index maximizing the distance to the boundary among non-boundary
/// points, and that distance.
pub fn soul(net: &FiniteNet) -> Result<(usize, f64)> {
    let boundary = net.boundary_indices();
    if boundary.is_empty() {
        return Err(GeoError::Precondition("soul is undefined without boundary points".into()));
    }
    let interior: Vec<usize> = (0..net.len()).filter(|&i| !net.is_boundary[i]).collect();
    if interior.is_empty() {
        return Err(GeoError::Precondition("every net point is flagged boundary".into()));
    }
    let marks = landmarks(net, &boundary, LANDMARKS);
    let upper: Vec<f64> = interior
        .par_iter()
        .map(|&x| marks.iter().map(|&b| net.dist(x, b)).fold(f64::INFINITY, f64::min))
        .collect();
    let mut order = marks.clone();
    order.extend(boundary.iter().filter(|b| !marks.contains(b)));
    let mut cand: Vec<usize> = (0..interior.len()).collect();
    cand.sort_by(|&a, &b| upper[b].total_cmp(&upper[a]).then(interior[a].cmp(&interior[b])));
    let mut best = (f64::NEG_INFINITY, usize::MAX);
    for chunk in cand.chunks(CHUNK) {
        if upper[chunk[0]] < best.0 {
            break;
        }
        let found: Vec<(f64, usize)> = chunk
            .par_iter()
            .filter(|&&c| upper[c] >= best.0)
            .filter_map(|&c| {
                let x = interior[c];
                let mut m = f64::INFINITY;
                for &b in &order {
                    m = m.min(net.dist(x, b));
                    if m < best.0 || (m == best.0 && x > best.1) {
                        return None;
                    }
                }
                Some((m, x))
            })
            .collect();
        for f in found {
            if f.0 > best.0 || (f.0 == best.0 && f.1 < best.1) {
                best = f;
            }
        }
    }
    Ok((best.1, best.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{epsilon_net, SpaceDescriptor};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn brute_radius(net: &FiniteNet) -> (f64, usize) {
        (0..net.len())
            .map(|i| (argmax_row(net, i).0, i))
            .fold((f64::INFINITY, 0), |a, b| if better_min(a, b) { b } else { a })
    }

    fn brute_diameter(net: &FiniteNet) -> (f64, (usize, usize)) {
        let mut best = (f64::NEG_INFINITY, (0, 0));
        for i in 0..net.len() {
            for j in i + 1..net.len() {
                if net.dist(i, j) > best.0 {
                    best = (net.dist(i, j), (i, j));
                }
            }
        }
        best
    }

    #[test]
    fn pruned_scans_match_brute_force() {
        for d in [
            SpaceDescriptor::sphere(2, 0.5),
            SpaceDescriptor::lens(2, 2.0),
            SpaceDescriptor::model_ball(0.0, 1.0, 2),
        ] {
            let net = epsilon_net(&d, 0.15, 1).unwrap();
            let r = radius(&net).unwrap();
            assert_eq!((r.value, r.center), brute_radius(&net), "{d:?}");
            let dm = diameter(&net).unwrap();
            assert_eq!((dm.value, dm.pair), brute_diameter(&net), "{d:?}");
        }
    }

    #[test]
    fn single_point_net() {
        let net = FiniteNet::from_matrix(vec![0.0], vec![false], 0.1).unwrap();
        assert_eq!(radius(&net).unwrap().value, 0.0);
        assert_eq!(diameter(&net).unwrap().value, 0.0);
    }

    #[test]
    fn circle_diameter() {
        let net = epsilon_net(&SpaceDescriptor::sphere(1, 1.0), 0.05, 0).unwrap();
        let d = diameter(&net).unwrap().value;
        assert!(d <= PI && d >= PI - 0.1);
    }

    #[test]
    fn hemisphere_soul_is_the_pole() {
        let net = epsilon_net(&SpaceDescriptor::lens(2, PI), 0.1, 0).unwrap();
        let (s, d) = soul(&net).unwrap();
        assert!((d - FRAC_PI_2).abs() <= 0.1, "d = {d}");
        let crate::metric::Point::Join { t, .. } = &net.points[s] else { panic!() };
        assert!((t - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn soul_needs_boundary() {
        let net = epsilon_net(&SpaceDescriptor::sphere(2, 1.0), 0.3, 0).unwrap();
        assert!(matches!(soul(&net), Err(GeoError::Precondition(_))));
    }
}
