//! Intrinsic distance on the ellipsoid `x²/a² + y²/b² + z²/c² = 1` via
//! shortest paths in a nearest-neighbour surface graph.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{domain, Result};

/// Resolution of the graph used for one-off distance queries.
pub const DEFAULT_RESOLUTION: f64 = 0.05;
/// Neighbours per node in the surface graph.
pub const NEIGHBORS: usize = 12;
const SURFACE_TOL: f64 = 1e-9;
/// Node spacing as a fraction of the covering resolution.
const SPACING: f64 = 0.95 / 1.5;

#[derive(Debug)]
pub struct EllipsoidSurface {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    graphs: Mutex<HashMap<(u64, u64), Arc<SurfaceGraph>>>,
}

/// Nodes on the surface with a symmetric k-NN adjacency.
#[derive(Debug)]
pub struct SurfaceGraph {
    pub nodes: Vec<[f64; 3]>,
    pub resolution: f64,
    adjacency: Vec<Vec<(usize, f64)>>,
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn dist3(p: &[f64; 3], q: &[f64; 3]) -> f64 {
    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt()
}

fn cell_of(p: &[f64; 3], size: f64) -> (i64, i64, i64) {
    (
        (p[0] / size).floor() as i64,
        (p[1] / size).floor() as i64,
        (p[2] / size).floor() as i64,
    )
}

impl EllipsoidSurface {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c", c)] {
            if !(v > 0.0) || !v.is_finite() {
                return domain(format!("ellipsoid semi-axis {name} must be positive, got {v}"));
            }
        }
        Ok(Self { a, b, c, graphs: Mutex::new(HashMap::new()) })
    }

    pub fn max_semi_axis(&self) -> f64 {
        self.a.max(self.b).max(self.c)
    }

    fn level(&self, p: &[f64; 3]) -> f64 {
        (p[0] / self.a).powi(2) + (p[1] / self.b).powi(2) + (p[2] / self.c).powi(2)
    }

    pub fn check_point(&self, p: &[f64; 3]) -> Result<()> {
        let l = self.level(p);
        if !l.is_finite() || (l - 1.0).abs() > SURFACE_TOL {
            return domain(format!("point {p:?} is off the ellipsoid surface (level {l})"));
        }
        Ok(())
    }

    /// Radial projection of a nonzero direction onto the surface.
    pub fn project_direction(&self, u: [f64; 3]) -> [f64; 3] {
        let s = 1.0 / self.level(&u).sqrt();
        [u[0] * s, u[1] * s, u[2] * s]
    }

    fn normal(&self, p: &[f64; 3]) -> [f64; 3] {
        let n = [p[0] / (self.a * self.a), p[1] / (self.b * self.b), p[2] / (self.c * self.c)];
        let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        [n[0] / len, n[1] / len, n[2] / len]
    }

    /// Chord length corrected for the turning of the normal, i.e. the arc
    /// length of a circle through both points with those normals.
    fn edge_length(&self, p: &[f64; 3], q: &[f64; 3]) -> f64 {
        let chord = dist3(p, q);
        let (np, nq) = (self.normal(p), self.normal(q));
        let phi = 2.0 * dist3(&np, &nq).atan2(
            ((np[0] + nq[0]).powi(2) + (np[1] + nq[1]).powi(2) + (np[2] + nq[2]).powi(2)).sqrt(),
        );
        if phi < 1e-8 {
            chord
        } else {
            chord * (0.5 * phi) / (0.5 * phi).sin()
        }
    }

    /// The surface graph covering the ellipsoid to within `resolution`,
    /// built once per `(resolution, seed)` and cached.
    pub fn graph(&self, resolution: f64, seed: u64) -> Result<Arc<SurfaceGraph>> {
        if !(resolution > 0.0) || !resolution.is_finite() {
            return domain(format!("graph resolution must be positive, got {resolution}"));
        }
        let key = (resolution.to_bits(), seed);
        if let Some(g) = self.graphs.lock().expect("graph cache poisoned").get(&key) {
            return Ok(g.clone());
        }
        let g = Arc::new(self.build_graph(resolution, seed));
        self.graphs.lock().expect("graph cache poisoned").insert(key, g.clone());
        Ok(g)
    }

    /// Expected node count at a resolution, from the surface area bound.
    pub fn estimated_nodes(&self, resolution: f64) -> usize {
        let s = SPACING * resolution;
        let r = self.max_semi_axis();
        (4.0 * PI * r * r / (0.8 * s * s)).ceil() as usize
    }

    fn build_graph(&self, resolution: f64, seed: u64) -> SurfaceGraph {
        let s = SPACING * resolution;
        let r = self.max_semi_axis();
        // candidate spacing about s/3 after the linear stretch
        let n_cand = ((4.0 * PI) * (3.0 * r / s).powi(2)).ceil().max(2000.0) as usize;
        let golden = PI * (3.0 - 5f64.sqrt());
        let mut cand: Vec<[f64; 3]> = (0..n_cand)
            .map(|i| {
                let z = 1.0 - (2.0 * i as f64 + 1.0) / n_cand as f64;
                let rho = (1.0 - z * z).sqrt();
                let th = golden * i as f64;
                [self.a * rho * th.cos(), self.b * rho * th.sin(), self.c * z]
            })
            .collect();
        cand.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

        // greedy Poisson-disk thinning on a grid hash of cell size s
        let mut grid: HashMap<(i64, i64, i64), Vec<usize>> = HashMap::new();
        let mut nodes: Vec<[f64; 3]> = Vec::new();
        for p in cand {
            let (cx, cy, cz) = cell_of(&p, s);
            let mut free = true;
            'scan: for dx in -1..=1 {
                for dy in -1..=1 {
                    for dz in -1..=1 {
                        if let Some(ids) = grid.get(&(cx + dx, cy + dy, cz + dz)) {
                            if ids.iter().any(|&j| dist3(&nodes[j], &p) < s) {
                                free = false;
                                break 'scan;
                            }
                        }
                    }
                }
            }
            if free {
                grid.entry((cx, cy, cz)).or_default().push(nodes.len());
                nodes.push(p);
            }
        }

        let neigh: Vec<Vec<usize>> = (0..nodes.len())
            .into_par_iter()
            .map(|i| nearest(&nodes, &grid, s, &nodes[i], Some(i), NEIGHBORS))
            .collect();
        let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nodes.len()];
        for (i, ns) in neigh.iter().enumerate() {
            for &j in ns {
                let w = self.edge_length(&nodes[i], &nodes[j]);
                if !adjacency[i].iter().any(|&(k, _)| k == j) {
                    adjacency[i].push((j, w));
                }
                if !adjacency[j].iter().any(|&(k, _)| k == i) {
                    adjacency[j].push((i, w));
                }
            }
        }
        SurfaceGraph { nodes, resolution, adjacency }
    }

    /// Graph-geodesic distance between two surface points at the default
    /// resolution.
    pub fn distance(&self, p: &[f64; 3], q: &[f64; 3]) -> f64 {
        let g = self.graph(DEFAULT_RESOLUTION, 0).expect("default resolution is valid");
        self.distance_in(&g, p, q)
    }

    /// Distance between arbitrary surface points, inserted into `graph` as
    /// two extra nodes.
    pub fn distance_in(&self, graph: &SurfaceGraph, p: &[f64; 3], q: &[f64; 3]) -> f64 {
        if p == q {
            return 0.0;
        }
        let n = graph.nodes.len();
        let attach = |x: &[f64; 3]| -> Vec<(usize, f64)> {
            let mut all: Vec<(f64, usize)> = graph.nodes.iter().enumerate().map(|(i, y)| (dist3(x, y), i)).collect();
            let k = NEIGHBORS.min(all.len());
            all.select_nth_unstable_by(k.saturating_sub(1), |a, b| a.0.total_cmp(&b.0));
            all[..k].iter().map(|&(_, i)| (i, self.edge_length(x, &graph.nodes[i]))).collect()
        };
        let (src, dst) = (n, n + 1);
        let p_edges = attach(p);
        let q_edges = attach(q);
        let direct = self.edge_length(p, q);
        let close = dist3(p, q) <= 2.0 * SPACING * graph.resolution;

        let mut dist = vec![f64::INFINITY; n + 2];
        let mut heap = BinaryHeap::new();
        dist[src] = 0.0;
        heap.push(Entry(0.0, src));
        while let Some(Entry(d, u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            if u == dst {
                return d;
            }
            let mut relax = |v: usize, w: f64, heap: &mut BinaryHeap<Entry>| {
                if d + w < dist[v] {
                    dist[v] = d + w;
                    heap.push(Entry(d + w, v));
                }
            };
            if u == src {
                for &(v, w) in &p_edges {
                    relax(v, w, &mut heap);
                }
                if close {
                    relax(dst, direct, &mut heap);
                }
                continue;
            }
            for &(v, w) in &graph.adjacency[u] {
                relax(v, w, &mut heap);
            }
            for &(v, w) in &q_edges {
                if v == u {
                    relax(dst, w, &mut heap);
                }
            }
        }
        dist[dst]
    }
}

fn nearest(
    nodes: &[[f64; 3]],
    grid: &HashMap<(i64, i64, i64), Vec<usize>>,
    s: f64,
    p: &[f64; 3],
    skip: Option<usize>,
    k: usize,
) -> Vec<usize> {
    let (cx, cy, cz) = cell_of(p, s);
    for reach in [2i64, 4] {
        let mut found: Vec<(f64, usize)> = Vec::new();
        for dx in -reach..=reach {
            for dy in -reach..=reach {
                for dz in -reach..=reach {
                    if let Some(ids) = grid.get(&(cx + dx, cy + dy, cz + dz)) {
                        found.extend(ids.iter().filter(|&&j| Some(j) != skip).map(|&j| (dist3(&nodes[j], p), j)));
                    }
                }
            }
        }
        found.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        // everything within reach·s has been seen
        if found.len() >= k && found[k - 1].0 <= reach as f64 * s {
            return found[..k].iter().map(|&(_, j)| j).collect();
        }
    }
    let mut all: Vec<(f64, usize)> = nodes
        .iter()
        .enumerate()
        .filter(|&(j, _)| Some(j) != skip)
        .map(|(j, q)| (dist3(q, p), j))
        .collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    all.into_iter().take(k).map(|(_, j)| j).collect()
}

impl SurfaceGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Graph distances from node `source` to every node.
    pub fn single_source(&self, source: usize) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.nodes.len()];
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(Entry(0.0, source));
        while let Some(Entry(d, u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &self.adjacency[u] {
                if d + w < dist[v] {
                    dist[v] = d + w;
                    heap.push(Entry(d + w, v));
                }
            }
        }
        dist
    }

    /// Row-major all-pairs matrix, symmetrized by taking the smaller of the
    /// two directed values.
    pub fn all_pairs(&self) -> Vec<f64> {
        let n = self.nodes.len();
        let rows: Vec<Vec<f64>> = (0..n).into_par_iter().map(|i| self.single_source(i)).collect();
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                m[i * n + j] = rows[i][j].min(rows[j][i]);
            }
        }
        m
    }
}
