use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};
use crate::metric::cover::{count, cover};
use crate::metric::{Point, Space, SpaceDescriptor};

/// Largest net generated without a capacity error.
pub const POINT_BUDGET: usize = 250_000;
/// Nets up to this size keep a dense distance matrix; larger nets evaluate
/// distances on demand.
pub const DENSE_LIMIT: usize = 4096;

#[derive(Debug, Clone)]
enum Storage {
    Dense(Arc<Vec<f64>>),
    Lazy,
}

/// A finite ε-net with boundary flags and a symmetric distance function.
#[derive(Debug, Clone)]
pub struct FiniteNet {
    pub descriptor: Option<SpaceDescriptor>,
    pub points: Vec<Point>,
    pub is_boundary: Vec<bool>,
    pub epsilon: f64,
    pub seed: u64,
    space: Option<Arc<Space>>,
    /// Orbits of each point under a quotient action, for lazy evaluation.
    orbits: Option<Arc<Vec<Vec<Point>>>>,
    storage: Storage,
    n: usize,
}

/// JSON sidecar written next to an exported distance matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetMetadata {
    pub epsilon: f64,
    pub seed: u64,
    pub size: usize,
    pub is_boundary: Vec<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descriptor: Option<SpaceDescriptor>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Point>,
}

/// Build an ε-net of the described space. Deterministic in all arguments.
pub fn epsilon_net(descriptor: &SpaceDescriptor, epsilon: f64, seed: u64) -> Result<FiniteNet> {
    let space = Arc::new(Space::from_descriptor(descriptor)?);
    FiniteNet::build(space, Some(descriptor.clone()), epsilon, seed)
}

fn dense_matrix(space: &Space, points: &[Point]) -> Vec<f64> {
    let n = points.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| (i + 1..n).map(|j| space.dist(&points[i], &points[j])).collect())
        .collect();
    let mut m = vec![0.0; n * n];
    for (i, row) in rows.iter().enumerate() {
        for (off, &d) in row.iter().enumerate() {
            let j = i + 1 + off;
            m[i * n + j] = d;
            m[j * n + i] = d;
        }
    }
    m
}

impl FiniteNet {
    /// Net of an already compiled space. `descriptor` is carried along for
    /// export only.
    pub fn build(
        space: Arc<Space>,
        descriptor: Option<SpaceDescriptor>,
        epsilon: f64,
        seed: u64,
    ) -> Result<FiniteNet> {
        let bound = space.diameter_bound();
        if !(epsilon > 0.0) || !epsilon.is_finite() || epsilon >= bound {
            return Err(GeoError::Domain(format!(
                "epsilon {epsilon} outside (0, {bound}) for this space"
            )));
        }
        let required = count(&space, epsilon);
        if required > POINT_BUDGET as f64 {
            return Err(GeoError::Capacity {
                epsilon,
                required: required.min(usize::MAX as f64) as usize,
                budget: POINT_BUDGET,
            });
        }
        let points = cover(&space, epsilon, seed)?;
        let is_boundary: Vec<bool> = points.iter().map(|p| space.is_boundary(p)).collect();
        let n = points.len();
        let (storage, orbits) = match space.as_ref() {
            Space::Ellipsoid(e) => {
                let g = e.graph(epsilon, seed)?;
                (Storage::Dense(Arc::new(g.all_pairs())), None)
            }
            _ if n <= DENSE_LIMIT => (Storage::Dense(Arc::new(dense_matrix(&space, &points))), None),
            Space::Quotient { action, .. } if action.hopf_order().is_none() => {
                let orbits: Vec<Vec<Point>> = points.par_iter().map(|p| action.orbit(p)).collect();
                (Storage::Lazy, Some(Arc::new(orbits)))
            }
            _ => (Storage::Lazy, None),
        };
        Ok(FiniteNet {
            descriptor,
            points,
            is_boundary,
            epsilon,
            seed,
            space: Some(space),
            orbits,
            storage,
            n,
        })
    }

    /// Net given only by a distance matrix (row-major, `n × n`).
    pub fn from_matrix(matrix: Vec<f64>, is_boundary: Vec<bool>, epsilon: f64) -> Result<FiniteNet> {
        let n = is_boundary.len();
        if matrix.len() != n * n {
            return Err(GeoError::Parse(format!(
                "distance matrix has {} entries, expected {n}×{n}",
                matrix.len()
            )));
        }
        Ok(FiniteNet {
            descriptor: None,
            points: Vec::new(),
            is_boundary,
            epsilon,
            seed: 0,
            space: None,
            orbits: None,
            storage: Storage::Dense(Arc::new(matrix)),
            n,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn space(&self) -> Option<&Arc<Space>> {
        self.space.as_ref()
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    pub fn boundary_indices(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.is_boundary[i]).collect()
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        match &self.storage {
            Storage::Dense(m) => m[i * self.n + j],
            Storage::Lazy => {
                if i == j {
                    return 0.0;
                }
                let space = self.space.as_ref().expect("lazy nets carry their space");
                match (&self.orbits, space.as_ref()) {
                    (Some(orbits), Space::Quotient { base, .. }) => {
                        // symmetric by construction: the orbit of the larger index is used
                        let (a, b) = if i < j { (i, j) } else { (j, i) };
                        orbits[b]
                            .iter()
                            .map(|q| base.dist(&self.points[a], q))
                            .fold(f64::INFINITY, f64::min)
                    }
                    _ => {
                        let (a, b) = if i < j { (i, j) } else { (j, i) };
                        space.dist(&self.points[a], &self.points[b])
                    }
                }
            }
        }
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.n).map(|j| self.dist(i, j)).collect()
    }

    /// Full row-major matrix (computed for lazy nets).
    pub fn matrix(&self) -> Vec<f64> {
        match &self.storage {
            Storage::Dense(m) => m.as_ref().clone(),
            Storage::Lazy => (0..self.n).into_par_iter().flat_map_iter(|i| self.row(i)).collect(),
        }
    }

    pub fn metadata(&self) -> NetMetadata {
        NetMetadata {
            epsilon: self.epsilon,
            seed: self.seed,
            size: self.n,
            is_boundary: self.is_boundary.clone(),
            descriptor: self.descriptor.clone(),
            points: self.points.clone(),
        }
    }

    /// Path of the JSON sidecar belonging to a CSV export.
    pub fn sidecar_path(csv: &Path) -> PathBuf {
        csv.with_extension("json")
    }

    /// Write the distance matrix as CSV and the metadata as a JSON sidecar.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(fs::File::create(path)?);
        for i in 0..self.n {
            let row = self.row(i);
            let line: Vec<String> = row.iter().map(|d| format!("{d}")).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        w.flush()?;
        fs::write(Self::sidecar_path(path), serde_json::to_string_pretty(&self.metadata())?)?;
        Ok(())
    }

    /// Read a CSV distance matrix, with the sidecar metadata if present.
    pub fn read_csv(path: &Path) -> Result<FiniteNet> {
        let reader = BufReader::new(fs::File::open(path)?);
        let mut matrix = Vec::new();
        let mut rows = 0;
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            for field in line.split(',') {
                let v: f64 = field.trim().parse().map_err(|_| {
                    GeoError::Parse(format!("line {}: `{field}` is not a number", lineno + 1))
                })?;
                matrix.push(v);
            }
            rows += 1;
        }
        let side = Self::sidecar_path(path);
        let meta: Option<NetMetadata> = if side.exists() {
            Some(serde_json::from_str(&fs::read_to_string(side)?)?)
        } else {
            None
        };
        let (boundary, epsilon) = match &meta {
            Some(m) => (m.is_boundary.clone(), m.epsilon),
            None => (vec![false; rows], 0.0),
        };
        if boundary.len() != rows {
            return Err(GeoError::Parse(format!(
                "metadata lists {} boundary flags for a {rows}-row matrix",
                boundary.len()
            )));
        }
        let mut net = FiniteNet::from_matrix(matrix, boundary, epsilon)?;
        if let Some(m) = meta {
            net.seed = m.seed;
            net.descriptor = m.descriptor;
            net.points = m.points;
        }
        Ok(net)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn interval_net_flags_endpoints() {
        let net = epsilon_net(&SpaceDescriptor::interval(PI), 0.1, 42).unwrap();
        assert_eq!(net.len(), 32);
        assert_eq!(net.boundary_indices(), vec![0, 31]);
        assert!((net.dist(0, 31) - PI).abs() < 1e-15);
    }

    #[test]
    fn hemisphere_net_flags_equator() {
        let net = epsilon_net(&SpaceDescriptor::lens(2, PI), 0.1, 42).unwrap();
        for (p, &b) in net.points.iter().zip(&net.is_boundary) {
            let Point::Join { t, right, .. } = p else { panic!() };
            let Point::Interval { s } = right.as_ref() else { panic!() };
            assert_eq!(b, *t == 0.0 || *s == 0.0 || *s == PI);
        }
        assert!(net.is_boundary.iter().any(|&b| b));
        assert!(net.is_boundary.iter().any(|&b| !b));
    }

    #[test]
    fn sphere_net_has_no_boundary() {
        let net = epsilon_net(&SpaceDescriptor::sphere(2, 1.0), 0.2, 1).unwrap();
        assert!(net.is_boundary.iter().all(|&b| !b));
    }

    #[test]
    fn nets_are_reproducible() {
        let d = SpaceDescriptor::lens(3, 1.0);
        let a = epsilon_net(&d, 0.3, 7).unwrap();
        let b = epsilon_net(&d, 0.3, 7).unwrap();
        assert_eq!(
            serde_json::to_string(&a.metadata()).unwrap(),
            serde_json::to_string(&b.metadata()).unwrap()
        );
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn capacity_error_reports_requirement() {
        let err = epsilon_net(&SpaceDescriptor::sphere(3, 1.0), 0.005, 0).unwrap_err();
        match err {
            GeoError::Capacity { required, budget, .. } => assert!(required > budget),
            e => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn epsilon_outside_range_is_rejected() {
        assert!(epsilon_net(&SpaceDescriptor::interval(1.0), 2.0, 0).is_err());
        assert!(epsilon_net(&SpaceDescriptor::interval(1.0), 0.0, 0).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("net.csv");
        let net = epsilon_net(&SpaceDescriptor::lens(2, 1.0), 0.2, 3).unwrap();
        net.write_csv(&path).unwrap();
        let back = FiniteNet::read_csv(&path).unwrap();
        assert_eq!(back.len(), net.len());
        assert_eq!(back.matrix(), net.matrix());
        assert_eq!(back.is_boundary, net.is_boundary);
        assert_eq!(back.descriptor, net.descriptor);
    }

    #[test]
    fn lazy_and_dense_agree() {
        let d = SpaceDescriptor::lens(3, 1.0);
        let space = Arc::new(Space::from_descriptor(&d).unwrap());
        let net = FiniteNet::build(space.clone(), Some(d), 0.05, 0).unwrap();
        assert!(!net.is_dense());
        for (i, j) in [(0, 5), (17, 4000), (net.len() - 1, 3)] {
            assert_eq!(net.dist(i, j), space.dist(&net.points[i], &net.points[j]));
            assert_eq!(net.dist(i, j), net.dist(j, i));
        }
    }
}
