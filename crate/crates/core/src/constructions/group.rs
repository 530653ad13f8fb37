//! Finite isometry groups acting coordinatewise on points.
//!
//! Elements are stored as trees mirroring the space they act on, so that
//! composition and comparison are exact per factor: orthogonal matrices on
//! sphere (and ellipsoid) coordinates, flips on intervals and suspension
//! poles, and diagonal pairs on joins.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};
use crate::metric::{Point, Space};

/// Coordinate tolerance for comparing group elements.
pub const ELEMENT_TOL: f64 = 1e-9;
const MAX_ORDER: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Identity,
    /// `−I` on spheres, flip on intervals and suspension poles.
    Antipodal,
    /// Negate the first coordinate on spheres, flip on intervals.
    Reflection,
    /// Rotation by `2π/order` in the first coordinate plane.
    Rotation,
    /// Hopf rotation by `2π/order` on `S³ ⊂ C²`.
    Hopf,
    /// Hopf rotation on `S³` factors, planar rotation on other sphere factors.
    Cyclic,
    /// Diagonal pair given by `left` and `right`.
    Product,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Factor {
    #[default]
    All,
    Left,
    Right,
    Base,
    Poles,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(rename = "type")]
    pub kind: GeneratorKind,
    #[serde(default)]
    pub factor: Factor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<Box<GeneratorSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<Box<GeneratorSpec>>,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, factor: Factor) -> Self {
        Self {
            kind,
            factor,
            left: None,
            right: None,
        }
    }

    pub fn product(left: GeneratorSpec, right: GeneratorSpec) -> Self {
        Self {
            kind: GeneratorKind::Product,
            factor: Factor::All,
            left: Some(Box::new(left)),
            right: Some(Box::new(right)),
        }
    }
}

/// Serialized form of a group action: generators plus the cyclic order
/// that fixes rotation angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionSpec {
    pub generators: Vec<GeneratorSpec>,
    #[serde(default = "default_order")]
    pub order: usize,
}

fn default_order() -> usize {
    2
}

impl ActionSpec {
    pub fn single(generator: GeneratorSpec, order: usize) -> Self {
        Self {
            generators: vec![generator],
            order,
        }
    }
}

/// A single isometry of a fixed base space.
#[derive(Debug, Clone)]
pub enum Isometry {
    Identity,
    Orthogonal(DMatrix<f64>),
    /// `s ↦ length − s` on `[0, length]`.
    IntervalFlip(f64),
    Join(Box<Isometry>, Box<Isometry>),
    Cone(Box<Isometry>),
    Suspension { flip: bool, base: Box<Isometry> },
}

impl Isometry {
    pub fn apply(&self, p: &Point) -> Point {
        match (self, p) {
            (Isometry::Identity, _) => p.clone(),
            (Isometry::Orthogonal(m), Point::Sphere { u }) => {
                let v = m * nalgebra::DVector::from_column_slice(u);
                Point::Sphere { u: v.iter().copied().collect() }
            }
            (Isometry::Orthogonal(m), Point::Ellipsoid { xyz }) => {
                let v = m * nalgebra::DVector::from_column_slice(xyz);
                Point::Ellipsoid { xyz: [v[0], v[1], v[2]] }
            }
            (Isometry::IntervalFlip(len), Point::Interval { s }) => Point::Interval { s: len - s },
            (Isometry::Join(l, r), Point::Join { left, t, right }) => {
                Point::join(l.apply(left), *t, r.apply(right))
            }
            (Isometry::Cone(b), Point::Cone { t, base }) => Point::cone(*t, b.apply(base)),
            (Isometry::Suspension { flip, base }, Point::Suspension { s, base: y }) => {
                Point::suspension(if *flip { PI - s } else { *s }, base.apply(y))
            }
            (iso, p) => panic!("isometry {iso:?} does not act on point {p:?}"),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        use Isometry::*;
        match (self, other) {
            (Identity, x) | (x, Identity) => x.clone(),
            (Orthogonal(a), Orthogonal(b)) => Orthogonal(a * b),
            (IntervalFlip(_), IntervalFlip(_)) => Identity,
            (Join(a, b), Join(c, d)) => Join(Box::new(a.compose(c)), Box::new(b.compose(d))),
            (Cone(a), Cone(b)) => Cone(Box::new(a.compose(b))),
            (Suspension { flip: f, base: a }, Suspension { flip: g, base: b }) => Suspension {
                flip: f ^ g,
                base: Box::new(a.compose(b)),
            },
            (a, b) => panic!("cannot compose {a:?} with {b:?}"),
        }
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        match self {
            Isometry::Identity => true,
            Isometry::Orthogonal(m) => {
                let n = m.nrows();
                (m - DMatrix::<f64>::identity(n, n)).amax() <= tol
            }
            Isometry::IntervalFlip(_) => false,
            Isometry::Join(a, b) => a.is_identity(tol) && b.is_identity(tol),
            Isometry::Cone(a) => a.is_identity(tol),
            Isometry::Suspension { flip, base } => !flip && base.is_identity(tol),
        }
    }

    pub fn approx_eq(&self, other: &Isometry, tol: f64) -> bool {
        use Isometry::*;
        match (self, other) {
            (Identity, x) | (x, Identity) => x.is_identity(tol),
            (Orthogonal(a), Orthogonal(b)) => a.shape() == b.shape() && (a - b).amax() <= tol,
            (IntervalFlip(_), IntervalFlip(_)) => true,
            (Join(a, b), Join(c, d)) => a.approx_eq(c, tol) && b.approx_eq(d, tol),
            (Cone(a), Cone(b)) => a.approx_eq(b, tol),
            (Suspension { flip: f, base: a }, Suspension { flip: g, base: b }) => {
                f == g && a.approx_eq(b, tol)
            }
            _ => false,
        }
    }

    /// Whether this element leaves join latitudes untouched. True for every
    /// element built here: join isometries act diagonally on the factors.
    pub fn preserves_latitude(&self) -> bool {
        true
    }

    fn fits(&self, space: &Space) -> bool {
        match (self, space) {
            (Isometry::Identity, _) => true,
            (Isometry::Orthogonal(m), Space::Sphere { dim, .. }) => {
                m.nrows() == dim + 1 && m.ncols() == dim + 1
            }
            (Isometry::Orthogonal(m), Space::Ellipsoid(_)) => m.nrows() == 3 && m.ncols() == 3,
            (Isometry::IntervalFlip(l), Space::Interval { length }) => l == length,
            (Isometry::Join(a, b), Space::Join(l, r)) => a.fits(l) && b.fits(r),
            (Isometry::Cone(a), Space::Cone { base, .. }) => a.fits(base),
            (Isometry::Suspension { base: a, .. }, Space::Suspension(b)) => a.fits(b),
            _ => false,
        }
    }
}

fn planar_rotation(n: usize, angle: f64) -> DMatrix<f64> {
    let mut m = DMatrix::<f64>::identity(n, n);
    let (s, c) = angle.sin_cos();
    m[(0, 0)] = c;
    m[(0, 1)] = -s;
    m[(1, 0)] = s;
    m[(1, 1)] = c;
    m
}

/// Multiplication by `e^{iθ}` on `C² = R⁴`.
pub fn hopf_matrix(angle: f64) -> DMatrix<f64> {
    let (s, c) = angle.sin_cos();
    let mut m = DMatrix::<f64>::zeros(4, 4);
    for b in [0, 2] {
        m[(b, b)] = c;
        m[(b, b + 1)] = -s;
        m[(b + 1, b)] = s;
        m[(b + 1, b + 1)] = c;
    }
    m
}

fn unsupported(kind: GeneratorKind, space: &Space) -> GeoError {
    GeoError::Construction(format!("generator {kind:?} does not act on {}", space.kind_name()))
}

fn build_generator(spec: &GeneratorSpec, space: &Space, order: usize) -> Result<Isometry> {
    use GeneratorKind::*;
    let angle = TAU / order as f64;
    if spec.kind == Identity {
        return Ok(Isometry::Identity);
    }
    if spec.kind == Product {
        let Space::Join(l, r) = space else {
            return Err(unsupported(Product, space));
        };
        let (Some(ls), Some(rs)) = (&spec.left, &spec.right) else {
            return Err(GeoError::Construction("product generator needs `left` and `right`".into()));
        };
        return Ok(Isometry::Join(
            Box::new(build_generator(ls, l, order)?),
            Box::new(build_generator(rs, r, order)?),
        ));
    }
    let whole = GeneratorSpec::new(spec.kind, Factor::All);
    match space {
        Space::Sphere { dim, .. } => {
            let n = dim + 1;
            match spec.kind {
                Antipodal => Ok(Isometry::Orthogonal(-DMatrix::<f64>::identity(n, n))),
                Reflection => {
                    let mut m = DMatrix::<f64>::identity(n, n);
                    m[(0, 0)] = -1.0;
                    Ok(Isometry::Orthogonal(m))
                }
                Rotation if *dim >= 1 => Ok(Isometry::Orthogonal(planar_rotation(n, angle))),
                Rotation | Cyclic if *dim == 0 && order == 2 => {
                    Ok(Isometry::Orthogonal(-DMatrix::<f64>::identity(1, 1)))
                }
                Hopf if *dim == 3 => Ok(Isometry::Orthogonal(hopf_matrix(angle))),
                Cyclic if *dim == 3 => Ok(Isometry::Orthogonal(hopf_matrix(angle))),
                Cyclic if *dim >= 1 => Ok(Isometry::Orthogonal(planar_rotation(n, angle))),
                k => Err(unsupported(k, space)),
            }
        }
        Space::Interval { length } => match spec.kind {
            Antipodal | Reflection => Ok(Isometry::IntervalFlip(*length)),
            k => Err(unsupported(k, space)),
        },
        Space::Ellipsoid(_) => {
            let mut m = DMatrix::<f64>::identity(3, 3);
            match spec.kind {
                Antipodal => m = -m,
                Reflection => m[(0, 0)] = -1.0,
                Rotation if order == 2 => {
                    m[(0, 0)] = -1.0;
                    m[(1, 1)] = -1.0;
                }
                k => return Err(unsupported(k, space)),
            }
            Ok(Isometry::Orthogonal(m))
        }
        Space::Join(l, r) => {
            let part = |s: &Space| build_generator(&whole, s, order);
            match spec.factor {
                Factor::Left => Ok(Isometry::Join(Box::new(part(l)?), Box::new(Isometry::Identity))),
                Factor::Right => Ok(Isometry::Join(Box::new(Isometry::Identity), Box::new(part(r)?))),
                Factor::All if spec.kind == Cyclic => {
                    // factors that cannot rotate stay fixed
                    let a = part(l).unwrap_or(Isometry::Identity);
                    let b = part(r).unwrap_or(Isometry::Identity);
                    let iso = Isometry::Join(Box::new(a), Box::new(b));
                    if iso.is_identity(ELEMENT_TOL) {
                        Err(unsupported(Cyclic, space))
                    } else {
                        Ok(iso)
                    }
                }
                Factor::All => Ok(Isometry::Join(Box::new(part(l)?), Box::new(part(r)?))),
                f => Err(GeoError::Construction(format!("factor {f:?} is not defined on a join"))),
            }
        }
        Space::Cone { base, .. } => Ok(Isometry::Cone(Box::new(build_generator(&whole, base, order)?))),
        Space::Suspension(base) => {
            let flips = matches!(spec.kind, Antipodal | Reflection);
            match spec.factor {
                Factor::Poles => Ok(Isometry::Suspension {
                    flip: true,
                    base: Box::new(Isometry::Identity),
                }),
                Factor::Base => Ok(Isometry::Suspension {
                    flip: false,
                    base: Box::new(build_generator(&whole, base, order)?),
                }),
                _ => Ok(Isometry::Suspension {
                    flip: flips,
                    base: Box::new(build_generator(&whole, base, order)?),
                }),
            }
        }
        Space::Quotient { .. } => Err(GeoError::Unsupported(
            "group actions on quotient spaces".into(),
        )),
    }
}

/// A finite isometry group given by its full element list.
#[derive(Debug, Clone)]
pub struct GroupAction {
    elements: Vec<Isometry>,
    /// Cyclic order when the group is a Hopf subgroup `Z_m` acting on a
    /// top-level `S³`; such quotients admit a two-dimensional section.
    hopf_order: Option<usize>,
}

impl GroupAction {
    /// Generate the group from its specification and validate it on `space`.
    pub fn generate(space: &Space, spec: &ActionSpec) -> Result<Self> {
        if spec.order < 1 {
            return Err(GeoError::Construction("group order must be at least 1".into()));
        }
        let gens = spec
            .generators
            .iter()
            .map(|g| build_generator(g, space, spec.order))
            .collect::<Result<Vec<_>>>()?;
        let mut elements = vec![Isometry::Identity];
        let mut frontier = 0;
        while frontier < elements.len() {
            let e = elements[frontier].clone();
            frontier += 1;
            for g in &gens {
                let h = g.compose(&e);
                if !elements.iter().any(|x| x.approx_eq(&h, ELEMENT_TOL)) {
                    if elements.len() >= MAX_ORDER {
                        return Err(GeoError::Construction(format!(
                            "group generated by {:?} exceeds {MAX_ORDER} elements",
                            spec.generators
                        )));
                    }
                    elements.push(h);
                }
            }
        }
        let hopf_order = match (space, spec.generators.as_slice()) {
            (Space::Sphere { dim: 3, .. }, [g])
                if matches!(g.kind, GeneratorKind::Hopf | GeneratorKind::Cyclic) =>
            {
                Some(elements.len())
            }
            _ => None,
        };
        let action = Self { elements, hopf_order };
        action.validate(space, 200)?;
        Ok(action)
    }

    /// Build from an explicit element list; validates identity, closure and
    /// distance preservation.
    pub fn from_elements(space: &Space, elements: Vec<Isometry>) -> Result<Self> {
        let action = Self { elements, hopf_order: None };
        action.validate(space, 200)?;
        Ok(action)
    }

    pub fn elements(&self) -> &[Isometry] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn hopf_order(&self) -> Option<usize> {
        self.hopf_order
    }

    pub fn orbit(&self, p: &Point) -> Vec<Point> {
        self.elements.iter().map(|g| g.apply(p)).collect()
    }

    /// Index of an element equal to `iso`, if any.
    pub fn position(&self, iso: &Isometry) -> Option<usize> {
        self.elements.iter().position(|e| e.approx_eq(iso, ELEMENT_TOL))
    }

    /// Maximum distance defect `| |g x g y| − |x y| |` over `pairs` seeded
    /// random pairs and all elements.
    pub fn isometry_defect(&self, space: &Space, pairs: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..pairs {
            let x = space.sample(&mut rng);
            let y = space.sample(&mut rng);
            let d = space.dist(&x, &y);
            for g in &self.elements {
                worst = worst.max((space.dist(&g.apply(&x), &g.apply(&y)) - d).abs());
            }
        }
        worst
    }

    /// First pair `(i, j)` whose composition is not in the element list.
    pub fn closure_violation(&self) -> Option<(usize, usize)> {
        for (i, a) in self.elements.iter().enumerate() {
            for (j, b) in self.elements.iter().enumerate() {
                if self.position(&a.compose(b)).is_none() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    fn validate(&self, space: &Space, pairs: usize) -> Result<()> {
        if self.elements.is_empty() {
            return Err(GeoError::Construction("group action has no elements".into()));
        }
        if let Some(bad) = self.elements.iter().position(|g| !g.fits(space)) {
            return Err(GeoError::Construction(format!(
                "element {bad} does not match the base space {}",
                space.kind_name()
            )));
        }
        if !self.elements.iter().any(|g| g.is_identity(ELEMENT_TOL)) {
            return Err(GeoError::Construction("group action lacks the identity".into()));
        }
        if let Some((i, j)) = self.closure_violation() {
            return Err(GeoError::Construction(format!(
                "element list not closed: g{i}·g{j} is missing"
            )));
        }
        if let Space::Ellipsoid(e) = space {
            // graph distances are approximate; an orthogonal map that fixes
            // the quadric is an isometry of the surface
            let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
                1.0 / (e.a * e.a),
                1.0 / (e.b * e.b),
                1.0 / (e.c * e.c),
            ]));
            for (i, g) in self.elements.iter().enumerate() {
                if let Isometry::Orthogonal(m) = g {
                    let orth = (m.transpose() * m - DMatrix::identity(3, 3)).amax();
                    let quad = (m.transpose() * &d * m - &d).amax() / d.amax();
                    if orth.max(quad) > ELEMENT_TOL {
                        return Err(GeoError::Construction(format!(
                            "element {i} does not preserve the ellipsoid"
                        )));
                    }
                }
            }
            return Ok(());
        }
        let defect = self.isometry_defect(space, pairs, 0x9e37_79b9);
        if defect > ELEMENT_TOL {
            return Err(GeoError::Construction(format!(
                "group elements are not isometries (defect {defect:e})"
            )));
        }
        Ok(())
    }
}

/// `Z_m` acting by Hopf rotation on `S³` factors and by rotation through
/// `2π/m` on the other sphere factors (including cone bases).
pub fn cyclic_approximation(space: &Space, m: usize) -> Result<GroupAction> {
    if m < 2 {
        return Err(GeoError::Construction(format!("cyclic order must be ≥ 2, got {m}")));
    }
    GroupAction::generate(
        space,
        &ActionSpec::single(GeneratorSpec::new(GeneratorKind::Cyclic, Factor::All), m),
    )
}
