use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::constructions::formulas::{join_formula, law_of_cosines, max_cone_radius, suspension_formula};
use crate::constructions::group::GroupAction;
use crate::error::{domain, GeoError, Result};
use crate::metric::ellipsoid::EllipsoidSurface;
use crate::metric::primitives::{check_unit, unit_angle};
use crate::metric::{Point, SpaceDescriptor};

const COORD_TOL: f64 = 1e-12;

/// A descriptor compiled into an evaluable metric space.
///
/// Lenses and model balls are expanded into their join and cone forms;
/// quotients carry their generated element list.
#[derive(Debug, Clone)]
pub enum Space {
    Sphere { dim: usize, radius: f64 },
    Interval { length: f64 },
    Ellipsoid(Arc<EllipsoidSurface>),
    Join(Box<Space>, Box<Space>),
    Cone { k: f64, base: Box<Space>, r0: f64 },
    Suspension(Box<Space>),
    Quotient { base: Box<Space>, action: Arc<GroupAction> },
}

fn curv_one_factor(space: &Space, role: &str) -> Result<()> {
    if let Space::Sphere { radius, .. } = space {
        if !(0.5..=1.0).contains(radius) {
            return Err(GeoError::Construction(format!(
                "{role} sphere radius {radius} outside [1/2, 1]"
            )));
        }
    }
    if let Space::Ellipsoid(_) = space {
        return Err(GeoError::Unsupported(format!("ellipsoid as a {role}")));
    }
    Ok(())
}

impl Space {
    pub fn from_descriptor(d: &SpaceDescriptor) -> Result<Space> {
        Ok(match d {
            SpaceDescriptor::Sphere { dim, radius } => {
                if !(*radius > 0.0) || !radius.is_finite() {
                    return domain(format!("sphere radius must be positive, got {radius}"));
                }
                Space::Sphere { dim: *dim, radius: *radius }
            }
            SpaceDescriptor::Interval { length } => {
                if !(*length > 0.0 && *length <= PI) {
                    return domain(format!("interval length {length} outside (0, π]"));
                }
                Space::Interval { length: *length }
            }
            SpaceDescriptor::Ellipsoid { a, b, c } => {
                Space::Ellipsoid(Arc::new(EllipsoidSurface::new(*a, *b, *c)?))
            }
            SpaceDescriptor::Lens { dim, alpha } => {
                if *dim < 2 {
                    return domain(format!("lens dimension must be at least 2, got {dim}"));
                }
                if !(*alpha > 0.0 && *alpha <= PI) {
                    return domain(format!("lens angle {alpha} outside (0, π]"));
                }
                Space::Join(
                    Box::new(Space::Sphere { dim: dim - 2, radius: 1.0 }),
                    Box::new(Space::Interval { length: *alpha }),
                )
            }
            SpaceDescriptor::Join { left, right } => {
                let l = Space::from_descriptor(left)?;
                let r = Space::from_descriptor(right)?;
                curv_one_factor(&l, "join factor")?;
                curv_one_factor(&r, "join factor")?;
                Space::Join(Box::new(l), Box::new(r))
            }
            SpaceDescriptor::Cone { k, base, r0 } => {
                let b = Space::from_descriptor(base)?;
                Space::cone(*k, b, *r0)?
            }
            SpaceDescriptor::Suspension { base } => {
                let b = Space::from_descriptor(base)?;
                curv_one_factor(&b, "suspension base")?;
                Space::Suspension(Box::new(b))
            }
            SpaceDescriptor::Quotient { base, action } => {
                let b = Space::from_descriptor(base)?;
                let g = GroupAction::generate(&b, action)?;
                Space::Quotient { base: Box::new(b), action: Arc::new(g) }
            }
            SpaceDescriptor::ModelBall { k, r0, dim } => {
                if *dim < 1 {
                    return domain("model ball dimension must be at least 1");
                }
                Space::cone(*k, Space::Sphere { dim: dim - 1, radius: 1.0 }, *r0)?
            }
        })
    }

    fn cone(k: f64, base: Space, r0: f64) -> Result<Space> {
        if !k.is_finite() {
            return domain(format!("cone curvature must be finite, got {k}"));
        }
        if !(r0 > 0.0) || !r0.is_finite() {
            return Err(GeoError::Construction(format!("cone radius must be positive, got {r0}")));
        }
        if r0 > max_cone_radius(k) * (1.0 + 1e-12) {
            return Err(GeoError::Construction(format!(
                "cone radius {r0} exceeds π/(2√k) = {} for k = {k}",
                max_cone_radius(k)
            )));
        }
        if let Space::Ellipsoid(_) = base {
            return Err(GeoError::Unsupported("cone over an ellipsoid".into()));
        }
        Ok(Space::Cone { k, base: Box::new(base), r0 })
    }

    /// Quotient of `base` by an already generated action.
    pub fn quotient(base: Space, action: GroupAction) -> Space {
        Space::Quotient { base: Box::new(base), action: Arc::new(action) }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Space::Sphere { .. } => "sphere",
            Space::Interval { .. } => "interval",
            Space::Ellipsoid(_) => "ellipsoid",
            Space::Join(..) => "join",
            Space::Cone { .. } => "cone",
            Space::Suspension(_) => "suspension",
            Space::Quotient { .. } => "quotient",
        }
    }

    /// Distance between two points assumed valid for this space.
    pub fn dist(&self, p: &Point, q: &Point) -> f64 {
        match (self, p, q) {
            (Space::Sphere { radius, .. }, Point::Sphere { u }, Point::Sphere { u: v }) => {
                radius * unit_angle(u, v)
            }
            (Space::Interval { .. }, Point::Interval { s }, Point::Interval { s: t }) => (s - t).abs(),
            (Space::Ellipsoid(e), Point::Ellipsoid { xyz: a }, Point::Ellipsoid { xyz: b }) => {
                e.distance(a, b)
            }
            (
                Space::Join(l, r),
                Point::Join { left: x1, t: t1, right: y1 },
                Point::Join { left: x2, t: t2, right: y2 },
            ) => {
                let a = if *t1 == FRAC_PI_2 || *t2 == FRAC_PI_2 { 0.0 } else { l.dist(x1, x2) };
                let b = if *t1 == 0.0 || *t2 == 0.0 { 0.0 } else { r.dist(y1, y2) };
                join_formula(*t1, *t2, a, b)
            }
            (Space::Cone { k, base, .. }, Point::Cone { t: t1, base: y1 }, Point::Cone { t: t2, base: y2 }) => {
                let g = if *t1 == 0.0 || *t2 == 0.0 { 0.0 } else { base.dist(y1, y2).min(PI) };
                law_of_cosines(*k, *t1, *t2, g)
            }
            (Space::Suspension(b), Point::Suspension { s: s1, base: y1 }, Point::Suspension { s: s2, base: y2 }) => {
                let pole = |s: f64| s == 0.0 || s == PI;
                let g = if pole(*s1) || pole(*s2) { 0.0 } else { b.dist(y1, y2) };
                suspension_formula(*s1, *s2, g)
            }
            (Space::Quotient { base, action }, p, q) => match (action.hopf_order(), base.as_ref()) {
                (Some(m), Space::Sphere { dim: 3, radius }) => match (p, q) {
                    (Point::Sphere { u }, Point::Sphere { u: v }) => radius * hopf_quotient_angle(u, v, m),
                    _ => panic!("point kinds do not match the quotient base"),
                },
                _ => action
                    .elements()
                    .iter()
                    .map(|g| base.dist(p, &g.apply(q)))
                    .fold(f64::INFINITY, f64::min),
            },
            (s, p, q) => panic!("points {p:?} and {q:?} do not belong to a {}", s.kind_name()),
        }
    }

    /// Validated distance.
    pub fn distance(&self, p: &Point, q: &Point) -> Result<f64> {
        self.validate_point(p)?;
        self.validate_point(q)?;
        Ok(self.dist(p, q))
    }

    /// Check that `p` has the right shape and satisfies domain constraints.
    pub fn validate_point(&self, p: &Point) -> Result<()> {
        let in_range = |x: f64, hi: f64, what: &str| -> Result<()> {
            if x.is_finite() && x >= -COORD_TOL && x <= hi + COORD_TOL {
                Ok(())
            } else {
                domain(format!("{what} {x} outside [0, {hi}]"))
            }
        };
        match (self, p) {
            (Space::Sphere { dim, .. }, Point::Sphere { u }) => {
                if u.len() != dim + 1 {
                    return domain(format!("sphere point has {} coordinates, expected {}", u.len(), dim + 1));
                }
                check_unit(u, "u")
            }
            (Space::Interval { length }, Point::Interval { s }) => in_range(*s, *length, "interval coordinate"),
            (Space::Ellipsoid(e), Point::Ellipsoid { xyz }) => e.check_point(xyz),
            (Space::Join(l, r), Point::Join { left, t, right }) => {
                in_range(*t, FRAC_PI_2, "join latitude")?;
                l.validate_point(left)?;
                r.validate_point(right)
            }
            (Space::Cone { base, r0, .. }, Point::Cone { t, base: y }) => {
                in_range(*t, *r0, "cone radial coordinate")?;
                base.validate_point(y)
            }
            (Space::Suspension(b), Point::Suspension { s, base }) => {
                in_range(*s, PI, "suspension coordinate")?;
                b.validate_point(base)
            }
            (Space::Quotient { base, .. }, p) => base.validate_point(p),
            (s, p) => domain(format!("point {p:?} does not belong to a {}", s.kind_name())),
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Space::Sphere { dim, .. } => *dim,
            Space::Interval { .. } => 1,
            Space::Ellipsoid(_) => 2,
            Space::Join(l, r) => l.dimension() + r.dimension() + 1,
            Space::Cone { base, .. } | Space::Suspension(base) => base.dimension() + 1,
            Space::Quotient { base, .. } => base.dimension(),
        }
    }

    pub fn has_boundary(&self) -> bool {
        match self {
            Space::Sphere { .. } | Space::Ellipsoid(_) => false,
            Space::Interval { .. } | Space::Cone { .. } => true,
            Space::Join(l, r) => l.has_boundary() || r.has_boundary(),
            Space::Suspension(b) | Space::Quotient { base: b, .. } => b.has_boundary(),
        }
    }

    /// Boundary membership from coordinates. Quotient boundaries are the
    /// images of base boundaries.
    pub fn is_boundary(&self, p: &Point) -> bool {
        let at = |x: f64, v: f64| (x - v).abs() <= COORD_TOL;
        match (self, p) {
            (Space::Interval { length }, Point::Interval { s }) => at(*s, 0.0) || at(*s, *length),
            (Space::Join(l, r), Point::Join { left, t, right }) => {
                (l.has_boundary() && (at(*t, FRAC_PI_2) || l.is_boundary(left)))
                    || (r.has_boundary() && (at(*t, 0.0) || r.is_boundary(right)))
            }
            (Space::Cone { base, r0, .. }, Point::Cone { t, base: y }) => {
                at(*t, *r0) || (base.has_boundary() && (at(*t, 0.0) || base.is_boundary(y)))
            }
            (Space::Suspension(b), Point::Suspension { s, base }) => {
                b.has_boundary() && (at(*s, 0.0) || at(*s, PI) || b.is_boundary(base))
            }
            (Space::Quotient { base, .. }, p) => base.is_boundary(p),
            _ => false,
        }
    }

    /// Upper bound on the diameter, used to validate net resolutions.
    pub fn diameter_bound(&self) -> f64 {
        match self {
            Space::Sphere { radius, .. } => PI * radius,
            Space::Interval { length } => *length,
            Space::Ellipsoid(e) => PI * e.max_semi_axis(),
            Space::Join(..) | Space::Suspension(_) => PI,
            Space::Cone { k, r0, .. } => {
                if *k > 0.0 {
                    (2.0 * r0).min(PI / k.sqrt())
                } else {
                    2.0 * r0
                }
            }
            Space::Quotient { base, .. } => base.diameter_bound(),
        }
    }

    /// A random point. Not area-uniform in general; intended for probes and
    /// validation.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match self {
            Space::Sphere { dim, .. } => Point::Sphere { u: random_unit(*dim + 1, rng) },
            Space::Interval { length } => Point::Interval { s: rng.random::<f64>() * length },
            Space::Ellipsoid(e) => {
                let u = random_unit(3, rng);
                Point::Ellipsoid { xyz: e.project_direction([u[0], u[1], u[2]]) }
            }
            Space::Join(l, r) => {
                Point::join(l.sample(rng), rng.random::<f64>() * FRAC_PI_2, r.sample(rng))
            }
            Space::Cone { base, r0, .. } => Point::cone(rng.random::<f64>() * r0, base.sample(rng)),
            Space::Suspension(b) => Point::suspension(rng.random::<f64>() * PI, b.sample(rng)),
            Space::Quotient { base, .. } => base.sample(rng),
        }
    }

    /// Orbit of `p` under the quotient action (just `[p]` otherwise).
    pub fn orbit(&self, p: &Point) -> Vec<Point> {
        match self {
            Space::Quotient { action, .. } => action.orbit(p),
            _ => vec![p.clone()],
        }
    }

    /// `(dim, alpha)` when this is the join form of a lens.
    pub fn as_lens(&self) -> Option<(usize, f64)> {
        match self {
            Space::Join(l, r) => match (l.as_ref(), r.as_ref()) {
                (Space::Sphere { dim, radius }, Space::Interval { length }) if *radius == 1.0 => {
                    Some((dim + 2, *length))
                }
                _ => None,
            },
            _ => None,
        }
    }

    /// `(k, dim, r0)` when this is a model ball `B̄_k(r0)`.
    pub fn as_model_ball(&self) -> Option<(f64, usize, f64)> {
        match self {
            Space::Cone { k, base, r0 } => match base.as_ref() {
                Space::Sphere { dim, radius } if *radius == 1.0 => Some((*k, dim + 1, *r0)),
                _ => None,
            },
            _ => None,
        }
    }
}

pub(crate) fn random_unit<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

fn hopf_rotate(v: &[f64], angle: f64) -> [f64; 4] {
    let (s, c) = angle.sin_cos();
    [
        c * v[0] - s * v[1],
        s * v[0] + c * v[1],
        c * v[2] - s * v[3],
        s * v[2] + c * v[3],
    ]
}

/// Angle in `S³/Z_m` for the Hopf action: the nearest orbit point of `v`
/// is found from the phase of the Hermitian product, then measured exactly.
pub(crate) fn hopf_quotient_angle(u: &[f64], v: &[f64], m: usize) -> f64 {
    let re = u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3];
    let im = u[0] * v[1] - u[1] * v[0] + u[2] * v[3] - u[3] * v[2];
    let step = TAU / m as f64;
    // Re(e^{iθ}⟨u,v⟩) is largest for θ closest to −arg⟨u,v⟩
    let target = -im.atan2(re) / step;
    let lo = target.floor();
    [lo, lo + 1.0]
        .iter()
        .map(|&j| unit_angle(u, &hopf_rotate(v, j * step)))
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::group::{cyclic_approximation, ActionSpec, Factor, GeneratorKind, GeneratorSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lens_expands_to_join() {
        let s = Space::from_descriptor(&SpaceDescriptor::lens(3, 1.0)).unwrap();
        assert_eq!(s.as_lens(), Some((3, 1.0)));
        assert_eq!(s.dimension(), 3);
        assert!(s.has_boundary());
    }

    #[test]
    fn join_factor_radius_is_checked() {
        let d = SpaceDescriptor::join(SpaceDescriptor::sphere(1, 0.3), SpaceDescriptor::interval(1.0));
        assert!(matches!(Space::from_descriptor(&d), Err(GeoError::Construction(_))));
        let d = SpaceDescriptor::join(SpaceDescriptor::sphere(1, 0.5), SpaceDescriptor::interval(1.0));
        assert!(Space::from_descriptor(&d).is_ok());
    }

    #[test]
    fn positive_cone_radius_is_bounded() {
        let d = SpaceDescriptor::model_ball(1.0, 2.0, 2);
        assert!(matches!(Space::from_descriptor(&d), Err(GeoError::Construction(_))));
    }

    #[test]
    fn lens_boundary_flags() {
        let s = Space::from_descriptor(&SpaceDescriptor::lens(2, PI)).unwrap();
        let x = Point::sphere(vec![1.0]);
        assert!(s.is_boundary(&Point::join(x.clone(), 0.0, Point::interval(1.0))));
        assert!(s.is_boundary(&Point::join(x.clone(), 0.7, Point::interval(PI))));
        assert!(!s.is_boundary(&Point::join(x, 0.7, Point::interval(1.0))));
    }

    #[test]
    fn hopf_fast_path_matches_element_scan() {
        let base = Space::Sphere { dim: 3, radius: 1.0 };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for m in [2, 3, 7, 64] {
            let g = cyclic_approximation(&base, m).unwrap();
            assert_eq!(g.hopf_order(), Some(m));
            let q = Space::quotient(base.clone(), g.clone());
            for _ in 0..200 {
                let (x, y) = (base.sample(&mut rng), base.sample(&mut rng));
                let brute = g
                    .elements()
                    .iter()
                    .map(|e| base.dist(&x, &e.apply(&y)))
                    .fold(f64::INFINITY, f64::min);
                assert!((q.dist(&x, &y) - brute).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn antipodal_circle_quotient_identifies_antipodes() {
        let base = Space::Sphere { dim: 1, radius: 1.0 };
        let spec = ActionSpec::single(GeneratorSpec::new(GeneratorKind::Antipodal, Factor::All), 2);
        let g = GroupAction::generate(&base, &spec).unwrap();
        let q = Space::quotient(base, g);
        let d = q.dist(&Point::sphere(vec![1.0, 0.0]), &Point::sphere(vec![-1.0, 0.0]));
        assert!(d.abs() < 1e-15);
    }

    #[test]
    fn validate_rejects_bad_points() {
        let s = Space::from_descriptor(&SpaceDescriptor::lens(2, 1.0)).unwrap();
        assert!(s.validate_point(&Point::interval(0.3)).is_err());
        let p = Point::join(Point::sphere(vec![1.0]), 1.7, Point::interval(0.3));
        assert!(s.validate_point(&p).is_err());
        let p = Point::join(Point::sphere(vec![1.0]), 0.7, Point::interval(1.3));
        assert!(s.validate_point(&p).is_err());
    }
}
