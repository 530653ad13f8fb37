use serde::{Deserialize, Serialize};

/// Coordinates of a point, shaped like the descriptor it belongs to.
///
/// Lens points are join points and model-ball points are cone points;
/// quotient points are represented by any point of the base.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Point {
    /// Unit vector in `R^{dim+1}`.
    Sphere { u: Vec<f64> },
    /// Coordinate in `[0, length]`.
    Interval { s: f64 },
    /// Cartesian coordinates on the ellipsoid surface.
    Ellipsoid { xyz: [f64; 3] },
    /// `(left, t, right)` with latitude `t ∈ [0, π/2]`; `t = 0` is the left factor.
    Join {
        left: Box<Point>,
        t: f64,
        right: Box<Point>,
    },
    /// `(t, base)` with `t ∈ [0, r0]` the distance to the apex.
    Cone { t: f64, base: Box<Point> },
    /// `(s, base)` with `s ∈ [0, π]` the polar angle from the first pole.
    Suspension { s: f64, base: Box<Point> },
}

impl Point {
    pub fn sphere(u: Vec<f64>) -> Self {
        Point::Sphere { u }
    }

    pub fn interval(s: f64) -> Self {
        Point::Interval { s }
    }

    pub fn join(left: Point, t: f64, right: Point) -> Self {
        Point::Join {
            left: Box::new(left),
            t,
            right: Box::new(right),
        }
    }

    pub fn cone(t: f64, base: Point) -> Self {
        Point::Cone {
            t,
            base: Box::new(base),
        }
    }

    pub fn suspension(s: f64, base: Point) -> Self {
        Point::Suspension {
            s,
            base: Box::new(base),
        }
    }

    /// Join latitude, when this is a join point.
    pub fn latitude(&self) -> Option<f64> {
        match self {
            Point::Join { t, .. } => Some(*t),
            _ => None,
        }
    }
}

/// Coordinates that collapse (cone apex, join at `t = 0` or `π/2`,
/// suspension poles) compare equal regardless of the collapsed factor.
impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        use std::f64::consts::{FRAC_PI_2, PI};
        match (self, other) {
            (Point::Sphere { u }, Point::Sphere { u: v }) => u == v,
            (Point::Interval { s }, Point::Interval { s: t }) => s == t,
            (Point::Ellipsoid { xyz: a }, Point::Ellipsoid { xyz: b }) => a == b,
            (
                Point::Join { left: l1, t: t1, right: r1 },
                Point::Join { left: l2, t: t2, right: r2 },
            ) => {
                t1 == t2
                    && (*t1 == FRAC_PI_2 || l1 == l2)
                    && (*t1 == 0.0 || r1 == r2)
            }
            (Point::Cone { t: t1, base: b1 }, Point::Cone { t: t2, base: b2 }) => {
                t1 == t2 && (*t1 == 0.0 || b1 == b2)
            }
            (Point::Suspension { s: s1, base: b1 }, Point::Suspension { s: s2, base: b2 }) => {
                s1 == s2 && (*s1 == 0.0 || *s1 == PI || b1 == b2)
            }
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cone_apex_ignores_base() {
        let a = Point::cone(0.0, Point::sphere(vec![1.0, 0.0]));
        let b = Point::cone(0.0, Point::sphere(vec![0.0, 1.0]));
        assert_eq!(a, b);
        let c = Point::cone(0.1, Point::sphere(vec![0.0, 1.0]));
        assert_ne!(a, c);
    }

    #[test]
    fn join_equator_ignores_right_factor() {
        let a = Point::join(Point::interval(0.2), 0.0, Point::interval(0.1));
        let b = Point::join(Point::interval(0.2), 0.0, Point::interval(0.9));
        assert_eq!(a, b);
    }
}
