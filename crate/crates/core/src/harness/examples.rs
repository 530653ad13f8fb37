//! The scripted checks behind each catalogue id.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CheckRecord, Run};
use crate::comparison::convexity::{DEFAULT_SCALE, DEFAULT_TOL};
use crate::comparison::{
    comparison_trace, convexity_check, focal_radius, hinge_audit, model_lambda, model_lambda0, model_phi,
    riccati_integrate, rigidity_value, sample_geodesics, GeodesicKind,
};
use crate::constructions::group::{ActionSpec, Factor, GeneratorKind, GeneratorSpec};
use crate::error::{GeoError, Result};
use crate::harness::ellipse::{half_perimeter, perimeter_bounds, solve_ellipse_parameter, BRACKET};
use crate::invariants::{boundary_volume, diameter, dual_pair_check, edge_set, radius, soul, sphere_volume};
use crate::metric::net::DENSE_LIMIT;
use crate::metric::{FiniteNet, Point, Space, SpaceDescriptor as D};

/// Nets whose checks include a radius scan.
const RADIUS_BUDGET: usize = 6_000;
/// Lazy nets for radius scans of spaces whose diameter exceeds the radius.
const LARGE_BUDGET: usize = 125_000;
/// Nets that only need soul and dual-pair scans.
const SOUL_BUDGET: usize = 25_000;
/// The ellipsoid net at ε = 0.05 has about 7600 points.
const ELLIPSOID_BUDGET: usize = 8_000;
const PAIRS: usize = 10_000;
const HINGES: usize = 10_000;
const PROBES: usize = 1_000;
const GEODESICS: usize = 100;
const STEP: f64 = 1e-3;
/// Radius of the spine ball `B(p, r) ⊂ S^m`.
const SPINE_RADIUS: f64 = 1.0;

fn z2(a: GeneratorKind, b: GeneratorKind) -> ActionSpec {
    ActionSpec::single(
        GeneratorSpec::product(GeneratorSpec::new(a, Factor::All), GeneratorSpec::new(b, Factor::All)),
        2,
    )
}

/// `L^n(1) / Z₂`, antipodal on the edge sphere and reflection on the interval.
fn lens_quotient(n: usize) -> D {
    D::quotient(D::lens(n, 1.0), z2(GeneratorKind::Antipodal, GeneratorKind::Reflection))
}

/// Net indices of join points at latitude `t`.
fn slice(net: &FiniteNet, t: f64) -> Vec<usize> {
    (0..net.len()).filter(|&i| net.points[i].latitude() == Some(t)).collect()
}

fn set_distance(net: &FiniteNet, x: usize, set: &[usize]) -> f64 {
    set.iter().map(|&j| net.dist(x, j)).fold(f64::INFINITY, f64::min)
}

/// Largest base distance from `p` to its orbit; zero on fixed points.
fn orbit_gap(space: &Space, p: &Point) -> f64 {
    match space {
        Space::Quotient { base, .. } => space.orbit(p).iter().map(|q| base.dist(p, q)).fold(0.0, f64::max),
        _ => 0.0,
    }
}

fn space_of(net: &FiniteNet) -> &Space {
    net.space().expect("harness nets are built from spaces")
}

fn join_parts(p: &Point) -> (&Point, f64, &Point) {
    match p {
        Point::Join { left, t, right } => (left, *t, right),
        _ => panic!("expected a join point"),
    }
}

fn interval_coord(p: &Point) -> f64 {
    match p {
        Point::Interval { s } => *s,
        _ => panic!("expected an interval point"),
    }
}

fn sphere_coords(p: &Point) -> &[f64] {
    match p {
        Point::Sphere { u } => u,
        _ => panic!("expected a sphere point"),
    }
}

/// Largest distance discrepancy between two spaces over seeded random
/// pairs pushed through `map`.
fn max_discrepancy(x: &Space, y: &Space, map: impl Fn(&Point) -> Point, pairs: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..pairs)
        .map(|_| {
            let (p, q) = (x.sample(&mut rng), x.sample(&mut rng));
            (x.dist(&p, &q) - y.dist(&map(&p), &map(&q))).abs()
        })
        .fold(0.0, f64::max)
}

fn hinge_record(run: &mut Run, label: &str, desc: &D, tol: f64) -> Result<()> {
    let h = hinge_audit(desc, 1.0, HINGES, run.cfg.seed, tol)?;
    run.push(
        CheckRecord::at_most(&format!("{label}: hinge excess over the curvature-1 model"), 0.0, h.max_excess, tol)
            .claim("hinges in a space with curvature ≥ 1 are no longer than in the unit sphere"),
    );
    Ok(())
}

fn dual_pair_records(run: &mut Run, label: &str, net: &FiniteNet, a: &[usize], b: &[usize], source: &str) -> Result<()> {
    let tol = 3.0 * net.epsilon;
    let dp = dual_pair_check(net, a, b, tol)?;
    run.push(CheckRecord::at_most(&format!("{label}: max ||ab| − π/2|"), 0.0, dp.cross_defect, tol).claim(source));
    run.push(CheckRecord::at_most(&format!("{label}: max ||Ax| + |xB| − π/2|"), 0.0, dp.sum_defect, tol).claim(source));
    Ok(())
}

pub(super) fn radius_criterion(run: &mut Run) -> Result<()> {
    let net = run.net("S²(1/2)", &D::sphere(2, 0.5), DENSE_LIMIT)?;
    let r = radius(&net)?;
    run.push(
        CheckRecord::within("S²(1/2): radius", FRAC_PI_2, r.value, 2.0 * net.epsilon)
            .claim("the sphere of radius 1/2 has radius π/2"),
    );
    hinge_record(run, "S²(1/2)", &D::sphere(2, 0.5), 3.0 * net.epsilon)?;

    // a pair of antipodal points: |ab| = π/2 and every x is on a half great
    // circle from a to −a, although rad A = rad B = 0
    for n in 1..=3 {
        let space = Space::from_descriptor(&D::sphere(n, 0.5))?;
        let mut e = vec![0.0; n + 1];
        e[0] = 1.0;
        let a = Point::sphere(e.clone());
        let b = Point::sphere(e.iter().map(|x| -x).collect());
        let cross = (space.dist(&a, &b) - FRAC_PI_2).abs();
        let mut rng = ChaCha8Rng::seed_from_u64(run.cfg.seed);
        let sum = (0..PAIRS)
            .map(|_| {
                let x = space.sample(&mut rng);
                (space.dist(&a, &x) + space.dist(&x, &b) - FRAC_PI_2).abs()
            })
            .fold(0.0, f64::max);
        run.push(
            CheckRecord::at_most(&format!("S^{n}(1/2) antipodal pair: ||ab| − π/2|"), 0.0, cross, 1e-12)
                .claim("a pair of antipodal points satisfies the first condition of the radius criterion"),
        );
        run.push(
            CheckRecord::at_most(&format!("S^{n}(1/2) antipodal pair: max ||ax| + |xb| − π/2|"), 0.0, sum, 1e-12)
                .identity("every point lies on a half great circle between antipodes"),
        );
    }

    for (n, alpha) in [(2, 2.0), (3, 1.0)] {
        let label = format!("L^{n}({alpha})");
        let net = run.net(&label, &D::lens(n, alpha), LARGE_BUDGET)?;
        let r = radius(&net)?;
        run.push(
            CheckRecord::within(&format!("{label}: radius"), FRAC_PI_2, r.value, 2.0 * net.epsilon)
                .claim("the radius of the lens is π/2"),
        );
    }

    let lens = D::lens(3, 1.5);
    let net = run.net("L³(1.5)", &lens, LARGE_BUDGET)?;
    let (edge, spine) = (slice(&net, 0.0), slice(&net, FRAC_PI_2));
    dual_pair_records(run, "L³(1.5) edge/spine", &net, &edge, &spine, "the factors of a join form a dual pair")?;
    let r = radius(&net)?;
    run.push(
        CheckRecord::within("L³(1.5): radius", FRAC_PI_2, r.value, 2.0 * net.epsilon)
            .claim("a join A * B with rad A ≥ π/2 and rad B ≤ π/2 has radius π/2"),
    );
    hinge_record(run, "L³(1.5)", &lens, 3.0 * net.epsilon)
}

/// Coordinates of a point of `[0, a] * [0, b]` in `R⁴`, with both
/// intervals laid out as arcs of unit circles.
fn interval_join_embedding(p: &Point) -> [f64; 4] {
    let (l, t, r) = join_parts(p);
    let (a, b) = (interval_coord(l), interval_coord(r));
    [t.cos() * a.cos(), t.cos() * a.sin(), t.sin() * b.cos(), t.sin() * b.sin()]
}

pub(super) fn reassociation(run: &mut Run) -> Result<()> {
    let seed = run.cfg.seed;
    // [0, π] * [0, π] = [0, π/2] * S¹(1): the midpoint directions span the
    // quarter circle and the endpoint directions span the circle
    let x = Space::from_descriptor(&D::join(D::interval(PI), D::interval(PI)))?;
    let y = Space::from_descriptor(&D::join(D::interval(FRAC_PI_2), D::sphere(1, 1.0)))?;
    let to_y = |p: &Point| {
        let v = interval_join_embedding(p);
        let (nu, nw) = (v[0].hypot(v[2]), v[1].hypot(v[3]));
        let sigma = v[3].atan2(v[1]).clamp(0.0, FRAC_PI_2);
        let circle = if nu > 0.0 { vec![v[0] / nu, v[2] / nu] } else { vec![1.0, 0.0] };
        Point::join(Point::interval(sigma), nu.atan2(nw), Point::sphere(circle))
    };
    let d = max_discrepancy(&x, &y, to_y, PAIRS, seed);
    run.push(
        CheckRecord::at_most("[0,π] * [0,π] vs [0,π/2] * S¹(1): max distance discrepancy", 0.0, d, 1e-9)
            .claim("[0,π] * [0,π] can be rewritten as [0,π/2] * S¹(1)"),
    );

    // [0, α] * [0, π] = Σ₁([0, α] * {π/2}), the inner join being the cone
    // C₁[0, α] of radius π/2
    let alpha = 1.0;
    let x = Space::from_descriptor(&D::join(D::interval(alpha), D::interval(PI)))?;
    let y = Space::from_descriptor(&D::suspension(D::cone(1.0, D::interval(alpha), FRAC_PI_2)))?;
    let to_y = |p: &Point| {
        let v = interval_join_embedding(p);
        let s = v[2].clamp(-1.0, 1.0).acos();
        let rest = [v[0], v[1], v[3]];
        let n = rest.iter().map(|c| c * c).sum::<f64>().sqrt();
        let (rho, a) = if n > 0.0 {
            ((rest[2] / n).clamp(-1.0, 1.0).acos(), rest[1].atan2(rest[0]).clamp(0.0, alpha))
        } else {
            (0.0, 0.0)
        };
        Point::suspension(s, Point::cone(rho, Point::interval(a)))
    };
    let d = max_discrepancy(&x, &y, to_y, PAIRS, seed ^ 1);
    run.push(
        CheckRecord::at_most("[0,α] * [0,π] vs Σ₁([0,α] * {π/2}): max distance discrepancy", 0.0, d, 1e-9)
            .claim("[0,α] * [0,π] is the suspension of [0,α] * {π/2}"),
    );

    let net = run.net("[0,π] * [0,π]", &D::join(D::interval(PI), D::interval(PI)), LARGE_BUDGET)?;
    let r = radius(&net)?;
    run.push(
        CheckRecord::within("[0,π] * [0,π]: radius", FRAC_PI_2, r.value, 2.0 * net.epsilon)
            .claim("[0,π] * [0,π] has radius π/2"),
    );
    Ok(())
}

pub(super) fn ellipsoid(run: &mut Run) -> Result<()> {
    let (b, c) = (1.0 / 3.0, 0.25);
    let lo = half_perimeter(BRACKET.0, c)?;
    let hi = half_perimeter(BRACKET.1, c)?;
    run.push(
        CheckRecord::below("half-perimeter at a = 1/3", 7.0 / 6.0, lo, 0.0)
            .claim("a = 1/3 gives diameter below 7/6 < π/2"),
    );
    run.push(
        CheckRecord::new("half-perimeter at a = 3/4", super::Relation::AtLeast, FRAC_PI_2, hi, 0.0)
            .claim("a = 3/4 gives diameter above π/2"),
    );
    let sol = solve_ellipse_parameter(b, c, 1e-12)?;
    run.push(CheckRecord::at_least("a* lower end", BRACKET.0, sol.a, 0.0).oracle("bisection bracket (1/3, 3/4)"));
    run.push(CheckRecord::at_most("a* upper end", BRACKET.1, sol.a, 0.0).oracle("bisection bracket (1/3, 3/4)"));
    run.push(
        CheckRecord::within("half-perimeter at a*", FRAC_PI_2, half_perimeter(sol.a, c)?, 1e-8)
            .oracle("adaptive quadrature of the x-z ellipse half-perimeter"),
    );
    run.push(
        CheckRecord::at_least("smallest curvature c²/(a*²b²)", 1.0, sol.min_curvature, 0.0)
            .claim("curvature ≥ 1 needs a ≤ 3/4 when b = 1/3, c = 1/4"),
    );
    let (lower, upper) = perimeter_bounds(sol.a, c);
    run.push(
        CheckRecord::below("π(a* + c)/2 below the half-perimeter", sol.half_perimeter, lower, 0.0)
            .claim("π(a + c)/2 < diam < 2(a + c)"),
    );
    run.push(
        CheckRecord::below("half-perimeter below 2(a* + c)", upper, sol.half_perimeter, 0.0)
            .claim("π(a + c)/2 < diam < 2(a + c)"),
    );
    run.note(
        "the printed bracket for a is (1/3, 4/3); the curvature constraint a < 3/4 stated just before it \
         is used as the bracket instead",
    );
    let net = run.net("ellipsoid(a*, 1/3, 1/4)", &D::Ellipsoid { a: sol.a, b, c }, ELLIPSOID_BUDGET)?;
    let d = diameter(&net)?;
    run.push(
        CheckRecord::within("ellipsoid(a*, 1/3, 1/4): net diameter", FRAC_PI_2, d.value, 3.0 * net.epsilon)
            .oracle("the diameter is the x-z half-perimeter, π/2 at a*"),
    );
    Ok(())
}

pub(super) fn projective_lens(run: &mut Run) -> Result<()> {
    let dims = match run.cfg.dim {
        Some(n) if n >= 2 => vec![n],
        Some(n) => return Err(GeoError::Domain(format!("lens dimension must be ≥ 2, got {n}"))),
        None => vec![2, 3],
    };
    for n in dims {
        let label = format!("L^{n}(1)/Z₂");
        let net = run.net(&label, &lens_quotient(n), LARGE_BUDGET)?;
        let eps = net.epsilon;
        let r = radius(&net)?;
        let quotient = D::quotient(
            D::sphere(n - 2, 1.0),
            ActionSpec::single(GeneratorSpec::new(GeneratorKind::Antipodal, Factor::All), 2),
        );
        let e_net = run.net(&format!("S^{}/Z₂", n - 2), &quotient, DENSE_LIMIT)?;
        let re = radius(&e_net)?;
        if n == 2 {
            run.push(
                CheckRecord::below(&format!("{label}: radius"), FRAC_PI_2, r.value, 2.0 * eps)
                    .claim("rad(X/G) < π/2 for the two-dimensional projective lens"),
            );
            run.push(
                CheckRecord::below("E/G = S⁰/Z₂: radius", FRAC_PI_2, re.value, 2.0 * e_net.epsilon)
                    .claim("rad(E/G) < π/2 for the two-dimensional projective lens"),
            );
            // the vertex is the fixed point 0 ∈ [−α, α]
            let vertex = Point::join(Point::sphere(vec![1.0]), FRAC_PI_2, Point::interval(0.5));
            let space = space_of(&net);
            let far = net
                .boundary_indices()
                .into_iter()
                .map(|b| space.dist(&vertex, &net.points[b]))
                .fold(0.0, f64::max);
            run.push(
                CheckRecord::within(&format!("{label}: farthest boundary point from the vertex"), FRAC_PI_2, far, 2.0 * eps)
                    .claim("the boundary has one point at distance π/2 from the vertex"),
            );
        } else {
            run.push(
                CheckRecord::within(&format!("{label}: radius"), FRAC_PI_2, r.value, 2.0 * eps)
                    .claim("the Z₂ quotient of the lens has radius π/2 when n > 2"),
            );
            run.push(
                CheckRecord::within(&format!("S^{}/Z₂: radius", n - 2), FRAC_PI_2, re.value, 2.0 * e_net.epsilon)
                    .oracle("real projective space of a unit sphere has radius π/2"),
            );
        }
        hinge_record(run, &format!("L^{n}(1)"), &D::lens(n, 1.0), 3.0 * eps)?;
    }
    Ok(())
}

pub(super) fn edge_with_boundary(run: &mut Run) -> Result<()> {
    let r = 0.75;
    let label = "S¹(3/4) * (L²(1)/Z₂)";
    let net = run.net(label, &D::join(D::sphere(1, r), lens_quotient(2)), RADIUS_BUDGET)?;
    let eps = net.epsilon;
    let rad = radius(&net)?;
    run.push(
        CheckRecord::within(&format!("{label}: radius"), FRAC_PI_2, rad.value, 2.0 * eps)
            .claim("a join A * B with rad A ≥ π/2 and rad B ≤ π/2 has radius π/2"),
    );
    let (s, _) = soul(&net)?;
    // the soul of the spine: the midpoint of the interval factor of the lens
    let spine_soul = Point::join(
        Point::sphere(vec![1.0, 0.0]),
        FRAC_PI_2,
        Point::join(Point::sphere(vec![1.0]), FRAC_PI_2, Point::interval(0.5)),
    );
    let space = space_of(&net);
    run.push(
        CheckRecord::at_most("distance from the soul to the soul of S", 0.0, space.dist(&net.points[s], &spine_soul), 2.0 * eps)
            .claim("the soul of X is the soul of S"),
    );
    let edge = edge_set(&net, s, rad.value, 2.0 * eps);
    let flagged = edge.indices.iter().filter(|&&i| net.is_boundary[i]).count();
    run.push(
        CheckRecord::at_least("boundary points in the edge", 1.0, flagged as f64, 0.0)
            .claim("the edge C₁S¹(r) has nonempty boundary"),
    );
    let e = &edge.indices;
    let diam = (0..e.len())
        .map(|i| e[i + 1..].iter().map(|&j| net.dist(e[i], j)).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    run.push(
        CheckRecord::within("edge diameter", PI * r, diam, 4.0 * eps)
            .oracle("C₁S¹(r) of radius π/2 has diameter πr"),
    );
    let (a, b) = (slice(&net, 0.0), slice(&net, FRAC_PI_2));
    dual_pair_records(run, "S¹(3/4) and S", &net, &a, &b, "the factors of a join form a dual pair")
}

/// `(B(p, r) * S^n) / Z₂` with the given involutions on the ball `B ⊂ S^m`
/// and on the sphere. Records soul checks and the dual pair.
fn spine_quotient(
    run: &mut Run,
    label: &str,
    m: usize,
    n: usize,
    on_ball: GeneratorKind,
    on_sphere: GeneratorKind,
    budget: usize,
) -> Result<FiniteNet> {
    let desc = D::quotient(D::join(D::model_ball(1.0, SPINE_RADIUS, m), D::sphere(n, 1.0)), z2(on_ball, on_sphere));
    let net = run.net(label, &desc, budget)?;
    let eps = net.epsilon;
    let (_, depth) = soul(&net)?;
    run.push(
        CheckRecord::below(&format!("{label}: |s ∂X|"), FRAC_PI_2, depth, 0.0)
            .claim("the soul is at distance < π/2 from the boundary"),
    );
    run.push(
        CheckRecord::within(&format!("{label}: soul depth"), SPINE_RADIUS, depth, 2.0 * eps)
            .oracle("the center of the spine ball is at depth r"),
    );
    let (spine, edge) = (slice(&net, 0.0), slice(&net, FRAC_PI_2));
    dual_pair_records(run, &format!("{label} S/G and E/G"), &net, &edge, &spine, "E/G and S/G are dual sets in X/G")?;
    Ok(net)
}

/// Net indices on the boundary of `S/G`: boundary points of the spine
/// slice and points within `ε/2` of the fixed set of the involution.
fn spine_boundary(net: &FiniteNet) -> Vec<usize> {
    let space = space_of(net);
    slice(net, 0.0)
        .into_iter()
        .filter(|&i| net.is_boundary[i] || orbit_gap(space, &net.points[i]) <= net.epsilon)
        .collect()
}

fn soul_on_spine_boundary(run: &mut Run, label: &str, net: &FiniteNet) -> Result<()> {
    let (s, _) = soul(net)?;
    let sb = spine_boundary(net);
    run.push(
        CheckRecord::at_most(&format!("{label}: distance from the soul to ∂(S/G)"), 0.0, set_distance(net, s, &sb), 2.0 * net.epsilon)
            .claim("the soul lies on the boundary of S/G"),
    );
    Ok(())
}

pub(super) fn soul_on_boundary(run: &mut Run) -> Result<()> {
    let label = "(B(p,1) * S¹)/Z₂, reflection";
    let net = spine_quotient(run, label, 2, 1, GeneratorKind::Reflection, GeneratorKind::Rotation, RADIUS_BUDGET)?;
    let r = radius(&net)?;
    run.push(
        CheckRecord::within(&format!("{label}: radius"), FRAC_PI_2, r.value, 2.0 * net.epsilon)
            .claim("these quotients have radius π/2"),
    );
    soul_on_spine_boundary(run, label, &net)
}

pub(super) fn soul_on_boundary_higher(run: &mut Run) -> Result<()> {
    // dimension n + m + 1 with a two-dimensional spine ball
    let dim = run.cfg.dim.unwrap_or(5);
    if dim < 4 {
        return Err(GeoError::Domain(format!("dimension must be ≥ 4, got {dim}")));
    }
    let n = dim - 3;
    let label = format!("(B(p,1) * S^{n})/Z₂, reflection");
    let net = spine_quotient(run, &label, 2, n, GeneratorKind::Reflection, GeneratorKind::Antipodal, SOUL_BUDGET)?;
    run.note(format!("{label}: radius not estimated at this net size; soul and dual-pair checks only"));
    soul_on_spine_boundary(run, &label, &net)
}

pub(super) fn higher_spines(run: &mut Run) -> Result<()> {
    let label = "(B(p,1) * S¹)/Z₂, rotation";
    let net = spine_quotient(run, label, 2, 1, GeneratorKind::Rotation, GeneratorKind::Rotation, RADIUS_BUDGET)?;
    let r = radius(&net)?;
    run.push(
        CheckRecord::within(&format!("{label}: radius"), FRAC_PI_2, r.value, 2.0 * net.epsilon)
            .claim("these quotients have radius π/2"),
    );
    Ok(())
}

pub(super) fn hopf_dual_pair(run: &mut Run) -> Result<()> {
    let m = run.cfg.cyclic_order;
    let hopf = D::quotient(
        D::sphere(3, 1.0),
        ActionSpec::single(GeneratorSpec::new(GeneratorKind::Hopf, Factor::All), m),
    );
    let label = format!("S³/Z_{m}");
    let net = run.net(&label, &hopf, DENSE_LIMIT)?;
    let defect = PI / m as f64;
    let tol = 2.0 * net.epsilon + defect;
    let d = diameter(&net)?;
    let r = radius(&net)?;
    run.push(
        CheckRecord::within(&format!("{label}: diameter"), FRAC_PI_2, d.value, tol)
            .oracle("S³/S¹ is S²(1/2); Z_m orbits are π/m-dense in the circle orbits"),
    );
    run.push(
        CheckRecord::within(&format!("{label}: radius"), FRAC_PI_2, r.value, tol)
            .oracle("S³/S¹ is S²(1/2); Z_m orbits are π/m-dense in the circle orbits"),
    );
    run.note(format!(
        "{label}: cyclic approximation defect π/m = {defect:.6}; rad(X/G) itself is not estimated, the \
         radius criterion only gives rad(X/G) ≥ π/2 from rad(E/G) ≥ π/2"
    ));

    // the dual pair S/G, E/G in X/G = (B(p,1) * S³)/Z_m, on sampled points
    let x = Space::from_descriptor(&D::quotient(
        D::join(D::model_ball(1.0, SPINE_RADIUS, 2), D::sphere(3, 1.0)),
        ActionSpec::single(GeneratorSpec::new(GeneratorKind::Cyclic, Factor::All), m),
    ))?;
    let mut rng = ChaCha8Rng::seed_from_u64(run.cfg.seed);
    let (mut cross, mut sum) = (0.0f64, 0.0f64);
    for _ in 0..2_000 {
        let p = x.sample(&mut rng);
        let (l, _, r) = join_parts(&p);
        let a = Point::join(l.clone(), 0.0, r.clone());
        let b = Point::join(l.clone(), FRAC_PI_2, r.clone());
        sum = sum.max((x.dist(&p, &a) + x.dist(&p, &b) - FRAC_PI_2).abs());
        let q = x.sample(&mut rng);
        let (_, _, e) = join_parts(&q);
        let far = Point::join(l.clone(), FRAC_PI_2, e.clone());
        cross = cross.max((x.dist(&a, &far) - FRAC_PI_2).abs());
    }
    run.push(
        CheckRecord::at_most(&format!("(B(p,1) * S³)/Z_{m}: max ||ab| − π/2|, sampled"), 0.0, cross, 1e-12)
            .claim("E/G and S/G are dual sets in X/G"),
    );
    run.push(
        CheckRecord::at_most(&format!("(B(p,1) * S³)/Z_{m}: max ||Ax| + |xB| − π/2|, sampled"), 0.0, sum, 1e-12)
            .claim("E/G and S/G are dual sets in X/G"),
    );
    Ok(())
}

pub(super) fn lens_volume(run: &mut Run) -> Result<()> {
    let dims = match run.cfg.dim {
        Some(n) if n >= 2 => vec![n],
        Some(n) => return Err(GeoError::Domain(format!("lens dimension must be ≥ 2, got {n}"))),
        None => vec![2, 3],
    };
    for n in dims {
        for alpha in [0.5, 1.5, PI] {
            let v = boundary_volume(&D::lens(n, alpha), run.cfg.mc_samples, run.cfg.seed)?;
            run.push(
                CheckRecord::within(&format!("L^{n}({alpha:.4}): boundary volume"), sphere_volume(n - 1), v.value, 3.0 * v.stderr)
                    .claim("lenses attain the maximal boundary volume vol S^{n−1}(1)"),
            );
        }
    }
    Ok(())
}

pub(super) fn cone_rigidity(run: &mut Run) -> Result<()> {
    let cases = [(0.0, 1.0), (1.0, 1.0), (1.0, 0.3), (-1.0, 0.5), (-1.0, 1.0), (-1.0, 2.0)];
    let (mut ode, mut ident) = (0.0f64, 0.0f64);
    let h = 1e-4;
    for (k, l0) in cases {
        let top = focal_radius(k, l0)?.map_or(2.0, |f| 0.8 * f);
        for i in 1..=1000 {
            let r = top * i as f64 / 1000.0;
            ode = ode.max((riccati_integrate(k, l0, r, STEP)? - model_lambda(k, l0, r)?).abs());
            if r > h {
                let phi = |x: f64| model_phi(k, l0, x);
                let d1 = (phi(r + h)? - phi(r - h)?) / (2.0 * h);
                let d2 = (phi(r + h)? - 2.0 * phi(r)? + phi(r - h)?) / (h * h);
                ident = ident.max((model_lambda(k, l0, r)? * d1 - d2).abs());
            }
        }
    }
    run.push(
        CheckRecord::at_most("Riccati RK4 vs closed-form λ, 10³-point grids", 0.0, ode, 1e-8)
            .oracle("closed-form solutions of λ' + λ² = −k"),
    );
    run.push(
        CheckRecord::at_most("max |λφ' − φ''|, finite differences", 0.0, ident, 1e-6)
            .identity("λ = φ''/φ' for the model functions"),
    );
    let mut misses = 0;
    for k in [-1.0, 0.0, 1.0] {
        let r0 = 1.1;
        for i in 1..=100 {
            let r1 = r0 * i as f64 / 100.0;
            let zero = rigidity_value(k, r0, r1)?.abs() <= 1e-10;
            if zero != (i == 100) {
                misses += 1;
            }
        }
    }
    run.push(
        CheckRecord::at_most("f̄(r0) = 0 exactly when r1 = r0, misclassified grid points", 0.0, misses as f64, 0.0)
            .claim("equality forces the soul to sit at depth r0"),
    );

    let cone = D::cone(1.0, D::sphere(1, 0.75), FRAC_PI_2);
    let space = Space::from_descriptor(&cone)?;
    let l0 = model_lambda0(1.0, FRAC_PI_2)?;
    let mut gap = 0.0f64;
    for kind in [GeodesicKind::Radial, GeodesicKind::Chord] {
        for path in sample_geodesics(&space, kind, GEODESICS, STEP, run.cfg.seed)? {
            gap = gap.max(comparison_trace(&cone, l0, 1.0, &path, STEP)?.max_gap);
        }
    }
    run.push(
        CheckRecord::at_most("C₁(S¹(3/4))(π/2): max |f − f̄| along geodesics", 0.0, gap, 5.0 * STEP)
            .claim("the cone over S¹(3/4) is an equality case of the comparison"),
    );
    hinge_record(run, "C₁(S¹(3/4))(π/2)", &cone, 3.0 * run.cfg.epsilon)
}

pub(super) fn ball_convexity(run: &mut Run) -> Result<()> {
    let seed = run.cfg.seed;
    for (k, r0) in [(-1.0, 0.7), (0.0, 1.0), (1.0, 1.0)] {
        for dim in [2, 3] {
            let ball = D::model_ball(k, r0, dim);
            let label = format!("B̄_{k}({r0}), dim {dim}");
            let l0 = model_lambda0(k, r0)?;
            let own = convexity_check(&ball, l0, PROBES, DEFAULT_SCALE, seed, DEFAULT_TOL)?;
            run.push(
                CheckRecord::at_most(&format!("{label}: failed probes at λ0"), 0.0, own.failures as f64, 0.0)
                    .claim("the model ball has λ0-convex boundary"),
            );
            let over = convexity_check(&ball, 1.5 * l0, PROBES, DEFAULT_SCALE, seed, DEFAULT_TOL)?;
            run.push(
                CheckRecord::at_least(&format!("{label}: failed probes at 1.5 λ0"), 1.0, over.failures as f64, 0.0)
                    .oracle("the boundary principal curvatures equal λ0"),
            );
        }
        let ball = D::model_ball(k, r0, 2);
        let space = Space::from_descriptor(&ball)?;
        let l0 = model_lambda0(k, r0)?;
        let (mut violation, mut radial) = (0.0f64, 0.0f64);
        for path in sample_geodesics(&space, GeodesicKind::Chord, GEODESICS, STEP, seed)? {
            violation = violation.max(comparison_trace(&ball, l0, k, &path, STEP)?.max_violation);
        }
        for path in sample_geodesics(&space, GeodesicKind::Radial, GEODESICS, STEP, seed)? {
            radial = radial.max(comparison_trace(&ball, l0, k, &path, STEP)?.max_gap);
        }
        run.push(
            CheckRecord::at_most(&format!("B̄_{k}({r0}): max (f − f̄) along chords"), 0.0, violation, 5.0 * STEP)
                .claim("f = φ∘r satisfies f ≤ f̄ along geodesics"),
        );
        run.push(
            CheckRecord::at_most(&format!("B̄_{k}({r0}): max |f − f̄| along radii"), 0.0, radial, 5.0 * STEP)
                .claim("radial geodesics of the model ball are equality cases"),
        );
    }
    hinge_record(run, "B̄_1(1), dim 2", &D::model_ball(1.0, 1.0, 2), 3.0 * run.cfg.epsilon)?;
    for (n, alpha) in [(2, 1.0), (3, 2.0)] {
        for l0 in [0.1, 0.5, 1.0, 2.0] {
            let rep = convexity_check(&D::lens(n, alpha), l0, PROBES, DEFAULT_SCALE, seed, DEFAULT_TOL)?;
            run.push(
                CheckRecord::at_least(&format!("L^{n}({alpha}): failed probes at λ0 = {l0}"), 1.0, rep.failures as f64, 0.0)
                    .claim("lens faces are totally geodesic, so the boundary is not λ0-convex for λ0 > 0"),
            );
        }
    }
    Ok(())
}

/// `(cos t·x, sin t·y)` for a join of two spheres.
fn sphere_join_embedding(p: &Point) -> Vec<f64> {
    let (l, t, r) = join_parts(p);
    let mut v: Vec<f64> = sphere_coords(l).iter().map(|c| t.cos() * c).collect();
    v.extend(sphere_coords(r).iter().map(|c| t.sin() * c));
    v
}

pub(super) fn join_embeddings(run: &mut Run) -> Result<()> {
    let seed = run.cfg.seed;
    let s3 = Space::from_descriptor(&D::sphere(3, 1.0))?;
    let join = Space::from_descriptor(&D::join(D::sphere(1, 1.0), D::sphere(1, 1.0)))?;
    let d = max_discrepancy(&join, &s3, |p| Point::sphere(sphere_join_embedding(p)), PAIRS, seed);
    run.push(
        CheckRecord::at_most("S¹ * S¹ vs S³: max distance discrepancy", 0.0, d, 1e-12)
            .oracle("(cos t·x, sin t·y) embeds S¹ * S¹ isometrically onto S³"),
    );

    let s2 = Space::from_descriptor(&D::sphere(2, 1.0))?;
    let susp = Space::from_descriptor(&D::suspension(D::sphere(1, 1.0)))?;
    let to_s2 = |p: &Point| match p {
        Point::Suspension { s, base } => {
            let u = sphere_coords(base);
            Point::sphere(vec![s.sin() * u[0], s.sin() * u[1], s.cos()])
        }
        _ => panic!("expected a suspension point"),
    };
    let d = max_discrepancy(&susp, &s2, to_s2, PAIRS, seed ^ 1);
    run.push(
        CheckRecord::at_most("Σ₁S¹ vs S²: max distance discrepancy", 0.0, d, 1e-12)
            .oracle("(sin s·u, cos s) embeds Σ₁S¹ isometrically onto S²"),
    );

    let cone = Space::from_descriptor(&D::cone(1.0, D::sphere(1, 1.0), FRAC_PI_2))?;
    let to_s2 = |p: &Point| match p {
        Point::Cone { t, base } => {
            let u = sphere_coords(base);
            Point::sphere(vec![t.sin() * u[0], t.sin() * u[1], t.cos()])
        }
        _ => panic!("expected a cone point"),
    };
    let d = max_discrepancy(&cone, &s2, to_s2, PAIRS, seed ^ 2);
    run.push(
        CheckRecord::at_most("C₁S¹(π/2) vs upper hemisphere: max distance discrepancy", 0.0, d, 1e-12)
            .identity("the curvature-1 cone of radius π/2 is the join with a point"),
    );

    // (A * B) * C = A * (B * C) with A = [0, 1], B = S¹, C = [0, 2]
    let (a, c) = (1.0, 2.0);
    let left = Space::from_descriptor(&D::join(D::join(D::interval(a), D::sphere(1, 1.0)), D::interval(c)))?;
    let right = Space::from_descriptor(&D::join(D::interval(a), D::join(D::sphere(1, 1.0), D::interval(c))))?;
    let reassoc = |p: &Point| {
        let (ab, tau, z) = join_parts(p);
        let (x, t, y) = join_parts(ab);
        // (cos τ cos t·x, cos τ sin t·y, sin τ·z) = (cos σ·x, sin σ cos u·y, sin σ sin u·z)
        let sigma = (tau.cos() * t.cos()).clamp(-1.0, 1.0).acos();
        let u = tau.sin().atan2(tau.cos() * t.sin());
        Point::join(x.clone(), sigma, Point::join(y.clone(), u, z.clone()))
    };
    let d = max_discrepancy(&left, &right, reassoc, PAIRS, seed ^ 3);
    run.push(
        CheckRecord::at_most("([0,1] * S¹) * [0,2] vs [0,1] * (S¹ * [0,2])", 0.0, d, 1e-9)
            .identity("spherical joins are associative"),
    );
    Ok(())
}
