use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use alexgeo_core::comparison::{
    comparison_trace, fbar, model_lambda0, model_phi, rigidity_value, sample_geodesics, GeodesicKind,
};
use alexgeo_core::constructions::group::{ActionSpec, Factor, GeneratorKind, GeneratorSpec, GroupAction};
use alexgeo_core::invariants::{diameter, edge_set, radius, soul, spine_set};
use alexgeo_core::metric::{epsilon_net, verify_metric};
use alexgeo_core::{FiniteNet, Point, Space, SpaceDescriptor as D};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn factor() -> impl Strategy<Value = D> {
    prop_oneof![
        (0usize..3, 0.5f64..=1.0).prop_map(|(d, r)| D::sphere(d, r)),
        (0.1f64..PI).prop_map(D::interval),
    ]
}

/// Descriptors built from curvature ≥ 1 factors, one or two levels deep.
fn descriptor() -> impl Strategy<Value = D> {
    prop_oneof![
        factor(),
        (factor(), factor()).prop_map(|(a, b)| D::join(a, b)),
        factor().prop_map(D::suspension),
        (factor(), 0.1f64..=FRAC_PI_2).prop_map(|(b, r)| D::cone(1.0, b, r)),
        (-1.0f64..=0.0, factor(), 0.1f64..2.0).prop_map(|(k, b, r)| D::cone(k, b, r)),
        (2usize..4, 0.2f64..=PI).prop_map(|(n, a)| D::lens(n, a)),
        (-1.0f64..=1.0, 0.2f64..=1.2, 2usize..4).prop_map(|(k, r, d)| D::model_ball(k, r, d)),
    ]
}

fn involution() -> impl Strategy<Value = GeneratorKind> {
    prop_oneof![Just(GeneratorKind::Antipodal), Just(GeneratorKind::Reflection), Just(GeneratorKind::Rotation)]
}

fn flip() -> impl Strategy<Value = GeneratorKind> {
    prop_oneof![Just(GeneratorKind::Antipodal), Just(GeneratorKind::Reflection)]
}

fn triples(space: &Space, seed: u64, count: usize) -> Vec<[Point; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| [space.sample(&mut rng), space.sample(&mut rng), space.sample(&mut rng)]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn descriptors_are_metrics(desc in descriptor(), seed in any::<u64>()) {
        let space = Space::from_descriptor(&desc).unwrap();
        for [x, y, z] in triples(&space, seed, 50) {
            let (xy, yz, xz) = (space.dist(&x, &y), space.dist(&y, &z), space.dist(&x, &z));
            prop_assert!(space.dist(&x, &x) <= 1e-12);
            prop_assert!((xy - space.dist(&y, &x)).abs() <= 1e-12);
            prop_assert!(xz <= xy + yz + 1e-9);
            prop_assert!(xy >= 0.0 && xy <= space.diameter_bound() + 1e-9);
        }
    }

    #[test]
    fn quotients_are_metrics(
        n in 2usize..4, alpha in 0.3f64..PI, a in involution(), b in flip(), seed in any::<u64>()
    ) {
        let action = ActionSpec::single(
            GeneratorSpec::product(GeneratorSpec::new(a, Factor::All), GeneratorSpec::new(b, Factor::All)),
            2,
        );
        let desc = D::quotient(D::lens(n, alpha), action);
        let space = Space::from_descriptor(&desc).unwrap();
        for [x, y, z] in triples(&space, seed, 50) {
            prop_assert!((space.dist(&x, &y) - space.dist(&y, &x)).abs() <= 1e-12);
            prop_assert!(space.dist(&x, &z) <= space.dist(&x, &y) + space.dist(&y, &z) + 1e-9);
        }
    }

    #[test]
    fn group_elements_are_isometries_preserving_latitude(
        a in involution(), b in involution(), order in 2usize..7, seed in any::<u64>()
    ) {
        let base = Space::from_descriptor(&D::join(D::sphere(2, 1.0), D::sphere(1, 1.0))).unwrap();
        let kind = if order == 2 { a } else { GeneratorKind::Rotation };
        let spec = ActionSpec::single(
            GeneratorSpec::product(GeneratorSpec::new(kind, Factor::All), GeneratorSpec::new(b, Factor::All)),
            order,
        );
        let Ok(group) = GroupAction::generate(&base, &spec) else { return Ok(()) };
        prop_assert!(group.closure_violation().is_none());
        prop_assert!(group.isometry_defect(&base, 200, seed) <= 1e-9);
        for [x, _, _] in triples(&base, seed, 20) {
            for g in group.elements() {
                prop_assert_eq!(g.apply(&x).latitude(), x.latitude());
            }
        }
    }

    #[test]
    fn unit_cone_of_radius_half_pi_is_join_with_point(dim in 0usize..3, r in 0.5f64..=1.0, seed in any::<u64>()) {
        let cone = Space::from_descriptor(&D::cone(1.0, D::sphere(dim, r), FRAC_PI_2)).unwrap();
        let join = Space::from_descriptor(&D::join(D::sphere(dim, r), D::sphere(0, 1.0))).unwrap();
        // the point {p} is the right factor at latitude π/2 − t
        let as_join = |p: &Point| match p {
            Point::Cone { t, base } => Point::join(base.as_ref().clone(), FRAC_PI_2 - t, Point::sphere(vec![1.0])),
            _ => unreachable!(),
        };
        for [x, y, _] in triples(&cone, seed, 50) {
            prop_assert!((cone.dist(&x, &y) - join.dist(&as_join(&x), &as_join(&y))).abs() <= 1e-12);
        }
    }

    #[test]
    fn cone_apex_ignores_base(k in -1.0f64..=1.0, seed in any::<u64>()) {
        let space = Space::from_descriptor(&D::cone(k, D::sphere(2, 1.0), 1.0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, q) = (space.sample(&mut rng), space.sample(&mut rng), space.sample(&mut rng));
        let apex = |p: &Point| match p {
            Point::Cone { base, .. } => Point::cone(0.0, base.as_ref().clone()),
            _ => unreachable!(),
        };
        prop_assert_eq!(space.dist(&apex(&a), &apex(&b)), 0.0);
        prop_assert!((space.dist(&apex(&a), &q) - space.dist(&apex(&b), &q)).abs() <= 1e-12);
    }

    #[test]
    fn model_relation_and_rigidity_sign(k in prop_oneof![Just(-1.0), Just(0.0), Just(1.0)], r0 in 0.1f64..1.5, frac in 0.0f64..=1.0) {
        let l0 = model_lambda0(k, r0).unwrap();
        let expected = match k as i32 { 0 => 1.0 / r0, 1 => 1.0 / r0.tan(), _ => 1.0 / r0.tanh() };
        prop_assert!((l0 - expected).abs() <= 1e-12 * expected.max(1.0));
        prop_assert!(l0 * l0 > f64::max(-k, 0.0));
        let r1 = frac * r0;
        let v = rigidity_value(k, r0, r1).unwrap();
        prop_assert!(v <= 1e-12);
        prop_assert!((v - fbar(k, l0, model_phi(k, l0, r1).unwrap(), 0.0, r0)).abs() <= 1e-15);
    }

    #[test]
    fn traces_are_well_formed(k in prop_oneof![Just(-1.0), Just(0.0), Just(1.0)], seed in any::<u64>()) {
        let ball = D::model_ball(k, 1.0, 2);
        let space = Space::from_descriptor(&ball).unwrap();
        let l0 = model_lambda0(k, 1.0).unwrap();
        for path in sample_geodesics(&space, GeodesicKind::Chord, 3, 1e-2, seed).unwrap() {
            let t = comparison_trace(&ball, l0, k, &path, 1e-2).unwrap();
            prop_assert!(t.ts.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(t.f_vals.len(), t.ts.len());
            prop_assert_eq!(t.fbar_vals.len(), t.ts.len());
            let v = t.f_vals.iter().zip(&t.fbar_vals).map(|(f, g)| f - g).fold(0.0, f64::max);
            prop_assert_eq!(t.max_violation, v);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sphere_net_diameter_is_within_two_epsilon(dim in 1usize..3, r in 0.5f64..=1.0, eps in 0.08f64..0.2, seed in any::<u64>()) {
        let net = epsilon_net(&D::sphere(dim, r), eps, seed).unwrap();
        let d = diameter(&net).unwrap().value;
        prop_assert!(d <= PI * r + 1e-12 && d >= PI * r - 2.0 * eps, "{d} vs {}", PI * r);
    }

    #[test]
    fn nets_cover_their_space(desc in descriptor(), seed in any::<u64>()) {
        let space = Arc::new(Space::from_descriptor(&desc).unwrap());
        let eps = 0.2;
        let Ok(net) = FiniteNet::build(space.clone(), Some(desc), eps, seed) else { return Ok(()) };
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 7);
        for _ in 0..20 {
            let x = space.sample(&mut rng);
            let gap = net.points.iter().map(|p| space.dist(&x, p)).fold(f64::INFINITY, f64::min);
            prop_assert!(gap <= eps + 1e-9, "probe at distance {gap}");
        }
    }

    #[test]
    fn nets_are_reproducible_and_metric(desc in descriptor(), seed in any::<u64>()) {
        let Ok(a) = epsilon_net(&desc, 0.25, seed) else { return Ok(()) };
        let b = epsilon_net(&desc, 0.25, seed).unwrap();
        prop_assert_eq!(serde_json::to_string(&a.metadata()).unwrap(), serde_json::to_string(&b.metadata()).unwrap());
        prop_assert!(a.matrix() == b.matrix());
        let audit = verify_metric(&a, 1e-9);
        prop_assert!(audit.pass, "triangle defect {}", audit.max_triangle_defect);
        let (r, d) = (radius(&a).unwrap().value, diameter(&a).unwrap().value);
        // exact on a finite metric up to round-off in 2r
        prop_assert!(r <= d && d <= 2.0 * r + 1e-12);
    }

    #[test]
    fn refinement_moves_estimates_by_at_most_two_epsilon(n in 2usize..4, alpha in 0.3f64..PI) {
        let desc = D::lens(n, alpha);
        let eps = 0.2;
        let coarse = epsilon_net(&desc, eps, 1).unwrap();
        let fine = epsilon_net(&desc, eps / 2.0, 1).unwrap();
        let dr = (radius(&coarse).unwrap().value - radius(&fine).unwrap().value).abs();
        let dd = (diameter(&coarse).unwrap().value - diameter(&fine).unwrap().value).abs();
        prop_assert!(dr <= 2.0 * eps && dd <= 2.0 * eps, "radius moved {dr}, diameter moved {dd}");
    }
}

#[test]
fn spine_of_the_edge_contains_the_soul() {
    for desc in [D::lens(2, 2.0), D::lens(3, 1.0), D::lens(3, 1.5), D::lens(2, PI)] {
        let net = epsilon_net(&desc, 0.1, 42).unwrap();
        let tol = 2.0 * net.epsilon;
        let (s, _) = soul(&net).unwrap();
        let r = radius(&net).unwrap().value;
        let edge = edge_set(&net, s, r, tol);
        let spine = spine_set(&net, &edge.indices, tol).unwrap();
        assert!(spine.contains(&s), "{desc:?}: soul {s} missing from the spine");
    }
}

#[test]
fn lens_boundary_volume_does_not_depend_on_alpha() {
    use alexgeo_core::invariants::boundary_volume;
    for n in [2, 3] {
        let v: Vec<_> = [0.5, 1.5, PI].iter().map(|&a| boundary_volume(&D::lens(n, a), 200_000, 9).unwrap()).collect();
        for w in v.windows(2) {
            let se = (w[0].stderr.powi(2) + w[1].stderr.powi(2)).sqrt();
            assert!((w[0].value - w[1].value).abs() <= 3.0 * se + 1e-12, "n = {n}: {:?}", v);
        }
    }
}
