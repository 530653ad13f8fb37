//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::Instant;

use alexgeo_core::comparison::hinge_audit;
use alexgeo_core::constructions::group::{ActionSpec, Factor, GeneratorKind, GeneratorSpec};
use alexgeo_core::harness::{
    half_perimeter, run_all, solve_ellipse_parameter, CheckRecord, ExperimentConfig, ExperimentReport,
};
use alexgeo_core::invariants::{boundary_volume, radius, sphere_volume};
use alexgeo_core::metric::epsilon_net;
use alexgeo_core::{Point, Space, SpaceDescriptor as D};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EPS: f64 = 0.05;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn chord_angle(a: &[f64], b: &[f64]) -> f64 {
    dot(a, b).clamp(-1.0, 1.0).acos()
}

fn coords(p: &Point) -> &[f64] {
    match p {
        Point::Sphere { u } => u,
        _ => panic!("expected a sphere point"),
    }
}

/// Records whose name starts with `prefix`, across all reports.
fn records<'a>(reports: &'a [ExperimentReport], prefix: &str) -> Vec<&'a CheckRecord> {
    reports.iter().flat_map(|r| &r.records).filter(|c| c.name.starts_with(prefix)).collect()
}

fn report<'a>(reports: &'a [ExperimentReport], id: &str) -> &'a ExperimentReport {
    reports.iter().find(|r| r.config.example_id == id).expect("catalogue id")
}

fn all_pass(rs: &[&CheckRecord]) -> bool {
    !rs.is_empty() && rs.iter().all(|r| r.pass)
}

fn worst(rs: &[&CheckRecord]) -> f64 {
    rs.iter().map(|r| r.observed).fold(0.0, f64::max)
}

fn join_embeddings() -> Outcome {
    let started = Instant::now();
    let join = Space::from_descriptor(&D::join(D::sphere(1, 1.0), D::sphere(1, 1.0))).unwrap();
    let susp = Space::from_descriptor(&D::suspension(D::sphere(1, 1.0))).unwrap();
    let embed_join = |p: &Point| match p {
        Point::Join { left, t, right } => {
            let (u, v) = (coords(left), coords(right));
            vec![t.cos() * u[0], t.cos() * u[1], t.sin() * v[0], t.sin() * v[1]]
        }
        _ => panic!("expected a join point"),
    };
    let embed_susp = |p: &Point| match p {
        Point::Suspension { s, base } => {
            let u = coords(base);
            vec![s.sin() * u[0], s.sin() * u[1], s.cos()]
        }
        _ => panic!("expected a suspension point"),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let (mut dj, mut ds) = (0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let (p, q) = (join.sample(&mut rng), join.sample(&mut rng));
        dj = dj.max((join.dist(&p, &q) - chord_angle(&embed_join(&p), &embed_join(&q))).abs());
        let (p, q) = (susp.sample(&mut rng), susp.sample(&mut rng));
        ds = ds.max((susp.dist(&p, &q) - chord_angle(&embed_susp(&p), &embed_susp(&q))).abs());
    }
    let secs = started.elapsed().as_secs_f64();
    Outcome::new(
        dj <= 1e-12 && ds <= 1e-12 && secs < 1.0,
        format!("S¹*S¹ vs S³ {dj:.2e}, Σ₁S¹ vs S² {ds:.2e} (≤ 1e-12), {secs:.2} s (< 1 s)"),
    )
}

fn reassociation(reports: &[ExperimentReport]) -> Outcome {
    // independent check of the left side: [0,π] * [0,π] sits in S³ through
    // (cos t cos a, cos t sin a, sin t cos b, sin t sin b)
    let x = Space::from_descriptor(&D::join(D::interval(PI), D::interval(PI))).unwrap();
    let embed = |p: &Point| match p {
        Point::Join { left, t, right } => match (left.as_ref(), right.as_ref()) {
            (Point::Interval { s: a }, Point::Interval { s: b }) => {
                vec![t.cos() * a.cos(), t.cos() * a.sin(), t.sin() * b.cos(), t.sin() * b.sin()]
            }
            _ => panic!("expected interval factors"),
        },
        _ => panic!("expected a join point"),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let embedded = (0..10_000)
        .map(|_| {
            let (p, q) = (x.sample(&mut rng), x.sample(&mut rng));
            (x.dist(&p, &q) - chord_angle(&embed(&p), &embed(&q))).abs()
        })
        .fold(0.0, f64::max);
    let chain = records(std::slice::from_ref(report(reports, "ex3_2")), "[0,π] * [0,π] vs");
    Outcome::new(
        all_pass(&chain) && embedded <= 1e-9,
        format!("rewrite discrepancy {:.2e}, S³ embedding {embedded:.2e} (≤ 1e-9)", worst(&chain)),
    )
}

/// Half-perimeter `2a E(e)` by the arithmetic-geometric mean.
fn agm_half_perimeter(a: f64, c: f64) -> f64 {
    let (big, small) = if a >= c { (a, c) } else { (c, a) };
    let (mut x, mut y) = (1.0f64, small / big);
    let mut sum = 0.5 * (1.0 - y * y);
    let mut pow = 0.5;
    for _ in 0..40 {
        let cn = 0.5 * (x - y);
        (x, y) = (0.5 * (x + y), (x * y).sqrt());
        pow *= 2.0;
        sum += pow * cn * cn;
    }
    2.0 * big * PI / (2.0 * x) * (1.0 - sum)
}

fn ellipsoid(reports: &[ExperimentReport]) -> Outcome {
    let sol = solve_ellipse_parameter(1.0 / 3.0, 0.25, 1e-12).unwrap();
    let inside = sol.a > 1.0 / 3.0 && sol.a < 0.75;
    let quad = (half_perimeter(sol.a, 0.25).unwrap() - FRAC_PI_2).abs();
    let agm = (agm_half_perimeter(sol.a, 0.25) - FRAC_PI_2).abs();
    let r = report(reports, "ex3_3");
    let diam = records(std::slice::from_ref(r), "ellipsoid(a*, 1/3, 1/4): net diameter");
    let eps_used = r.nets.iter().map(|n| n.epsilon_used).fold(0.0, f64::max);
    Outcome::new(
        inside && quad <= 1e-8 && agm <= 1e-8 && all_pass(&diam) && eps_used == EPS,
        format!(
            "a* = {:.10}, |hp − π/2| = {quad:.1e} (AGM {agm:.1e}), net diameter {:.4} at ε = {eps_used}",
            sol.a,
            diam.first().map_or(f64::NAN, |d| d.observed)
        ),
    )
}

fn radii() -> Outcome {
    let started = Instant::now();
    let z2 = ActionSpec::single(
        GeneratorSpec::product(
            GeneratorSpec::new(GeneratorKind::Antipodal, Factor::All),
            GeneratorSpec::new(GeneratorKind::Reflection, Factor::All),
        ),
        2,
    );
    let rad = |d: &D| radius(&epsilon_net(d, EPS, 42).unwrap()).unwrap().value;
    let near = [D::sphere(2, 0.5), D::lens(2, 2.0), D::lens(3, 1.0), D::quotient(D::lens(3, 1.0), z2.clone())]
        .iter()
        .map(rad)
        .collect::<Vec<_>>();
    let below = rad(&D::quotient(D::lens(2, 1.0), z2));
    let secs = started.elapsed().as_secs_f64();
    let ok = near.iter().all(|r| (r - FRAC_PI_2).abs() <= 2.0 * EPS) && below < FRAC_PI_2 - 2.0 * EPS;
    let shown: Vec<String> = near.iter().map(|r| format!("{r:.4}")).collect();
    Outcome::new(
        ok && secs < 30.0,
        format!(
            "S²(1/2), L²(2), L³(1), L³(1)/Z₂ = [{}] (π/2 ± 0.1), L²(1)/Z₂ = {below:.4} (< π/2 − 0.1), {secs:.1} s (< 30 s)",
            shown.join(", ")
        ),
    )
}

fn volumes() -> Outcome {
    let mut ok = true;
    let mut worst_z = 0.0f64;
    for n in [2, 3] {
        for alpha in [0.5, 1.5, PI] {
            let v = boundary_volume(&D::lens(n, alpha), 1_000_000, 42).unwrap();
            let dev = (v.value - sphere_volume(n - 1)).abs();
            ok &= dev <= 3.0 * v.stderr;
            if v.stderr > 0.0 {
                worst_z = worst_z.max(dev / v.stderr);
            }
        }
    }
    Outcome::new(ok, format!("largest deviation {worst_z:.2} standard errors (≤ 3) at 10⁶ samples"))
}

fn closed_forms(reports: &[ExperimentReport]) -> Outcome {
    let r = std::slice::from_ref(report(reports, "cone_rigidity"));
    let ode = records(r, "Riccati");
    let ident = records(r, "max |λφ' − φ''|");
    let rigid = records(r, "f̄(r0) = 0");
    let mut all = ode.clone();
    all.extend(&ident);
    all.extend(&rigid);
    Outcome::new(
        all_pass(&all) && ode.len() == 1 && ident.len() == 1 && rigid.len() == 1,
        format!(
            "RK4 vs closed form {:.2e} (≤ 1e-8), λφ' − φ'' {:.2e} (≤ 1e-6), misclassified {}",
            worst(&ode),
            worst(&ident),
            worst(&rigid)
        ),
    )
}

fn convexity(reports: &[ExperimentReport]) -> Outcome {
    let r = report(reports, "ball_convexity");
    let probes = records(std::slice::from_ref(r), "");
    let probes: Vec<_> = probes.into_iter().filter(|c| c.name.contains("failed probes")).collect();
    Outcome::new(
        all_pass(&probes) && r.wall_time_s < 10.0,
        format!("{} probe sets at 10³ probes, {:.2} s (< 10 s)", probes.len(), r.wall_time_s),
    )
}

fn traces(reports: &[ExperimentReport]) -> Outcome {
    let mut rs: Vec<&CheckRecord> = records(reports, "B̄_").into_iter().filter(|c| c.name.contains("along")).collect();
    rs.extend(records(reports, "C₁(S¹(3/4))(π/2): max |f − f̄|"));
    Outcome::new(all_pass(&rs), format!("{} trace sets of 10² geodesics, worst {:.2e} (≤ 5·step = 5e-3)", rs.len(), worst(&rs)))
}

fn hinges(reports: &[ExperimentReport]) -> Outcome {
    let tol = 3.0 * EPS;
    let spaces = [D::sphere(2, 1.0), D::lens(3, 1.5), D::cone(1.0, D::sphere(1, 0.75), FRAC_PI_2)];
    let direct: Vec<f64> = spaces.iter().map(|d| hinge_audit(d, 1.0, 10_000, 42, tol).unwrap().max_excess).collect();
    let catalogue = records(reports, "").into_iter().filter(|c| c.name.contains("hinge excess")).collect::<Vec<_>>();
    let m = direct.iter().copied().fold(f64::NEG_INFINITY, f64::max).max(worst(&catalogue));
    Outcome::new(
        direct.iter().all(|&e| e <= tol) && all_pass(&catalogue),
        format!("{} spaces, 10⁴ hinges each, worst excess {m:.2e} (≤ 3ε)", direct.len() + catalogue.len()),
    )
}

fn engineering(reports: &[ExperimentReport], secs: f64, config: &ExperimentConfig) -> Outcome {
    let defects = records(reports, "").into_iter().filter(|c| c.name.ends_with("triangle defect")).collect::<Vec<_>>();
    let audits_ok = all_pass(&defects) && defects.iter().all(|c| c.tolerance <= 1e-9);
    let again = run_all(config).unwrap();
    let same = reports.iter().zip(&again).all(|(a, b)| {
        serde_json::to_string(&a.records).unwrap() == serde_json::to_string(&b.records).unwrap()
    });
    Outcome::new(
        reports.iter().all(|r| r.pass) && secs < 180.0 && audits_ok && same,
        format!(
            "catalogue {} s (< 180 s), {} nets audited, worst triangle defect {:.1e}, rerun identical: {same}",
            secs.round(),
            defects.len(),
            worst(&defects)
        ),
    )
}

fn main() -> ExitCode {
    let started = Instant::now();
    let config = ExperimentConfig::default();
    let reports = run_all(&config).expect("catalogue run");
    let catalogue_secs = started.elapsed().as_secs_f64();
    for r in &reports {
        for c in r.failures() {
            eprintln!("  {}: {} observed {} expected {} tolerance {}", r.config.example_id, c.name, c.observed, c.expected, c.tolerance);
        }
    }
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("join embeddings", Box::new(join_embeddings)),
        ("[0,π]*[0,π] re-association", Box::new(|| reassociation(&reports))),
        ("ellipsoid parameter and diameter", Box::new(|| ellipsoid(&reports))),
        ("radius estimates", Box::new(radii)),
        ("lens boundary volumes", Box::new(volumes)),
        ("model function closed forms", Box::new(|| closed_forms(&reports))),
        ("convexity audits", Box::new(|| convexity(&reports))),
        ("comparison traces", Box::new(|| traces(&reports))),
        ("hinge audits", Box::new(|| hinges(&reports))),
        ("full catalogue, audits, determinism", Box::new(|| engineering(&reports, catalogue_secs, &config))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failed += usize::from(!o.pass);
        println!("criterion {:>2} {} {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
