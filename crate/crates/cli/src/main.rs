use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use alexgeo_core::comparison::convexity::{DEFAULT_SCALE, DEFAULT_TOL};
use alexgeo_core::comparison::{comparison_trace, convexity_check, hinge_audit, sample_geodesics, GeodesicKind};
use alexgeo_core::harness::{emit_report, run_all, run_example, ExperimentConfig, ExperimentReport};
use alexgeo_core::invariants::analyze;
use alexgeo_core::metric::{verify_metric, METRIC_TOL};
use alexgeo_core::{FiniteNet, Space, SpaceDescriptor};
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "alexgeo", version, about = "Finite-net experiments on spaces with curvature bounded below")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an ε-net of a space and export its distance matrix.
    Construct {
        /// JSON space descriptor.
        #[arg(long)]
        space: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// CSV distance matrix; metadata goes to the `.json` sidecar.
        #[arg(long)]
        out: PathBuf,
    },
    /// Radius, diameter, soul, edge and spine of an exported net.
    Invariants {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one audit.
    Verify(VerifyArgs),
    /// Run catalogue examples.
    Example(ExampleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    Metric,
    Convexity,
    Hinge,
    Trace,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Radial,
    Chord,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    check: Check,
    /// Exported net (metric check).
    #[arg(long)]
    net: Option<PathBuf>,
    /// JSON space descriptor (convexity, hinge and trace checks).
    #[arg(long)]
    space: Option<PathBuf>,
    /// Override the default tolerance of the check.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    lambda0: Option<f64>,
    /// Curvature of the comparison model.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    k: f64,
    /// Probes, hinges or geodesics.
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, value_enum, default_value = "chord")]
    kind: Kind,
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    /// Trace check: bound |f − f̄| instead of f − f̄.
    #[arg(long)]
    equality: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExampleArgs {
    #[arg(long, required_unless_present = "all", conflicts_with = "all")]
    id: Option<String>,
    #[arg(long)]
    all: bool,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    mc_samples: usize,
    #[arg(long, default_value_t = 256)]
    cyclic_order: usize,
    /// JSON report; an array of reports with `--all`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_space(path: &Path) -> Result<SpaceDescriptor> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing space descriptor {}", path.display()))
}

fn write_json(value: &serde_json::Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn construct(space: &Path, epsilon: f64, seed: u64, out: &Path) -> Result<bool> {
    let desc = read_space(space)?;
    let compiled = Arc::new(Space::from_descriptor(&desc)?);
    let net = FiniteNet::build(compiled, Some(desc), epsilon, seed)?;
    net.write_csv(out)?;
    eprintln!("{} points, {} boundary, written to {}", net.len(), net.boundary_indices().len(), out.display());
    Ok(true)
}

fn invariants(net: &Path, out: Option<&Path>) -> Result<bool> {
    let net = FiniteNet::read_csv(net)?;
    let report = analyze(&net)?;
    write_json(&serde_json::to_value(&report)?, out)?;
    Ok(true)
}

fn verify(a: &VerifyArgs) -> Result<bool> {
    let space = || -> Result<SpaceDescriptor> {
        match &a.space {
            Some(p) => read_space(p),
            None => bail!("this check needs --space"),
        }
    };
    let lambda0 = || a.lambda0.context("this check needs --lambda0");
    let (value, pass) = match a.check {
        Check::Metric => {
            let Some(path) = &a.net else { bail!("the metric check needs --net") };
            let audit = verify_metric(&FiniteNet::read_csv(path)?, a.tol.unwrap_or(METRIC_TOL));
            (serde_json::to_value(&audit)?, audit.pass)
        }
        Check::Convexity => {
            let count = a.count.unwrap_or(1_000);
            let rep = convexity_check(&space()?, lambda0()?, count, DEFAULT_SCALE, a.seed, a.tol.unwrap_or(DEFAULT_TOL))?;
            (serde_json::to_value(&rep)?, rep.pass)
        }
        Check::Hinge => {
            let count = a.count.unwrap_or(10_000);
            let rep = hinge_audit(&space()?, a.k, count, a.seed, a.tol.unwrap_or(0.15))?;
            (serde_json::to_value(&rep)?, rep.pass)
        }
        Check::Trace => {
            let desc = space()?;
            let l0 = lambda0()?;
            let compiled = Space::from_descriptor(&desc)?;
            let kind = match a.kind {
                Kind::Radial => GeodesicKind::Radial,
                Kind::Chord => GeodesicKind::Chord,
            };
            let tol = a.tol.unwrap_or(5.0 * a.step);
            let paths = sample_geodesics(&compiled, kind, a.count.unwrap_or(100), a.step, a.seed)?;
            let (mut violation, mut gap) = (0.0f64, 0.0f64);
            for path in &paths {
                let t = comparison_trace(&desc, l0, a.k, path, a.step)?;
                violation = violation.max(t.max_violation);
                gap = gap.max(t.max_gap);
            }
            let observed = if a.equality { gap } else { violation };
            let pass = observed <= tol;
            let value = json!({
                "geodesics": paths.len(),
                "max_violation": violation,
                "max_gap": gap,
                "tol": tol,
                "pass": pass,
            });
            (value, pass)
        }
    };
    write_json(&value, a.out.as_deref())?;
    Ok(pass)
}

fn summarize(report: &ExperimentReport) {
    let status = if report.pass { "PASS" } else { "FAIL" };
    println!(
        "{status} {} ({} checks, {:.1} s)",
        report.config.example_id,
        report.records.len(),
        report.wall_time_s
    );
    for r in report.failures() {
        println!("  failed: {} (observed {}, expected {}, tolerance {})", r.name, r.observed, r.expected, r.tolerance);
    }
}

fn example(a: &ExampleArgs) -> Result<bool> {
    let mut cfg = ExperimentConfig::new(a.id.as_deref().unwrap_or("ex3_1"));
    cfg.epsilon = a.epsilon;
    cfg.seed = a.seed;
    cfg.mc_samples = a.mc_samples;
    cfg.cyclic_order = a.cyclic_order;
    cfg.dim = a.dim;
    cfg.output_path = a.out.as_ref().map(|p| p.display().to_string());
    if a.all {
        let reports = run_all(&cfg)?;
        reports.iter().for_each(summarize);
        if let Some(out) = &a.out {
            fs::write(out, serde_json::to_string_pretty(&reports)? + "\n")
                .with_context(|| format!("writing {}", out.display()))?;
        }
        Ok(reports.iter().all(|r| r.pass))
    } else {
        let report = run_example(&cfg.example_id, &cfg)?;
        summarize(&report);
        if let Some(out) = &a.out {
            emit_report(&report, out)?;
        }
        Ok(report.pass)
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("ALEXGEO_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("ALEXGEO_THREADS={v} is not a thread count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    configure_threads()?;
    match &cli.command {
        Command::Construct { space, epsilon, seed, out } => construct(space, *epsilon, *seed, out),
        Command::Invariants { net, out } => invariants(net, out.as_deref()),
        Command::Verify(a) => verify(a),
        Command::Example(a) => example(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
