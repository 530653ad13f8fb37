//! Example catalogue, check records and JSON reports.
//!
//! Every example builds its spaces and nets, runs estimators and audits,
//! and compares each observed value with an expected one. Records are
//! deterministic in the configuration; only `wall_time_s` varies between
//! runs.

pub mod ellipse;
mod examples;

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};
use crate::metric::cover::count;
use crate::metric::{verify_metric, FiniteNet, Space, SpaceDescriptor, METRIC_TOL};

pub use ellipse::{half_perimeter, perimeter_bounds, solve_ellipse_parameter, EllipseSolution};

/// Registered example ids, in catalogue order.
pub const CATALOGUE: [&str; 13] = [
    "ex3_1",
    "ex3_2",
    "ex3_3",
    "ex3_4",
    "ex3_5",
    "ex3_6",
    "ex3_7",
    "ex3_8",
    "ex3_9",
    "lens_volume",
    "cone_rigidity",
    "ball_convexity",
    "join_reassoc",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub example_id: String,
    pub epsilon: f64,
    pub seed: u64,
    pub mc_samples: usize,
    pub cyclic_order: usize,
    /// Dimension override for examples that come in a family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            example_id: CATALOGUE[0].to_string(),
            epsilon: 0.05,
            seed: 42,
            mc_samples: 1_000_000,
            cyclic_order: 256,
            dim: None,
            output_path: None,
        }
    }
}

impl ExperimentConfig {
    pub fn new(example_id: &str) -> Self {
        Self { example_id: example_id.to_string(), ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !CATALOGUE.contains(&self.example_id.as_str()) {
            return Err(GeoError::UnknownExample {
                id: self.example_id.clone(),
                catalogue: CATALOGUE.join(", "),
            });
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(GeoError::Domain(format!("epsilon must lie in (0, 1), got {}", self.epsilon)));
        }
        if self.mc_samples < 2 {
            return Err(GeoError::Domain("at least two Monte-Carlo samples are needed".into()));
        }
        if self.cyclic_order < 2 {
            return Err(GeoError::Domain(format!("cyclic order must be ≥ 2, got {}", self.cyclic_order)));
        }
        Ok(())
    }
}

/// How `observed` is compared with `expected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `|observed − expected| ≤ tolerance`
    Within,
    /// `observed < expected − tolerance`
    Below,
    /// `observed ≤ expected + tolerance`
    AtMost,
    /// `observed ≥ expected − tolerance`
    AtLeast,
}

/// Where the expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// A value stated in the source text.
    Claim,
    /// An independent computation (closed form, quadrature, embedding).
    Oracle,
    /// A metric-space or algebraic identity.
    Identity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub relation: Relation,
    pub expected: f64,
    pub observed: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub provenance: Provenance,
    pub source: String,
}

impl CheckRecord {
    pub fn new(name: &str, relation: Relation, expected: f64, observed: f64, tolerance: f64) -> Self {
        let pass = match relation {
            Relation::Within => (observed - expected).abs() <= tolerance,
            Relation::Below => observed < expected - tolerance,
            Relation::AtMost => observed <= expected + tolerance,
            Relation::AtLeast => observed >= expected - tolerance,
        };
        Self {
            name: name.to_string(),
            relation,
            expected,
            observed,
            tolerance,
            pass,
            provenance: Provenance::Identity,
            source: String::new(),
        }
    }

    pub fn within(name: &str, expected: f64, observed: f64, tolerance: f64) -> Self {
        Self::new(name, Relation::Within, expected, observed, tolerance)
    }

    pub fn below(name: &str, expected: f64, observed: f64, tolerance: f64) -> Self {
        Self::new(name, Relation::Below, expected, observed, tolerance)
    }

    pub fn at_most(name: &str, expected: f64, observed: f64, tolerance: f64) -> Self {
        Self::new(name, Relation::AtMost, expected, observed, tolerance)
    }

    pub fn at_least(name: &str, expected: f64, observed: f64, tolerance: f64) -> Self {
        Self::new(name, Relation::AtLeast, expected, observed, tolerance)
    }

    pub fn claim(self, source: &str) -> Self {
        self.sourced(Provenance::Claim, source)
    }

    pub fn oracle(self, source: &str) -> Self {
        self.sourced(Provenance::Oracle, source)
    }

    pub fn identity(self, source: &str) -> Self {
        self.sourced(Provenance::Identity, source)
    }

    fn sourced(mut self, provenance: Provenance, source: &str) -> Self {
        self.provenance = provenance;
        self.source = source.to_string();
        self
    }
}

/// Size and resolution of a net built during a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetSummary {
    pub label: String,
    pub size: usize,
    pub epsilon_used: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub records: Vec<CheckRecord>,
    pub nets: Vec<NetSummary>,
    pub notes: Vec<String>,
    pub pass: bool,
    pub wall_time_s: f64,
}

impl ExperimentReport {
    pub fn empty(config: ExperimentConfig) -> Self {
        Self { config, records: Vec::new(), nets: Vec::new(), notes: Vec::new(), pass: true, wall_time_s: 0.0 }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }
}

/// Collects records for one example run.
pub(crate) struct Run {
    pub cfg: ExperimentConfig,
    pub records: Vec<CheckRecord>,
    pub nets: Vec<NetSummary>,
    pub notes: Vec<String>,
}

/// Resolutions tried, in order, when a net at the configured ε would be
/// too large.
const LADDER: [f64; 8] = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5];

impl Run {
    fn new(cfg: ExperimentConfig) -> Self {
        Self { cfg, records: Vec::new(), nets: Vec::new(), notes: Vec::new() }
    }

    pub fn push(&mut self, r: CheckRecord) {
        self.records.push(r);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Net at the configured ε if it has at most `budget` points, otherwise
    /// at the first coarser resolution that fits. Each net is audited.
    pub fn net(&mut self, label: &str, desc: &SpaceDescriptor, budget: usize) -> Result<FiniteNet> {
        let space = Space::from_descriptor(desc)?;
        let wanted = self.cfg.epsilon;
        let eps = std::iter::once(wanted)
            .chain(LADDER.iter().copied().filter(|&e| e > wanted))
            .find(|&e| count(&space, e) <= budget as f64)
            .ok_or_else(|| GeoError::Capacity {
                epsilon: wanted,
                required: count(&space, wanted) as usize,
                budget,
            })?;
        if eps > wanted {
            self.note(format!(
                "{label}: ε = {eps} used; ε = {wanted} needs {} points (budget {budget})",
                count(&space, wanted)
            ));
        }
        let net = FiniteNet::build(std::sync::Arc::new(space), Some(desc.clone()), eps, self.cfg.seed)?;
        self.nets.push(NetSummary { label: label.to_string(), size: net.len(), epsilon_used: eps });
        let audit = verify_metric(&net, METRIC_TOL);
        self.push(
            CheckRecord::at_most(&format!("{label}: triangle defect"), 0.0, audit.max_triangle_defect, METRIC_TOL)
                .identity("triangle inequality on the net"),
        );
        Ok(net)
    }

    fn finish(self, started: Instant) -> ExperimentReport {
        let pass = self.records.iter().all(|r| r.pass);
        ExperimentReport {
            config: self.cfg,
            records: self.records,
            nets: self.nets,
            notes: self.notes,
            pass,
            wall_time_s: started.elapsed().as_secs_f64(),
        }
    }
}

/// Run one catalogue example.
pub fn run_example(id: &str, config: &ExperimentConfig) -> Result<ExperimentReport> {
    let cfg = ExperimentConfig { example_id: id.to_string(), ..config.clone() };
    cfg.validate()?;
    let started = Instant::now();
    let mut run = Run::new(cfg);
    match id {
        "ex3_1" => examples::radius_criterion(&mut run)?,
        "ex3_2" => examples::reassociation(&mut run)?,
        "ex3_3" => examples::ellipsoid(&mut run)?,
        "ex3_4" => examples::projective_lens(&mut run)?,
        "ex3_5" => examples::edge_with_boundary(&mut run)?,
        "ex3_6" => examples::soul_on_boundary(&mut run)?,
        "ex3_7" => examples::soul_on_boundary_higher(&mut run)?,
        "ex3_8" => examples::higher_spines(&mut run)?,
        "ex3_9" => examples::hopf_dual_pair(&mut run)?,
        "lens_volume" => examples::lens_volume(&mut run)?,
        "cone_rigidity" => examples::cone_rigidity(&mut run)?,
        "ball_convexity" => examples::ball_convexity(&mut run)?,
        "join_reassoc" => examples::join_embeddings(&mut run)?,
        _ => unreachable!("validated against the catalogue"),
    }
    Ok(run.finish(started))
}

/// Run every catalogue example with the same settings.
pub fn run_all(config: &ExperimentConfig) -> Result<Vec<ExperimentReport>> {
    CATALOGUE.iter().map(|id| run_example(id, config)).collect()
}

/// Write the report as pretty JSON.
pub fn emit_report(report: &ExperimentReport, path: &Path) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(report)? + "\n")?;
    Ok(())
}
