//! Reproducible experiments: each one is a pure function of its
//! [`ExperimentConfig`] and produces CSV tables, SVG plots and a JSON
//! summary.
//!
//! Timings are written to their own file so that the tables and
//! `report.json` are byte-identical across re-runs of the same config.

mod classes;
mod counterexample;
mod handwriting;
mod instability;
mod linked_twist;
mod perturb;
mod sliding_window;
mod stability;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::RngCore;
use serde::{Deserialize, Serialize};

pub use classes::{run_delta_sweep, run_rvl, DeltaSweepParams, RvlParams, CLASSES};
pub use counterexample::{run_counterexample, CounterexampleParams};
pub use handwriting::{run_handwriting, HandwritingParams};
pub use instability::{instability_pair, run_instability, InstabilityParams};
pub use linked_twist::{run_linked_twist, LinkedTwistParams};
pub use perturb::{run_perturb, PerturbParams};
pub use sliding_window::{run_sliding_window, SlidingWindowParams};
pub use stability::{run_stability_curve, stable_closed_form, StabilityCurveParams};

use crate::error::{Error, Result};
use crate::homology::{rips_persistence, PersistenceDiagram};
use crate::io;
use crate::pointcloud::{DistanceMatrix, PointCloud};
use crate::rips::{RipsOptions, RipsScale};
use crate::svg::Plot;
use crate::vectorize::{self, DEFAULT_DELTA};

/// Default max filtration for clouds in the unit square (its diameter).
pub const UNIT_BOX_DIAMETER: f64 = std::f64::consts::SQRT_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentName {
    Instability,
    StabilityCurve,
    Perturb,
    Rvl,
    DeltaSweep,
    LinkedTwist,
    Handwriting,
    SlidingWindow,
    Counterexample,
}

impl ExperimentName {
    pub const ALL: [ExperimentName; 9] = [
        ExperimentName::Instability,
        ExperimentName::StabilityCurve,
        ExperimentName::Perturb,
        ExperimentName::Rvl,
        ExperimentName::DeltaSweep,
        ExperimentName::LinkedTwist,
        ExperimentName::Handwriting,
        ExperimentName::SlidingWindow,
        ExperimentName::Counterexample,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentName::Instability => "instability",
            ExperimentName::StabilityCurve => "stability-curve",
            ExperimentName::Perturb => "perturb",
            ExperimentName::Rvl => "rvl",
            ExperimentName::DeltaSweep => "delta-sweep",
            ExperimentName::LinkedTwist => "linked-twist",
            ExperimentName::Handwriting => "handwriting",
            ExperimentName::SlidingWindow => "sliding-window",
            ExperimentName::Counterexample => "counterexample",
        }
    }
}

/// `count` values from `start` to `end`, evenly spaced (geometrically when
/// `log`). With `open`, both endpoints are excluded.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub count: usize,
    #[serde(default)]
    pub open: bool,
    #[serde(default)]
    pub log: bool,
}

impl Grid {
    pub fn closed(start: f64, end: f64, count: usize) -> Self {
        Self { start, end, count, open: false, log: false }
    }

    pub fn open(start: f64, end: f64, count: usize) -> Self {
        Self { start, end, count, open: true, log: false }
    }

    pub fn log(start: f64, end: f64, count: usize) -> Self {
        Self { start, end, count, open: false, log: true }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.count >= 1
            && self.start.is_finite()
            && self.end.is_finite()
            && (self.end > self.start || (self.count == 1 && !self.open && self.end == self.start))
            && (!self.log || self.start > 0.0);
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("grid {self:?} is not strictly increasing")))
        }
    }

    pub fn values(&self) -> Vec<f64> {
        let (lo, hi) = if self.log { (self.start.ln(), self.end.ln()) } else { (self.start, self.end) };
        let n = self.count;
        (0..n)
            .map(|k| {
                if !self.open && k == 0 {
                    return self.start;
                }
                if !self.open && k + 1 == n {
                    return self.end;
                }
                let t = if self.open { (k + 1) as f64 / (n + 1) as f64 } else { k as f64 / (n - 1) as f64 };
                let v = lo + t * (hi - lo);
                if self.log {
                    v.exp()
                } else {
                    v
                }
            })
            .collect()
    }
}

impl std::str::FromStr for Grid {
    type Err = Error;

    /// `START:END:COUNT[:open][:log]`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::invalid(format!("grid `{s}` is not START:END:COUNT[:open][:log]"));
        if parts.len() < 3 {
            return Err(bad());
        }
        let mut grid = Grid {
            start: parts[0].trim().parse().map_err(|_| bad())?,
            end: parts[1].trim().parse().map_err(|_| bad())?,
            count: parts[2].trim().parse().map_err(|_| bad())?,
            open: false,
            log: false,
        };
        for flag in &parts[3..] {
            match flag.trim() {
                "open" => grid.open = true,
                "log" => grid.log = true,
                _ => return Err(bad()),
            }
        }
        grid.validate()?;
        Ok(grid)
    }
}

/// Rips and vectorization settings shared by the point-cloud experiments.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pipeline {
    /// Homology dimension that is vectorized.
    pub dim: usize,
    /// `None` builds the full complex.
    pub max_filtration: Option<f64>,
    pub delta: f64,
    pub cap_at_max: bool,
    pub double_scale: bool,
}

impl Pipeline {
    pub fn new(max_filtration: Option<f64>) -> Self {
        Self { dim: 1, max_filtration, delta: DEFAULT_DELTA, cap_at_max: false, double_scale: false }
    }

    pub fn rips_options(&self) -> RipsOptions {
        RipsOptions {
            max_filtration: self.max_filtration.unwrap_or(f64::INFINITY),
            max_dim: 2,
            scale: if self.double_scale { RipsScale::HalfLength } else { RipsScale::Length },
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.rips_options().validate()?;
        if self.dim > 1 {
            return Err(Error::invalid(format!("homology dimension must be 0 or 1, got {}", self.dim)));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(Error::invalid(format!("delta must be finite and non-negative, got {}", self.delta)));
        }
        Ok(())
    }

    pub fn diagram(&self, cloud: &PointCloud) -> Result<PersistenceDiagram> {
        let diagram = rips_persistence(&DistanceMatrix::from_cloud(cloud), &self.rips_options())?.diagram();
        Ok(if self.cap_at_max { diagram.capped() } else { diagram })
    }

    /// The three vectors of `diagram` in dimension `self.dim`; an empty
    /// diagram gives empty vectors.
    pub fn vectors(&self, diagram: &PersistenceDiagram) -> Result<Vectors> {
        self.vectors_with_delta(diagram, self.delta)
    }

    pub fn vectors_with_delta(&self, diagram: &PersistenceDiagram, delta: f64) -> Result<Vectors> {
        let points = diagram.off_diagonal(self.dim);
        let mut interconnectivity: Vec<f64> =
            vectorize::interconnectivity_counts(&points)?.into_iter().map(|c| c as f64).collect();
        interconnectivity.sort_by(|a, b| b.total_cmp(a));
        let stable = if points.is_empty() {
            Vec::new()
        } else {
            let mut v = vectorize::stable_values(&points, delta)?;
            v.sort_by(|a, b| b.total_cmp(a));
            v
        };
        Ok(Vectors { persistence: vectorize::persistence_values(&points, false)?, interconnectivity, stable })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vectors {
    pub persistence: Vec<f64>,
    pub interconnectivity: Vec<f64>,
    pub stable: Vec<f64>,
}

impl Vectors {
    pub fn get(&self, method: VectorKind) -> &[f64] {
        match method {
            VectorKind::Persistence => &self.persistence,
            VectorKind::Interconnectivity => &self.interconnectivity,
            VectorKind::Stable => &self.stable,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VectorKind {
    Persistence,
    Interconnectivity,
    Stable,
}

impl VectorKind {
    pub const ALL: [VectorKind; 3] = [VectorKind::Persistence, VectorKind::Interconnectivity, VectorKind::Stable];

    pub fn as_str(self) -> &'static str {
        match self {
            VectorKind::Persistence => "persistence",
            VectorKind::Interconnectivity => "interconnectivity",
            VectorKind::Stable => "stable",
        }
    }
}

/// Entrywise mean of vectors of possibly different lengths, each padded
/// with zeros to the longest.
pub fn mean_padded(vectors: &[&[f64]]) -> Vec<f64> {
    let len = vectors.iter().map(|v| v.len()).max().unwrap_or(0);
    let n = vectors.len().max(1) as f64;
    (0..len).map(|i| vectors.iter().map(|v| v.get(i).copied().unwrap_or(0.0)).sum::<f64>() / n).collect()
}

/// Mean and sample standard deviation (0 for fewer than two values).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

/// Independent 64-bit seed for sub-task `stream` of a run seeded with `seed`.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    crate::rng::seeded_stream(seed, stream).next_u64()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "kebab-case")]
pub enum Params {
    Instability(InstabilityParams),
    StabilityCurve(StabilityCurveParams),
    Perturb(PerturbParams),
    Rvl(RvlParams),
    DeltaSweep(DeltaSweepParams),
    LinkedTwist(LinkedTwistParams),
    Handwriting(HandwritingParams),
    SlidingWindow(SlidingWindowParams),
    Counterexample(CounterexampleParams),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub params: Params,
}

impl ExperimentConfig {
    /// Documented defaults for `name`. The handwriting experiment needs an
    /// image directory, which starts out empty.
    pub fn default_for(name: ExperimentName, seed: u64) -> Self {
        let params = match name {
            ExperimentName::Instability => Params::Instability(InstabilityParams::default()),
            ExperimentName::StabilityCurve => Params::StabilityCurve(StabilityCurveParams::default()),
            ExperimentName::Perturb => Params::Perturb(PerturbParams::default()),
            ExperimentName::Rvl => Params::Rvl(RvlParams::default()),
            ExperimentName::DeltaSweep => Params::DeltaSweep(DeltaSweepParams::default()),
            ExperimentName::LinkedTwist => Params::LinkedTwist(LinkedTwistParams::default()),
            ExperimentName::Handwriting => Params::Handwriting(HandwritingParams::default()),
            ExperimentName::SlidingWindow => Params::SlidingWindow(SlidingWindowParams::default()),
            ExperimentName::Counterexample => Params::Counterexample(CounterexampleParams::default()),
        };
        Self { seed, params }
    }

    pub fn name(&self) -> ExperimentName {
        match self.params {
            Params::Instability(_) => ExperimentName::Instability,
            Params::StabilityCurve(_) => ExperimentName::StabilityCurve,
            Params::Perturb(_) => ExperimentName::Perturb,
            Params::Rvl(_) => ExperimentName::Rvl,
            Params::DeltaSweep(_) => ExperimentName::DeltaSweep,
            Params::LinkedTwist(_) => ExperimentName::LinkedTwist,
            Params::Handwriting(_) => ExperimentName::Handwriting,
            Params::SlidingWindow(_) => ExperimentName::SlidingWindow,
            Params::Counterexample(_) => ExperimentName::Counterexample,
        }
    }

    /// Shared pipeline settings, for experiments that build Rips diagrams.
    pub fn pipeline_mut(&mut self) -> Option<&mut Pipeline> {
        match &mut self.params {
            Params::Perturb(p) => Some(&mut p.pipeline),
            Params::Rvl(p) => Some(&mut p.pipeline),
            Params::DeltaSweep(p) => Some(&mut p.pipeline),
            Params::LinkedTwist(p) => Some(&mut p.pipeline),
            Params::Handwriting(p) => Some(&mut p.pipeline),
            Params::SlidingWindow(p) => Some(&mut p.pipeline),
            Params::Counterexample(p) => Some(&mut p.pipeline),
            Params::Instability(_) | Params::StabilityCurve(_) => None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.into(), header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv_string(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }

    /// Column `name` parsed as numbers.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k].parse().unwrap_or(f64::NAN)).collect())
    }
}

/// Formats a vector as `a;b;c` for a single CSV cell.
pub fn join_values(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(";")
}

/// Index-vs-value table with one column per labelled vector (zero padded),
/// plus the matching log-log plot.
pub fn vector_table(name: &str, title: &str, columns: &[(String, Vec<f64>)]) -> (Table, Plot) {
    let mut header = vec!["index".to_string()];
    header.extend(columns.iter().map(|(label, _)| label.clone()));
    let len = columns.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    let mut table = Table { name: name.into(), header, rows: Vec::new() };
    for i in 0..len {
        let mut row = vec![(i + 1).to_string()];
        row.extend(columns.iter().map(|(_, v)| v.get(i).copied().unwrap_or(0.0).to_string()));
        table.rows.push(row);
    }
    let plot = Plot {
        name: name.into(),
        title: title.into(),
        x_label: "index".into(),
        y_label: "value".into(),
        log_x: true,
        log_y: true,
        series: columns
            .iter()
            .map(|(label, v)| crate::svg::Series {
                label: label.clone(),
                points: v.iter().enumerate().map(|(i, &y)| ((i + 1) as f64, y)).collect(),
            })
            .collect(),
    };
    (table, plot)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Failing asserted checks make the run fail; the others are reported.
    pub asserted: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub tables: Vec<Table>,
    #[serde(skip)]
    pub plots: Vec<Plot>,
    pub summary: BTreeMap<String, serde_json::Value>,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub timings: Vec<(String, f64)>,
}

impl Report {
    pub fn new(config: ExperimentConfig) -> Self {
        Self {
            config,
            tables: Vec::new(),
            plots: Vec::new(),
            summary: BTreeMap::new(),
            checks: Vec::new(),
            timings: Vec::new(),
        }
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.summary.insert(key.into(), serde_json::to_value(value).expect("summary values serialise"));
    }

    pub fn record(&mut self, name: &str, passed: bool, asserted: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, asserted, detail: detail.into() });
    }

    pub fn assert(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.record(name, passed, true, detail);
    }

    pub fn note(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.record(name, passed, false, detail);
    }

    pub fn failed_assertions(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.asserted && !c.passed).collect()
    }

    /// Writes `<table>.csv`, `<plot>.svg`, `report.json` and `timings.json`.
    pub fn write(&self, out_dir: &Path) -> Result<Vec<PathBuf>> {
        io::create_dir_all(out_dir)?;
        let mut files = Vec::new();
        for table in &self.tables {
            let path = out_dir.join(format!("{}.csv", table.name));
            io::write(&path, table.to_csv_string())?;
            files.push(path);
        }
        for plot in &self.plots {
            let path = out_dir.join(format!("{}.svg", plot.name));
            io::write(&path, plot.render())?;
            files.push(path);
        }
        let manifest = serde_json::json!({
            "config": self.config,
            "tables": self.tables.iter().map(|t| format!("{}.csv", t.name)).collect::<Vec<_>>(),
            "plots": self.plots.iter().map(|p| format!("{}.svg", p.name)).collect::<Vec<_>>(),
            "summary": self.summary,
            "checks": self.checks,
        });
        let path = out_dir.join("report.json");
        io::write_json(&path, &manifest)?;
        files.push(path);
        let timings: BTreeMap<&str, f64> = self.timings.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        let path = out_dir.join("timings.json");
        io::write_json(&path, &timings)?;
        files.push(path);
        Ok(files)
    }
}

pub fn run(config: &ExperimentConfig) -> Result<Report> {
    let started = Instant::now();
    let mut report = match &config.params {
        Params::Instability(p) => run_instability(config.seed, p),
        Params::StabilityCurve(p) => run_stability_curve(config.seed, p),
        Params::Perturb(p) => run_perturb(config.seed, p),
        Params::Rvl(p) => run_rvl(config.seed, p),
        Params::DeltaSweep(p) => run_delta_sweep(config.seed, p),
        Params::LinkedTwist(p) => run_linked_twist(config.seed, p),
        Params::Handwriting(p) => run_handwriting(config.seed, p),
        Params::SlidingWindow(p) => run_sliding_window(config.seed, p),
        Params::Counterexample(p) => run_counterexample(config.seed, p),
    }?;
    report.timings.push(("total_seconds".into(), started.elapsed().as_secs_f64()));
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyOutcome {
    pub config: ExperimentConfig,
    pub compared: Vec<String>,
    pub mismatched: Vec<String>,
}

impl VerifyOutcome {
    pub fn ok(&self) -> bool {
        self.mismatched.is_empty()
    }
}

/// Re-runs the experiment recorded in `<dir>/report.json` and compares
/// every CSV table and the report itself byte for byte.
pub fn verify(dir: &Path) -> Result<VerifyOutcome> {
    let manifest_path = dir.join("report.json");
    let manifest: serde_json::Value = serde_json::from_str(&io::read_to_string(&manifest_path)?)?;
    let config: ExperimentConfig = serde_json::from_value(manifest["config"].clone())?;
    let report = run(&config)?;

    let scratch = tempdir_in(dir)?;
    let result = (|| {
        report.write(&scratch)?;
        let mut compared = Vec::new();
        let mut mismatched = Vec::new();
        let mut names: Vec<String> = report.tables.iter().map(|t| format!("{}.csv", t.name)).collect();
        if let Some(listed) = manifest["tables"].as_array() {
            for name in listed.iter().filter_map(|v| v.as_str()) {
                if !names.iter().any(|n| n == name) {
                    names.push(name.to_string());
                }
            }
        }
        names.push("report.json".into());
        for name in names {
            let fresh = std::fs::read(scratch.join(&name)).ok();
            let stored = std::fs::read(dir.join(&name)).ok();
            if fresh.is_none() || fresh != stored {
                mismatched.push(name.clone());
            }
            compared.push(name);
        }
        Ok(VerifyOutcome { config: config.clone(), compared, mismatched })
    })();
    let _ = std::fs::remove_dir_all(&scratch);
    result
}

fn tempdir_in(dir: &Path) -> Result<PathBuf> {
    for k in 0u32.. {
        let candidate = dir.join(format!(".verify-{}-{k}", std::process::id()));
        if !candidate.exists() {
            io::create_dir_all(&candidate)?;
            return Ok(candidate);
        }
    }
    unreachable!()
}
