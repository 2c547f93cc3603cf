//! Cases where diagram distances or the persistence vector mislead: two
//! space curves with similar topology, and two four-point diagrams with the
//! same persistences but different arrangement.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{vector_table, ExperimentConfig, Params, Pipeline, Report, Table, Vectors};
use crate::error::{Error, Result};
use crate::homology::PersistenceDiagram;
use crate::metrics::{sliced_wasserstein, wasserstein, DEFAULT_SLICES};
use crate::pointcloud::{PointCloud, Provenance};
use crate::vectorize::persistence_values;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleParams {
    /// Curve samples at `t = k·t_end/samples`, `k = 0..samples`.
    pub samples: usize,
    pub t_end: f64,
    pub slices: usize,
    pub pipeline: Pipeline,
}

impl Default for CounterexampleParams {
    fn default() -> Self {
        Self { samples: 100, t_end: 2.0 * PI, slices: DEFAULT_SLICES, pipeline: Pipeline::new(None) }
    }
}

/// `(cos t, sin t, cos t²)` and `(cos t, sin t, cos t² + sin t²)`.
pub fn space_curves(samples: usize, t_end: f64) -> Result<(PointCloud, PointCloud)> {
    let ts: Vec<f64> = (0..samples).map(|k| t_end * k as f64 / samples as f64).collect();
    let r1: Vec<Vec<f64>> = ts.iter().map(|&t| vec![t.cos(), t.sin(), (t * t).cos()]).collect();
    let r2: Vec<Vec<f64>> = ts.iter().map(|&t| vec![t.cos(), t.sin(), (t * t).cos() + (t * t).sin()]).collect();
    let provenance = Provenance::File { path: "generated space curve".into() };
    Ok((PointCloud::new(&r1, provenance.clone())?, PointCloud::new(&r2, provenance)?))
}

/// Four copies of `(0.01, 0.02)` and the staggered `(0.01k, 0.01k + 0.01)`.
pub fn four_point_diagrams() -> Result<(PersistenceDiagram, PersistenceDiagram)> {
    let same = [(0.01, 0.02); 4];
    let staggered = [(0.01, 0.02), (0.02, 0.03), (0.03, 0.04), (0.04, 0.05)];
    Ok((PersistenceDiagram::from_pairs(1, &same, 0.05)?, PersistenceDiagram::from_pairs(1, &staggered, 0.05)?))
}

pub fn run_counterexample(seed: u64, params: &CounterexampleParams) -> Result<Report> {
    params.pipeline.validate()?;
    if params.samples < 3 || !(params.t_end > 0.0) || params.slices == 0 {
        return Err(Error::invalid("need at least 3 samples, a positive range and one slice"));
    }
    let mut report = Report::new(ExperimentConfig { seed, params: Params::Counterexample(params.clone()) });
    let pipeline = &params.pipeline;
    let dim = pipeline.dim;

    let (c1, c2) = space_curves(params.samples, params.t_end)?;
    let (d1, d2) = (pipeline.diagram(&c1)?, pipeline.diagram(&c2)?);
    let (u, s) = four_point_diagrams()?;

    let mut distances = Table::new("counterexample_distances", &["pair", "w1", "sliced_w"]);
    for (name, a, b, k) in [("r1-r2", &d1, &d2, dim), ("same-staggered", &u, &s, 1)] {
        let w = wasserstein(a, b, k, 1.0)?.total;
        let sw = sliced_wasserstein(a, b, k, params.slices)?;
        report.set(&format!("{name}_w1"), w);
        report.set(&format!("{name}_sliced_w"), sw);
        distances.push(vec![name.into(), w.to_string(), sw.to_string()]);
    }
    report.tables.push(distances);

    let normalized = |d: &PersistenceDiagram, k: usize| persistence_values(&d.off_diagonal(k), true);
    let curve_vectors = [pipeline.vectors(&d1)?, pipeline.vectors(&d2)?];
    let four = Pipeline { dim: 1, ..*pipeline };
    let four_vectors: [Vectors; 2] = [four.vectors(&u)?, four.vectors(&s)?];
    let mut columns = vec![
        ("r1_persistence_normalized".to_string(), normalized(&d1, dim)?),
        ("r2_persistence_normalized".to_string(), normalized(&d2, dim)?),
    ];
    for (prefix, v) in [
        ("r1", &curve_vectors[0]),
        ("r2", &curve_vectors[1]),
        ("same", &four_vectors[0]),
        ("staggered", &four_vectors[1]),
    ] {
        columns.push((format!("{prefix}_persistence"), v.persistence.clone()));
        columns.push((format!("{prefix}_interconnectivity"), v.interconnectivity.clone()));
        columns.push((format!("{prefix}_stable"), v.stable.clone()));
    }
    let (table, _) = vector_table("counterexample_vectors", "", &columns);
    report.tables.push(table);

    let same_persistence =
        four_vectors[0].persistence.iter().zip(&four_vectors[1].persistence).all(|(a, b)| (a - b).abs() <= 1e-15);
    report.note(
        "four_point_persistence_vectors_agree",
        same_persistence,
        "persistence vectors of the two four-point diagrams",
    );
    report.note(
        "four_point_interconnectivity_vectors_differ",
        four_vectors[0].interconnectivity != four_vectors[1].interconnectivity,
        format!("{:?} vs {:?}", four_vectors[0].interconnectivity, four_vectors[1].interconnectivity),
    );
    Ok(report)
}
