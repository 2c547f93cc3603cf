//! Random (uniform, normal), lattice and Sierpinski clouds in the unit
//! square: averaged vectors per class and the δ-sweep.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    derive_seed, mean_padded, mean_std, vector_table, ExperimentConfig, Grid, Params, Pipeline, Report, Table,
    VectorKind, Vectors, UNIT_BOX_DIAMETER,
};
use crate::error::{Error, Result};
use crate::homology::PersistenceDiagram;
use crate::pointcloud::{generate, CloudKind};
use crate::svg::{Plot, Series};

pub const CLASSES: [CloudKind; 4] =
    [CloudKind::Uniform { dim: 2 }, CloudKind::Normal { dim: 2 }, CloudKind::Lattice, CloudKind::Sierpinski];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RvlParams {
    pub n_points: usize,
    pub repetitions: usize,
    pub pipeline: Pipeline,
}

impl Default for RvlParams {
    fn default() -> Self {
        Self { n_points: 400, repetitions: 10, pipeline: Pipeline::new(Some(UNIT_BOX_DIAMETER)) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaSweepParams {
    pub n_points: usize,
    pub repetitions: usize,
    pub deltas: Grid,
    /// `pipeline.delta` is ignored; the sweep supplies δ.
    pub pipeline: Pipeline,
}

impl Default for DeltaSweepParams {
    fn default() -> Self {
        Self {
            n_points: 400,
            repetitions: 10,
            deltas: Grid::log(1e-3, 10.0, 41),
            pipeline: Pipeline::new(Some(UNIT_BOX_DIAMETER)),
        }
    }
}

/// Diagrams indexed `[class][repetition]`. Repetition `r` of class `c`
/// is seeded independently of every other task.
fn class_diagrams(
    seed: u64,
    n_points: usize,
    repetitions: usize,
    pipeline: &Pipeline,
) -> Result<Vec<Vec<PersistenceDiagram>>> {
    if repetitions == 0 {
        return Err(Error::invalid("repetitions must be at least 1"));
    }
    pipeline.validate()?;
    let tasks: Vec<(usize, usize)> = (0..CLASSES.len()).flat_map(|c| (0..repetitions).map(move |r| (c, r))).collect();
    let diagrams: Vec<PersistenceDiagram> = tasks
        .par_iter()
        .map(|&(c, r)| {
            let cloud = generate(CLASSES[c], n_points, derive_seed(seed, ((c as u64) << 32) | r as u64))?;
            pipeline.diagram(&cloud)
        })
        .collect::<Result<_>>()?;
    Ok(diagrams.chunks(repetitions).map(|chunk| chunk.to_vec()).collect())
}

pub fn run_rvl(seed: u64, params: &RvlParams) -> Result<Report> {
    let mut report = Report::new(ExperimentConfig { seed, params: Params::Rvl(params.clone()) });
    let diagrams = class_diagrams(seed, params.n_points, params.repetitions, &params.pipeline)?;
    let vectors: Vec<Vec<Vectors>> = diagrams
        .par_iter()
        .map(|runs| runs.iter().map(|d| params.pipeline.vectors(d)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;

    for kind in VectorKind::ALL {
        let columns: Vec<(String, Vec<f64>)> = CLASSES
            .iter()
            .zip(&vectors)
            .map(|(class, runs)| {
                let slices: Vec<&[f64]> = runs.iter().map(|v| v.get(kind)).collect();
                (class.name().to_string(), mean_padded(&slices))
            })
            .collect();
        let name = format!("rvl_{}", kind.as_str());
        let (table, plot) = vector_table(&name, &format!("Average {} vector", kind.as_str()), &columns);
        report.tables.push(table);
        report.plots.push(plot);
    }

    let mut leading = Table::new("rvl_leading", &["class", "method", "mean", "std", "mean_length"]);
    // (mean, std) of the leading entry per class and method
    let mut stats = vec![[(0.0, 0.0); 3]; CLASSES.len()];
    for (c, runs) in vectors.iter().enumerate() {
        for (m, kind) in VectorKind::ALL.into_iter().enumerate() {
            let firsts: Vec<f64> = runs.iter().map(|v| v.get(kind).first().copied().unwrap_or(0.0)).collect();
            let lengths: Vec<f64> = runs.iter().map(|v| v.get(kind).len() as f64).collect();
            let (mean, std) = mean_std(&firsts);
            stats[c][m] = (mean, std);
            leading.push(vec![
                CLASSES[c].name().into(),
                kind.as_str().into(),
                mean.to_string(),
                std.to_string(),
                mean_std(&lengths).0.to_string(),
            ]);
        }
    }
    report.tables.push(leading);

    let lattice = CLASSES.iter().position(|k| *k == CloudKind::Lattice).expect("lattice is a class");
    let (stable, unstable) = (2, 1);
    let mut separated = true;
    let mut detail = Vec::new();
    for c in (0..CLASSES.len()).filter(|&c| c != lattice) {
        let (lm, ls) = stats[lattice][stable];
        let (cm, cs) = stats[c][stable];
        let gap = (lm - cm).abs();
        let spread = 3.0 * ls.max(cs);
        separated &= gap > spread;
        detail.push(format!("{}: gap {gap:.6} vs 3σ {spread:.6}", CLASSES[c].name()));
    }
    report.assert("lattice_stable_lead_separated", separated, detail.join("; "));
    let lattice_first = stats[lattice][unstable].0;
    let beats_all = (0..CLASSES.len()).filter(|&c| c != lattice).all(|c| lattice_first > stats[c][unstable].0);
    report.assert(
        "lattice_interconnectivity_lead_largest",
        beats_all,
        format!("lattice mean leading interconnectivity entry {lattice_first}"),
    );
    for (c, class) in CLASSES.iter().enumerate() {
        report.set(&format!("{}_stable_lead_mean", class.name()), stats[c][stable].0);
        report.set(&format!("{}_stable_lead_std", class.name()), stats[c][stable].1);
        report.set(&format!("{}_interconnectivity_lead_mean", class.name()), stats[c][unstable].0);
    }
    Ok(report)
}

pub fn run_delta_sweep(seed: u64, params: &DeltaSweepParams) -> Result<Report> {
    params.deltas.validate()?;
    if params.deltas.start <= 0.0 {
        return Err(Error::invalid("delta grid must be positive"));
    }
    let mut report = Report::new(ExperimentConfig { seed, params: Params::DeltaSweep(params.clone()) });
    let diagrams = class_diagrams(seed, params.n_points, params.repetitions, &params.pipeline)?;
    let deltas = params.deltas.values();

    // sup[class][delta index], averaged over repetitions
    let sup: Vec<Vec<f64>> = diagrams
        .par_iter()
        .map(|runs| {
            deltas
                .iter()
                .map(|&delta| {
                    let values = runs
                        .iter()
                        .map(|d| {
                            let v = params.pipeline.vectors_with_delta(d, delta)?;
                            Ok(v.stable.first().copied().unwrap_or(0.0))
                        })
                        .collect::<Result<Vec<f64>>>()?;
                    Ok(mean_std(&values).0)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;

    let mut header = vec!["delta"];
    header.extend(CLASSES.iter().map(|c| c.name()));
    let mut table = Table::new("delta_sweep", &header);
    for (k, delta) in deltas.iter().enumerate() {
        let mut row = vec![delta.to_string()];
        row.extend(sup.iter().map(|s| s[k].to_string()));
        table.push(row);
    }
    report.tables.push(table);

    let mut decreasing = true;
    let mut detail = Vec::new();
    for (c, class) in CLASSES.iter().enumerate() {
        let tail: Vec<f64> = deltas.iter().zip(&sup[c]).filter(|(d, _)| **d >= 1.0).map(|(_, v)| *v).collect();
        let ok = tail.windows(2).all(|w| w[1] < w[0]);
        decreasing &= ok;
        detail.push(format!("{}: {}", class.name(), if ok { "decreasing" } else { "not decreasing" }));
    }
    report.assert("sup_norm_decreasing_for_delta_at_least_1", decreasing, detail.join("; "));
    report.plots.push(Plot {
        name: "delta_sweep".into(),
        title: "Sup-norm of the stable vector against delta".into(),
        x_label: "delta".into(),
        y_label: "||v||inf".into(),
        log_x: true,
        log_y: true,
        series: CLASSES
            .iter()
            .zip(&sup)
            .map(|(class, s)| Series {
                label: class.name().into(),
                points: deltas.iter().copied().zip(s.iter().copied()).collect(),
            })
            .collect(),
    });
    Ok(report)
}
