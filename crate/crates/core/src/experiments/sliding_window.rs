//! Sliding-window clouds of `cos` and `a·cos`: the interconnectivity vector
//! ignores the amplitude.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{vector_table, ExperimentConfig, Params, Pipeline, Report, VectorKind};
use crate::error::{Error, Result};
use crate::pointcloud::{sliding_window_embed, window_abscissae, window_starts};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlidingWindowParams {
    pub m: usize,
    pub tau: f64,
    pub windows: usize,
    /// Window starts are spread over `[start, end)`.
    pub start: f64,
    pub end: f64,
    pub amplitude: f64,
    pub pipeline: Pipeline,
}

impl Default for SlidingWindowParams {
    fn default() -> Self {
        Self { m: 2, tau: 6.0, windows: 100, start: 0.0, end: 6.0 * PI, amplitude: 3.0, pipeline: Pipeline::new(None) }
    }
}

pub fn run_sliding_window(seed: u64, params: &SlidingWindowParams) -> Result<Report> {
    params.pipeline.validate()?;
    if !(params.amplitude > 0.0 && params.amplitude.is_finite()) {
        return Err(Error::invalid(format!("amplitude must be positive, got {}", params.amplitude)));
    }
    if params.windows == 0 || !(params.end > params.start) {
        return Err(Error::invalid("need at least one window on a non-empty interval"));
    }
    let mut report = Report::new(ExperimentConfig { seed, params: Params::SlidingWindow(params.clone()) });
    let starts = window_starts(params.start, params.end, params.windows);
    let ts = window_abscissae(&starts, params.m, params.tau);
    let f: Vec<(f64, f64)> = ts.iter().map(|&t| (t, t.cos())).collect();
    let g: Vec<(f64, f64)> = ts.iter().map(|&t| (t, params.amplitude * t.cos())).collect();
    let x = sliding_window_embed(&f, params.m, params.tau, &starts)?;
    let y = sliding_window_embed(&g, params.m, params.tau, &starts)?;

    let on_curve = starts.iter().enumerate().all(|(i, &s)| {
        x.point(i).iter().enumerate().all(|(k, &c)| (c - (s + k as f64 * params.tau).cos()).abs() <= 1e-6)
    });
    report.assert("cloud_on_delay_curve", on_curve, "every point within 1e-6 of (cos t, cos(t+τ), …)");
    let scaled = x.coords().iter().zip(y.coords()).all(|(a, b)| params.amplitude * a == *b);
    report.assert("scaled_cloud_is_exact_multiple", scaled, format!("{}·cloud, coordinatewise", params.amplitude));

    let (dx, dy) = (params.pipeline.diagram(&x)?, params.pipeline.diagram(&y)?);
    let (vx, vy) = (params.pipeline.vectors(&dx)?, params.pipeline.vectors(&dy)?);
    report.assert(
        "interconnectivity_vectors_equal",
        vx.interconnectivity == vy.interconnectivity,
        format!("cos: {:?}; scaled: {:?}", vx.interconnectivity, vy.interconnectivity),
    );
    let persistence_scales = vx.persistence.len() == vy.persistence.len()
        && vx.persistence.iter().zip(&vy.persistence).all(|(a, b)| (params.amplitude * a - b).abs() <= 1e-12);
    report.note("persistence_vector_scales", persistence_scales, "persistence vector multiplied by the amplitude");
    report.set("interconnectivity_vector", &vx.interconnectivity);
    report.set("diagram_points", vx.persistence.len());

    for kind in VectorKind::ALL {
        let columns = vec![("cos".to_string(), vx.get(kind).to_vec()), ("scaled".to_string(), vy.get(kind).to_vec())];
        let name = format!("sliding_window_{}", kind.as_str());
        let (table, plot) = vector_table(&name, &format!("{} vector, cos vs scaled cos", kind.as_str()), &columns);
        report.tables.push(table);
        report.plots.push(plot);
    }
    Ok(report)
}
