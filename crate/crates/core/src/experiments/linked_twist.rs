//! Linked-twist orbits for several values of `r`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    derive_seed, mean_padded, mean_std, vector_table, ExperimentConfig, Params, Pipeline, Report, Table, VectorKind,
    Vectors, UNIT_BOX_DIAMETER,
};
use crate::error::{Error, Result};
use crate::pointcloud::linked_twist_orbit;
use crate::rng;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkedTwistParams {
    pub r_values: Vec<f64>,
    pub n_points: usize,
    pub repetitions: usize,
    pub pipeline: Pipeline,
}

impl Default for LinkedTwistParams {
    fn default() -> Self {
        Self {
            r_values: vec![2.5, 3.5, 4.0, 4.1, 4.3],
            n_points: 1000,
            repetitions: 10,
            pipeline: Pipeline::new(Some(UNIT_BOX_DIAMETER)),
        }
    }
}

fn label(r: f64) -> String {
    format!("r={r}")
}

pub fn run_linked_twist(seed: u64, params: &LinkedTwistParams) -> Result<Report> {
    if params.repetitions == 0 || params.r_values.is_empty() {
        return Err(Error::invalid("need at least one r value and one repetition"));
    }
    params.pipeline.validate()?;
    let mut report = Report::new(ExperimentConfig { seed, params: Params::LinkedTwist(params.clone()) });
    let reps = params.repetitions;
    let tasks: Vec<(usize, usize)> = (0..params.r_values.len()).flat_map(|i| (0..reps).map(move |k| (i, k))).collect();
    let runs: Vec<(f64, f64, Vectors)> = tasks
        .par_iter()
        .map(|&(i, k)| {
            let mut rng = rng::seeded(derive_seed(seed, ((i as u64) << 32) | k as u64));
            let (x0, y0) = (rng.random::<f64>(), rng.random::<f64>());
            let orbit = linked_twist_orbit(params.r_values[i], x0, y0, params.n_points)?;
            let diagram = params.pipeline.diagram(&orbit)?;
            Ok((x0, y0, params.pipeline.vectors(&diagram)?))
        })
        .collect::<Result<_>>()?;
    let by_r: Vec<&[(f64, f64, Vectors)]> = runs.chunks(reps).collect();

    let mut initial = Table::new("linked_twist_runs", &["r", "repetition", "x0", "y0", "h1_points"]);
    for (&(i, k), (x0, y0, v)) in tasks.iter().zip(&runs) {
        initial.push(vec![
            params.r_values[i].to_string(),
            k.to_string(),
            x0.to_string(),
            y0.to_string(),
            v.persistence.len().to_string(),
        ]);
    }

    for kind in VectorKind::ALL {
        let columns: Vec<(String, Vec<f64>)> = params
            .r_values
            .iter()
            .zip(&by_r)
            .map(|(&r, runs)| {
                let slices: Vec<&[f64]> = runs.iter().map(|(_, _, v)| v.get(kind)).collect();
                (label(r), mean_padded(&slices))
            })
            .collect();
        let name = format!("linked_twist_{}", kind.as_str());
        let (table, plot) = vector_table(&name, &format!("Average {} vector", kind.as_str()), &columns);
        report.tables.push(table);
        report.plots.push(plot);
    }
    report.tables.push(initial);

    // Leading interconnectivity entries: is the largest r apart from the rest?
    let leads: Vec<(f64, f64)> = by_r
        .iter()
        .map(|runs| {
            let firsts: Vec<f64> =
                runs.iter().map(|(_, _, v)| v.interconnectivity.first().copied().unwrap_or(0.0)).collect();
            mean_std(&firsts)
        })
        .collect();
    let last = params.r_values.len() - 1;
    let separated = (0..last).all(|i| (leads[last].0 - leads[i].0).abs() > 3.0 * leads[last].1.max(leads[i].1));
    for (r, (mean, std)) in params.r_values.iter().zip(&leads) {
        report.set(&format!("{}_interconnectivity_lead_mean", label(*r)), mean);
        report.set(&format!("{}_interconnectivity_lead_std", label(*r)), std);
    }
    report.note(
        "last_r_separated_at_leading_entry",
        separated,
        format!("{} against the other r values, 3σ criterion", label(params.r_values[last])),
    );
    Ok(report)
}
