//! The two-point diagrams on which the unstable vector jumps by one while
//! the diagrams move by `√2ε/2` in W₁.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use super::{join_values, ExperimentConfig, Grid, Params, Report, Table};
use crate::error::{Error, Result};
use crate::homology::PersistenceDiagram;
use crate::metrics::wasserstein;
use crate::svg::{Plot, Series};
use crate::vectorize::{interconnectivity_vector, vector_distance_inf};

/// `B = {(1, 2), (b, d)}` and `B′ = {(1, 2), (b, d′)}` with
/// `b = √2(1/2 − ε/4) + 1`, `d = b + 1`, `d′ = √2(1/2 + ε/4) + 2`.
pub fn instability_pair(eps: f64) -> Result<(PersistenceDiagram, PersistenceDiagram)> {
    if !(eps > 0.0 && eps < 2.0) {
        return Err(Error::invalid(format!("epsilon must lie in (0, 2), got {eps}")));
    }
    let b = SQRT_2 * (0.5 - eps / 4.0) + 1.0;
    let d = SQRT_2 * (0.5 - eps / 4.0) + 2.0;
    let d_prime = SQRT_2 * (0.5 + eps / 4.0) + 2.0;
    let max = d_prime.max(2.0);
    Ok((
        PersistenceDiagram::from_pairs(1, &[(1.0, 2.0), (b, d)], max)?,
        PersistenceDiagram::from_pairs(1, &[(1.0, 2.0), (b, d_prime)], max)?,
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstabilityParams {
    pub eps: Grid,
}

impl Default for InstabilityParams {
    fn default() -> Self {
        Self { eps: Grid::open(0.0, 2.0, 199) }
    }
}

pub fn run_instability(seed: u64, params: &InstabilityParams) -> Result<Report> {
    params.eps.validate()?;
    let mut report = Report::new(ExperimentConfig { seed, params: Params::Instability(params.clone()) });
    let mut table = Table::new("instability", &["eps", "v_b", "v_b_prime", "diff_inf", "w1", "c_lower_bound"]);
    let (mut vectors_ok, mut w1_err) = (true, 0.0f64);
    let mut bound = Vec::new();
    for eps in params.eps.values() {
        let (b, b_prime) = instability_pair(eps)?;
        let v = interconnectivity_vector(&b, 1)?;
        let v_prime = interconnectivity_vector(&b_prime, 1)?;
        let diff = vector_distance_inf(&v, &v_prime)?;
        let w1 = wasserstein(&b, &b_prime, 1, 1.0)?.total;
        vectors_ok &= v.values == [2.0, 2.0] && v_prime.values == [2.0, 1.0];
        w1_err = w1_err.max((w1 - SQRT_2 * eps / 2.0).abs());
        let c = diff / w1;
        bound.push((eps, c));
        table.push(vec![
            eps.to_string(),
            join_values(&v.values),
            join_values(&v_prime.values),
            diff.to_string(),
            w1.to_string(),
            c.to_string(),
        ]);
    }
    report.assert("vectors_are_2_2_and_2_1", vectors_ok, "interconnectivity vectors of B and B′ at every grid point");
    report.assert("w1_is_sqrt2_eps_over_2", w1_err <= 1e-12, format!("max |W1 − √2ε/2| = {w1_err:e}"));
    report.set("max_w1_error", w1_err);
    report.set("grid_points", table.rows.len());
    report.tables.push(table);
    report.plots.push(Plot {
        name: "instability".into(),
        title: "Lower bound on the Lipschitz constant".into(),
        x_label: "epsilon".into(),
        y_label: "||dv||inf / W1".into(),
        log_x: false,
        log_y: true,
        series: vec![Series { label: "sqrt(2)/eps".into(), points: bound }],
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_eps_outside_open_interval() {
        assert!(instability_pair(0.0).is_err());
        assert!(instability_pair(2.0).is_err());
        assert!(run_instability(0, &InstabilityParams { eps: Grid::closed(0.0, 1.0, 3) }).is_err());
    }

    #[test]
    fn eps_one_row() {
        let report = run_instability(0, &InstabilityParams { eps: Grid::closed(1.0, 1.0, 1) }).unwrap();
        let row = &report.tables[0].rows[0];
        assert_eq!(row[1], "2;2");
        assert_eq!(row[2], "2;1");
        assert_eq!(row[3], "1");
        assert!((row[4].parse::<f64>().unwrap() - SQRT_2 / 2.0).abs() < 1e-12);
        assert!(report.failed_assertions().is_empty());
    }
}
