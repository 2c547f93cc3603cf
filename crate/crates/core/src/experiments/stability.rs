//! Stable vectors of the two-point diagrams as ε varies.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use super::{instability_pair, ExperimentConfig, Grid, Params, Report, Table};
use crate::error::{Error, Result};
use crate::svg::{Plot, Series};
use crate::vectorize::{stable_interconnectivity_vector, DEFAULT_DELTA};

/// Closed-form stable vectors `(v(B), v(B′))`, entries in non-increasing
/// order.
pub fn stable_closed_form(eps: f64, delta: f64) -> ([f64; 2], [f64; 2]) {
    let (lo, hi) = ((0.5 - eps / 4.0).powi(2), (0.5 + eps / 4.0).powi(2));
    let s = delta + 1.0;
    let alpha = 1.0 / (2.0 + SQRT_2 * eps + 2.0 * delta);
    let v = (1.0 + (-2.0 / s * lo).exp()) / (4.0 * PI * s);
    let v1 = (1.0 + (-(lo + hi) / s).exp()) / (4.0 * PI * s);
    let v2 = alpha / (2.0 * PI) * ((-2.0 * alpha * (lo + hi)).exp() + 1.0);
    ([v, v], [v1, v2])
}

/// Entrywise `v(B) − v(B′)` written out term by term.
pub fn closed_form_difference(eps: f64, delta: f64) -> [f64; 2] {
    let (lo, hi) = ((0.5 - eps / 4.0).powi(2), (0.5 + eps / 4.0).powi(2));
    let s = delta + 1.0;
    let alpha = 1.0 / (2.0 + SQRT_2 * eps + 2.0 * delta);
    let first = ((-2.0 / s * lo).exp() - (-(lo + hi) / s).exp()) / (4.0 * PI * s);
    let second = ((1.0 - 2.0 * alpha * s) / (2.0 * s) + (-2.0 / s * lo).exp() / (2.0 * s)
        - alpha * (-2.0 * alpha * (lo + hi)).exp())
        / (2.0 * PI);
    [first, second]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityCurveParams {
    pub eps: Grid,
    pub delta: f64,
}

impl Default for StabilityCurveParams {
    fn default() -> Self {
        Self { eps: Grid::open(0.0, 2.0, 10_000), delta: DEFAULT_DELTA }
    }
}

fn argmax(points: &[(f64, f64)]) -> (f64, f64) {
    points.iter().copied().fold((f64::NAN, f64::NEG_INFINITY), |best, p| if p.1 > best.1 { p } else { best })
}

pub fn run_stability_curve(seed: u64, params: &StabilityCurveParams) -> Result<Report> {
    params.eps.validate()?;
    if !(params.delta > 0.0 && params.delta.is_finite()) {
        return Err(Error::invalid(format!("delta must be positive, got {}", params.delta)));
    }
    let delta = params.delta;
    let mut report = Report::new(ExperimentConfig { seed, params: Params::StabilityCurve(params.clone()) });
    let mut table = Table::new(
        "stability_curve",
        &[
            "eps",
            "v_b_1",
            "v_b_2",
            "v_b_prime_1",
            "v_b_prime_2",
            "diff_1",
            "diff_2",
            "diff_inf",
            "ratio",
            "ratio_1",
            "ratio_2",
        ],
    );
    let (mut ratio, mut ratio_1, mut ratio_2) = (Vec::new(), Vec::new(), Vec::new());
    let (mut diff_1, mut diff_2) = (Vec::new(), Vec::new());
    let (mut vector_err, mut diff_err) = (0.0f64, 0.0f64);
    let mut first_below_second = true;
    for eps in params.eps.values() {
        let (b, b_prime) = instability_pair(eps)?;
        let v = stable_interconnectivity_vector(&b, 1, delta)?.values;
        let w = stable_interconnectivity_vector(&b_prime, 1, delta)?.values;
        let d = [(v[0] - w[0]).abs(), (v[1] - w[1]).abs()];
        let diff_inf = d[0].max(d[1]);
        let scale = SQRT_2 / eps;

        let (cv, cw) = stable_closed_form(eps, delta);
        let cd = closed_form_difference(eps, delta);
        for k in 0..2 {
            vector_err = vector_err.max((v[k] - cv[k]).abs()).max((w[k] - cw[k]).abs());
            diff_err = diff_err.max((d[k] - cd[k].abs()).abs());
        }
        first_below_second &= d[0] <= d[1];

        ratio.push((eps, scale * diff_inf));
        ratio_1.push((eps, scale * d[0]));
        ratio_2.push((eps, scale * d[1]));
        diff_1.push((eps, d[0]));
        diff_2.push((eps, d[1]));
        table.push(
            [eps, v[0], v[1], w[0], w[1], d[0], d[1], diff_inf, scale * diff_inf, scale * d[0], scale * d[1]]
                .iter()
                .map(f64::to_string)
                .collect(),
        );
    }

    let (arg, max) = argmax(&ratio);
    let (arg_1, max_1) = argmax(&ratio_1);
    report.set("delta", delta);
    report.set("max_ratio", max);
    report.set("argmax_eps", arg);
    report.set("max_ratio_first_entry", max_1);
    report.set("argmax_eps_first_entry", arg_1);
    report.set("max_closed_form_error", vector_err.max(diff_err));
    report.assert(
        "matches_closed_form",
        vector_err <= 1e-12 && diff_err <= 1e-12,
        format!("max entry error {vector_err:e}, max difference error {diff_err:e}"),
    );
    report.note("first_entry_change_below_second", first_below_second, "|Δv_1| ≤ |Δv_2| at every grid point");
    report.tables.push(table);
    report.plots.push(Plot {
        name: "stability_curve_diff".into(),
        title: format!("Change in the stable vector (delta = {delta})"),
        x_label: "epsilon".into(),
        y_label: "|v(B) - v(B')|".into(),
        log_x: false,
        log_y: false,
        series: vec![
            Series { label: "entry 1".into(), points: diff_1 },
            Series { label: "entry 2".into(), points: diff_2 },
        ],
    });
    report.plots.push(Plot {
        name: "stability_curve_ratio".into(),
        title: format!("(sqrt(2)/eps) ||dv||inf (delta = {delta})"),
        x_label: "epsilon".into(),
        y_label: "ratio".into(),
        log_x: false,
        log_y: false,
        series: vec![
            Series { label: "inf-norm".into(), points: ratio },
            Series { label: "entry 1".into(), points: ratio_1 },
            Series { label: "entry 2".into(), points: ratio_2 },
        ],
    });
    Ok(report)
}
