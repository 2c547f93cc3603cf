use std::f64::consts::SQRT_2;

use icvec::experiments::{instability_pair, run_stability_curve, Grid, StabilityCurveParams};
use icvec::vectorize::stable_interconnectivity_vector;

fn ratios(eps: f64) -> (f64, f64) {
    let (b, b_prime) = instability_pair(eps).unwrap();
    let v = stable_interconnectivity_vector(&b, 1, 0.5).unwrap().values;
    let w = stable_interconnectivity_vector(&b_prime, 1, 0.5).unwrap().values;
    let first = SQRT_2 / eps * (v[0] - w[0]).abs();
    (first, first.max(SQRT_2 / eps * (v[1] - w[1]).abs()))
}

/// The target maximum 0.01957236318939473 is the first-entry ratio at ε = 104/99, the
/// 53rd node of a 100-point grid on [0, 2].
#[test]
fn target_maximum_is_the_first_entry_ratio_at_104_over_99() {
    let (first, _) = ratios(104.0 / 99.0);
    assert!((first - 0.01957236318939473).abs() < 1e-15, "{first}");
    let grid = Grid::closed(0.0, 2.0, 100).values();
    assert_eq!(grid[52], 104.0 / 99.0);
    let best = grid[1..99].iter().map(|&e| ratios(e).0).fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(best, first);
}

#[test]
fn sup_norm_ratio_is_largest_near_zero() {
    // The second entry dominates for small ε, and its ratio tends to a positive limit.
    let (first, full) = ratios(1e-4);
    assert!(full > 3.0 * first);
    assert!((ratios(1e-4).1 - ratios(2e-4).1).abs() < 1e-5);
    assert!(full > 0.07 && full < 0.0705, "{full}");
}

#[test]
fn curve_is_continuous_at_zero() {
    let params = StabilityCurveParams { eps: Grid::open(0.0, 1e-6, 10), delta: 0.5 };
    let report = run_stability_curve(0, &params).unwrap();
    let diffs = report.table("stability_curve").unwrap().column("diff_inf").unwrap();
    assert!(diffs.iter().all(|&d| d < 1e-7));
    assert!(report.failed_assertions().is_empty());
}
