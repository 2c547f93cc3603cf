//! Distances between persistence diagrams.
//!
//! Points are compared in the L∞ ground metric; a point `(b, d)` is at
//! distance `(d − b)/2` from the diagonal. Only finite points of one
//! homology dimension take part: the diagram-level functions skip essential
//! points (with a warning), the slice-level ones reject infinite values.
//! Cap both diagrams with [`PersistenceDiagram::capped`] to include them.

mod assignment;
mod sliced;

use serde::Serialize;

pub use assignment::{has_perfect_matching, hungarian};
pub use sliced::{slice_angles, sliced_wasserstein_points};

use crate::error::{Error, Result};
use crate::homology::PersistenceDiagram;

/// Directions used by the sliced distance unless overridden.
pub const DEFAULT_SLICES: usize = 50;
/// Largest diagram accepted by [`wasserstein_bruteforce`].
pub const BRUTEFORCE_LIMIT: usize = 6;

/// One side of a matched pair: a diagram point (by index among the finite
/// points of the dimension, in diagram order) or the diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Slot {
    Point(usize),
    Diagonal,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatchingResult {
    pub pairs: Vec<(Slot, Slot)>,
    /// Ground distance of each pair (not raised to `p`).
    pub per_pair_cost: Vec<f64>,
    /// `(Σ cost^p)^{1/p}`.
    pub total: f64,
    pub p: f64,
}

#[inline]
pub fn linf(x: (f64, f64), y: (f64, f64)) -> f64 {
    (x.0 - y.0).abs().max((x.1 - y.1).abs())
}

#[inline]
pub fn diagonal_distance(x: (f64, f64)) -> f64 {
    (x.1 - x.0) / 2.0
}

/// Finite points of `dim`, in diagram order.
pub fn finite_points(diagram: &PersistenceDiagram, dim: usize) -> Vec<(f64, f64)> {
    let skipped = diagram.essential_count(dim);
    if skipped > 0 {
        log::warn!("ignoring {skipped} essential point(s) in dimension {dim}; cap the diagram to include them");
    }
    diagram.in_dim(dim).filter(|p| !p.is_essential()).map(|p| (p.birth, p.death)).collect()
}

fn check_slice(points: &[(f64, f64)]) -> Result<()> {
    for &(b, d) in points {
        if !b.is_finite() || !d.is_finite() {
            return Err(Error::InfiniteDeath);
        }
        if d < b {
            return Err(Error::DeathBeforeBirth { birth: b, death: d });
        }
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("Wasserstein order must be finite and at least 1, got {p}")))
    }
}

pub fn wasserstein(a: &PersistenceDiagram, b: &PersistenceDiagram, dim: usize, p: f64) -> Result<MatchingResult> {
    wasserstein_points(&finite_points(a, dim), &finite_points(b, dim), p)
}

/// Optimal partial matching with diagonal, solved as an `(n+m)²`
/// assignment: rows are `a` then one diagonal copy per point of `b`,
/// columns are `b` then one diagonal copy per point of `a`.
pub fn wasserstein_points(a: &[(f64, f64)], b: &[(f64, f64)], p: f64) -> Result<MatchingResult> {
    check_p(p)?;
    check_slice(a)?;
    check_slice(b)?;
    let (n, m) = (a.len(), b.len());
    let size = n + m;
    let mut costs = vec![0.0; size * size];
    for i in 0..size {
        for j in 0..size {
            costs[i * size + j] = match (i < n, j < m) {
                (true, true) => linf(a[i], b[j]).powf(p),
                (true, false) => diagonal_distance(a[i]).powf(p),
                (false, true) => diagonal_distance(b[j]).powf(p),
                (false, false) => 0.0,
            };
        }
    }
    let assignment = hungarian(&costs, size);

    let mut pairs = Vec::new();
    let mut per_pair_cost = Vec::new();
    for (i, &j) in assignment.iter().enumerate() {
        let (pair, cost) = match (i < n, j < m) {
            (true, true) => ((Slot::Point(i), Slot::Point(j)), linf(a[i], b[j])),
            (true, false) => ((Slot::Point(i), Slot::Diagonal), diagonal_distance(a[i])),
            (false, true) => ((Slot::Diagonal, Slot::Point(j)), diagonal_distance(b[j])),
            (false, false) => continue,
        };
        pairs.push(pair);
        per_pair_cost.push(cost);
    }
    let total = per_pair_cost.iter().map(|c| c.powf(p)).sum::<f64>().powf(1.0 / p);
    Ok(MatchingResult { pairs, per_pair_cost, total, p })
}

pub fn bottleneck(a: &PersistenceDiagram, b: &PersistenceDiagram, dim: usize) -> Result<f64> {
    bottleneck_points(&finite_points(a, dim), &finite_points(b, dim))
}

/// Smallest candidate cost `t` for which the pairs of cost ≤ `t` admit a
/// perfect matching. Each point may only use its own diagonal copy; the
/// diagonal copies match each other freely.
pub fn bottleneck_points(a: &[(f64, f64)], b: &[(f64, f64)]) -> Result<f64> {
    check_slice(a)?;
    check_slice(b)?;
    let (n, m) = (a.len(), b.len());
    let mut candidates: Vec<f64> = a.iter().chain(b).map(|&x| diagonal_distance(x)).collect();
    for &x in a {
        candidates.extend(b.iter().map(|&y| linf(x, y)));
    }
    candidates.push(0.0);
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let feasible = |t: f64| {
        let mut adj: Vec<Vec<usize>> = Vec::with_capacity(n + m);
        for (i, &x) in a.iter().enumerate() {
            let mut row: Vec<usize> = (0..m).filter(|&j| linf(x, b[j]) <= t).collect();
            if diagonal_distance(x) <= t {
                row.push(m + i);
            }
            adj.push(row);
        }
        for (k, &y) in b.iter().enumerate() {
            let mut row: Vec<usize> = (m..m + n).collect();
            if diagonal_distance(y) <= t {
                row.push(k);
            }
            adj.push(row);
        }
        has_perfect_matching(&adj, n + m)
    };

    // the largest candidate is always feasible: everything to the diagonal
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(candidates[lo])
}

pub fn sliced_wasserstein(a: &PersistenceDiagram, b: &PersistenceDiagram, dim: usize, slices: usize) -> Result<f64> {
    if slices == 0 {
        return Err(Error::invalid("sliced distance needs at least one direction"));
    }
    Ok(sliced_wasserstein_points(&finite_points(a, dim), &finite_points(b, dim), slices))
}

/// Exact `W_p` by enumerating every partial matching. Reference
/// implementation for diagrams of at most [`BRUTEFORCE_LIMIT`] points.
pub fn wasserstein_bruteforce(a: &[(f64, f64)], b: &[(f64, f64)], p: f64) -> Result<f64> {
    check_p(p)?;
    check_slice(a)?;
    check_slice(b)?;
    let got = a.len().max(b.len());
    if got > BRUTEFORCE_LIMIT {
        return Err(Error::TooManyPoints { limit: BRUTEFORCE_LIMIT, got });
    }

    fn go(a: &[(f64, f64)], b: &[(f64, f64)], p: f64, i: usize, used: &mut [bool]) -> f64 {
        if i == a.len() {
            return b.iter().zip(used.iter()).filter(|(_, &u)| !u).map(|(&y, _)| diagonal_distance(y).powf(p)).sum();
        }
        let mut best = diagonal_distance(a[i]).powf(p) + go(a, b, p, i + 1, used);
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                best = best.min(linf(a[i], b[j]).powf(p) + go(a, b, p, i + 1, used));
                used[j] = false;
            }
        }
        best
    }

    Ok(go(a, b, p, 0, &mut vec![false; b.len()]).powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    #[test]
    fn single_point_against_empty() {
        let r = wasserstein_points(&[(0.0, 2.0)], &[], 1.0).unwrap();
        assert_eq!(r.total, 1.0);
        assert_eq!(r.pairs, vec![(Slot::Point(0), Slot::Diagonal)]);
        assert_eq!(bottleneck_points(&[(0.0, 2.0)], &[]).unwrap(), 1.0);
    }

    #[test]
    fn extra_small_point_goes_to_diagonal() {
        let r = wasserstein_points(&[(0.0, 1.0)], &[(0.0, 1.0), (0.4, 0.5)], 1.0).unwrap();
        assert!((r.total - 0.05).abs() < 1e-15);
        assert!(r.pairs.contains(&(Slot::Point(0), Slot::Point(0))));
        assert!(r.pairs.contains(&(Slot::Diagonal, Slot::Point(1))));
    }

    #[test]
    fn instability_pair_distance() {
        for k in 1..20 {
            let eps = k as f64 / 10.0;
            let b = SQRT_2 * (0.5 - eps / 4.0) + 1.0;
            let a = [(1.0, 2.0), (b, SQRT_2 * (0.5 - eps / 4.0) + 2.0)];
            let c = [(1.0, 2.0), (b, SQRT_2 * (0.5 + eps / 4.0) + 2.0)];
            let w = wasserstein_points(&a, &c, 1.0).unwrap().total;
            assert!((w - SQRT_2 * eps / 2.0).abs() < 1e-12, "eps {eps}: {w}");
            assert!((wasserstein_bruteforce(&a, &c, 1.0).unwrap() - w).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_and_invalid_inputs() {
        assert_eq!(wasserstein_points(&[], &[], 2.0).unwrap().total, 0.0);
        assert_eq!(bottleneck_points(&[], &[]).unwrap(), 0.0);
        assert!(wasserstein_points(&[(0.0, 1.0)], &[], 0.5).is_err());
        assert!(matches!(wasserstein_points(&[(0.0, f64::INFINITY)], &[], 1.0), Err(Error::InfiniteDeath)));
        let d = PersistenceDiagram::from_pairs(0, &[(0.0, f64::INFINITY), (0.0, 0.5)], 1.0).unwrap();
        let e = PersistenceDiagram::from_pairs(0, &[(0.0, 0.5)], 1.0).unwrap();
        assert_eq!(wasserstein(&d, &e, 0, 1.0).unwrap().total, 0.0);
        assert_eq!(wasserstein(&d.capped(), &e, 0, 1.0).unwrap().total, 0.5);
        let seven = [(0.0, 1.0); 7];
        assert!(matches!(wasserstein_bruteforce(&seven, &[], 1.0), Err(Error::TooManyPoints { limit: 6, got: 7 })));
    }

    #[test]
    fn bottleneck_prefers_cheapest_max() {
        // matching across costs 0.3 each; sending both to the diagonal costs 0.5
        let a = [(0.0, 1.0), (1.0, 2.0)];
        let b = [(0.3, 1.0), (1.3, 2.0)];
        assert!((bottleneck_points(&a, &b).unwrap() - 0.3).abs() < 1e-15);
    }
}
