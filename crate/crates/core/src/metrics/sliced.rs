//! Sliced Wasserstein distance.

use std::f64::consts::PI;

/// Directions used with `m` slices: evenly spaced over `[0, π)` and centred
/// on the diagonal direction `π/4` (which is one of them when `m` is odd).
pub fn slice_angles(m: usize) -> Vec<f64> {
    let centre = (m as f64 - 1.0) / 2.0;
    (0..m).map(|k| (PI / 4.0 + (k as f64 - centre) * PI / m as f64).rem_euclid(PI)).collect()
}

/// Average over the slices of the 1D optimal transport cost between the
/// projections of `a ∪ π_Δ(b)` and `b ∪ π_Δ(a)`, where `π_Δ` is the
/// orthogonal projection onto the diagonal.
pub fn sliced_wasserstein_points(a: &[(f64, f64)], b: &[(f64, f64)], slices: usize) -> f64 {
    if slices == 0 || (a.is_empty() && b.is_empty()) {
        return 0.0;
    }
    let diag = |&(x, y): &(f64, f64)| ((x + y) / 2.0, (x + y) / 2.0);
    let left: Vec<(f64, f64)> = a.iter().copied().chain(b.iter().map(diag)).collect();
    let right: Vec<(f64, f64)> = b.iter().copied().chain(a.iter().map(diag)).collect();
    let angles = slice_angles(slices);
    let mut sum = 0.0;
    let mut pl = vec![0.0; left.len()];
    let mut pr = vec![0.0; right.len()];
    for theta in angles {
        let (c, s) = (theta.cos(), theta.sin());
        for (out, &(x, y)) in pl.iter_mut().zip(&left) {
            *out = x * c + y * s;
        }
        for (out, &(x, y)) in pr.iter_mut().zip(&right) {
            *out = x * c + y * s;
        }
        pl.sort_by(f64::total_cmp);
        pr.sort_by(f64::total_cmp);
        sum += pl.iter().zip(&pr).map(|(x, y)| (x - y).abs()).sum::<f64>();
    }
    sum / slices as f64
}
