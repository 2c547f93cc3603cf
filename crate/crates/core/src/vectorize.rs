//! Diagram vectorizations.
//!
//! All three work on the finite, strictly off-diagonal points of one
//! homology dimension and return their entries sorted in non-increasing
//! order:
//!
//! * **persistence vector**: `d_i − b_i`, optionally divided by its maximum;
//! * **interconnectivity vector**: for each point `x_i = (b_i, d_i)`, the
//!   number of diagram points (itself and duplicates included) inside the
//!   open disk of radius `d_i − b_i` centred at `x_i`;
//! * **stable interconnectivity vector**: for each point, the average over
//!   all points of an isotropic Gaussian density centred at `x_i` with
//!   variance `d_i − b_i + δ`.
//!
//! Essential classes are ignored; cap them first with
//! [`PersistenceDiagram::capped`] to include them.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::homology::{Interval, PersistenceDiagram};

/// Regularisation added to every Gaussian variance unless overridden.
pub const DEFAULT_DELTA: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Persistence,
    Interconnectivity,
    StableInterconnectivity,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Persistence => "persistence",
            Method::Interconnectivity => "interconnectivity",
            Method::StableInterconnectivity => "stable_interconnectivity",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VectorParams {
    /// Variance regularisation (stable vector only).
    pub delta: Option<f64>,
    /// Max-normalisation (persistence vector only).
    pub normalized: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub method: Method,
    pub dim: usize,
    pub params: VectorParams,
}

impl FeatureVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `index,value` CSV with 1-based indices.
    pub fn to_csv_string(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["index", "value"]).expect("in-memory write");
        for (i, v) in self.values.iter().enumerate() {
            w.write_record([(i + 1).to_string(), v.to_string()]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }

    /// Metadata written next to the CSV.
    pub fn sidecar(&self, source_diagram_sha256: &str) -> serde_json::Value {
        serde_json::json!({
            "method": self.method.name(),
            "dim": self.dim,
            "delta": self.params.delta,
            "normalized": self.params.normalized,
            "length": self.values.len(),
            "source_diagram_sha256": source_diagram_sha256,
        })
    }
}

/// Hex SHA-256 of the diagram's CSV serialisation.
pub fn diagram_hash(diagram: &PersistenceDiagram) -> String {
    let digest = Sha256::digest(diagram.to_csv_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Parameters of the Gaussian attached to one diagram point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianParams {
    pub mean: (f64, f64),
    /// Common diagonal entry of the covariance, `d − b + δ`.
    pub variance: f64,
    pub weight: f64,
}

impl GaussianParams {
    /// Bivariate density `exp(−|x−μ|²/(2σ²)) / (2π σ²)` at `x`.
    #[inline]
    pub fn density(&self, x: (f64, f64)) -> f64 {
        let (db, dd) = (x.0 - self.mean.0, x.1 - self.mean.1);
        (-(db * db + dd * dd) / (2.0 * self.variance)).exp() / (2.0 * std::f64::consts::PI * self.variance)
    }
}

pub fn gaussian_params(points: &[(f64, f64)], delta: f64) -> Result<Vec<GaussianParams>> {
    check_points(points)?;
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::invalid(format!("delta must be finite and non-negative, got {delta}")));
    }
    let weight = 1.0 / points.len() as f64;
    points
        .iter()
        .map(|&(b, d)| {
            let variance = d - b + delta;
            if variance > 0.0 {
                Ok(GaussianParams { mean: (b, d), variance, weight })
            } else {
                Err(Error::SingularCovariance)
            }
        })
        .collect()
}

fn check_points(points: &[(f64, f64)]) -> Result<()> {
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

fn canonical(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut sorted = points.to_vec();
    sorted.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    sorted
}

fn sort_descending(values: &mut [f64]) {
    values.sort_by(|a, b| b.total_cmp(a));
}

/// Sorted persistences `d − b`.
pub fn persistence_values(points: &[(f64, f64)], normalized: bool) -> Result<Vec<f64>> {
    check_points(points)?;
    let mut values: Vec<f64> = points.iter().map(|&(b, d)| d - b).collect();
    sort_descending(&mut values);
    if normalized {
        if let Some(&max) = values.first() {
            if max > 0.0 {
                values.iter_mut().for_each(|v| *v /= max);
            }
        }
    }
    Ok(values)
}

/// Disk counts in input order (unsorted).
///
/// A point `x_j` counts for `x_i` when
/// `(b_j − b_i)² + (d_j − d_i)² < (d_i − b_i)²`. Any such `j` has
/// `|b_j − b_i| < d_i − b_i`, so only a window of the birth-sorted points
/// is scanned.
pub fn interconnectivity_counts(points: &[(f64, f64)]) -> Result<Vec<usize>> {
    check_points(points)?;
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&x, &y| points[x].0.total_cmp(&points[y].0));
    let births: Vec<f64> = order.iter().map(|&k| points[k].0).collect();
    let counts = points
        .iter()
        .map(|&(b, d)| {
            let r = d - b;
            let slack = r * 1e-9;
            let lo = births.partition_point(|&x| x < b - r - slack);
            let hi = births.partition_point(|&x| x <= b + r + slack);
            order[lo..hi].iter().filter(|&&j| in_disk((b, d), points[j])).count()
        })
        .collect();
    Ok(counts)
}

#[inline]
fn in_disk(center: (f64, f64), x: (f64, f64)) -> bool {
    let r = center.1 - center.0;
    let (db, dd) = (x.0 - center.0, x.1 - center.1);
    db * db + dd * dd < r * r
}

/// Stable entries `(1/N) Σ_j p_i(x_j)` in input order (unsorted).
pub fn stable_values(points: &[(f64, f64)], delta: f64) -> Result<Vec<f64>> {
    let params = gaussian_params(points, delta)?;
    // Sum in canonical order so reordering the input cannot change a bit.
    let ordered = canonical(points);
    Ok(params.iter().map(|g| g.weight * ordered.iter().map(|&x| g.density(x)).sum::<f64>()).collect())
}

fn points_in(diagram: &PersistenceDiagram, dim: usize) -> Result<Vec<(f64, f64)>> {
    let points = diagram.off_diagonal(dim);
    if points.is_empty() {
        Err(Error::EmptyDiagram(dim))
    } else {
        Ok(points)
    }
}

pub fn persistence_vector(diagram: &PersistenceDiagram, dim: usize, normalized: bool) -> Result<FeatureVector> {
    let values = persistence_values(&points_in(diagram, dim)?, normalized)?;
    Ok(FeatureVector {
        values,
        method: Method::Persistence,
        dim,
        params: VectorParams { delta: None, normalized: Some(normalized) },
    })
}

pub fn interconnectivity_vector(diagram: &PersistenceDiagram, dim: usize) -> Result<FeatureVector> {
    let mut values: Vec<f64> =
        interconnectivity_counts(&points_in(diagram, dim)?)?.into_iter().map(|c| c as f64).collect();
    sort_descending(&mut values);
    Ok(FeatureVector { values, method: Method::Interconnectivity, dim, params: VectorParams::default() })
}

/// Interconnectivity vector straight from bars: for each bar `[b_i, d_i]`
/// count the bars with `(b_i − birth)² + (d_i − death)² < (d_i − b_i)²`.
pub fn interconnectivity_from_barcode(intervals: &[Interval]) -> Result<FeatureVector> {
    let dim = intervals.first().map(|iv| iv.dim).unwrap_or(0);
    if intervals.iter().any(|iv| iv.dim != dim) {
        return Err(Error::invalid("barcode mixes homology dimensions"));
    }
    for iv in intervals {
        if iv.death < iv.birth {
            return Err(Error::DeathBeforeBirth { birth: iv.birth, death: iv.death });
        }
    }
    let bars: Vec<&Interval> = intervals.iter().filter(|iv| iv.death.is_finite() && iv.death > iv.birth).collect();
    if bars.is_empty() {
        return Err(Error::EmptyDiagram(dim));
    }
    let mut values: Vec<f64> = bars
        .iter()
        .map(|bar| {
            let lifetime = bar.death - bar.birth;
            bars.iter()
                .filter(|other| {
                    (bar.birth - other.birth).powi(2) + (bar.death - other.death).powi(2) < lifetime * lifetime
                })
                .count() as f64
        })
        .collect();
    sort_descending(&mut values);
    Ok(FeatureVector { values, method: Method::Interconnectivity, dim, params: VectorParams::default() })
}

pub fn stable_interconnectivity_vector(diagram: &PersistenceDiagram, dim: usize, delta: f64) -> Result<FeatureVector> {
    let mut values = stable_values(&points_in(diagram, dim)?, delta)?;
    sort_descending(&mut values);
    Ok(FeatureVector {
        values,
        method: Method::StableInterconnectivity,
        dim,
        params: VectorParams { delta: Some(delta), normalized: None },
    })
}

/// `‖a − b‖∞` after right-padding the shorter vector with zeros.
pub fn vector_distance_inf(a: &FeatureVector, b: &FeatureVector) -> Result<f64> {
    if a.method != b.method || a.dim != b.dim {
        return Err(Error::MethodMismatch {
            left: format!("{} (dim {})", a.method.name(), a.dim),
            right: format!("{} (dim {})", b.method.name(), b.dim),
        });
    }
    Ok(padded_inf_distance(&a.values, &b.values))
}

pub fn padded_inf_distance(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().max(b.len());
    (0..n).map(|i| (a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0)).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, SQRT_2};

    fn diagram(points: &[(f64, f64)]) -> PersistenceDiagram {
        PersistenceDiagram::from_pairs(1, points, 100.0).unwrap()
    }

    fn instability_pair(eps: f64) -> (PersistenceDiagram, PersistenceDiagram) {
        let b = SQRT_2 * (0.5 - eps / 4.0) + 1.0;
        let d = SQRT_2 * (0.5 - eps / 4.0) + 2.0;
        let d_prime = SQRT_2 * (0.5 + eps / 4.0) + 2.0;
        (diagram(&[(1.0, 2.0), (b, d)]), diagram(&[(1.0, 2.0), (b, d_prime)]))
    }

    #[test]
    fn persistence_vector_examples() {
        let same = diagram(&[(0.01, 0.02); 4]);
        let v = persistence_vector(&same, 1, false).unwrap();
        assert!(v.values.iter().all(|&x| (x - 0.01).abs() < 1e-15));
        let staggered = diagram(&[(0.01, 0.02), (0.02, 0.03), (0.03, 0.04), (0.04, 0.05)]);
        let w = persistence_vector(&staggered, 1, false).unwrap();
        assert!(padded_inf_distance(&v.values, &w.values) < 1e-15);
        assert_eq!(persistence_vector(&diagram(&[(0.0, 1.0)]), 1, true).unwrap().values, vec![1.0]);
        let n = persistence_vector(&diagram(&[(0.0, 1.0), (0.0, 4.0)]), 1, true).unwrap();
        assert_eq!(n.values, vec![1.0, 0.25]);
    }

    #[test]
    fn interconnectivity_separates_the_uniform_and_staggered_diagrams() {
        let same = interconnectivity_vector(&diagram(&[(0.01, 0.02); 4]), 1).unwrap();
        assert_eq!(same.values, vec![4.0; 4]);
        let staggered =
            interconnectivity_vector(&diagram(&[(0.01, 0.02), (0.02, 0.03), (0.03, 0.04), (0.04, 0.05)]), 1).unwrap();
        assert_eq!(staggered.values, vec![1.0; 4]);
    }

    #[test]
    fn instability_construction() {
        let (b, b_prime) = instability_pair(1.0);
        let v = interconnectivity_vector(&b, 1).unwrap();
        let w = interconnectivity_vector(&b_prime, 1).unwrap();
        assert_eq!(v.values, vec![2.0, 2.0]);
        assert_eq!(w.values, vec![2.0, 1.0]);
        assert_eq!(vector_distance_inf(&v, &w).unwrap(), 1.0);
    }

    #[test]
    fn barcode_disk_asymmetry() {
        let bars = [Interval { dim: 1, birth: 4.5, death: 8.0 }, Interval { dim: 1, birth: 6.0, death: 6.5 }];
        assert_eq!(interconnectivity_from_barcode(&bars).unwrap().values, vec![2.0, 1.0]);
        let d = PersistenceDiagram::from_barcode(&bars).unwrap();
        assert_eq!(interconnectivity_vector(&d, 1).unwrap().values, vec![2.0, 1.0]);
        assert!(matches!(interconnectivity_from_barcode(&[]), Err(Error::EmptyDiagram(_))));
    }

    #[test]
    fn boundary_points_are_excluded() {
        // (3, 9) sits exactly on the radius-5 circle around (0, 5).
        let d = diagram(&[(0.0, 5.0), (3.0, 9.0)]);
        let counts = interconnectivity_counts(&d.off_diagonal(1)).unwrap();
        assert_eq!(counts, vec![1, 2]);
    }

    #[test]
    fn single_point_vectors() {
        let d = diagram(&[(0.0, 1.0)]);
        assert_eq!(interconnectivity_vector(&d, 1).unwrap().values, vec![1.0]);
        let s = stable_interconnectivity_vector(&d, 1, 0.5).unwrap();
        assert!((s.values[0] - 1.0 / (2.0 * PI * 1.5)).abs() < 1e-15);
        assert!((s.values[0] - 0.106103).abs() < 1e-6);
    }

    #[test]
    fn stable_vector_of_instability_diagram_b() {
        for &(eps, delta) in &[(0.3, 0.5), (1.0, 0.1), (1.9, 2.0)] {
            let (b, _) = instability_pair(eps);
            let s = stable_interconnectivity_vector(&b, 1, delta).unwrap();
            let a = (0.5 - eps / 4.0).powi(2);
            let expected = (1.0 + (-2.0 / (delta + 1.0) * a).exp()) / (4.0 * PI * (delta + 1.0));
            for v in s.values {
                assert!((v - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn singular_covariance_and_empty_errors() {
        assert!(matches!(stable_values(&[(1.0, 1.0)], 0.0), Err(Error::SingularCovariance)));
        assert!(stable_values(&[(1.0, 1.0)], 0.1).is_ok());
        assert!(stable_values(&[(0.0, 1.0)], -0.1).is_err());
        let empty = PersistenceDiagram::empty(1.0);
        assert!(matches!(interconnectivity_vector(&empty, 1), Err(Error::EmptyDiagram(1))));
        assert!(matches!(persistence_vector(&empty, 0, false), Err(Error::EmptyDiagram(0))));
        assert!(matches!(stable_interconnectivity_vector(&empty, 1, 0.5), Err(Error::EmptyDiagram(1))));
    }

    #[test]
    fn distance_padding_and_mismatch() {
        let fv = |values: Vec<f64>, method| FeatureVector { values, method, dim: 1, params: VectorParams::default() };
        let a = fv(vec![3.0, 1.0], Method::Interconnectivity);
        let b = fv(vec![3.0], Method::Interconnectivity);
        assert_eq!(vector_distance_inf(&a, &b).unwrap(), 1.0);
        assert_eq!(vector_distance_inf(&a, &a).unwrap(), 0.0);
        let c = fv(vec![3.0], Method::Persistence);
        assert!(matches!(vector_distance_inf(&a, &c), Err(Error::MethodMismatch { .. })));
    }

    #[test]
    fn essential_points_are_ignored_unless_capped() {
        let d = PersistenceDiagram::from_pairs(0, &[(0.0, f64::INFINITY), (0.0, 0.5)], 1.0).unwrap();
        assert_eq!(interconnectivity_vector(&d, 0).unwrap().len(), 1);
        assert_eq!(interconnectivity_vector(&d.capped(), 0).unwrap().len(), 2);
    }

    #[test]
    fn sidecar_records_method_and_hash() {
        let d = diagram(&[(0.0, 1.0)]);
        let v = stable_interconnectivity_vector(&d, 1, 0.25).unwrap();
        let hash = diagram_hash(&d);
        assert_eq!(hash.len(), 64);
        let meta = v.sidecar(&hash);
        assert_eq!(meta["method"], "stable_interconnectivity");
        assert_eq!(meta["delta"], 0.25);
        assert_eq!(v.to_csv_string().lines().next(), Some("index,value"));
    }
}
