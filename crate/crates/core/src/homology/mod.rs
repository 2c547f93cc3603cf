//! Persistent homology in dimensions 0 and 1, over Z/2.
//!
//! Two engines produce the same pairs:
//!
//! * [`compute_pairs`] reduces the explicit boundary matrix of a
//!   [`Filtration`](crate::rips::Filtration), with or without clearing.
//! * [`rips_persistence`] works straight from a distance matrix: H0 by
//!   Kruskal/union-find, H1 by reducing the coboundary matrix of the edges
//!   with cofaces enumerated on the fly. It never stores triangles, so it
//!   handles clouds of a few thousand points.
//!
//! [`betti_numbers`] is an independent rank computation used to check both.

mod betti;
mod cohomology;
mod reduction;

use std::path::Path;

use serde::{Deserialize, Serialize};

pub use betti::betti_numbers;
pub use cohomology::rips_persistence;
pub use reduction::{compute_pairs, compute_persistence, Reduction};

use crate::error::{Error, Result};
use crate::pointcloud::{DistanceMatrix, PointCloud};
use crate::rips::RipsOptions;

/// A birth–death pair. `death` is `f64::INFINITY` for essential classes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PersistencePoint {
    pub dim: usize,
    pub birth: f64,
    pub death: f64,
}

impl PersistencePoint {
    pub fn new(dim: usize, birth: f64, death: f64) -> Result<Self> {
        if !birth.is_finite() || death.is_nan() {
            return Err(Error::invalid(format!("invalid pair ({birth}, {death})")));
        }
        if death < birth {
            return Err(Error::DeathBeforeBirth { birth, death });
        }
        Ok(Self { dim, birth, death })
    }

    pub fn is_essential(&self) -> bool {
        self.death == f64::INFINITY
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }

    fn canonical_order(&self, other: &Self) -> std::cmp::Ordering {
        self.dim.cmp(&other.dim).then(self.birth.total_cmp(&other.birth)).then(self.death.total_cmp(&other.death))
    }
}

/// Every pair found by a reduction, zero-persistence ones included.
#[derive(Clone, Debug, PartialEq)]
pub struct Persistence {
    pairs: Vec<PersistencePoint>,
    max_filtration: f64,
}

impl Persistence {
    pub(crate) fn new(mut pairs: Vec<PersistencePoint>, max_filtration: f64) -> Self {
        pairs.sort_by(PersistencePoint::canonical_order);
        Self { pairs, max_filtration }
    }

    pub fn pairs(&self) -> &[PersistencePoint] {
        &self.pairs
    }

    pub fn is_zero_persistence(p: &PersistencePoint) -> bool {
        p.birth == p.death
    }

    pub fn zero_persistence_count(&self) -> usize {
        self.pairs.iter().filter(|p| Self::is_zero_persistence(p)).count()
    }

    /// The public diagram: zero-persistence pairs removed.
    pub fn diagram(&self) -> PersistenceDiagram {
        PersistenceDiagram {
            points: self.pairs.iter().filter(|p| !Self::is_zero_persistence(p)).copied().collect(),
            max_filtration: self.max_filtration,
        }
    }
}

/// Multiset of persistence points, kept in canonical `(dim, birth, death)`
/// order so equal multisets compare equal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    points: Vec<PersistencePoint>,
    max_filtration: f64,
}

impl PersistenceDiagram {
    pub fn new(mut points: Vec<PersistencePoint>, max_filtration: f64) -> Result<Self> {
        if !(max_filtration >= 0.0) {
            return Err(Error::invalid(format!("max filtration {max_filtration}")));
        }
        for p in &points {
            PersistencePoint::new(p.dim, p.birth, p.death)?;
            if !p.is_essential() && p.death > max_filtration {
                return Err(Error::invalid(format!(
                    "death {} exceeds the maximum filtration {max_filtration}",
                    p.death
                )));
            }
        }
        points.sort_by(PersistencePoint::canonical_order);
        Ok(Self { points, max_filtration })
    }

    /// Diagram with the given `(birth, death)` pairs, all in dimension `dim`.
    pub fn from_pairs(dim: usize, pairs: &[(f64, f64)], max_filtration: f64) -> Result<Self> {
        let points = pairs.iter().map(|&(b, d)| PersistencePoint::new(dim, b, d)).collect::<Result<Vec<_>>>()?;
        Self::new(points, max_filtration)
    }

    pub fn empty(max_filtration: f64) -> Self {
        Self { points: Vec::new(), max_filtration }
    }

    pub fn points(&self) -> &[PersistencePoint] {
        &self.points
    }

    pub fn max_filtration(&self) -> f64 {
        self.max_filtration
    }

    pub fn in_dim(&self, dim: usize) -> impl Iterator<Item = &PersistencePoint> + '_ {
        self.points.iter().filter(move |p| p.dim == dim)
    }

    pub fn count(&self, dim: usize) -> usize {
        self.in_dim(dim).count()
    }

    pub fn essential_count(&self, dim: usize) -> usize {
        self.in_dim(dim).filter(|p| p.is_essential()).count()
    }

    /// Finite points of `dim` strictly above the diagonal, as `(birth, death)`.
    pub fn off_diagonal(&self, dim: usize) -> Vec<(f64, f64)> {
        self.in_dim(dim).filter(|p| !p.is_essential() && p.death > p.birth).map(|p| (p.birth, p.death)).collect()
    }

    /// Essential classes die at the maximum filtration instead of never.
    pub fn capped(&self) -> Self {
        let cap = self.max_filtration;
        let points = self
            .points
            .iter()
            .map(|p| PersistencePoint { death: if p.is_essential() { cap } else { p.death }, ..*p })
            .collect();
        let mut out = Self { points, max_filtration: cap };
        out.points.sort_by(PersistencePoint::canonical_order);
        out
    }

    /// Every coordinate multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            points: self
                .points
                .iter()
                .map(|p| PersistencePoint { birth: c * p.birth, death: c * p.death, ..*p })
                .collect(),
            max_filtration: c * self.max_filtration,
        }
    }

    pub fn to_barcode(&self) -> Vec<Interval> {
        self.points.iter().map(|p| Interval { dim: p.dim, birth: p.birth, death: p.death }).collect()
    }

    /// Diagram of a barcode. The maximum filtration is the largest finite
    /// endpoint.
    pub fn from_barcode(intervals: &[Interval]) -> Result<Self> {
        let points =
            intervals.iter().map(|iv| PersistencePoint::new(iv.dim, iv.birth, iv.death)).collect::<Result<Vec<_>>>()?;
        let max_filtration = finite_extent(&points);
        Self::new(points, max_filtration)
    }

    /// `dim,birth,death` CSV with `inf` for essential classes.
    pub fn to_csv_string(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["dim", "birth", "death"]).expect("in-memory write");
        for p in &self.points {
            let death = if p.is_essential() { "inf".to_string() } else { p.death.to_string() };
            w.write_record([p.dim.to_string(), p.birth.to_string(), death]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }

    /// Parses the diagram CSV. The file does not record a maximum
    /// filtration, so `max_filtration` falls back to the largest finite value.
    pub fn from_csv_str(text: &str, source_name: &str, max_filtration: Option<f64>) -> Result<Self> {
        let parse_err = |message: String| Error::Parse { path: source_name.to_string(), message };
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let header = reader.headers().map_err(|e| parse_err(e.to_string()))?;
        if header.iter().collect::<Vec<_>>() != ["dim", "birth", "death"] {
            return Err(parse_err(format!("expected header dim,birth,death, found {header:?}")));
        }
        let mut points = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| parse_err(e.to_string()))?;
            let row = line + 2;
            let field = |k: usize| record.get(k).ok_or_else(|| parse_err(format!("row {row}: missing field")));
            let dim = field(0)?.parse::<usize>().map_err(|e| parse_err(format!("row {row}: {e}")))?;
            let birth = field(1)?.parse::<f64>().map_err(|e| parse_err(format!("row {row}: {e}")))?;
            let death = match field(2)? {
                "inf" | "Inf" | "infinity" => f64::INFINITY,
                s => s.parse::<f64>().map_err(|e| parse_err(format!("row {row}: {e}")))?,
            };
            points.push(PersistencePoint::new(dim, birth, death)?);
        }
        let max_filtration = max_filtration.unwrap_or_else(|| finite_extent(&points));
        Self::new(points, max_filtration)
    }

    pub fn load_csv(path: &Path, max_filtration: Option<f64>) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_str(&text, &path.display().to_string(), max_filtration)
    }
}

fn finite_extent(points: &[PersistencePoint]) -> f64 {
    points.iter().flat_map(|p| [p.birth, p.death]).filter(|x| x.is_finite()).fold(0.0, f64::max)
}

/// A bar `[birth, death]` of a barcode.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub dim: usize,
    pub birth: f64,
    pub death: f64,
}

/// Vietoris–Rips diagram of a cloud via the implicit engine.
pub fn rips_diagram(cloud: &PointCloud, opts: &RipsOptions) -> Result<PersistenceDiagram> {
    Ok(rips_persistence(&DistanceMatrix::from_cloud(cloud), opts)?.diagram())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn barcode_round_trip_and_nested_intervals() {
        let bars = [Interval { dim: 1, birth: 4.5, death: 8.0 }, Interval { dim: 1, birth: 6.0, death: 6.5 }];
        let d = PersistenceDiagram::from_barcode(&bars).unwrap();
        assert_eq!(d.off_diagonal(1), vec![(4.5, 8.0), (6.0, 6.5)]);
        assert_eq!(PersistenceDiagram::from_barcode(&d.to_barcode()).unwrap(), d);
        assert!(PersistenceDiagram::from_barcode(&[]).unwrap().points().is_empty());
        let bad = [Interval { dim: 0, birth: 2.0, death: 1.0 }];
        assert!(matches!(PersistenceDiagram::from_barcode(&bad), Err(Error::DeathBeforeBirth { .. })));
    }

    #[test]
    fn csv_round_trip_with_infinity() {
        let pts = vec![
            PersistencePoint::new(0, 0.0, f64::INFINITY).unwrap(),
            PersistencePoint::new(0, 0.0, 0.5).unwrap(),
            PersistencePoint::new(1, 0.25, 0.75).unwrap(),
        ];
        let d = PersistenceDiagram::new(pts, 1.0).unwrap();
        let text = d.to_csv_string();
        assert_eq!(text, "dim,birth,death\n0,0,0.5\n0,0,inf\n1,0.25,0.75\n");
        assert_eq!(PersistenceDiagram::from_csv_str(&text, "mem", Some(1.0)).unwrap(), d);
        assert!(PersistenceDiagram::from_csv_str("a,b,c\n", "mem", None).is_err());
        assert!(PersistenceDiagram::from_csv_str("dim,birth,death\n1,2,1\n", "mem", None).is_err());
    }

    #[test]
    fn capping_replaces_infinity() {
        let d = PersistenceDiagram::new(vec![PersistencePoint::new(0, 0.0, f64::INFINITY).unwrap()], 0.8).unwrap();
        assert_eq!(d.off_diagonal(0), vec![]);
        assert_eq!(d.capped().off_diagonal(0), vec![(0.0, 0.8)]);
    }

    #[test]
    fn deaths_beyond_max_filtration_rejected() {
        assert!(PersistenceDiagram::from_pairs(1, &[(0.0, 2.0)], 1.0).is_err());
    }
}
