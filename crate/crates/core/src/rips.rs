//! Vietoris–Rips filtration up to dimension 2.
//!
//! Vertices enter at 0, an edge at its length and a triangle at its longest
//! edge. [`RipsScale::HalfLength`] instead enters every simplex at half its
//! diameter, i.e. `VR_τ` contains σ when all pairwise distances are ≤ 2τ.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pointcloud::DistanceMatrix;

const NO_VERTEX: usize = usize::MAX;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RipsScale {
    /// Edge filtration value is its length.
    #[default]
    Length,
    /// Edge filtration value is half its length.
    HalfLength,
}

impl RipsScale {
    #[inline]
    pub fn edge_value(self, length: f64) -> f64 {
        match self {
            RipsScale::Length => length,
            RipsScale::HalfLength => length / 2.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RipsOptions {
    pub max_filtration: f64,
    pub max_dim: usize,
    pub scale: RipsScale,
}

impl RipsOptions {
    pub fn new(max_filtration: f64) -> Self {
        Self { max_filtration, max_dim: 2, scale: RipsScale::Length }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.max_filtration > 0.0) {
            return Err(Error::invalid(format!("max filtration must be positive, got {}", self.max_filtration)));
        }
        if !(1..=2).contains(&self.max_dim) {
            return Err(Error::invalid(format!("max dimension must be 1 or 2, got {}", self.max_dim)));
        }
        Ok(())
    }
}

/// A vertex, edge or triangle with its entry value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Simplex {
    vertices: [usize; 3],
    dim: usize,
    filtration: f64,
}

impl Simplex {
    /// `vertices` must be strictly increasing and hold one to three indices.
    pub fn new(vertices: &[usize], filtration: f64) -> Result<Self> {
        if vertices.is_empty() || vertices.len() > 3 {
            return Err(Error::MalformedFiltration(format!("simplex with {} vertices", vertices.len())));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MalformedFiltration(format!("vertices {vertices:?} are not strictly increasing")));
        }
        if !(filtration >= 0.0) || filtration.is_infinite() {
            return Err(Error::MalformedFiltration(format!("filtration value {filtration}")));
        }
        let mut v = [NO_VERTEX; 3];
        v[..vertices.len()].copy_from_slice(vertices);
        Ok(Self { vertices: v, dim: vertices.len() - 1, filtration })
    }

    fn raw(vertices: [usize; 3], dim: usize, filtration: f64) -> Self {
        Self { vertices, dim, filtration }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices[..=self.dim]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn filtration(&self) -> f64 {
        self.filtration
    }

    /// Codimension-one faces, each as a sorted vertex list.
    pub fn facets(&self) -> Vec<Vec<usize>> {
        let v = self.vertices();
        if v.len() < 2 {
            return Vec::new();
        }
        (0..v.len()).map(|skip| v.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &x)| x).collect()).collect()
    }

    /// Filtration order: value, then dimension, then vertices lexicographically.
    pub fn order(&self, other: &Self) -> Ordering {
        self.filtration
            .total_cmp(&other.filtration)
            .then(self.dim.cmp(&other.dim))
            .then_with(|| self.vertices().cmp(other.vertices()))
    }
}

/// Simplices in a valid filtration order.
#[derive(Clone, Debug, PartialEq)]
pub struct Filtration {
    simplices: Vec<Simplex>,
    max_filtration: f64,
    max_dim: usize,
}

impl Filtration {
    /// Wraps an explicit simplex list after checking that it is a valid
    /// filtration: values non-decreasing, no duplicates, and every facet
    /// present earlier with a value no larger than its coface.
    pub fn from_simplices(simplices: Vec<Simplex>, max_filtration: f64) -> Result<Self> {
        let mut index: HashMap<&[usize], usize> = HashMap::with_capacity(simplices.len());
        let mut prev = 0.0f64;
        for (pos, s) in simplices.iter().enumerate() {
            if s.filtration < prev {
                return Err(Error::MalformedFiltration(format!(
                    "value {} at position {pos} follows {prev}",
                    s.filtration
                )));
            }
            if s.filtration > max_filtration {
                return Err(Error::MalformedFiltration(format!(
                    "value {} exceeds the maximum filtration {max_filtration}",
                    s.filtration
                )));
            }
            prev = s.filtration;
            for facet in s.facets() {
                match index.get(facet.as_slice()) {
                    Some(&f) if simplices[f].filtration <= s.filtration => {}
                    Some(_) => {
                        return Err(Error::MalformedFiltration(format!(
                            "facet {facet:?} of {:?} enters later than its coface",
                            s.vertices()
                        )))
                    }
                    None => {
                        return Err(Error::MalformedFiltration(format!(
                            "facet {facet:?} of {:?} does not precede it",
                            s.vertices()
                        )))
                    }
                }
            }
            if index.insert(s.vertices(), pos).is_some() {
                return Err(Error::MalformedFiltration(format!("duplicate simplex {:?}", s.vertices())));
            }
        }
        let max_dim = simplices.iter().map(|s| s.dim).max().unwrap_or(0);
        Ok(Self { simplices, max_filtration, max_dim })
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn max_filtration(&self) -> f64 {
        self.max_filtration
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    /// Simplices with value ≤ `tau`: the complex at scale `tau`.
    pub fn prefix(&self, tau: f64) -> &[Simplex] {
        let end = self.simplices.partition_point(|s| s.filtration <= tau);
        &self.simplices[..end]
    }

    /// Distinct filtration values, ascending.
    pub fn critical_values(&self) -> Vec<f64> {
        let mut values: Vec<f64> = self.simplices.iter().map(|s| s.filtration).collect();
        values.dedup();
        values
    }

    /// Debug dump: `filtration,dim,v0,v1,v2` with empty cells for absent vertices.
    pub fn to_csv_string(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["filtration", "dim", "v0", "v1", "v2"]).expect("in-memory write");
        for s in &self.simplices {
            let mut record = vec![s.filtration.to_string(), s.dim.to_string()];
            for k in 0..3 {
                record.push(s.vertices().get(k).map(|v| v.to_string()).unwrap_or_default());
            }
            w.write_record(&record).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }

    pub fn from_csv_str(text: &str, max_filtration: f64) -> Result<Self> {
        let parse_err = |message: String| Error::Parse { path: "filtration".into(), message };
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let mut simplices = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| parse_err(e.to_string()))?;
            let value: f64 = record.get(0).unwrap_or("").parse().map_err(|e| parse_err(format!("{e}")))?;
            let vertices = record
                .iter()
                .skip(2)
                .filter(|f| !f.is_empty())
                .map(|f| f.parse::<usize>().map_err(|e| parse_err(format!("{f:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            simplices.push(Simplex::new(&vertices, value)?);
        }
        Self::from_simplices(simplices, max_filtration)
    }
}

/// Builds the Rips filtration with the default length convention.
pub fn build_rips(dmat: &DistanceMatrix, max_filtration: f64, max_dim: usize) -> Result<Filtration> {
    build_rips_with(dmat, &RipsOptions { max_filtration, max_dim, scale: RipsScale::Length })
}

pub fn build_rips_with(dmat: &DistanceMatrix, opts: &RipsOptions) -> Result<Filtration> {
    opts.validate()?;
    let n = dmat.len();
    if n == 0 {
        return Err(Error::EmptyDistanceMatrix);
    }
    let value = |i: usize, j: usize| opts.scale.edge_value(dmat.get(i, j));
    let mut simplices: Vec<Simplex> = (0..n).map(|v| Simplex::raw([v, NO_VERTEX, NO_VERTEX], 0, 0.0)).collect();

    // Neighbours with a larger index, for triangle enumeration.
    let mut upper: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, neighbours) in upper.iter_mut().enumerate() {
        for j in i + 1..n {
            let f = value(i, j);
            if f <= opts.max_filtration {
                simplices.push(Simplex::raw([i, j, NO_VERTEX], 1, f));
                neighbours.push(j);
            }
        }
    }
    if opts.max_dim >= 2 {
        for (i, neighbours) in upper.iter().enumerate() {
            for (a, &j) in neighbours.iter().enumerate() {
                for &k in &neighbours[a + 1..] {
                    let jk = value(j, k);
                    if jk <= opts.max_filtration {
                        let f = value(i, j).max(value(i, k)).max(jk);
                        simplices.push(Simplex::raw([i, j, k], 2, f));
                    }
                }
            }
        }
    }
    simplices.sort_by(Simplex::order);
    Ok(Filtration { simplices, max_filtration: opts.max_filtration, max_dim: opts.max_dim })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointcloud::{generate, CloudKind, PointCloud, Provenance};

    fn cloud(points: &[[f64; 2]]) -> DistanceMatrix {
        let pts: Vec<Vec<f64>> = points.iter().map(|p| p.to_vec()).collect();
        DistanceMatrix::from_cloud(&PointCloud::new(&pts, Provenance::File { path: "t".into() }).unwrap())
    }

    fn summary(f: &Filtration) -> Vec<(usize, f64)> {
        f.simplices().iter().map(|s| (s.dim(), s.filtration())).collect()
    }

    #[test]
    fn two_points() {
        let f = build_rips(&cloud(&[[0.0, 0.0], [3.0, 4.0]]), 10.0, 2).unwrap();
        assert_eq!(summary(&f), vec![(0, 0.0), (0, 0.0), (1, 5.0)]);
    }

    #[test]
    fn equilateral_triangle() {
        let h = 3f64.sqrt() / 2.0;
        let d = DistanceMatrix::from_rows(&[vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]]).unwrap();
        let f = build_rips(&d, 2.0, 2).unwrap();
        assert_eq!(summary(&f), vec![(0, 0.0), (0, 0.0), (0, 0.0), (1, 1.0), (1, 1.0), (1, 1.0), (2, 1.0)]);
        // Same shape from coordinates.
        let f = build_rips(&cloud(&[[0.0, 0.0], [1.0, 0.0], [0.5, h]]), 2.0, 2).unwrap();
        assert_eq!(f.simplices().iter().filter(|s| s.dim() == 2).count(), 1);
    }

    #[test]
    fn unit_square() {
        let f = build_rips(&cloud(&[[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]), 2.0, 2).unwrap();
        let count = |dim, v: f64| f.simplices().iter().filter(|s| s.dim() == dim && s.filtration() == v).count();
        let r2 = 2f64.sqrt();
        assert_eq!(count(1, 1.0), 4);
        assert_eq!(count(1, r2), 2);
        assert_eq!(count(2, r2), 4);
        assert_eq!(f.len(), 4 + 6 + 4);
    }

    #[test]
    fn cutoff_and_half_scale() {
        let d = cloud(&[[0.0, 0.0], [3.0, 4.0]]);
        assert_eq!(build_rips(&d, 4.0, 2).unwrap().len(), 2);
        let opts = RipsOptions { max_filtration: 4.0, max_dim: 2, scale: RipsScale::HalfLength };
        let f = build_rips_with(&d, &opts).unwrap();
        assert_eq!(f.simplices()[2].filtration(), 2.5);
    }

    #[test]
    fn rejects_bad_options() {
        let d = cloud(&[[0.0, 0.0]]);
        assert!(build_rips(&d, 0.0, 2).is_err());
        assert!(build_rips(&d, 1.0, 3).is_err());
        assert!(matches!(
            build_rips(&DistanceMatrix::from_rows(&[]).unwrap(), 1.0, 2),
            Err(Error::EmptyDistanceMatrix)
        ));
    }

    #[test]
    fn output_is_a_valid_filtration() {
        let c = generate(CloudKind::Uniform { dim: 2 }, 12, 3).unwrap();
        let f = build_rips(&DistanceMatrix::from_cloud(&c), 0.6, 2).unwrap();
        let again = Filtration::from_simplices(f.simplices().to_vec(), f.max_filtration()).unwrap();
        assert_eq!(again, f);
    }

    #[test]
    fn from_simplices_rejects_bad_orders() {
        let v = |vs: &[usize], f| Simplex::new(vs, f).unwrap();
        assert!(Filtration::from_simplices(vec![v(&[0], 0.0), v(&[0, 1], 1.0), v(&[1], 0.0)], 2.0).is_err());
        assert!(Filtration::from_simplices(vec![v(&[0], 0.0), v(&[1], 2.0), v(&[0, 1], 1.0)], 2.0).is_err());
        assert!(Filtration::from_simplices(vec![v(&[0], 0.0), v(&[0], 0.0)], 2.0).is_err());
        assert!(Simplex::new(&[2, 1], 0.0).is_err());
    }

    #[test]
    fn csv_dump_round_trip() {
        let f = build_rips(&cloud(&[[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]), 2.0, 2).unwrap();
        let text = f.to_csv_string();
        assert!(text.starts_with("filtration,dim,v0,v1,v2\n0,0,0,,\n"));
        assert_eq!(Filtration::from_csv_str(&text, 2.0).unwrap(), f);
    }
}
