//! Point clouds: generators, ingestion, perturbation and distance matrices.

use std::path::Path;

use rand::seq::index;
use rand::Rng as _;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Number of chaos-game iterates thrown away before points are recorded.
pub const SIERPINSKI_BURN_IN: usize = 100;

/// Corners of the equilateral triangle used by the chaos game.
pub const SIERPINSKI_VERTICES: [[f64; 2]; 3] = [[0.0, 0.0], [1.0, 0.0], [0.5, 0.866_025_403_784_438_6]];

/// Default intensity cut-off for image ingestion.
pub const DEFAULT_IMAGE_THRESHOLD: u8 = 128;

/// Where a cloud came from, with the parameters needed to regenerate it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Uniform { dim: usize },
    Normal { dim: usize },
    Lattice,
    Sierpinski,
    LinkedTwist { r: f64, x0: f64, y0: f64 },
    SlidingWindow { m: usize, tau: f64 },
    Image { width: usize, height: usize, threshold: u8, mode: ImageMode },
    File { path: String },
}

/// Finite set of points in R^n, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    coords: Vec<f64>,
    dim: usize,
    provenance: Provenance,
    seed: Option<u64>,
}

impl PointCloud {
    /// Builds a cloud from explicit points. All points must have the same,
    /// positive length and at least one point is required.
    pub fn new(points: &[Vec<f64>], provenance: Provenance) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyCloud)?;
        let dim = first.len();
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::invalid(format!("point {i} has {} coordinates, expected {dim}", p.len())));
            }
            coords.extend_from_slice(p);
        }
        Self::from_flat(coords, dim, provenance, None)
    }

    pub fn from_flat(coords: Vec<f64>, dim: usize, provenance: Provenance, seed: Option<u64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("ambient dimension must be positive"));
        }
        if coords.is_empty() {
            return Err(Error::EmptyCloud);
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::invalid(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::invalid(format!("non-finite coordinate {bad}")));
        }
        Ok(Self { coords, dim, provenance, seed })
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// The cloud with every coordinate multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self { coords: self.coords.iter().map(|x| c * x).collect(), ..self.clone() }
    }

    pub fn to_csv_string(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header: Vec<String> = (0..self.dim).map(|k| format!("x{k}")).collect();
        w.write_record(&header).expect("in-memory write");
        for p in self.points() {
            w.write_record(p.iter().map(|x| x.to_string())).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }

    /// Parses the `x0,x1,...` CSV format.
    pub fn from_csv_str(text: &str, source_name: &str) -> Result<Self> {
        let parse_err = |message: String| Error::Parse { path: source_name.to_string(), message };
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let header = reader.headers().map_err(|e| parse_err(e.to_string()))?.clone();
        for (k, name) in header.iter().enumerate() {
            if name != format!("x{k}") {
                return Err(parse_err(format!("expected header column x{k}, found {name:?}")));
            }
        }
        let dim = header.len();
        let mut coords = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| parse_err(e.to_string()))?;
            if record.len() != dim {
                return Err(parse_err(format!("row {} has {} fields, expected {dim}", line + 2, record.len())));
            }
            for field in record.iter() {
                coords.push(field.parse::<f64>().map_err(|e| parse_err(format!("row {}: {field:?}: {e}", line + 2)))?);
            }
        }
        Self::from_flat(coords, dim, Provenance::File { path: source_name.to_string() }, None)
    }

    pub fn load_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_str(&text, &path.display().to_string())
    }
}

/// Synthetic cloud families.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CloudKind {
    /// Uniform on the unit cube `[0,1]^dim`.
    Uniform { dim: usize },
    /// Gaussian with mean 0.5 and unit variance per coordinate, min–max
    /// rescaled into the unit cube.
    Normal { dim: usize },
    /// `sqrt(n) x sqrt(n)` grid spanning the unit square.
    Lattice,
    /// Chaos-game samples of the Sierpinski triangle.
    Sierpinski,
}

impl CloudKind {
    pub fn name(&self) -> &'static str {
        match self {
            CloudKind::Uniform { .. } => "uniform",
            CloudKind::Normal { .. } => "normal",
            CloudKind::Lattice => "lattice",
            CloudKind::Sierpinski => "sierpinski",
        }
    }
}

/// Generates `n` points of the given family. Deterministic in `(kind, n, seed)`;
/// the lattice ignores the seed.
pub fn generate(kind: CloudKind, n: usize, seed: u64) -> Result<PointCloud> {
    if n == 0 {
        return Err(Error::EmptyCloud);
    }
    let mut rng = rng::seeded(seed);
    match kind {
        CloudKind::Uniform { dim } => {
            check_dim(dim)?;
            let coords = (0..n * dim).map(|_| rng.random::<f64>()).collect();
            PointCloud::from_flat(coords, dim, Provenance::Uniform { dim }, Some(seed))
        }
        CloudKind::Normal { dim } => {
            check_dim(dim)?;
            let normal = Normal::new(0.5, 1.0).expect("unit variance is valid");
            let mut coords: Vec<f64> = (0..n * dim).map(|_| normal.sample(&mut rng)).collect();
            for k in 0..dim {
                let column = || coords.iter().skip(k).step_by(dim);
                let lo = column().copied().fold(f64::INFINITY, f64::min);
                let hi = column().copied().fold(f64::NEG_INFINITY, f64::max);
                let span = hi - lo;
                for x in coords.iter_mut().skip(k).step_by(dim) {
                    *x = if span > 0.0 { (*x - lo) / span } else { 0.5 };
                }
            }
            PointCloud::from_flat(coords, dim, Provenance::Normal { dim }, Some(seed))
        }
        CloudKind::Lattice => {
            let side = (n as f64).sqrt().round() as usize;
            if side * side != n {
                return Err(Error::NotPerfectSquare(n));
            }
            let step = if side > 1 { 1.0 / (side - 1) as f64 } else { 0.0 };
            let mut coords = Vec::with_capacity(2 * n);
            for i in 0..side {
                for j in 0..side {
                    coords.push(i as f64 * step);
                    coords.push(j as f64 * step);
                }
            }
            PointCloud::from_flat(coords, 2, Provenance::Lattice, None)
        }
        CloudKind::Sierpinski => {
            let mut p = [rng.random::<f64>(), rng.random::<f64>()];
            let mut coords = Vec::with_capacity(2 * n);
            for step in 0..SIERPINSKI_BURN_IN + n {
                let v = SIERPINSKI_VERTICES[rng.random_range(0..3)];
                p = [(p[0] + v[0]) / 2.0, (p[1] + v[1]) / 2.0];
                if step >= SIERPINSKI_BURN_IN {
                    coords.extend_from_slice(&p);
                }
            }
            PointCloud::from_flat(coords, 2, Provenance::Sierpinski, Some(seed))
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        Err(Error::invalid("ambient dimension must be positive"))
    } else {
        Ok(())
    }
}

/// Orbit `(x_1, y_1) … (x_n, y_n)` of the linked-twist map
///
/// ```text
/// x' = x + r·y(1−y)    mod 1
/// y' = y + r·x'(1−x')  mod 1
/// ```
pub fn linked_twist_orbit(r: f64, x0: f64, y0: f64, n: usize) -> Result<PointCloud> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid(format!("r must be positive, got {r}")));
    }
    if !(0.0..=1.0).contains(&x0) || !(0.0..=1.0).contains(&y0) {
        return Err(Error::invalid(format!("initial point ({x0}, {y0}) is outside [0,1]^2")));
    }
    if n == 0 {
        return Err(Error::EmptyCloud);
    }
    let (mut x, mut y) = (x0, y0);
    let mut coords = Vec::with_capacity(2 * n);
    for _ in 0..n {
        x = (x + r * y * (1.0 - y)).rem_euclid(1.0);
        y = (y + r * x * (1.0 - x)).rem_euclid(1.0);
        coords.push(x);
        coords.push(y);
    }
    PointCloud::from_flat(coords, 2, Provenance::LinkedTwist { r, x0, y0 }, None)
}

/// `count` window starts evenly spaced on the half-open interval `[start, end)`.
pub fn window_starts(start: f64, end: f64, count: usize) -> Vec<f64> {
    let step = (end - start) / count as f64;
    (0..count).map(|k| start + k as f64 * step).collect()
}

/// Abscissae `s + kτ` (k = 0..=m) touched by the given windows, sorted and
/// deduplicated. Sampling a signal exactly here makes the embedding
/// interpolation-free.
pub fn window_abscissae(starts: &[f64], m: usize, tau: f64) -> Vec<f64> {
    let mut ts: Vec<f64> = starts.iter().flat_map(|&s| (0..=m).map(move |k| window_arg(s, k, tau))).collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts
}

fn window_arg(start: f64, k: usize, tau: f64) -> f64 {
    start + k as f64 * tau
}

/// Sliding-window (delay) embedding: each start `s` maps to
/// `(f(s), f(s+τ), …, f(s+Mτ))`.
///
/// `samples` are `(t, f(t))` pairs with strictly increasing `t`. Arguments
/// that fall between samples are linearly interpolated; arguments equal to
/// a sample abscissa return that sample unchanged.
pub fn sliding_window_embed(samples: &[(f64, f64)], m: usize, tau: f64, starts: &[f64]) -> Result<PointCloud> {
    if m == 0 {
        return Err(Error::invalid("window size M must be at least 1"));
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::invalid(format!("delay tau must be positive, got {tau}")));
    }
    if samples.len() < 2 {
        return Err(Error::invalid("need at least two samples"));
    }
    if samples.windows(2).any(|w| !(w[0].0 < w[1].0)) {
        return Err(Error::invalid("sample abscissae must be strictly increasing"));
    }
    if starts.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let mut coords = Vec::with_capacity(starts.len() * (m + 1));
    for &s in starts {
        for k in 0..=m {
            coords.push(sample_at(samples, window_arg(s, k, tau))?);
        }
    }
    PointCloud::from_flat(coords, m + 1, Provenance::SlidingWindow { m, tau }, None)
}

fn sample_at(samples: &[(f64, f64)], t: f64) -> Result<f64> {
    let lo = samples[0].0;
    let hi = samples[samples.len() - 1].0;
    let idx = samples.partition_point(|&(x, _)| x < t);
    if idx < samples.len() && samples[idx].0 == t {
        return Ok(samples[idx].1);
    }
    if idx == 0 || idx == samples.len() {
        return Err(Error::WindowOutOfDomain { t, lo, hi });
    }
    let (t0, f0) = samples[idx - 1];
    let (t1, f1) = samples[idx];
    Ok(f0 + (f1 - f0) * (t - t0) / (t1 - t0))
}

/// 8-bit grayscale raster, row-major, row 0 at the top.
#[derive(Clone, Debug, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("image has zero width or height"));
        }
        if pixels.len() != width * height {
            return Err(Error::invalid(format!("{} pixels do not fill a {width}x{height} image", pixels.len())));
        }
        Ok(Self { width, height, pixels })
    }

    /// Loads a PNG or PGM file, converting to 8-bit luma if needed.
    pub fn load(path: &Path) -> Result<Self> {
        let img = image::open(path).map_err(|source| Error::Image { path: path.to_path_buf(), source })?;
        let luma = img.to_luma8();
        let (w, h) = luma.dimensions();
        Self::new(w as usize, h as usize, luma.into_raw())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }
}

/// How dark pixels become points.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImageMode {
    /// `(col/width, 1 − row/height)`.
    #[default]
    Threshold,
    /// As `Threshold` with the intensity `I/255` appended as a third coordinate.
    Intensity,
}

/// One point per pixel with intensity below `threshold`, in the unit box
/// with the y axis pointing up.
pub fn image_to_point_cloud(image: &GrayImage, threshold: u8) -> Result<PointCloud> {
    image_to_point_cloud_with(image, threshold, ImageMode::Threshold, "image")
}

pub fn image_to_point_cloud_with(
    image: &GrayImage,
    threshold: u8,
    mode: ImageMode,
    source_name: &str,
) -> Result<PointCloud> {
    let (w, h) = (image.width as f64, image.height as f64);
    let dim = match mode {
        ImageMode::Threshold => 2,
        ImageMode::Intensity => 3,
    };
    let mut coords = Vec::new();
    for row in 0..image.height {
        for col in 0..image.width {
            let intensity = image.get(row, col);
            if intensity < threshold {
                coords.push(col as f64 / w);
                coords.push(1.0 - row as f64 / h);
                if mode == ImageMode::Intensity {
                    coords.push(f64::from(intensity) / 255.0);
                }
            }
        }
    }
    if coords.is_empty() {
        return Err(Error::EmptyImage { threshold, source_name: source_name.to_string() });
    }
    let provenance = Provenance::Image { width: image.width, height: image.height, threshold, mode };
    PointCloud::from_flat(coords, dim, provenance, None)
}

/// Symmetric matrix of pairwise distances with zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    /// Euclidean distances between the points of `cloud`.
    pub fn from_cloud(cloud: &PointCloud) -> Self {
        let n = cloud.len();
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            let p = cloud.point(i);
            for j in i + 1..n {
                let q = cloud.point(j);
                let d = p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                entries[i * n + j] = d;
                entries[j * n + i] = d;
            }
        }
        Self { n, entries }
    }

    /// Validates a user-supplied matrix: square, symmetric, non-negative,
    /// zero diagonal.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            entries.extend_from_slice(row);
        }
        for i in 0..n {
            if entries[i * n + i] != 0.0 {
                return Err(Error::invalid(format!("diagonal entry {i} is not zero")));
            }
            for j in 0..n {
                let d = entries[i * n + j];
                if !(d >= 0.0) || d.is_infinite() {
                    return Err(Error::invalid(format!("entry ({i},{j}) = {d} is not a finite distance")));
                }
                if d != entries[j * n + i] {
                    return Err(Error::invalid(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbMode {
    /// Shift one coordinate of one point.
    OnePoint,
    /// Shift a random subset of all `n·dim` coordinates.
    RandomMany,
}

/// Adds `eps` to randomly selected coordinates.
///
/// `OnePoint` picks one point and one of its coordinates uniformly.
/// `RandomMany` draws a subset size `k` uniformly from `1..=n·dim`, then a
/// uniform `k`-subset of coordinates. With a fixed seed the selection does
/// not depend on `eps`.
pub fn perturb(cloud: &PointCloud, eps: f64, mode: PerturbMode, seed: u64) -> Result<PointCloud> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::invalid(format!("perturbation must be a finite non-negative number, got {eps}")));
    }
    let mut rng = rng::seeded(seed);
    let mut coords = cloud.coords.clone();
    match mode {
        PerturbMode::OnePoint => {
            let i = rng.random_range(0..cloud.len());
            let k = rng.random_range(0..cloud.dim);
            coords[i * cloud.dim + k] += eps;
        }
        PerturbMode::RandomMany => {
            let total = coords.len();
            let amount = rng.random_range(1..=total);
            for idx in index::sample(&mut rng, total, amount) {
                coords[idx] += eps;
            }
        }
    }
    Ok(PointCloud { coords, ..cloud.clone() })
}
