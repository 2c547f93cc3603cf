//! Interconnectivity vectors for persistence diagrams.
//!
//! The crate covers the whole pipeline from raw data to feature vectors:
//!
//! * [`pointcloud`] generates, loads and perturbs point clouds and builds
//!   Euclidean distance matrices.
//! * [`rips`] builds the Vietoris–Rips filtration (dimensions 0–2).
//! * [`homology`] computes persistence pairs over Z/2, either by reducing an
//!   explicit boundary matrix or with an implicit cohomology engine that
//!   never materialises the triangles.
//! * [`vectorize`] turns a diagram into the persistence vector, the
//!   interconnectivity vector and its Gaussian-smoothed (stable) variant.
//! * [`metrics`] holds the diagram distances: p-Wasserstein, bottleneck and
//!   sliced Wasserstein.
//! * [`experiments`] reproduces the stability/instability studies and the
//!   point-cloud classification runs as CSV tables and SVG plots.
//!
//! ```
//! use icvec::homology::PersistenceDiagram;
//! use icvec::vectorize::interconnectivity_vector;
//!
//! let diagram = PersistenceDiagram::from_pairs(1, &[(4.5, 8.0), (6.0, 6.5)], 10.0).unwrap();
//! let v = interconnectivity_vector(&diagram, 1).unwrap();
//! assert_eq!(v.values, vec![2.0, 1.0]);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod homology;
pub mod io;
pub mod metrics;
pub mod pointcloud;
pub mod rips;
pub mod rng;
pub mod svg;
pub mod vectorize;

pub use error::{Error, Result};
