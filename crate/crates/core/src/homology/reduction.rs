//! Column reduction of an explicit boundary matrix over Z/2.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Persistence, PersistenceDiagram, PersistencePoint};
use crate::error::{Error, Result};
use crate::rips::Filtration;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reduction {
    /// Left-to-right column additions.
    #[default]
    Standard,
    /// Reduce high dimensions first and zero the columns of simplices that
    /// are already known to be paired.
    Clearing,
}

/// Public diagram of a filtration (standard reduction, zero-persistence
/// pairs dropped).
pub fn compute_persistence(filtration: &Filtration) -> Result<PersistenceDiagram> {
    Ok(compute_pairs(filtration, Reduction::Standard)?.diagram())
}

/// All persistence pairs of dimension ≤ 1, including zero-persistence ones.
pub fn compute_pairs(filtration: &Filtration, reduction: Reduction) -> Result<Persistence> {
    let simplices = filtration.simplices();
    let mut columns = boundary_matrix(filtration)?;
    let m = simplices.len();
    // owner[row] = column whose lowest entry is `row`
    let mut owner: Vec<Option<usize>> = vec![None; m];

    match reduction {
        Reduction::Standard => {
            for j in 0..m {
                reduce_column(&mut columns, &mut owner, j);
            }
        }
        Reduction::Clearing => {
            let max_dim = simplices.iter().map(|s| s.dim()).max().unwrap_or(0);
            let mut cleared = vec![false; m];
            for dim in (1..=max_dim).rev() {
                for j in (0..m).filter(|&j| simplices[j].dim() == dim) {
                    if cleared[j] {
                        continue;
                    }
                    if let Some(low) = reduce_column(&mut columns, &mut owner, j) {
                        cleared[low] = true;
                        columns[low].clear();
                    }
                }
            }
        }
    }

    let mut pairs = Vec::new();
    for (j, column) in columns.iter().enumerate() {
        if let Some(&low) = column.last() {
            let dim = simplices[low].dim();
            if dim <= 1 {
                pairs.push(PersistencePoint {
                    dim,
                    birth: simplices[low].filtration(),
                    death: simplices[j].filtration(),
                });
            }
        }
    }
    for (i, s) in simplices.iter().enumerate() {
        if s.dim() <= 1 && columns[i].is_empty() && owner[i].is_none() {
            pairs.push(PersistencePoint { dim: s.dim(), birth: s.filtration(), death: f64::INFINITY });
        }
    }
    Ok(Persistence::new(pairs, filtration.max_filtration()))
}

fn boundary_matrix(filtration: &Filtration) -> Result<Vec<Vec<usize>>> {
    let simplices = filtration.simplices();
    let mut position: HashMap<&[usize], usize> = HashMap::with_capacity(simplices.len());
    let mut columns = Vec::with_capacity(simplices.len());
    for (j, s) in simplices.iter().enumerate() {
        let mut column = s
            .facets()
            .iter()
            .map(|f| {
                position.get(f.as_slice()).copied().ok_or_else(|| {
                    Error::MalformedFiltration(format!("facet {f:?} of {:?} missing before it", s.vertices()))
                })
            })
            .collect::<Result<Vec<usize>>>()?;
        column.sort_unstable();
        columns.push(column);
        position.insert(s.vertices(), j);
    }
    Ok(columns)
}

/// Reduces column `j` against earlier pivots; returns its final lowest row.
fn reduce_column(columns: &mut [Vec<usize>], owner: &mut [Option<usize>], j: usize) -> Option<usize> {
    while let Some(&low) = columns[j].last() {
        match owner[low] {
            Some(k) => {
                let sum = symmetric_difference(&columns[j], &columns[k]);
                columns[j] = sum;
            }
            None => {
                owner[low] = Some(j);
                return Some(low);
            }
        }
    }
    None
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
