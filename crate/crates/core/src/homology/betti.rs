//! Betti numbers of a single complex by rank computation.
//!
//! β0 comes from a union-find pass over the edges and β1 from the GF(2)
//! ranks of the two boundary maps, `β1 = |E| − rank ∂1 − rank ∂2`. Nothing
//! here shares code with the persistence reductions.

use std::collections::HashMap;

use crate::rips::{Filtration, Simplex};

/// `(β0, β1)` of the subcomplex with filtration value ≤ `tau`.
pub fn betti_numbers(filtration: &Filtration, tau: f64) -> (usize, usize) {
    let complex = filtration.prefix(tau);
    let by_dim = |d: usize| complex.iter().filter(move |s| s.dim() == d);

    let vertex_row: HashMap<usize, usize> = by_dim(0).enumerate().map(|(row, s)| (s.vertices()[0], row)).collect();
    let edge_row: HashMap<(usize, usize), usize> =
        by_dim(1).enumerate().map(|(row, s)| ((s.vertices()[0], s.vertices()[1]), row)).collect();

    let mut components = Components::new(vertex_row.len());
    for s in by_dim(1) {
        components.join(vertex_row[&s.vertices()[0]], vertex_row[&s.vertices()[1]]);
    }
    let beta0 = components.count;

    let d1: Vec<Vec<usize>> = by_dim(1).map(|s| s.vertices().iter().map(|v| vertex_row[v]).collect()).collect();
    let d2: Vec<Vec<usize>> = by_dim(2).map(|s| triangle_rows(s, &edge_row)).collect();
    let rank1 = gf2_rank(&d1, vertex_row.len());
    let rank2 = gf2_rank(&d2, edge_row.len());
    debug_assert_eq!(beta0, vertex_row.len() - rank1);
    (beta0, edge_row.len() - rank1 - rank2)
}

fn triangle_rows(s: &Simplex, edge_row: &HashMap<(usize, usize), usize>) -> Vec<usize> {
    let v = s.vertices();
    [(v[0], v[1]), (v[0], v[2]), (v[1], v[2])].iter().map(|e| edge_row[e]).collect()
}

struct Components {
    parent: Vec<usize>,
    count: usize,
}

impl Components {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), count: n }
    }

    fn root(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn join(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.root(a), self.root(b));
        if ra != rb {
            self.parent[ra] = rb;
            self.count -= 1;
        }
    }
}

/// Rank over GF(2) of the matrix whose columns list their non-zero rows.
fn gf2_rank(columns: &[Vec<usize>], rows: usize) -> usize {
    let words = rows.div_ceil(64).max(1);
    // basis vector indexed by its leading (highest) set bit
    let mut basis: HashMap<usize, Vec<u64>> = HashMap::new();
    for column in columns {
        let mut bits = vec![0u64; words];
        for &r in column {
            bits[r / 64] ^= 1 << (r % 64);
        }
        while let Some(lead) = leading_bit(&bits) {
            match basis.get(&lead) {
                Some(b) => bits.iter_mut().zip(b).for_each(|(x, y)| *x ^= y),
                None => {
                    basis.insert(lead, bits);
                    break;
                }
            }
        }
    }
    basis.len()
}

fn leading_bit(bits: &[u64]) -> Option<usize> {
    bits.iter().enumerate().rev().find(|(_, &w)| w != 0).map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
}
