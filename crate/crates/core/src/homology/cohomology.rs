//! Implicit Rips persistence: union-find for H0, coboundary reduction for H1.
//!
//! Edges are ordered by `(value, a, b)` and triangles by `(value, vertices)`,
//! matching the explicit filtration's tie-break. Edge columns are reduced
//! from the last edge backwards; the pivot of a column is its minimal
//! coface. Tree edges of the H0 spanning forest are negative in dimension
//! 0 and are skipped (clearing). Only the reduction matrix `V` is stored;
//! coboundaries are recomputed when a column is added.

use std::cmp::{Ordering, Reverse};
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};

use super::{Persistence, PersistencePoint};
use crate::error::{Error, Result};
use crate::pointcloud::DistanceMatrix;
use crate::rips::RipsOptions;

#[derive(Clone, Copy, Debug)]
struct Edge {
    value: f64,
    a: u32,
    b: u32,
}

#[derive(Clone, Copy, Debug)]
struct Triangle {
    value: f64,
    v: [u32; 3],
}

impl PartialEq for Triangle {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v
    }
}

impl Eq for Triangle {}

impl PartialOrd for Triangle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Triangle {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.total_cmp(&other.value).then(self.v.cmp(&other.v))
    }
}

struct Complex<'a> {
    dmat: &'a DistanceMatrix,
    opts: RipsOptions,
    n: usize,
}

impl Complex<'_> {
    #[inline]
    fn value(&self, i: usize, j: usize) -> f64 {
        self.opts.scale.edge_value(self.dmat.get(i, j))
    }

    #[inline]
    fn key(&self, t: &Triangle) -> u64 {
        let n = self.n as u64;
        (u64::from(t.v[0]) * n + u64::from(t.v[1])) * n + u64::from(t.v[2])
    }

    #[inline]
    fn coface(&self, e: &Edge, k: usize) -> Option<Triangle> {
        let (a, b) = (e.a as usize, e.b as usize);
        if k == a || k == b {
            return None;
        }
        let reach = self.value(a, k).max(self.value(b, k));
        if reach > self.opts.max_filtration {
            return None;
        }
        let k = k as u32;
        let v = if k < e.a {
            [k, e.a, e.b]
        } else if k < e.b {
            [e.a, k, e.b]
        } else {
            [e.a, e.b, k]
        };
        Some(Triangle { value: e.value.max(reach), v })
    }

    /// Minimal coface. For a fixed edge the vertex order of cofaces follows
    /// the third vertex `k`, so the first `k` whose triangle enters together
    /// with the edge is the minimum.
    fn min_coface(&self, e: &Edge) -> Option<Triangle> {
        let mut best: Option<Triangle> = None;
        for k in 0..self.n {
            if let Some(t) = self.coface(e, k) {
                if t.value == e.value {
                    return Some(t);
                }
                if best.is_none_or(|b| t < b) {
                    best = Some(t);
                }
            }
        }
        best
    }

    fn push_coboundary(&self, e: &Edge, heap: &mut BinaryHeap<Reverse<Triangle>>) {
        for k in 0..self.n {
            if let Some(t) = self.coface(e, k) {
                heap.push(Reverse(t));
            }
        }
    }
}

fn pop_pivot(heap: &mut BinaryHeap<Reverse<Triangle>>) -> Option<Triangle> {
    while let Some(Reverse(t)) = heap.pop() {
        if heap.peek().is_some_and(|Reverse(u)| *u == t) {
            heap.pop();
        } else {
            return Some(t);
        }
    }
    None
}

fn peek_pivot(heap: &mut BinaryHeap<Reverse<Triangle>>) -> Option<Triangle> {
    let pivot = pop_pivot(heap);
    if let Some(t) = pivot {
        heap.push(Reverse(t));
    }
    pivot
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// All H0 and H1 pairs (zero-persistence included) of the Rips filtration
/// of `dmat`, without building the filtration.
pub fn rips_persistence(dmat: &DistanceMatrix, opts: &RipsOptions) -> Result<Persistence> {
    opts.validate()?;
    let n = dmat.len();
    if n == 0 {
        return Err(Error::EmptyDistanceMatrix);
    }
    if n > u32::MAX as usize {
        return Err(Error::invalid("too many points"));
    }
    let complex = Complex { dmat, opts: *opts, n };

    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let value = complex.value(a, b);
            if value <= opts.max_filtration {
                edges.push(Edge { value, a: a as u32, b: b as u32 });
            }
        }
    }
    edges.sort_by(|x, y| x.value.total_cmp(&y.value).then(x.a.cmp(&y.a)).then(x.b.cmp(&y.b)));

    let mut pairs = Vec::new();
    let mut forest = UnionFind::new(n);
    let mut tree_edge = vec![false; edges.len()];
    for (id, e) in edges.iter().enumerate() {
        if forest.union(e.a as usize, e.b as usize) {
            tree_edge[id] = true;
            pairs.push(PersistencePoint { dim: 0, birth: 0.0, death: e.value });
        }
    }
    let components = (0..n).filter(|&v| forest.find(v) == v).count();
    pairs.extend((0..components).map(|_| PersistencePoint { dim: 0, birth: 0.0, death: f64::INFINITY }));

    if opts.max_dim < 2 {
        pairs.extend(edges.iter().zip(&tree_edge).filter(|(_, &tree)| !tree).map(|(e, _)| PersistencePoint {
            dim: 1,
            birth: e.value,
            death: f64::INFINITY,
        }));
        return Ok(Persistence::new(pairs, opts.max_filtration));
    }

    // pivot triangle key -> edge id whose reduced column ends there
    let mut pivot_owner: HashMap<u64, usize> = HashMap::new();
    // reduction-matrix columns of edges that own a pivot
    let mut reduction: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut heap = BinaryHeap::new();

    for id in (0..edges.len()).rev() {
        if tree_edge[id] {
            continue;
        }
        let e = edges[id];
        let Some(first) = complex.min_coface(&e) else {
            pairs.push(PersistencePoint { dim: 1, birth: e.value, death: f64::INFINITY });
            continue;
        };
        let first_key = complex.key(&first);
        if let Entry::Vacant(slot) = pivot_owner.entry(first_key) {
            slot.insert(id);
            reduction.insert(id, vec![id]);
            pairs.push(PersistencePoint { dim: 1, birth: e.value, death: first.value });
            continue;
        }

        heap.clear();
        complex.push_coboundary(&e, &mut heap);
        let mut column = vec![id];
        loop {
            let Some(pivot) = peek_pivot(&mut heap) else {
                pairs.push(PersistencePoint { dim: 1, birth: e.value, death: f64::INFINITY });
                break;
            };
            let key = complex.key(&pivot);
            match pivot_owner.get(&key) {
                Some(&other) => {
                    for &f in &reduction[&other] {
                        column.push(f);
                        complex.push_coboundary(&edges[f], &mut heap);
                    }
                }
                None => {
                    pivot_owner.insert(key, id);
                    reduction.insert(id, mod_two(column));
                    pairs.push(PersistencePoint { dim: 1, birth: e.value, death: pivot.value });
                    break;
                }
            }
        }
    }
    Ok(Persistence::new(pairs, opts.max_filtration))
}

fn mod_two(mut ids: Vec<usize>) -> Vec<usize> {
    ids.sort_unstable();
    let mut out = Vec::with_capacity(ids.len());
    for id in ids {
        if out.last() == Some(&id) {
            out.pop();
        } else {
            out.push(id);
        }
    }
    out
}
