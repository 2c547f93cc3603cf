//! Minimum-cost assignment and bipartite perfect matching.

/// Minimum-cost perfect assignment of an `n × n` cost matrix (row-major).
/// Returns `col_of_row`. Shortest augmenting paths with potentials, O(n³).
pub fn hungarian(costs: &[f64], n: usize) -> Vec<usize> {
    assert_eq!(costs.len(), n * n, "cost matrix must be square");
    if n == 0 {
        return Vec::new();
    }
    // 1-based rows/columns, index 0 is the virtual start
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut row_of_col = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of_col[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of_col[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = costs[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of_col[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of_col[j0] = row_of_col[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut col_of_row = vec![0; n];
    for j in 1..=n {
        col_of_row[row_of_col[j] - 1] = j - 1;
    }
    col_of_row
}

/// Whether the bipartite graph (left `i` adjacent to `adj[i]`) has a
/// matching saturating every left vertex. Kuhn's augmenting paths.
pub fn has_perfect_matching(adj: &[Vec<usize>], right: usize) -> bool {
    let mut match_of_right: Vec<Option<usize>> = vec![None; right];
    for i in 0..adj.len() {
        let mut seen = vec![false; right];
        if !augment(i, adj, &mut seen, &mut match_of_right) {
            return false;
        }
    }
    true
}

fn augment(i: usize, adj: &[Vec<usize>], seen: &mut [bool], match_of_right: &mut [Option<usize>]) -> bool {
    for &j in &adj[i] {
        if seen[j] {
            continue;
        }
        seen[j] = true;
        if match_of_right[j].is_none_or(|k| augment(k, adj, seen, match_of_right)) {
            match_of_right[j] = Some(i);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total(costs: &[f64], n: usize, assignment: &[usize]) -> f64 {
        assignment.iter().enumerate().map(|(i, &j)| costs[i * n + j]).sum()
    }

    fn brute(costs: &[f64], n: usize) -> f64 {
        fn go(costs: &[f64], n: usize, row: usize, used: &mut Vec<bool>) -> f64 {
            if row == n {
                return 0.0;
            }
            let mut best = f64::INFINITY;
            for j in 0..n {
                if !used[j] {
                    used[j] = true;
                    best = best.min(costs[row * n + j] + go(costs, n, row + 1, used));
                    used[j] = false;
                }
            }
            best
        }
        go(costs, n, 0, &mut vec![false; n])
    }

    #[test]
    fn small_known_assignment() {
        let costs = [4.0, 1.0, 3.0, 2.0, 0.0, 5.0, 3.0, 2.0, 2.0];
        let a = hungarian(&costs, 3);
        assert_eq!(total(&costs, 3, &a), 5.0);
    }

    #[test]
    fn matches_enumeration() {
        use rand::Rng;
        let mut rng = crate::rng::seeded(11);
        for n in 1..=6 {
            for _ in 0..20 {
                let costs: Vec<f64> = (0..n * n).map(|_| rng.random_range(0.0..10.0)).collect();
                let a = hungarian(&costs, n);
                let mut cols = a.clone();
                cols.sort_unstable();
                assert_eq!(cols, (0..n).collect::<Vec<_>>());
                assert!((total(&costs, n, &a) - brute(&costs, n)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn perfect_matching_detection() {
        assert!(has_perfect_matching(&[vec![0, 1], vec![0]], 2));
        assert!(!has_perfect_matching(&[vec![0], vec![0]], 2));
        assert!(has_perfect_matching(&[], 0));
    }
}
