mod common;

use icvec::homology::PersistenceDiagram;
use icvec::metrics::{
    bottleneck_points, hungarian, slice_angles, sliced_wasserstein, sliced_wasserstein_points, wasserstein,
    wasserstein_bruteforce, wasserstein_points, Slot,
};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = (f64, f64)> {
    (0.0f64..1.0, 0.0f64..0.6).prop_map(|(b, p)| (b, b + p))
}

fn points(max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec(point(), 0..=max)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn assignment_matches_exhaustive_search(a in points(6), b in points(6), p in prop::sample::select(vec![1.0, 2.0, 3.5])) {
        let solved = wasserstein_points(&a, &b, p).unwrap().total;
        prop_assert!(close(solved, common::brute_wasserstein(&a, &b, p), 1e-9));
        prop_assert!(close(solved, wasserstein_bruteforce(&a, &b, p).unwrap(), 1e-9));
    }

    #[test]
    fn bottleneck_matches_exhaustive_search(a in points(6), b in points(6)) {
        prop_assert_eq!(bottleneck_points(&a, &b).unwrap(), common::brute_bottleneck(&a, &b));
    }

    #[test]
    fn matching_is_a_valid_partial_matching(a in points(10), b in points(10)) {
        let m = wasserstein_points(&a, &b, 1.0).unwrap();
        let mut seen_a = vec![0; a.len()];
        let mut seen_b = vec![0; b.len()];
        for &(x, y) in &m.pairs {
            if let Slot::Point(i) = x { seen_a[i] += 1; }
            if let Slot::Point(j) = y { seen_b[j] += 1; }
        }
        prop_assert!(seen_a.iter().chain(&seen_b).all(|&c| c == 1));
        prop_assert!(close(m.per_pair_cost.iter().sum::<f64>(), m.total, 1e-12));
    }

    #[test]
    fn metric_axioms(a in points(8), b in points(8), c in points(8)) {
        for p in [1.0, 2.0] {
            let ab = wasserstein_points(&a, &b, p).unwrap().total;
            let ba = wasserstein_points(&b, &a, p).unwrap().total;
            prop_assert!(close(ab, ba, 1e-12));
            prop_assert_eq!(wasserstein_points(&a, &a, p).unwrap().total, 0.0);
            let bc = wasserstein_points(&b, &c, p).unwrap().total;
            let ac = wasserstein_points(&a, &c, p).unwrap().total;
            prop_assert!(ac <= ab + bc + 1e-12);
        }
        let (ab, bc, ac) = (bottleneck_points(&a, &b).unwrap(), bottleneck_points(&b, &c).unwrap(), bottleneck_points(&a, &c).unwrap());
        prop_assert_eq!(ab, bottleneck_points(&b, &a).unwrap());
        prop_assert!(ac <= ab + bc + 1e-12);
        let sw = |x: &[(f64, f64)], y: &[(f64, f64)]| sliced_wasserstein_points(x, y, 16);
        prop_assert!(close(sw(&a, &b), sw(&b, &a), 1e-12));
        prop_assert!(sw(&a, &c) <= sw(&a, &b) + sw(&b, &c) + 1e-12);
        prop_assert!(sw(&a, &a).abs() <= 1e-12);
    }

    #[test]
    fn wasserstein_decreases_towards_bottleneck(a in points(7), b in points(7)) {
        let bn = bottleneck_points(&a, &b).unwrap();
        let mut previous = f64::INFINITY;
        for p in [1.0, 2.0, 8.0, 32.0] {
            let m = wasserstein_points(&a, &b, p).unwrap();
            prop_assert!(m.total <= previous * (1.0 + 1e-9));
            prop_assert!(m.total >= bn * (1.0 - 1e-9));
            prop_assert!(bn <= m.per_pair_cost.iter().fold(0.0f64, |x, &y| x.max(y)).powf(1.0 / p) + 1e-12);
            previous = m.total;
        }
        let w32 = wasserstein_points(&a, &b, 32.0).unwrap().total;
        let n = (a.len() + b.len()).max(1) as f64;
        prop_assert!(w32 <= bn * n.powf(1.0 / 32.0) * (1.0 + 1e-9));
    }

    #[test]
    fn sliced_is_dominated_by_w1(a in points(10), b in points(10)) {
        let w1 = wasserstein_points(&a, &b, 1.0).unwrap().total;
        prop_assert!(sliced_wasserstein_points(&a, &b, 50) <= 4.0 * w1 + 1e-12);
    }

    #[test]
    fn sliced_stabilises_with_more_directions(seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = icvec::rng::seeded(seed);
        let mut draw = || -> Vec<(f64, f64)> {
            (0..20).map(|_| { let b: f64 = rng.random(); (b, b + rng.random::<f64>()) }).collect()
        };
        let (a, b) = (draw(), draw());
        let (coarse, fine) = (sliced_wasserstein_points(&a, &b, 64), sliced_wasserstein_points(&a, &b, 128));
        prop_assert!((coarse - fine).abs() < 0.05 * fine);
    }

    #[test]
    fn single_direction_is_one_dimensional_transport(a in points(8), b in points(8)) {
        // One slice: the direction at π/4, along the diagonal.
        let theta = slice_angles(1)[0];
        let (c, s) = (theta.cos(), theta.sin());
        let project = |x: &(f64, f64)| c * x.0 + s * x.1;
        let to_diagonal = |x: &(f64, f64)| { let m = (x.0 + x.1) / 2.0; c * m + s * m };
        let left: Vec<f64> = a.iter().map(project).chain(b.iter().map(to_diagonal)).collect();
        let right: Vec<f64> = b.iter().map(project).chain(a.iter().map(to_diagonal)).collect();
        let expected = common::transport_1d(left, right);
        prop_assert!(close(sliced_wasserstein_points(&a, &b, 1), expected, 1e-12));
    }

    #[test]
    fn hungarian_beats_every_sampled_permutation(costs in prop::collection::vec(0.0f64..10.0, 25), perm in Just((0..5).collect::<Vec<usize>>()).prop_shuffle()) {
        let col = hungarian(&costs, 5);
        let total = |c: &[usize]| (0..5).map(|r| costs[r * 5 + c[r]]).sum::<f64>();
        prop_assert!(total(&col) <= total(&perm) + 1e-12);
    }
}

#[test]
fn diagram_level_examples() {
    let single = PersistenceDiagram::from_pairs(1, &[(0.0, 2.0)], 2.0).unwrap();
    let empty = PersistenceDiagram::empty(2.0);
    assert_eq!(wasserstein(&single, &empty, 1, 1.0).unwrap().total, 1.0);
    let a = PersistenceDiagram::from_pairs(1, &[(0.0, 1.0)], 1.0).unwrap();
    let b = PersistenceDiagram::from_pairs(1, &[(0.0, 1.0), (0.4, 0.5)], 1.0).unwrap();
    assert!((wasserstein(&a, &b, 1, 1.0).unwrap().total - 0.05).abs() < 1e-15);
    assert_eq!(sliced_wasserstein(&a, &a, 1, 50).unwrap(), 0.0);
}
