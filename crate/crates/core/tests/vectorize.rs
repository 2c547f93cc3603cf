mod common;

use icvec::homology::PersistenceDiagram;
use icvec::vectorize::{
    interconnectivity_counts, interconnectivity_vector, persistence_vector, stable_interconnectivity_vector,
    stable_values,
};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = (f64, f64)> {
    (0.0f64..1.0, 0.001f64..0.5).prop_map(|(b, p)| (b, b + p))
}

fn diagram_points(max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec(point(), 1..=max)
}

fn diagram(points: &[(f64, f64)]) -> PersistenceDiagram {
    PersistenceDiagram::from_pairs(1, points, 4.0).unwrap()
}

/// Points on a coarse grid, so exact ties and boundary cases are common.
fn grid_points(max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0u32..20, 1u32..10), 1..=max)
        .prop_map(|v| v.into_iter().map(|(b, p)| (b as f64 / 8.0, (b + p) as f64 / 8.0)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interconnectivity_matches_double_loop(points in diagram_points(200)) {
        let v = interconnectivity_vector(&diagram(&points), 1).unwrap();
        let expected: Vec<f64> = common::brute_interconnectivity(&points).into_iter().map(|c| c as f64).collect();
        prop_assert_eq!(v.values, expected);
    }

    #[test]
    fn interconnectivity_matches_double_loop_with_ties(points in grid_points(60)) {
        let v = interconnectivity_vector(&diagram(&points), 1).unwrap();
        let expected: Vec<f64> = common::brute_interconnectivity(&points).into_iter().map(|c| c as f64).collect();
        prop_assert_eq!(v.values, expected);
    }

    #[test]
    fn every_point_is_in_its_own_disk(points in diagram_points(50)) {
        prop_assert!(interconnectivity_counts(&points).unwrap().iter().all(|&c| c >= 1));
    }

    #[test]
    fn disk_members_have_overlapping_intervals(points in diagram_points(40)) {
        for &(bi, di) in &points {
            for &(bj, dj) in &points {
                if (bj - bi).hypot(dj - di) < di - bi {
                    prop_assert!(bj < di && bi < dj);
                }
            }
        }
    }

    #[test]
    fn vectors_ignore_input_order(points in diagram_points(40).prop_shuffle(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut shuffled = points.clone();
        shuffled.shuffle(&mut icvec::rng::seeded(seed));
        // Diagrams are canonicalised on construction, so compare the raw slice functions too.
        let mut a = stable_values(&points, 0.5).unwrap();
        let mut b = stable_values(&shuffled, 0.5).unwrap();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        prop_assert_eq!(a, b);
        let (d, ds) = (diagram(&points), diagram(&shuffled));
        prop_assert_eq!(persistence_vector(&d, 1, false).unwrap().values, persistence_vector(&ds, 1, false).unwrap().values);
        prop_assert_eq!(interconnectivity_vector(&d, 1).unwrap().values, interconnectivity_vector(&ds, 1).unwrap().values);
    }

    #[test]
    fn interconnectivity_is_scale_invariant(points in diagram_points(60), c in prop::sample::select(vec![0.5, 4.0, 1024.0])) {
        let scaled: Vec<(f64, f64)> = points.iter().map(|&(b, d)| (c * b, c * d)).collect();
        prop_assert_eq!(
            interconnectivity_vector(&diagram(&points), 1).unwrap().values,
            interconnectivity_vector(&PersistenceDiagram::from_pairs(1, &scaled, 4.0 * c).unwrap(), 1).unwrap().values
        );
    }

    #[test]
    fn stable_vector_matches_gaussian_sums_and_peak_bound(points in diagram_points(50), delta in 0.01f64..5.0) {
        let v = stable_interconnectivity_vector(&diagram(&points), 1, delta).unwrap().values;
        let expected = common::brute_stable(&points, delta);
        for (x, y) in v.iter().zip(&expected) {
            prop_assert!((x - y).abs() <= 1e-12 * y.max(1.0));
        }
        let raw = stable_values(&points, delta).unwrap();
        for (&value, &(b, d)) in raw.iter().zip(&points) {
            prop_assert!(value > 0.0);
            prop_assert!(value <= 1.0 / (2.0 * std::f64::consts::PI * (d - b + delta)) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn stable_entries_move_continuously(points in diagram_points(20), shift in 0.0f64..1e-7) {
        let mut moved = points.clone();
        moved[0].1 += shift;
        let (a, b) = (stable_values(&points, 0.5).unwrap(), stable_values(&moved, 0.5).unwrap());
        for (x, y) in a.iter().zip(&b) {
            // Densities are bounded by 1/(2πδ) with bounded gradient; a tiny shift moves them a tiny amount.
            prop_assert!((x - y).abs() < 1e-5);
        }
    }
}

#[test]
fn boundary_ties_are_excluded() {
    // (0,2) has radius 2; (0,4) sits exactly on its boundary, (0,3.9) inside.
    let counts = interconnectivity_counts(&[(0.0, 2.0), (0.0, 4.0)]).unwrap();
    assert_eq!(counts[0], 1);
    let counts = interconnectivity_counts(&[(0.0, 2.0), (0.0, 3.9)]).unwrap();
    assert_eq!(counts[0], 2);
}

#[test]
fn duplicate_points_count_separately() {
    let v = interconnectivity_vector(&diagram(&[(0.1, 0.3); 3]), 1).unwrap();
    assert_eq!(v.values, vec![3.0; 3]);
    let single = common::brute_stable(&[(0.1, 0.3)], 0.5)[0];
    let triple = stable_interconnectivity_vector(&diagram(&[(0.1, 0.3); 3]), 1, 0.5).unwrap();
    for x in triple.values {
        assert!((x - single).abs() < 1e-15);
    }
}
