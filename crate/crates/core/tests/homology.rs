mod common;

use icvec::homology::{betti_numbers, compute_pairs, rips_persistence, PersistenceDiagram, Reduction};
use icvec::pointcloud::{generate, CloudKind, DistanceMatrix, PointCloud, Provenance};
use icvec::rips::{build_rips_with, RipsOptions};
use proptest::prelude::*;

fn full() -> RipsOptions {
    RipsOptions::new(f64::INFINITY)
}

fn cloud_strategy(max_points: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1..=max_points, 1usize..=3)
        .prop_flat_map(|(n, dim)| prop::collection::vec(prop::collection::vec(0.0f64..1.0, dim), n))
}

fn live(diagram: &PersistenceDiagram, dim: usize, tau: f64) -> usize {
    diagram.in_dim(dim).filter(|p| p.birth <= tau && tau < p.death).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn diagram_betti_counts_match_rank_oracles(points in cloud_strategy(8)) {
        let cloud = PointCloud::new(&points, Provenance::File { path: "proptest".into() }).unwrap();
        let dmat = DistanceMatrix::from_cloud(&cloud);
        let filtration = build_rips_with(&dmat, &full()).unwrap();
        let diagram = compute_pairs(&filtration, Reduction::Standard).unwrap().diagram();
        let dist = common::euclidean_matrix(&points);
        for tau in filtration.critical_values() {
            let counted = (live(&diagram, 0, tau), live(&diagram, 1, tau));
            prop_assert_eq!(counted, betti_numbers(&filtration, tau), "tau = {}", tau);
            prop_assert_eq!(counted, common::rips_betti(&dist, tau), "tau = {}", tau);
        }
    }

    #[test]
    fn all_engines_agree(points in cloud_strategy(12), cut in 0.2f64..2.0) {
        let cloud = PointCloud::new(&points, Provenance::File { path: "proptest".into() }).unwrap();
        let dmat = DistanceMatrix::from_cloud(&cloud);
        for opts in [full(), RipsOptions::new(cut)] {
            let filtration = build_rips_with(&dmat, &opts).unwrap();
            let standard = compute_pairs(&filtration, Reduction::Standard).unwrap().diagram();
            prop_assert_eq!(&standard, &compute_pairs(&filtration, Reduction::Clearing).unwrap().diagram());
            prop_assert_eq!(&standard, &rips_persistence(&dmat, &opts).unwrap().diagram());
        }
    }

    #[test]
    fn diagrams_scale_with_the_cloud(seed in any::<u64>(), c in prop::sample::select(vec![0.25, 2.0, 8.0])) {
        // Powers of two scale every distance exactly.
        let cloud = generate(CloudKind::Uniform { dim: 2 }, 25, seed).unwrap();
        let d = rips_persistence(&DistanceMatrix::from_cloud(&cloud), &full()).unwrap().diagram();
        let dc = rips_persistence(&DistanceMatrix::from_cloud(&cloud.scaled(c)), &full()).unwrap().diagram();
        prop_assert_eq!(dc, d.scaled(c));
    }

    #[test]
    fn relabelling_points_leaves_the_diagram_unchanged(perm in Just((0..16).collect::<Vec<usize>>()).prop_shuffle()) {
        // The 4×4 lattice is full of exact ties, so the tie-breaking order really changes.
        let lattice = generate(CloudKind::Lattice, 16, 0).unwrap();
        let shuffled: Vec<Vec<f64>> = perm.iter().map(|&i| lattice.point(i).to_vec()).collect();
        let shuffled = PointCloud::new(&shuffled, Provenance::Lattice).unwrap();
        for opts in [full(), RipsOptions::new(0.5)] {
            let a = rips_persistence(&DistanceMatrix::from_cloud(&lattice), &opts).unwrap().diagram();
            let b = rips_persistence(&DistanceMatrix::from_cloud(&shuffled), &opts).unwrap().diagram();
            prop_assert_eq!(a, b);
        }
    }
}

#[test]
fn h0_has_one_point_per_vertex() {
    let cloud = generate(CloudKind::Uniform { dim: 2 }, 50, 3).unwrap();
    let opts = RipsOptions::new(0.1);
    let persistence = rips_persistence(&DistanceMatrix::from_cloud(&cloud), &opts).unwrap();
    let diagram = persistence.diagram();
    let zero_dim0 = persistence.pairs().iter().filter(|p| p.dim == 0 && p.death == p.birth).count();
    assert_eq!(diagram.count(0) + zero_dim0, 50);
    // Small cutoff: several components survive.
    assert!(diagram.essential_count(0) > 1);
}
