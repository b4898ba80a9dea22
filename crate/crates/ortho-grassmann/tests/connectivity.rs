//! Cross-module integration checks: ortho-graph connectivity on finite
//! universes, and connectivity restored through constructed midpoints when
//! a non-compatible pair is adjoined.

use ortho_grassmann::gen;
use ortho_grassmann::grassmann::{FiniteUniverse, GraphKind};
use ortho_grassmann::orthograph::{count_common_neighbors, CommonNeighborCount};
use ortho_grassmann::subspace::{is_ortho_adjacent, Subspace};

#[test]
fn johnson_universes_are_connected_under_ortho_edges() {
    for &(n, k) in &[(4, 2), (5, 2), (6, 3)] {
        let u = FiniteUniverse::johnson(n, k, GraphKind::OrthoGrassmann).unwrap();
        assert!(u.is_connected(), "J({n},{k}) disconnected under ortho edges");
    }
}

#[test]
fn adjoined_noncompatible_vertex_connects_through_constructed_midpoints() {
    // X = span{e1,e2} sits in the coordinate universe; Y is adjacent and
    // non-compatible to it. The two constructed common neighbors are
    // themselves coordinate planes, so the augmented universe is connected.
    let x = Subspace::coordinate(4, &[0, 1]);
    let y = Subspace::parse(4, &[&["1", "0", "0", "0"], &["0", "1", "1", "0"]]).unwrap();
    let CommonNeighborCount::ExactlyTwo(z1, z2) = count_common_neighbors(&x, &y, 2).unwrap()
    else {
        panic!("expected the minimal-regime count");
    };
    let mut vertices = FiniteUniverse::johnson(4, 2, GraphKind::OrthoGrassmann)
        .unwrap()
        .vertices()
        .to_vec();
    assert!(vertices.contains(&z1));
    assert!(vertices.contains(&z2));
    vertices.push(y.clone());
    let augmented = FiniteUniverse::new(vertices, GraphKind::OrthoGrassmann).unwrap();
    assert!(augmented.is_connected());
    assert_eq!(augmented.bfs_distance(&x, &y).unwrap(), Some(2));
}

#[test]
fn random_noncompatible_pairs_reach_distance_two_via_midpoints() {
    for seed in 0..5u64 {
        let (x, y) = gen::adjacent_noncompatible_pair(4, 2, 2, seed).unwrap();
        let CommonNeighborCount::ExactlyTwo(z1, z2) =
            count_common_neighbors(&x, &y, 2).unwrap()
        else {
            panic!("expected the minimal-regime count");
        };
        let u = FiniteUniverse::new(
            vec![x.clone(), y.clone(), z1, z2],
            GraphKind::OrthoGrassmann,
        )
        .unwrap();
        assert_eq!(u.bfs_distance(&x, &y).unwrap(), Some(2));
        assert!(!is_ortho_adjacent(&x, &y).unwrap());
    }
}
