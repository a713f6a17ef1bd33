mod common;

use common::floyd_warshall;
use fractal_triple::energy::HarmonicProvider;
use fractal_triple::metric::{
    all_pairs, distance_multilevel, distance_sequence, distance_sequence_with_budget, edge_subdivision_check,
    ess_lip_seminorm, euclidean_between, lip_seminorm, project_path, shortest_path_distance, Adjacency,
};
use fractal_triple::{presets, Error, Formula, FunctionProvider, VertexFunction};
use proptest::prelude::*;
use std::f64::consts::SQRT_2;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn gasket_corner_distance_is_constant() {
    let g = presets::gasket();
    let seq = distance_sequence(&g, &[0.0, 0.0], &[1.0, 0.0], 5).unwrap();
    assert_eq!(seq.start_level, 0);
    assert!(seq.values.iter().all(|&d| close(d, 1.0, 1e-14)));
    assert_eq!(seq.extrapolated, seq.last());
    assert!(seq.q_estimate.is_none());
}

#[test]
fn vicsek_adjacent_corners() {
    let v = presets::vicsek();
    let seq = distance_sequence(&v, &[0.0, 0.0], &[1.0, 0.0], 4).unwrap();
    assert!(close(seq.values[0], 1.0, 1e-15));
    assert!(close(seq.values[1], (1.0 + 2.0 * SQRT_2) / 3.0, 1e-14));
    for n in 1..seq.values.len() {
        let prev = seq.values[n - 1];
        assert!(seq.values[n] >= prev - 1e-14);
    }
    assert!(seq.extrapolated >= seq.last());
}

#[test]
fn vicsek_recurrence_matches_closed_form() {
    // replacing every side of a geodesic by one side and two diagonals of
    // the next level gives an admissible path
    let v = presets::vicsek();
    let seq = distance_sequence(&v, &[0.0, 0.0], &[1.0, 0.0], 4).unwrap();
    let r = (1.0 + 2.0 * SQRT_2) / 3.0;
    for n in 0..seq.values.len() - 1 {
        assert!(seq.values[n + 1] <= seq.values[n] * r + 1e-13);
    }
}

#[test]
fn vicsek_opposite_corners_stay_on_diagonal() {
    let v = presets::vicsek();
    let seq = distance_sequence(&v, &[0.0, 0.0], &[1.0, 1.0], 4).unwrap();
    assert!(seq.values.iter().all(|&d| close(d, SQRT_2, 1e-14)));
}

#[test]
fn interior_points_enter_late() {
    let g = presets::gasket();
    let seq = distance_sequence(&g, &[0.25, 0.0], &[0.75, 0.0], 4).unwrap();
    assert_eq!(seq.start_level, 2);
    assert_eq!(seq.values.len(), 3);
    assert!(close(seq.values[0], 0.5, 1e-14));
}

#[test]
fn missing_vertex_is_reported() {
    let g = presets::gasket();
    let err = distance_sequence(&g, &[0.0, 0.0], &[0.3, 0.1], 3).unwrap_err();
    assert!(matches!(err, Error::NotAVertex(p) if p == vec![0.3, 0.1]));
}

#[test]
fn budget_is_enforced() {
    let v = presets::vicsek();
    let err = distance_sequence_with_budget(&v, &[0.0, 0.0], &[1.0, 0.0], 12, 1_000_000).unwrap_err();
    assert!(matches!(err, Error::BudgetExceeded { .. }));
}

#[test]
fn dijkstra_agrees_with_floyd_warshall() {
    for (fractal, level) in [(presets::gasket(), 3), (presets::vicsek(), 2), (presets::gasket3(), 1)] {
        let graph = fractal.build_graph(level).unwrap();
        let oracle = floyd_warshall(&graph);
        let fast = all_pairs(&graph);
        for (a, b) in oracle.iter().zip(&fast) {
            for (x, y) in a.iter().zip(b) {
                assert!(close(*x, *y, 1e-13));
            }
        }
    }
}

#[test]
fn graph_distance_dominates_euclidean() {
    let graph = presets::vicsek().build_graph(2).unwrap();
    let d = all_pairs(&graph);
    for i in 0..graph.vertex_count() {
        for j in 0..graph.vertex_count() {
            assert!(d[i][j] >= euclidean_between(&graph, i, j) - 1e-14);
            for m in [0, graph.vertex_count() / 2] {
                assert!(d[i][j] <= d[i][m] + d[m][j] + 1e-13);
            }
        }
    }
}

#[test]
fn returned_paths_are_simple_and_consistent() {
    let graph = presets::gasket().build_graph(3).unwrap();
    let adj = Adjacency::from_graph(&graph);
    let (d, path) = shortest_path_distance(&graph, 0, graph.vertex_count() - 1).unwrap();
    assert!(path.is_simple());
    assert_eq!(path.level, 3);
    let walked: f64 = path
        .vertex_ids
        .windows(2)
        .map(|w| adj.edge_length(w[0], w[1]).unwrap())
        .sum();
    assert!(close(walked, d, 1e-14));
    assert!(close(path.length, d, 1e-14));
}

#[test]
fn disconnected_pair_is_unreachable() {
    let adj = Adjacency::from_edges(3, [(0u32, 1u32, 1.0)].into_iter());
    assert!(matches!(adj.shortest_path(0, 2), Err(Error::Unreachable { .. })));
    let (d, _) = adj.shortest_path(1, 0).unwrap();
    assert_eq!(d, 1.0);
}

#[test]
fn parallel_edges_use_the_shorter_length() {
    let adj = Adjacency::from_edges(2, [(0u32, 1u32, 2.0), (1, 0, 0.5)].into_iter());
    assert_eq!(adj.edge_length(0, 1), Some(0.5));
    assert_eq!(adj.shortest_path(0, 1).unwrap().0, 0.5);
}

#[test]
fn projection_to_same_level_is_identity() {
    let graph = presets::vicsek().build_graph(2).unwrap();
    let (_, path) = shortest_path_distance(&graph, 0, 7).unwrap();
    let same = project_path(&graph, &graph, &path).unwrap();
    assert_eq!(same, path);
}

#[test]
fn vicsek_geodesic_projects_to_boundary_side() {
    let v = presets::vicsek();
    let g0 = v.build_graph(0).unwrap();
    let g1 = v.build_graph(1).unwrap();
    let a = g1.find_vertex(&[0.0, 0.0]).unwrap();
    let b = g1.find_vertex(&[1.0, 0.0]).unwrap();
    let (_, path) = shortest_path_distance(&g1, a, b).unwrap();
    let coarse = project_path(&g1, &g0, &path).unwrap();
    assert_eq!(coarse.vertex_ids.len(), 2);
    assert!(close(coarse.length, 1.0, 1e-15));
    assert!(coarse.length <= path.length);
}

#[test]
fn gasket_geodesic_projects_one_level_up() {
    let g = presets::gasket();
    let g1 = g.build_graph(1).unwrap();
    let g2 = g.build_graph(2).unwrap();
    let a = g2.find_vertex(&[0.0, 0.0]).unwrap();
    let b = g2.find_vertex(&[1.0, 0.0]).unwrap();
    let (_, path) = shortest_path_distance(&g2, a, b).unwrap();
    let coarse = project_path(&g2, &g1, &path).unwrap();
    assert!(close(coarse.length, 1.0, 1e-15));
}

#[test]
fn projection_rejects_bad_input() {
    let g = presets::gasket();
    let g1 = g.build_graph(1).unwrap();
    let g2 = g.build_graph(2).unwrap();
    let (_, path) = shortest_path_distance(&g1, 0, 1).unwrap();
    assert!(matches!(
        project_path(&g1, &g2, &path),
        Err(Error::InvalidProjection(_))
    ));
    let mut looped = shortest_path_distance(&g2, 0, 1).unwrap().1;
    looped.vertex_ids.push(looped.vertex_ids[0]);
    assert!(matches!(
        project_path(&g2, &g1, &looped),
        Err(Error::InvalidProjection(_))
    ));
}

#[test]
fn multilevel_distance() {
    let v = presets::vicsek();
    assert!(close(
        distance_multilevel(&v, &[0.0, 0.0], &[1.0, 0.0], 0, 4).unwrap(),
        1.0,
        1e-15
    ));
    // 8/9 first appears at level 2; the coarse side shortcuts most of the way
    let d = distance_multilevel(&v, &[0.0, 0.0], &[8.0 / 9.0, 0.0], 0, 4).unwrap();
    assert!(close(d, 10.0 / 9.0, 1e-14));
    let g = presets::gasket();
    let y = [0.625, 3f64.sqrt() / 8.0];
    for n in 3..5 {
        let seq = distance_sequence(&g, &[0.25, 0.0], &y, n).unwrap();
        let m = distance_multilevel(&g, &[0.25, 0.0], &y, n, 4).unwrap();
        assert!(close(m, seq.last(), 1e-14));
    }
    assert!(matches!(
        distance_multilevel(&g, &[0.0, 0.0], &[0.3, 0.1], 0, 3),
        Err(Error::NotAVertex(_))
    ));
}

#[test]
fn lip_seminorms() {
    let g = presets::gasket();
    let graph = g.build_graph(1).unwrap();
    let one = VertexFunction::constant(&graph, 1.0);
    assert_eq!(lip_seminorm(&graph, &one).unwrap(), 0.0);
    let x = VertexFunction::from_formula(&graph, |p| p[0]);
    assert!(close(lip_seminorm(&graph, &x).unwrap(), 1.0, 1e-14));
}

#[test]
fn ess_lip_of_coordinate_and_constant() {
    let g = presets::gasket();
    let t = ess_lip_seminorm(&g, &Formula(|p: &[f64]| p[0]), 0, 5).unwrap();
    assert_eq!(t.table.len(), 6);
    assert!(t.table.iter().all(|&l| close(l, 1.0, 1e-13)));
    let t = ess_lip_seminorm(&g, &Formula(|_: &[f64]| 3.0), 1, 4).unwrap();
    assert!(t.table.iter().all(|&l| l == 0.0));
    assert_eq!(t.rows().next().unwrap().0, 1);
    assert!(matches!(
        ess_lip_seminorm(&g, &Formula(|_: &[f64]| 3.0), 3, 2),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn ess_lip_of_harmonic_function_is_non_increasing() {
    let g = presets::gasket();
    let form = fractal_triple::energy::QuadraticForm::unit(&g);
    let h = HarmonicProvider::new(&g, &form, vec![1.0, 0.0, 0.0]).unwrap();
    let t = ess_lip_seminorm(&g, &h, 0, 5).unwrap();
    assert!(t.table.windows(2).all(|w| w[1] <= w[0]));
    assert!(t.table.iter().zip(&t.per_level).all(|(l, p)| l >= p));
    assert!(t.minimum() > 0.0);
}

#[test]
fn subdivision_checks() {
    let gasket = edge_subdivision_check(&presets::gasket()).unwrap();
    assert!(gasket.holds);
    assert!(gasket.witness.is_none());
    assert!(edge_subdivision_check(&presets::interval()).unwrap().holds);

    let vicsek = edge_subdivision_check(&presets::vicsek()).unwrap();
    assert!(!vicsek.holds);
    let w = vicsek.witness.unwrap();
    assert!(w.gap.1 > w.gap.0);

    let rhombus = presets::preset("rhombic-vicsek:1.0471975511965976").unwrap();
    assert!(!edge_subdivision_check(&rhombus).unwrap().holds);
}

proptest! {
    #[test]
    fn sequences_are_monotone_and_bounded_below(i in 0usize..15, j in 0usize..15) {
        let g = presets::gasket();
        let graph = g.build_graph(2).unwrap();
        prop_assume!(i != j);
        let (x, y) = (graph.vertex(i).to_vec(), graph.vertex(j).to_vec());
        let seq = distance_sequence(&g, &x, &y, 5).unwrap();
        prop_assert!(seq.values.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12)));
        let e = fractal_triple::numerics::euclidean(&x, &y);
        prop_assert!(seq.values[0] >= e - 1e-14);
        prop_assert!(seq.extrapolated >= seq.last() - 1e-14);
    }

    #[test]
    fn lip_bounds_every_difference_quotient(seed in prop::collection::vec(-5.0f64..5.0, 15)) {
        let graph = presets::gasket().build_graph(2).unwrap();
        let f = VertexFunction { level: 2, values: seed.clone() };
        let l = lip_seminorm(&graph, &f).unwrap();
        let d = all_pairs(&graph);
        for a in 0..15 {
            for b in 0..15 {
                if a != b {
                    prop_assert!((seed[a] - seed[b]).abs() <= l * d[a][b] * (1.0 + 1e-12));
                }
            }
        }
    }

    #[test]
    fn scaled_functions_scale_lip(c in 0.1f64..10.0) {
        let graph = presets::vicsek().build_graph(2).unwrap();
        let x = Formula(|p: &[f64]| p[0] + 2.0 * p[1]).sample(&graph).unwrap();
        let cx = VertexFunction { level: 2, values: x.values.iter().map(|v| c * v).collect() };
        let a = lip_seminorm(&graph, &x).unwrap();
        prop_assert!((lip_seminorm(&graph, &cx).unwrap() - c * a).abs() <= 1e-12 * c * a);
    }
}
