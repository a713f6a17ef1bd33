mod common;

use common::{apply_letters, brute_force_vertices, dist};
use fractal_triple::ifs::{
    check_nesting, essential_fixed_points, fixed_point, FractalFile, MapEntry, NestingViolation,
};
use fractal_triple::{presets, Error, NestedFractal, Similitude, Word};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn line_maps(ratio: f64, translations: &[f64]) -> Vec<Similitude> {
    translations
        .iter()
        .map(|&t| Similitude::homothety(ratio, &[t]).unwrap())
        .collect()
}

#[test]
fn fixed_points_by_linear_solve() {
    let p = fixed_point(&Similitude::homothety(0.5, &[0.5, 0.0]).unwrap()).unwrap();
    assert!(dist(&p, &[1.0, 0.0]) < 1e-15);
    let p = fixed_point(&Similitude::homothety(1.0 / 3.0, &[0.0, 0.0]).unwrap()).unwrap();
    assert_eq!(p, vec![0.0, 0.0]);
    let apex = Similitude::homothety(0.5, &[0.25, 3f64.sqrt() / 4.0]).unwrap();
    let p = fixed_point(&apex).unwrap();
    assert!(dist(&p, &[0.5, 3f64.sqrt() / 2.0]) < 1e-15);
    assert!(dist(&apex.apply(&p), &p) < 1e-12);
}

#[test]
fn rotated_map_fixed_point() {
    // quarter turn about (1, 1) with ratio 1/2
    let q = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
    let c = [1.0, 1.0];
    let qc = &q * DVector::from_column_slice(&c) * 0.5;
    let t = DVector::from_column_slice(&[c[0] - qc[0], c[1] - qc[1]]);
    let m = Similitude::new(0.5, q, t).unwrap();
    assert!(dist(&m.fixed_point().unwrap(), &c) < 1e-14);
}

#[test]
fn rejects_bad_similitudes() {
    let skew = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
    assert!(matches!(
        Similitude::new(0.5, skew, DVector::zeros(2)),
        Err(Error::InvalidSimilitude(_))
    ));
    for ratio in [0.0, 1.0, -0.5, 1.5] {
        assert!(Similitude::homothety(ratio, &[0.0]).is_err());
    }
}

#[test]
fn essential_points_of_presets() {
    let g = presets::gasket();
    assert_eq!(essential_fixed_points(g.maps(), 1e-9).unwrap(), vec![0, 1, 2]);
    let v = presets::vicsek();
    assert_eq!(essential_fixed_points(v.maps(), 1e-9).unwrap(), vec![0, 1, 2, 3]);
    assert_eq!(v.v0().len(), 4);
    assert!(v.v0().iter().all(|p| dist(p, &[0.5, 0.5]) > 0.1));
}

#[test]
fn cantor_set_has_no_essential_points() {
    let maps = line_maps(1.0 / 3.0, &[0.0, 2.0 / 3.0]);
    assert!(essential_fixed_points(&maps, 1e-9).is_err());
    assert!(matches!(
        NestedFractal::new(maps, None),
        Err(Error::InvalidFractal { .. })
    ));
}

#[test]
fn mixed_ratios_violate_condition_one() {
    let maps = vec![
        Similitude::homothety(0.5, &[0.0]).unwrap(),
        Similitude::homothety(1.0 / 3.0, &[2.0 / 3.0]).unwrap(),
    ];
    match NestedFractal::new(maps, None) {
        Err(Error::InvalidFractal { condition, .. }) => assert_eq!(condition, Some(1)),
        other => panic!("expected condition 1 rejection, got {other:?}"),
    }
}

#[test]
fn gasket_levels_zero_and_one() {
    let g = presets::gasket();
    let g0 = g.build_graph(0).unwrap();
    assert_eq!(g0.vertex_count(), 3);
    assert_eq!(g0.edges().len(), 3);
    assert!(g0.edges().iter().all(|e| (e.length - 1.0).abs() < 1e-15));
    let g1 = g.build_graph(1).unwrap();
    assert_eq!(g1.vertex_count(), 6);
    assert_eq!(g1.edges().len(), 9);
    assert!(g1.edges().iter().all(|e| (e.length - 0.5).abs() < 1e-15));
}

#[test]
fn vicsek_level_one() {
    let v = presets::vicsek();
    let g1 = v.build_graph(1).unwrap();
    assert_eq!(g1.vertex_count(), 16);
    assert_eq!(g1.edges().len(), 30);
}

#[test]
fn vertex_counts_match_enumeration() {
    for (fractal, max_level) in [(presets::gasket(), 4), (presets::vicsek(), 3), (presets::gasket3(), 2)] {
        for n in 0..=max_level {
            let graph = fractal.build_graph(n).unwrap();
            let brute = brute_force_vertices(&fractal, n);
            assert_eq!(graph.vertex_count(), brute.len(), "level {n}");
            for p in &brute {
                assert!(graph.find_vertex(p).is_some());
            }
        }
    }
}

#[test]
fn gasket_vertex_formula() {
    let g = presets::gasket();
    for n in 0..=8 {
        let expected = (3usize.pow(n as u32 + 1) + 3) / 2;
        assert_eq!(g.build_graph(n).unwrap().vertex_count(), expected);
    }
}

#[test]
fn apply_word_examples() {
    let g = presets::gasket();
    let apex = g.v0()[2].clone();
    assert_eq!(g.apply_word(&Word::empty(), &apex), apex);
    let p = g.apply_word(&Word::new(vec![1, 1], 3).unwrap(), &apex);
    let expected: Vec<f64> = apex.iter().map(|x| 0.25 * x).collect();
    assert!(dist(&p, &expected) < 1e-15);

    let v = presets::vicsek();
    let p = v.apply_word(&Word::new(vec![5], 5).unwrap(), &[0.0, 0.0]);
    assert!(dist(&p, &[1.0 / 3.0, 1.0 / 3.0]) < 1e-15);
}

#[test]
fn apply_word_composes_outermost_first() {
    let v = presets::vicsek();
    let w = Word::new(vec![2, 5, 1], 5).unwrap();
    let x = [0.3, 0.9];
    let direct = apply_letters(&v, w.letters(), &x);
    assert!(dist(&v.apply_word(&w, &x), &direct) < 1e-15);
    // w_2(w_5(w_1(x)))
    let manual = v.maps()[1].apply(&v.maps()[4].apply(&v.maps()[0].apply(&x)));
    assert!(dist(&direct, &manual) < 1e-15);
}

#[test]
fn cells_are_images_of_boundary() {
    let v = presets::vicsek();
    let graph = v.build_graph(3).unwrap();
    for cell in [0, 17, 63, 124] {
        let word = Word::from_cell_index(cell, 3, 5);
        for (j, p) in v.v0().iter().enumerate() {
            let id = graph.cell(cell)[j] as usize;
            assert!(dist(graph.vertex(id), &v.apply_word(&word, p)) < 1e-12);
        }
        // coarser cells through the corner trick
        for m in 0..3 {
            let coarse = cell / 5usize.pow(3 - m as u32);
            let cw = Word::from_cell_index(coarse, m, 5);
            for (j, p) in v.v0().iter().enumerate() {
                let id = graph.coarse_cell_vertex(m, coarse, j) as usize;
                assert!(dist(graph.vertex(id), &v.apply_word(&cw, p)) < 1e-12);
            }
        }
    }
}

#[test]
fn edges_scale_and_connect() {
    for fractal in [presets::gasket(), presets::vicsek(), presets::gasket3()] {
        let lengths: Vec<f64> = fractal.e0().iter().map(|e| e.length).collect();
        for n in 0..=4 {
            let graph = fractal.build_graph(n).unwrap();
            let scale = fractal.ratio().powi(n as i32);
            for e in graph.edges() {
                let expected = scale * lengths[e.e0];
                assert!((e.length - expected).abs() <= 1e-12 * expected);
                let measured = dist(graph.vertex(e.a as usize), graph.vertex(e.b as usize));
                assert!((measured - expected).abs() <= 1e-12);
            }
            assert_eq!(graph.cell_count(), fractal.k().pow(n as u32));
            assert_eq!(graph.edges().len(), graph.cell_count() * fractal.e0().len());
            assert!(graph.is_connected());
            assert!(graph.min_vertex_separation() > fractal.dedup_tol());
        }
    }
}

#[test]
fn building_twice_is_identical() {
    let v = presets::vicsek();
    let a = v.build_graph(4).unwrap();
    let b = v.build_graph(4).unwrap();
    assert_eq!(a.vertices().collect::<Vec<_>>(), b.vertices().collect::<Vec<_>>());
    assert_eq!(a.edges(), b.edges());
}

#[test]
fn budget_is_enforced() {
    let v = presets::vicsek();
    match v.build_graph_with_budget(5, 1000) {
        Err(Error::BudgetExceeded { required, budget }) => {
            assert_eq!(budget, 1000);
            assert_eq!(required, 2.0 * 5f64.powi(5) * 6.0);
        }
        other => panic!("expected budget error, got {:?}", other.map(|g| g.vertex_count())),
    }
    assert!(v.build_graph(99).is_err());
}

#[test]
fn nesting_reports() {
    assert!(check_nesting(&presets::gasket(), 2).unwrap().is_nested());
    assert!(check_nesting(&presets::vicsek(), 1).unwrap().is_nested());
    assert!(check_nesting(&presets::gasket3(), 1).unwrap().is_nested());

    let mut maps = line_maps(0.5, &[0.0, 0.5]);
    maps.push(maps[1].clone());
    let degenerate = NestedFractal::new(maps, None).unwrap();
    let report = check_nesting(&degenerate, 1).unwrap();
    assert!(report
        .violations
        .iter()
        .any(|v| matches!(v, NestingViolation::IdenticalCells { .. })));
}

#[test]
fn reflection_symmetry_flag() {
    assert!(check_nesting(&presets::gasket(), 1).unwrap().v0_reflection_symmetric);
    assert!(check_nesting(&presets::vicsek(), 1).unwrap().v0_reflection_symmetric);
}

#[test]
fn json_round_trip_is_bitwise() {
    for fractal in [
        presets::gasket(),
        presets::vicsek(),
        presets::preset("rhombic-vicsek:0.6").unwrap(),
    ] {
        let text = FractalFile::from_fractal(&fractal, false).to_json();
        let back = FractalFile::from_json(&text).unwrap().build().unwrap();
        assert_eq!(back.v0(), fractal.v0());
        let (a, b) = (fractal.build_graph(3).unwrap(), back.build_graph(3).unwrap());
        assert_eq!(a.vertices().collect::<Vec<_>>(), b.vertices().collect::<Vec<_>>());
        assert_eq!(a.edges(), b.edges());
    }
}

#[test]
fn per_map_ratio_in_file() {
    let file = FractalFile {
        ambient_dim: 1,
        ratio: 0.5,
        maps: vec![
            MapEntry {
                rotation: vec![vec![1.0]],
                translation: vec![0.0],
                ratio: None,
            },
            MapEntry {
                rotation: vec![vec![1.0]],
                translation: vec![2.0 / 3.0],
                ratio: Some(1.0 / 3.0),
            },
        ],
        dedup_tol: None,
    };
    assert!(matches!(
        file.build(),
        Err(Error::InvalidFractal { condition: Some(1), .. })
    ));
}

#[test]
fn word_parsing() {
    assert_eq!(Word::parse("1,2,5", 5).unwrap().letters(), &[1, 2, 5]);
    assert_eq!(Word::parse("125", 5).unwrap().letters(), &[1, 2, 5]);
    assert_eq!(Word::parse("", 3).unwrap(), Word::empty());
    assert!(matches!(
        Word::parse("14", 3),
        Err(Error::InvalidWord { letter: 4, k: 3 })
    ));
    assert!(Word::parse("1,x", 3).is_err());
}

proptest! {
    #[test]
    fn cell_index_round_trip(level in 0usize..7, k in 2usize..7, seed in any::<u64>()) {
        let count = k.pow(level as u32);
        let index = (seed as usize) % count;
        let w = Word::from_cell_index(index, level, k);
        prop_assert_eq!(w.level(), level);
        prop_assert_eq!(w.cell_index(k), index);
        prop_assert!(w.letters().iter().all(|&l| (1..=k).contains(&l)));
    }

    #[test]
    fn words_contract_by_ratio_power(letters in prop::collection::vec(1usize..=5, 0..6), x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let v = presets::vicsek();
        let w = Word::new(letters, 5).unwrap();
        let (a, b) = ([x, y], [0.5, -0.25]);
        let ratio = dist(&v.apply_word(&w, &a), &v.apply_word(&w, &b)) / dist(&a, &b);
        prop_assert!((ratio - (1.0f64 / 3.0).powi(w.level() as i32)).abs() < 1e-12);
    }
}

#[test]
fn vertex_sets_are_nested() {
    for fractal in [presets::gasket(), presets::vicsek()] {
        let graphs: Vec<_> = (0..=4).map(|n| fractal.build_graph(n).unwrap()).collect();
        for pair in graphs.windows(2) {
            for p in pair[0].vertices() {
                assert!(pair[1].find_vertex(p).is_some());
            }
        }
    }
}
