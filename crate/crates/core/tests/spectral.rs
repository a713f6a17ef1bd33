use fractal_triple::spectral::{
    cell_measure, dimension_spectrum, integral_constant, metric_dimension, nc_integral, nc_integral_cell,
    residue_at_dimension, residue_by_extrapolation, zeta, zeta_truncated, ZetaData,
};
use fractal_triple::{presets, CellIndicator, Error, FunctionProvider, VertexFunction, Word};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::{LN_2, PI};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Level-by-level sum over the oriented edges of the actual graphs.
fn graph_series(fractal: &fractal_triple::NestedFractal, s: Complex64, levels: usize) -> Complex64 {
    (0..=levels)
        .map(|n| {
            let g = fractal.build_graph(n).unwrap();
            g.edges()
                .iter()
                .map(|e| 2.0 * Complex64::new(e.length, 0.0).powc(s))
                .sum::<Complex64>()
        })
        .sum()
}

#[test]
fn dimensions() {
    assert!((metric_dimension(&presets::gasket()) - 1.584962500721156).abs() < 1e-14);
    assert!((metric_dimension(&presets::vicsek()) - 1.464973520717927).abs() < 1e-14);
    assert!((metric_dimension(&presets::interval()) - 1.0).abs() < 1e-15);
    assert!((metric_dimension(&presets::gasket3()) - 6f64.ln() / 3f64.ln()).abs() < 1e-15);
}

#[test]
fn closed_form_values() {
    let g = presets::gasket();
    let z = zeta(&g, c(2.0, 0.0)).unwrap();
    assert!((z - c(24.0, 0.0)).norm() < 1e-13);
    for fractal in [presets::gasket(), presets::vicsek(), presets::gasket3()] {
        let oriented = 2.0 * fractal.e0().len() as f64;
        let z0 = zeta(&fractal, c(0.0, 0.0)).unwrap();
        assert!((z0.re - oriented / (1.0 - fractal.k() as f64)).abs() < 1e-13);
    }
}

#[test]
fn poles_are_rejected() {
    let g = presets::gasket();
    let d = metric_dimension(&g);
    assert!(matches!(zeta(&g, c(d, 0.0)), Err(Error::PoleProximity { .. })));
    let p1 = c(d, d * 2.0 * PI / 3f64.ln());
    assert!(matches!(zeta(&g, p1), Err(Error::PoleProximity { .. })));
    assert!(zeta(&g, c(d + 1e-6, 0.0)).is_ok());
}

#[test]
fn truncated_series() {
    let g = presets::gasket();
    // the omitted tail is 6·(3/4)^{N+1}/(1 − 3/4)
    let t = zeta_truncated(&g, c(2.0, 0.0), 50).unwrap();
    let tail = 24.0 * 0.75f64.powi(51);
    assert!(((c(24.0, 0.0) - t.value).re - tail).abs() < 1e-13);
    assert!((t.tail_bound - tail).abs() < 1e-18);
    let t = zeta_truncated(&g, c(2.0, 0.0), 100).unwrap();
    assert!((t.value - c(24.0, 0.0)).norm() < 1e-10);
    assert!(matches!(
        zeta_truncated(&g, c(1.2, 0.0), 50),
        Err(Error::DivergentSeries { .. })
    ));
    let v = presets::vicsek();
    let t = zeta_truncated(&v, c(3.0, 0.0), 40).unwrap();
    let z = zeta(&v, c(3.0, 0.0)).unwrap();
    assert!((t.value - z).norm() <= t.tail_bound + 1e-14 * z.norm());
}

#[test]
fn truncation_matches_graph_sums() {
    for fractal in [presets::gasket(), presets::vicsek()] {
        let d = metric_dimension(&fractal);
        for s in [c(d + 0.5, 0.0), c(d + 1.0, 7.0), c(d + 2.5, -3.0)] {
            let oracle = graph_series(&fractal, s, 5);
            let t = zeta_truncated(&fractal, s, 5).unwrap();
            assert!((oracle - t.value).norm() <= 1e-12 * oracle.norm(), "{s}");
        }
    }
}

#[test]
fn tail_bound_is_exact_for_real_s() {
    // for real s every term is positive, so the bound equals the omitted tail
    let g = presets::gasket();
    let d = metric_dimension(&g);
    let s = c(d + 0.3, 0.0);
    let t = zeta_truncated(&g, s, 30).unwrap();
    let z = zeta(&g, s).unwrap();
    assert!(((z - t.value).norm() - t.tail_bound).abs() < 1e-11 * z.norm());
}

#[test]
fn spectrum_and_residues() {
    let g = presets::gasket();
    let d = metric_dimension(&g);
    let spec = dimension_spectrum(&g, -1..=1);
    assert_eq!(spec.poles.len(), 3);
    let step = d * 2.0 * PI / 3f64.ln();
    for (p, n) in spec.poles.iter().zip(-1..=1) {
        assert_eq!(p.index, n);
        assert!((p.s - c(d, n as f64 * step)).norm() < 1e-13);
        let data = ZetaData::new(&g);
        assert!(data.denominator(p.s).norm() < 1e-14);
    }
    let r = residue_at_dimension(&g);
    assert!((r - 6.0 / LN_2).abs() < 1e-12);
    assert!((spec.poles[1].residue.re - r).abs() < 1e-12);
}

#[test]
fn residue_limit_along_real_axis() {
    for fractal in [presets::gasket(), presets::vicsek()] {
        let (est, _) = residue_by_extrapolation(&fractal, &[2, 3, 4, 5, 6]).unwrap();
        let exact = residue_at_dimension(&fractal);
        assert!((est - exact).abs() < 1e-6 * exact);
    }
}

#[test]
fn cell_measures_and_integrals() {
    let g = presets::gasket();
    let v = presets::vicsek();
    assert_eq!(cell_measure(&g, &Word::empty()), 1.0);
    assert!((cell_measure(&g, &Word::parse("12", 3).unwrap()) - 1.0 / 9.0).abs() < 1e-16);
    assert!((cell_measure(&v, &Word::parse("123", 5).unwrap()) - 1.0 / 125.0).abs() < 1e-17);
    let whole = nc_integral_cell(&g, &Word::empty());
    assert!((whole - 6.0 / 3f64.ln()).abs() < 1e-14);
    assert!((nc_integral_cell(&g, &Word::parse("31", 3).unwrap()) - whole / 9.0).abs() < 1e-14);
    let d = metric_dimension(&g);
    assert!((whole - residue_at_dimension(&g) / d).abs() < 1e-12);
}

#[test]
fn quadrature_of_constants_and_coordinates() {
    let g = presets::gasket();
    let graph = g.build_graph(6).unwrap();
    let one = nc_integral(&g, &graph, &VertexFunction::constant(&graph, 1.0)).unwrap();
    assert_eq!(one.value, integral_constant(&g));
    assert_eq!(one.error_bound, 0.0);

    let graph8 = g.build_graph(8).unwrap();
    let x = nc_integral(&g, &graph8, &VertexFunction::from_formula(&graph8, |p| p[0])).unwrap();
    let exact = integral_constant(&g) * 0.5;
    assert!((x.value - exact).abs() <= x.error_bound);
    assert!(x.error_bound <= integral_constant(&g) / 256.0 + 1e-15);
}

#[test]
fn quadrature_error_decays_with_level() {
    // exact mean of the first coordinate is 1/2 by symmetry; anchoring each
    // cell at its left corner shifts it by half the cell side
    let g = presets::gasket();
    let cst = integral_constant(&g);
    for n in [2, 5, 9] {
        let graph = g.build_graph(n).unwrap();
        let q = nc_integral(&g, &graph, &VertexFunction::from_formula(&graph, |p| p[0])).unwrap();
        let err = (q.value - 0.5 * cst).abs();
        assert!((err - cst * 0.5f64.powi(n as i32 + 1)).abs() < 1e-12, "n={n}");
    }
}

#[test]
fn quadrature_of_cell_indicator() {
    let g = presets::gasket();
    let graph = g.build_graph(6).unwrap();
    let word = Word::parse("23", 3).unwrap();
    let f = CellIndicator(word.clone()).sample(&graph).unwrap();
    let q = nc_integral(&g, &graph, &f).unwrap();
    let exact = nc_integral_cell(&g, &word);
    assert!((q.value - exact).abs() <= q.error_bound);
}

#[test]
fn incomplete_function_is_rejected() {
    let g = presets::gasket();
    let graph = g.build_graph(2).unwrap();
    let mut values = vec![1.0; graph.vertex_count()];
    values[4] = f64::NAN;
    let f = VertexFunction { level: 2, values };
    assert!(matches!(nc_integral(&g, &graph, &f), Err(Error::IncompleteFunction(_))));
}

proptest! {
    #[test]
    fn children_sum_to_parent(letters in prop::collection::vec(1usize..=5, 0..6)) {
        let v = presets::vicsek();
        let w = Word::new(letters, 5).unwrap();
        let sum: f64 = (1..=5).map(|l| nc_integral_cell(&v, &w.child(l))).sum();
        prop_assert!((sum - nc_integral_cell(&v, &w)).abs() < 1e-14);
    }

    #[test]
    fn zeta_satisfies_self_similarity(re in 1.7f64..5.0, im in -30.0f64..30.0) {
        // 𝒵(s) = Σ_e ℓ^s + k λ^s 𝒵(s)
        let g = presets::gasket();
        let s = c(re, im);
        let z = zeta(&g, s).unwrap();
        let data = ZetaData::new(&g);
        let rhs = data.numerator(s) + 3.0 * c(0.5, 0.0).powc(s) * z;
        prop_assert!((z - rhs).norm() <= 1e-11 * (1.0 + z.norm()));
    }

    #[test]
    fn truncation_error_within_bound(x in 0.1f64..3.0, im in -20.0f64..20.0, levels in 5usize..80) {
        let v = presets::vicsek();
        let s = c(metric_dimension(&v) + x, im);
        let z = zeta(&v, s).unwrap();
        let t = zeta_truncated(&v, s, levels).unwrap();
        prop_assert!((t.value - z).norm() <= t.tail_bound + 1e-13 * z.norm());
    }
}

#[test]
fn conjugate_symmetry() {
    let v = presets::vicsek();
    let z = zeta(&v, c(2.3, 4.1)).unwrap();
    let zc = zeta(&v, c(2.3, -4.1)).unwrap();
    assert!((z.conj() - zc).norm() < 1e-13);
}
