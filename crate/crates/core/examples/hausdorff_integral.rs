//! The noncommutative integral reproduces the self-similar measure: exact on
//! cells, and a Riemann sum with an error bound for sampled functions.

use fractal_triple::spectral::{cell_measure, integral_constant, nc_integral, nc_integral_cell};
use fractal_triple::{presets, Formula, FunctionProvider, Word};

fn main() -> fractal_triple::Result<()> {
    let gasket = presets::gasket();
    let c = integral_constant(&gasket);
    println!("integral of 1 = {c:.15}");

    for w in ["1", "23", "312"] {
        let word = Word::parse(w, gasket.k())?;
        println!(
            "cell {w:>3}: integral = {:.15}, measure = {:.6}",
            nc_integral_cell(&gasket, &word),
            cell_measure(&gasket, &word)
        );
    }

    let f = Formula(|p: &[f64]| p[0] * p[0] + p[1]);
    for level in [2, 4, 6, 8] {
        let graph = gasket.build_graph(level)?;
        let q = nc_integral(&gasket, &graph, &f.sample(&graph)?)?;
        println!(
            "level {level}: ∫ x² + y = {:.10} ± {:.2e}",
            q.value / c,
            q.error_bound / c
        );
    }
    Ok(())
}
