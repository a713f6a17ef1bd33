//! Harmonic extension and renormalized graph energies ρ^{−n} S_n.

use fractal_triple::energy::{eigenform, energy_limit, harmonic_extension, HarmonicProvider, QuadraticForm};
use fractal_triple::{presets, Formula};

fn main() -> fractal_triple::Result<()> {
    let gasket = presets::gasket();
    let eig = eigenform(&gasket, &QuadraticForm::unit(&gasket), 1e-13, 1000)?;

    let graph = gasket.build_graph(2)?;
    let h = harmonic_extension(&gasket, &eig.form, &[1.0, 0.0, 0.0], 2)?;
    println!("harmonic extension of (1, 0, 0) on V_2:");
    for (p, v) in graph.vertices().zip(&h.values) {
        println!("  ({:.4}, {:.4}) -> {v:.6}", p[0], p[1]);
    }

    let harmonic = HarmonicProvider::new(&gasket, &eig.form, vec![1.0, 0.0, 0.0])?;
    let t = energy_limit(&gasket, &eig.form, &harmonic, eig.rho, 6)?;
    println!("\nharmonic: {:?} -> {:?}", t.values, t.behavior);

    let x = Formula(|p: &[f64]| p[0]);
    let t = energy_limit(&gasket, &eig.form, &x, eig.rho, 8)?;
    println!("first coordinate: {:?}", t.behavior);
    for (n, e) in t.values.iter().enumerate() {
        println!("  n = {n}: {e:.8}");
    }
    Ok(())
}
