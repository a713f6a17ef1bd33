//! Boundary edge subdivision and Lipschitz seminorms across levels.

use fractal_triple::energy::{eigenform, HarmonicProvider, QuadraticForm};
use fractal_triple::metric::{edge_subdivision_check, ess_lip_seminorm, lip_seminorm};
use fractal_triple::{presets, Formula, FunctionProvider};

fn main() -> fractal_triple::Result<()> {
    for name in ["gasket", "vicsek", "rhombic-vicsek:1.0471975511965976"] {
        let r = edge_subdivision_check(&presets::preset(name)?)?;
        match r.witness {
            None => println!("{name}: every boundary edge splits into level-1 edges"),
            Some(w) => println!("{name}: edge {:?}-{:?} is not covered on {:?}", w.p, w.q, w.gap),
        }
    }

    let gasket = presets::gasket();
    let x = Formula(|p: &[f64]| p[0]);
    for level in 1..5 {
        let graph = gasket.build_graph(level)?;
        println!("lip_{level}(x) = {:.12}", lip_seminorm(&graph, &x.sample(&graph)?)?);
    }

    let eig = eigenform(&gasket, &QuadraticForm::unit(&gasket), 1e-13, 1000)?;
    let h = HarmonicProvider::new(&gasket, &eig.form, vec![1.0, 0.0, 0.0])?;
    let table = ess_lip_seminorm(&gasket, &h, 0, 6)?;
    println!("\nharmonic (1, 0, 0):");
    for (n, sup, level) in table.rows() {
        println!("  n = {n}: sup over levels ≥ n = {sup:.10}, level quotient = {level:.10}");
    }
    Ok(())
}
