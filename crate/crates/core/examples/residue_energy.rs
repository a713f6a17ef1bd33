//! Residue of the commutator zeta function at the energy dimension, by an
//! abelian limit in ε, compared with the energy divided by log(1/λ).

use fractal_triple::energy::{eigenform, energy_residue, HarmonicProvider, QuadraticForm};
use fractal_triple::presets;

fn main() -> fractal_triple::Result<()> {
    for (name, boundary) in [("gasket", vec![1.0, 0.0, 0.0]), ("vicsek", vec![1.0, 0.0, 0.0, 0.0])] {
        let fractal = presets::preset(name)?;
        let eig = eigenform(&fractal, &QuadraticForm::unit(&fractal), 1e-13, 1000)?;
        let f = HarmonicProvider::new(&fractal, &eig.form, boundary)?;
        let r = energy_residue(&fractal, &f, eig.rho, &[0.1, 0.03, 0.01], 7)?;
        println!("{name}: delta = {:.10}", r.delta);
        for s in &r.samples {
            println!("  eps = {:<5} F(eps) = {:.10}", s.eps, s.value);
        }
        match r.estimate {
            Some(e) => println!(
                "  extrapolated {e:.10} (±{:.1e}), direct {:.10}",
                r.extrapolation_error, r.direct
            ),
            None => println!("  base energies diverge, no estimate"),
        }
    }
    Ok(())
}
