//! Iterating the trace (Schur complement) map from different starting forms
//! to the renormalization eigenform.

use fractal_triple::energy::{
    eigenform, energy_dimension, trace_map, QuadraticForm, EIGENFORM_MAX_ITER, EIGENFORM_TOL,
};
use fractal_triple::presets;

fn main() -> fractal_triple::Result<()> {
    for name in ["gasket", "gasket3", "vicsek"] {
        let fractal = presets::preset(name)?;
        let unit = QuadraticForm::unit(&fractal);
        let once = trace_map(&fractal, &unit)?;
        let r = eigenform(&fractal, &unit, EIGENFORM_TOL, EIGENFORM_MAX_ITER)?;
        println!("{name}:");
        println!("  one trace step of the unit form: {:?}", once.conductances());
        println!(
            "  rho = {:.15} after {} iterations (residual {:.1e}), delta = {:.12}",
            r.rho,
            r.iterations,
            r.residual,
            energy_dimension(&fractal, r.rho)?
        );
    }

    // a skewed start on the gasket still lands on the symmetric form
    let gasket = presets::gasket();
    let skewed = QuadraticForm::new(&gasket, vec![1.0, 4.0, 0.25])?;
    let r = eigenform(&gasket, &skewed, EIGENFORM_TOL, EIGENFORM_MAX_ITER)?;
    println!(
        "gasket from (1, 4, 1/4): {:?}, rho = {:.12}",
        r.form.conductances(),
        r.rho
    );
    Ok(())
}
