//! Metric dimension, zeta values and the complex dimensions of a few presets.
//!
//! ```text
//! cargo run --example dimension_and_zeta
//! ```

use fractal_triple::presets;
use fractal_triple::spectral::{dimension_spectrum, metric_dimension, residue_at_dimension, zeta, zeta_truncated};
use num_complex::Complex64;

fn main() -> fractal_triple::Result<()> {
    for name in ["interval", "gasket", "gasket3", "vicsek"] {
        let fractal = presets::preset(name)?;
        let d = metric_dimension(&fractal);
        let s = Complex64::new(d + 1.0, 2.0);
        let z = zeta(&fractal, s)?;
        let partial = zeta_truncated(&fractal, s, 30)?;
        println!(
            "{name:>8}: d = {d:.12}, residue at d = {:.12}",
            residue_at_dimension(&fractal)
        );
        println!(
            "          zeta({s}) = {z:.10}, 30 levels: {:.10} (tail ≤ {:.2e})",
            partial.value, partial.tail_bound
        );
    }

    let gasket = presets::gasket();
    println!("\ngasket poles on the line Re s = d:");
    for pole in dimension_spectrum(&gasket, -2..=2).poles {
        println!(
            "  n = {:>2}: s = {:.8}, residue = {:.8}",
            pole.index, pole.s, pole.residue
        );
    }
    Ok(())
}
