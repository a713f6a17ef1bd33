//! The one-parameter family of Vicsek eigenforms and the rhombic Vicsek
//! fractals that select a member of it.

use fractal_triple::energy::{
    eigen_residual, eigenform, residue_base_form, rhombic_vicsek, vicsek_conductances_from_lengths,
    vicsek_family_coordinates, vicsek_family_form, vicsek_h_from_angle, EIGENFORM_MAX_ITER, EIGENFORM_TOL,
};
use fractal_triple::presets;
use std::f64::consts::PI;

fn main() -> fractal_triple::Result<()> {
    let square = presets::vicsek();
    for h in [0.25, 1.0, 3.0] {
        let (rho, residual) = eigen_residual(&square, &vicsek_family_form(&square, h))?;
        println!("H = {h:<4}: rho = {rho:.15} (residual {residual:.1e})");
    }

    let c = vicsek_conductances_from_lengths(1.0, 0.5, 2.0)?;
    println!(
        "\nweights (1, 1/2, 2) -> conductances ({}, {}, {}), H = {}",
        c.side, c.f_diagonal, c.g_diagonal, c.h
    );

    println!("\nrhombic Vicsek:");
    for theta in [PI / 6.0, PI / 4.0, PI / 3.0] {
        let fractal = rhombic_vicsek(theta)?;
        let base = residue_base_form(&fractal, 1.0, 0.0)?;
        let limit = eigenform(&fractal, &base, EIGENFORM_TOL, EIGENFORM_MAX_ITER)?;
        let coords = vicsek_family_coordinates(&fractal, &limit.form)?;
        println!(
            "  theta = {theta:.4}: H(theta) = {:.12}, renormalized 1/length form has H = {:.12}",
            vicsek_h_from_angle(theta)?,
            coords.h
        );
    }
    Ok(())
}
