//! The Vicsek eigenform family and its rhombic deformations.
//!
//! Boundary vertices of a Vicsek-type fractal are the four corners in
//! cyclic order, so `E_0` holds four sides and the diagonals `{0,2}`,
//! `{1,3}`. The family member with parameter `H` has unit sides, `H` on
//! `{0,2}` and `1/H` on `{1,3}`.

use super::QuadraticForm;
use crate::error::{Error, Result};
use crate::ifs::{NestedFractal, Similitude};
use std::f64::consts::FRAC_PI_2;

/// Eigenform conductances `(A, F, G)` matching the functional with side
/// weight `a` and diagonal weights `f`, `g`; `H = G/A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VicsekConductances {
    pub side: f64,
    pub f_diagonal: f64,
    pub g_diagonal: f64,
    pub h: f64,
}

pub fn vicsek_conductances_from_lengths(a: f64, f: f64, g: f64) -> Result<VicsekConductances> {
    if !(a > 0.0 && f > 0.0 && g > 0.0) {
        return Err(Error::InvalidConductance(format!(
            "weights must be positive, got ({a}, {f}, {g})"
        )));
    }
    let denom = 2.0 * a + f + g;
    Ok(VicsekConductances {
        side: (a + f) * (a + g) / denom,
        f_diagonal: (a + f) * (a + f) / denom,
        g_diagonal: (a + g) * (a + g) / denom,
        h: (a + g) / (a + f),
    })
}

/// `H(θ) = (2 + √(1 + tan²θ)) / (2 + √(1 + cot²θ))` for the rhombus of half-angle θ.
pub fn vicsek_h_from_angle(theta: f64) -> Result<f64> {
    check_angle(theta)?;
    let tan = theta.tan();
    Ok((2.0 + (1.0 + tan * tan).sqrt()) / (2.0 + (1.0 + 1.0 / (tan * tan)).sqrt()))
}

fn check_angle(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::DegenerateRhombus(theta));
    }
    Ok(())
}

/// Vicsek fractal on the unit-side rhombus with angle 2θ.
///
/// Vertices, in map order: `(−cos θ, 0), (0, −sin θ), (cos θ, 0), (0, sin θ)`,
/// then the center map at the origin. The diagonal `{0,2}` has length
/// `2 cos θ`, `{1,3}` has length `2 sin θ`.
pub fn rhombic_vicsek(theta: f64) -> Result<NestedFractal> {
    check_angle(theta)?;
    let (s, c) = theta.sin_cos();
    let centers = [[-c, 0.0], [0.0, -s], [c, 0.0], [0.0, s], [0.0, 0.0]];
    let maps = centers
        .iter()
        .map(|p| Similitude::homothety_about(1.0 / 3.0, p))
        .collect::<Result<Vec<_>>>()?;
    NestedFractal::new(maps, None)
}

fn require_square(fractal: &NestedFractal) -> Result<()> {
    if fractal.v0().len() != 4 {
        return Err(Error::InvalidArgument(format!(
            "Vicsek family needs 4 boundary vertices, fractal has {}",
            fractal.v0().len()
        )));
    }
    Ok(())
}

fn is_diagonal(p: usize, q: usize) -> bool {
    q - p == 2
}

/// Member `(1, 1, 1, 1, H, 1/H)` of the eigenform family: sides, `{0,2}`, `{1,3}`.
pub fn vicsek_family_form(fractal: &NestedFractal, h: f64) -> QuadraticForm {
    try_vicsek_family_form(fractal, h).expect("Vicsek family form on a 4-vertex boundary")
}

pub fn try_vicsek_family_form(fractal: &NestedFractal, h: f64) -> Result<QuadraticForm> {
    require_square(fractal)?;
    QuadraticForm::from_fn(fractal, |p, q, _| match (p, q) {
        (0, 2) => h,
        (1, 3) => 1.0 / h,
        _ => 1.0,
    })
}

/// Where a 4-vertex form sits relative to the family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VicsekFamilyCoordinates {
    /// mean side conductance
    pub side: f64,
    /// `(max side − min side) / mean side`
    pub side_spread: f64,
    /// `c_{02} c_{13} / side² − 1`
    pub product_defect: f64,
    /// `c_{02} / side`
    pub h: f64,
}

pub fn vicsek_family_coordinates(fractal: &NestedFractal, form: &QuadraticForm) -> Result<VicsekFamilyCoordinates> {
    require_square(fractal)?;
    let mut sides = Vec::new();
    let (mut d02, mut d13) = (0.0, 0.0);
    for (e, &c) in fractal.e0().iter().zip(form.conductances()) {
        match (e.p, e.q) {
            (0, 2) => d02 = c,
            (1, 3) => d13 = c,
            (p, q) if !is_diagonal(p, q) => sides.push(c),
            _ => unreachable!("only two diagonals"),
        }
    }
    let side = sides.iter().sum::<f64>() / sides.len() as f64;
    let (lo, hi) = sides.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &c| {
        (lo.min(c), hi.max(c))
    });
    Ok(VicsekFamilyCoordinates {
        side,
        side_spread: (hi - lo) / side,
        product_defect: d02 * d13 / (side * side) - 1.0,
        h: d02 / side,
    })
}
