//! Built-in fractals addressable by name.

use super::{NestedFractal, Similitude};
use crate::error::{Error, Result};

pub const PRESET_NAMES: &[&str] = &["gasket", "gasket3", "vicsek", "rhombic-vicsek:<theta>", "interval"];

/// Sierpinski gasket on the unit triangle `(0,0), (1,0), (1/2, √3/2)`.
pub fn gasket() -> NestedFractal {
    let h = 3f64.sqrt() / 2.0;
    homotheties(0.5, &[[0.0, 0.0], [1.0, 0.0], [0.5, h]])
}

/// Level-3 gasket: the six upward subtriangles of ratio 1/3.
pub fn gasket3() -> NestedFractal {
    let h = 3f64.sqrt() / 6.0;
    let offsets = [
        [0.0, 0.0],
        [1.0 / 3.0, 0.0],
        [2.0 / 3.0, 0.0],
        [1.0 / 6.0, h],
        [0.5, h],
        [1.0 / 3.0, 2.0 * h],
    ];
    let maps = offsets
        .iter()
        .map(|t| Similitude::homothety(1.0 / 3.0, t).expect("valid homothety"))
        .collect();
    NestedFractal::new(maps, None).expect("gasket3 preset is a nested fractal")
}

/// Vicsek square on the unit square: four corner maps in cyclic order
/// `(0,0), (1,0), (1,1), (0,1)` followed by the center map.
pub fn vicsek() -> NestedFractal {
    homotheties(1.0 / 3.0, &[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5]])
}

/// Unit interval as two halves.
pub fn interval() -> NestedFractal {
    let maps = vec![
        Similitude::homothety(0.5, &[0.0]).expect("valid homothety"),
        Similitude::homothety(0.5, &[0.5]).expect("valid homothety"),
    ];
    NestedFractal::new(maps, None).expect("interval preset is a nested fractal")
}

/// Resolves a preset name; `rhombic-vicsek:<theta>` takes the half-angle in radians.
pub fn preset(name: &str) -> Result<NestedFractal> {
    match name {
        "gasket" => Ok(gasket()),
        "gasket3" => Ok(gasket3()),
        "vicsek" => Ok(vicsek()),
        "interval" => Ok(interval()),
        _ => {
            if let Some(theta) = name.strip_prefix("rhombic-vicsek:") {
                let theta: f64 = theta
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad angle in {name:?}")))?;
                crate::energy::rhombic_vicsek(theta)
            } else {
                Err(Error::Parse(format!(
                    "unknown preset {name:?}; known: {}",
                    PRESET_NAMES.join(", ")
                )))
            }
        }
    }
}

fn homotheties(ratio: f64, centers: &[[f64; 2]]) -> NestedFractal {
    let maps = centers
        .iter()
        .map(|c| Similitude::homothety_about(ratio, c).expect("valid homothety"))
        .collect();
    NestedFractal::new(maps, None).expect("preset is a nested fractal")
}
