use super::{NestedFractal, Similitude};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// JSON description of a fractal:
/// `{ "ambient_dim": N, "ratio": λ, "maps": [{ "rotation": [[..]], "translation": [..] }], "dedup_tol": optional }`.
///
/// A map may carry its own `"ratio"`; construction then rejects the data
/// unless all ratios agree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractalFile {
    pub ambient_dim: usize,
    pub ratio: f64,
    pub maps: Vec<MapEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dedup_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapEntry {
    pub rotation: Vec<Vec<f64>>,
    pub translation: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
}

impl FractalFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fractal file serializes")
    }

    pub fn build(&self) -> Result<NestedFractal> {
        let n = self.ambient_dim;
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(i, m)| {
                if m.translation.len() != n || m.rotation.len() != n || m.rotation.iter().any(|r| r.len() != n) {
                    return Err(Error::Parse(format!("map {} does not match ambient_dim {n}", i + 1)));
                }
                let rotation = DMatrix::from_fn(n, n, |r, c| m.rotation[r][c]);
                Similitude::new(
                    m.ratio.unwrap_or(self.ratio),
                    rotation,
                    DVector::from_column_slice(&m.translation),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        NestedFractal::new(maps, self.dedup_tol)
    }

    /// Serializes the map data of an existing fractal.
    pub fn from_fractal(fractal: &NestedFractal, with_tol: bool) -> Self {
        let maps = fractal
            .maps()
            .iter()
            .map(|m| MapEntry {
                rotation: m.rotation().row_iter().map(|r| r.iter().copied().collect()).collect(),
                translation: m.translation().iter().copied().collect(),
                ratio: None,
            })
            .collect();
        Self {
            ambient_dim: fractal.ambient_dim(),
            ratio: fractal.ratio(),
            maps,
            dedup_tol: with_tol.then(|| fractal.dedup_tol()),
        }
    }
}
