//! Zeta function of the discrete triple, metric dimension, dimension
//! spectrum and the noncommutative integral.
//!
//! All sums over `E_0` here run over oriented edges: every unordered boundary
//! edge contributes twice.

use crate::error::{Error, Result};
use crate::function::VertexFunction;
use crate::ifs::{GraphApprox, NestedFractal, Word};
use crate::numerics::{pairwise_sum, richardson_to_zero};
use num_complex::Complex64;
use std::ops::RangeInclusive;

/// `|1 − kλ^s|` below this is treated as a pole.
pub const POLE_TOL: f64 = 1e-12;

/// Data of the meromorphic form `𝒵(s) = Σ_e ℓ(e)^s / (1 − kλ^s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaData {
    pub edge_lengths: Vec<f64>,
    pub k: usize,
    pub lambda: f64,
}

impl ZetaData {
    pub fn new(fractal: &NestedFractal) -> Self {
        Self {
            edge_lengths: fractal.oriented_lengths(),
            k: fractal.k(),
            lambda: fractal.ratio(),
        }
    }

    /// Abscissa of convergence `log k / log(1/λ)`.
    pub fn dimension(&self) -> f64 {
        (self.k as f64).ln() / (1.0 / self.lambda).ln()
    }

    /// `Σ_e ℓ(e)^s`
    pub fn numerator(&self, s: Complex64) -> Complex64 {
        self.edge_lengths.iter().map(|&l| (s * l.ln()).exp()).sum()
    }

    /// `1 − kλ^s`, evaluated without cancellation near the poles.
    pub fn denominator(&self, s: Complex64) -> Complex64 {
        let z = (self.k as f64).ln() + s * self.lambda.ln();
        let (a, b) = (z.re, z.im);
        // e^z − 1 = (expm1(a) cos b − 2 sin²(b/2)) + i e^a sin b
        let half = (0.5 * b).sin();
        let em1 = Complex64::new(a.exp_m1() * b.cos() - 2.0 * half * half, a.exp() * b.sin());
        -em1
    }

    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        let den = self.denominator(s);
        if den.norm() < POLE_TOL {
            return Err(Error::PoleProximity { distance: den.norm() });
        }
        Ok(self.numerator(s) / den)
    }

    /// Residue at a pole `s₀` (where `kλ^{s₀} = 1`): `Σ_e ℓ(e)^{s₀} / log(1/λ)`.
    pub fn residue_at(&self, pole: Complex64) -> Complex64 {
        self.numerator(pole) / (1.0 / self.lambda).ln()
    }
}

/// `log k / log(1/λ)`
pub fn metric_dimension(fractal: &NestedFractal) -> f64 {
    ZetaData::new(fractal).dimension()
}

/// Closed-form zeta function at any `s` off the pole set.
pub fn zeta(fractal: &NestedFractal, s: Complex64) -> Result<Complex64> {
    ZetaData::new(fractal).eval(s)
}

/// Partial sum of the level series with a bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedZeta {
    pub value: Complex64,
    pub tail_bound: f64,
}

/// `Σ_{n ≤ N} kⁿ λ^{sn} Σ_e ℓ(e)^s`, valid for `Re s > d`.
pub fn zeta_truncated(fractal: &NestedFractal, s: Complex64, levels: usize) -> Result<TruncatedZeta> {
    let data = ZetaData::new(fractal);
    let d = data.dimension();
    if s.re <= d {
        return Err(Error::DivergentSeries {
            re_s: s.re,
            abscissa: d,
        });
    }
    let numerator = data.numerator(s);
    let ratio = ((data.k as f64).ln() + s * data.lambda.ln()).exp();
    let mut term = Complex64::new(1.0, 0.0);
    let mut partial = Complex64::new(0.0, 0.0);
    for _ in 0..=levels {
        partial += term;
        term *= ratio;
    }
    let q = data.k as f64 * data.lambda.powf(s.re);
    let tail_bound = numerator.norm() * q.powi(levels as i32 + 1) / (1.0 - q);
    Ok(TruncatedZeta {
        value: numerator * partial,
        tail_bound,
    })
}

/// A pole of the zeta function with its residue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    pub index: i64,
    pub s: Complex64,
    pub residue: Complex64,
}

/// Poles `d(1 + 2πi n / log k)` for `n` in a range.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionSpectrum {
    pub d: f64,
    pub poles: Vec<Pole>,
}

pub fn dimension_spectrum(fractal: &NestedFractal, range: RangeInclusive<i64>) -> DimensionSpectrum {
    let data = ZetaData::new(fractal);
    let d = data.dimension();
    let log_k = (data.k as f64).ln();
    let poles = range
        .map(|n| {
            let s = Complex64::new(d, d * 2.0 * std::f64::consts::PI * n as f64 / log_k);
            Pole {
                index: n,
                s,
                residue: data.residue_at(s),
            }
        })
        .collect();
    DimensionSpectrum { d, poles }
}

/// Residue of the zeta function at `s = d`, real.
pub fn residue_at_dimension(fractal: &NestedFractal) -> f64 {
    let data = ZetaData::new(fractal);
    data.residue_at(Complex64::new(data.dimension(), 0.0)).re
}

/// Estimates the residue at `d` as `lim_{s→d⁺} (s − d)·𝒵(s)`, sampling
/// `s = d + 10^{−m}` for each `m` and extrapolating polynomially to `s = d`.
/// Returns the estimate and the tableau's error indicator.
pub fn residue_by_extrapolation(fractal: &NestedFractal, exponents: &[i32]) -> Result<(f64, f64)> {
    let data = ZetaData::new(fractal);
    let d = data.dimension();
    let mut hs = Vec::with_capacity(exponents.len());
    let mut values = Vec::with_capacity(exponents.len());
    for &m in exponents {
        let h = 10f64.powi(-m);
        let z = data.eval(Complex64::new(d + h, 0.0))?;
        hs.push(h);
        values.push(h * z.re);
    }
    Ok(richardson_to_zero(&hs, &values))
}

/// Normalized Hausdorff measure `k^{−|τ|}` of the cell `w_τ(K)`.
pub fn cell_measure(fractal: &NestedFractal, word: &Word) -> f64 {
    (fractal.k() as f64).powi(-(word.level() as i32))
}

/// `(1/log k)·Σ_e ℓ(e)^d`: the constant relating `∮` to the normalized
/// Hausdorff measure.
pub fn integral_constant(fractal: &NestedFractal) -> f64 {
    let d = metric_dimension(fractal);
    let sum: f64 = fractal.oriented_lengths().iter().map(|l| l.powf(d)).sum();
    sum / (fractal.k() as f64).ln()
}

/// Noncommutative integral of the indicator of `w_τ(K)`.
pub fn nc_integral_cell(fractal: &NestedFractal, word: &Word) -> f64 {
    integral_constant(fractal) * cell_measure(fractal, word)
}

/// A quadrature value with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_bound: f64,
}

/// Noncommutative integral of a function sampled on `V_n`: cell-anchor
/// Riemann sum with anchor `w_τ(p_1)`, bounded by the constant times the
/// largest oscillation of `f` over the vertices of a single cell.
pub fn nc_integral(fractal: &NestedFractal, graph: &GraphApprox, f: &VertexFunction) -> Result<Quadrature> {
    f.check_complete(graph)?;
    let n_cells = graph.cell_count();
    let mut anchors = Vec::with_capacity(n_cells);
    let mut osc: f64 = 0.0;
    for c in 0..n_cells {
        let cell = graph.cell(c);
        anchors.push(f.values[cell[0] as usize]);
        let (lo, hi) = cell.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            let x = f.values[v as usize];
            (lo.min(x), hi.max(x))
        });
        osc = osc.max(hi - lo);
    }
    let constant = integral_constant(fractal);
    Ok(Quadrature {
        value: constant * (pairwise_sum(&anchors) / n_cells as f64),
        error_bound: constant * osc,
    })
}
