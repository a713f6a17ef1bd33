//! Discrete spectral triples on nested self-similar fractals.
//!
//! A nested fractal is given by equal-ratio similitudes of `R^N`. From the
//! boundary `V_0` and its complete graph the crate builds the level-n graph
//! approximations and computes, on top of them:
//!
//! - the zeta function of the edge lengths, its poles and residues, and the
//!   induced noncommutative integral ([`spectral`]);
//! - renormalization eigenforms, harmonic extensions, renormalized energies
//!   and the residue-energy identity ([`energy`]);
//! - graph distances `d_n`, their geodesic limit and Lipschitz seminorms
//!   ([`metric`]).
//!
//! ```
//! use fractal_triple::{presets, spectral};
//!
//! let gasket = presets::gasket();
//! let d = spectral::metric_dimension(&gasket);
//! assert!((d - 3f64.ln() / 2f64.ln()).abs() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod energy;
mod error;
pub mod function;
pub mod ifs;
pub mod metric;
pub mod numerics;
pub mod spectral;

pub use error::{Error, Result};
pub use function::{CellIndicator, Formula, FunctionProvider, PointValues, VertexFunction};
pub use ifs::{presets, GraphApprox, NestedFractal, Similitude, Word};
