//! Quadratic forms on `C(V_0)`, their renormalization, eigenforms, harmonic
//! extension and the self-similar energy.
//!
//! Forms store one conductance per *unordered* boundary edge, and every
//! energy reported here is `Σ_{p<q} c_pq (f(p) − f(q))²`.

mod harmonic;
mod residue;
mod vicsek;

pub use harmonic::{harmonic_extension, HarmonicExtender, HarmonicProvider};
pub use residue::{
    classify_sequence, energy_dimension, energy_limit, energy_residue, residue_base_form, EnergyTable, ResidueReport,
    ResidueSample, SequenceBehavior,
};
pub use vicsek::{
    rhombic_vicsek, try_vicsek_family_form, vicsek_conductances_from_lengths, vicsek_family_coordinates,
    vicsek_family_form, vicsek_h_from_angle, VicsekConductances, VicsekFamilyCoordinates,
};

use crate::error::{Error, Result};
use crate::function::VertexFunction;
use crate::ifs::{GraphApprox, NestedFractal};
use crate::numerics::{max_abs_diff, pairwise_sum};
use nalgebra::DMatrix;
use rayon::prelude::*;

/// Default stopping tolerance of the eigenform iteration.
pub const EIGENFORM_TOL: f64 = 1e-12;
pub const EIGENFORM_MAX_ITER: usize = 10_000;

/// Positive conductances on the unordered edges of `E_0`, in the order of
/// [`NestedFractal::e0`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    conductances: Vec<f64>,
}

impl QuadraticForm {
    pub fn new(fractal: &NestedFractal, conductances: Vec<f64>) -> Result<Self> {
        if conductances.len() != fractal.e0().len() {
            return Err(Error::InvalidConductance(format!(
                "{} conductances for {} edges",
                conductances.len(),
                fractal.e0().len()
            )));
        }
        if let Some(c) = conductances.iter().find(|c| !(**c > 0.0 && c.is_finite())) {
            return Err(Error::InvalidConductance(format!("conductance {c} is not positive")));
        }
        Ok(Self { conductances })
    }

    pub fn unit(fractal: &NestedFractal) -> Self {
        Self {
            conductances: vec![1.0; fractal.e0().len()],
        }
    }

    /// Builds conductances from `(p, q, length)` of each boundary edge.
    pub fn from_fn(fractal: &NestedFractal, f: impl Fn(usize, usize, f64) -> f64) -> Result<Self> {
        let c = fractal.e0().iter().map(|e| f(e.p, e.q, e.length)).collect();
        Self::new(fractal, c)
    }

    pub fn conductances(&self) -> &[f64] {
        &self.conductances
    }

    pub fn max_conductance(&self) -> f64 {
        self.conductances.iter().copied().fold(0.0, f64::max)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            conductances: self.conductances.iter().map(|c| c * factor).collect(),
        }
    }

    /// Rescaled so the largest conductance is 1.
    pub fn normalized(&self) -> Self {
        self.scaled(1.0 / self.max_conductance())
    }

    /// CSV rows `p_index,q_index,c` (0-based indices into `V_0`).
    pub fn to_csv(&self, fractal: &NestedFractal) -> String {
        let mut out = String::from("p,q,c\n");
        for (e, c) in fractal.e0().iter().zip(&self.conductances) {
            out.push_str(&format!("{},{},{}\n", e.p, e.q, crate::cli::fmt_num(*c)));
        }
        out
    }

    /// Parses rows `p,q,c`; an optional header line is skipped. Every
    /// boundary edge must be listed exactly once.
    pub fn from_csv(fractal: &NestedFractal, text: &str) -> Result<Self> {
        let mut c = vec![f64::NAN; fractal.e0().len()];
        for (line_no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with('p') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let parse_err = || Error::Parse(format!("line {}: expected p,q,c", line_no + 1));
            if fields.len() != 3 {
                return Err(parse_err());
            }
            let p: usize = fields[0].parse().map_err(|_| parse_err())?;
            let q: usize = fields[1].parse().map_err(|_| parse_err())?;
            let value: f64 = fields[2].parse().map_err(|_| parse_err())?;
            let idx = fractal
                .e0_index(p, q)
                .ok_or_else(|| Error::Parse(format!("line {}: no boundary edge {p}-{q}", line_no + 1)))?;
            c[idx] = value;
        }
        if c.iter().any(|v| v.is_nan()) {
            return Err(Error::Parse(
                "conductance file does not cover every boundary edge".into(),
            ));
        }
        Self::new(fractal, c)
    }
}

/// `ℰ[f] = Σ_{p<q} c_pq (f(p) − f(q))²` for `f` given on `V_0`.
pub fn form_eval(fractal: &NestedFractal, form: &QuadraticForm, f: &[f64]) -> f64 {
    fractal
        .e0()
        .iter()
        .zip(form.conductances())
        .map(|(e, c)| {
            let df = f[e.p] - f[e.q];
            c * df * df
        })
        .sum()
}

const CHUNK: usize = 1024;

/// Sums `cell_value(c)` over `0..n_cells` in fixed chunks; the reduction
/// order does not depend on thread scheduling.
pub(crate) fn sum_over_cells(n_cells: usize, cell_value: impl Fn(usize) -> f64 + Sync) -> f64 {
    let chunks: Vec<f64> = (0..n_cells.div_ceil(CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let end = ((chunk + 1) * CHUNK).min(n_cells);
            let vals: Vec<f64> = (chunk * CHUNK..end).map(&cell_value).collect();
            pairwise_sum(&vals)
        })
        .collect();
    pairwise_sum(&chunks)
}

/// `S_m(ℰ)[f] = Σ_{|σ|=m} ℰ[f∘w_σ]` for a function on the vertices of a
/// graph of level `n ≥ m`.
pub fn s_m_eval(
    fractal: &NestedFractal,
    graph: &GraphApprox,
    form: &QuadraticForm,
    f: &VertexFunction,
    m: usize,
) -> Result<f64> {
    f.check_complete(graph)?;
    if m > graph.level() {
        return Err(Error::InvalidArgument(format!(
            "S_{m} needs a graph of level ≥ {m}, got {}",
            graph.level()
        )));
    }
    let n_cells = fractal.k().pow(m as u32);
    let e0 = fractal.e0();
    let c = form.conductances();
    let vals = &f.values;
    Ok(sum_over_cells(n_cells, |cell| {
        let corners = graph.coarse_cell(m, cell);
        e0.iter()
            .zip(c)
            .map(|(e, c)| {
                let df = vals[corners[e.p] as usize] - vals[corners[e.q] as usize];
                c * df * df
            })
            .sum()
    }))
}

/// `S_n(ℰ)[f]` at the graph's own level.
pub fn s_n_eval(fractal: &NestedFractal, graph: &GraphApprox, form: &QuadraticForm, f: &VertexFunction) -> Result<f64> {
    s_m_eval(fractal, graph, form, f, graph.level())
}

/// Level-1 network split into boundary (`V_0`) and interior vertices.
pub(crate) struct Level1Network {
    pub graph: GraphApprox,
    /// level-1 vertex id of each `V_0` point
    pub boundary: Vec<usize>,
    pub interior: Vec<usize>,
}

impl Level1Network {
    pub fn new(fractal: &NestedFractal) -> Result<Self> {
        let graph = fractal.build_graph(1)?;
        let boundary: Vec<usize> = (0..fractal.v0().len())
            .map(|j| graph.coarse_cell_vertex(0, 0, j) as usize)
            .collect();
        let interior: Vec<usize> = (0..graph.vertex_count()).filter(|v| !boundary.contains(v)).collect();
        if interior.is_empty() {
            return Err(Error::InvalidFractal {
                condition: None,
                reason: "V_1 has no vertices outside V_0".into(),
            });
        }
        Ok(Self {
            graph,
            boundary,
            interior,
        })
    }

    /// Weighted Laplacian of `S_1(ℰ)` on `V_1`.
    pub fn laplacian(&self, fractal: &NestedFractal, form: &QuadraticForm) -> DMatrix<f64> {
        let n = self.graph.vertex_count();
        let mut l = DMatrix::zeros(n, n);
        let c = form.conductances();
        for e in self.graph.edges() {
            let (a, b, w) = (e.a as usize, e.b as usize, c[e.e0]);
            l[(a, a)] += w;
            l[(b, b)] += w;
            l[(a, b)] -= w;
            l[(b, a)] -= w;
        }
        debug_assert_eq!(self.graph.edges().len(), fractal.k() * fractal.e0().len());
        l
    }

    pub fn blocks(&self, l: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
        let (b, i) = (&self.boundary, &self.interior);
        let l_bb = DMatrix::from_fn(b.len(), b.len(), |r, c| l[(b[r], b[c])]);
        let l_ib = DMatrix::from_fn(i.len(), b.len(), |r, c| l[(i[r], b[c])]);
        let l_ii = DMatrix::from_fn(i.len(), i.len(), |r, c| l[(i[r], i[c])]);
        (l_bb, l_ib, l_ii)
    }

    /// Schur complement `L_BB − L_BI L_II⁻¹ L_IB` and the harmonic extension
    /// matrix `−L_II⁻¹ L_IB`.
    pub fn reduce(&self, fractal: &NestedFractal, form: &QuadraticForm) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
        let l = self.laplacian(fractal, form);
        let (l_bb, l_ib, l_ii) = self.blocks(&l);
        let chol = l_ii.cholesky().ok_or(Error::SingularNetwork)?;
        let extension = -chol.solve(&l_ib);
        let schur = &l_bb + l_ib.transpose() * &extension;
        Ok((schur, extension))
    }
}

/// Trace of `S_1(ℰ)` on `V_0`: the form realizing
/// `min { S_1(ℰ)[g] : g|_{V_0} = f }`, read off the Schur complement.
pub fn trace_map(fractal: &NestedFractal, form: &QuadraticForm) -> Result<QuadraticForm> {
    let net = Level1Network::new(fractal)?;
    trace_with(&net, fractal, form)
}

pub(crate) fn trace_with(net: &Level1Network, fractal: &NestedFractal, form: &QuadraticForm) -> Result<QuadraticForm> {
    let (schur, _) = net.reduce(fractal, form)?;
    let c: Vec<f64> = fractal.e0().iter().map(|e| -schur[(e.p, e.q)]).collect();
    QuadraticForm::new(fractal, c).map_err(|_| Error::SingularNetwork)
}

/// Outcome of the eigenform iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenformResult {
    /// Normalized to maximal conductance 1.
    pub form: QuadraticForm,
    pub rho: f64,
    pub iterations: usize,
    /// `‖trace_map(form) − ρ·form‖_∞`
    pub residual: f64,
}

/// Iterates `ℰ ← trace_map(ℰ) / max c` until the normalized conductances
/// move by less than `tol` in the sup norm.
pub fn eigenform(fractal: &NestedFractal, init: &QuadraticForm, tol: f64, max_iter: usize) -> Result<EigenformResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let net = Level1Network::new(fractal)?;
    let mut form = init.normalized();
    let mut last_change = f64::INFINITY;
    for iteration in 1..=max_iter {
        let traced = trace_with(&net, fractal, &form)?;
        let rho = traced.max_conductance();
        let next = traced.scaled(1.0 / rho);
        last_change = max_abs_diff(next.conductances(), form.conductances());
        form = next;
        if last_change < tol {
            let traced = trace_with(&net, fractal, &form)?;
            let rho = traced.max_conductance();
            let residual = max_abs_diff(traced.conductances(), form.scaled(rho).conductances());
            if !(rho > 0.0 && rho < 1.0) {
                return Err(Error::InvalidEigenvalue(rho));
            }
            return Ok(EigenformResult {
                form,
                rho,
                iterations: iteration,
                residual,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: max_iter,
        last_change,
    })
}

/// Ratio `ρ` and residual `‖trace_map(ℰ) − ρℰ‖_∞ / max c` of a candidate eigenform.
pub fn eigen_residual(fractal: &NestedFractal, form: &QuadraticForm) -> Result<(f64, f64)> {
    let traced = trace_map(fractal, form)?;
    let rho = traced.max_conductance() / form.max_conductance();
    let residual = max_abs_diff(traced.conductances(), form.scaled(rho).conductances()) / traced.max_conductance();
    Ok((rho, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::presets;

    #[test]
    fn rejects_nonpositive_conductance() {
        let g = presets::gasket();
        assert!(QuadraticForm::new(&g, vec![1.0, 0.0, 1.0]).is_err());
        assert!(QuadraticForm::new(&g, vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn csv_roundtrip() {
        let v = presets::vicsek();
        let form = vicsek_family_form(&v, 2.0);
        let back = QuadraticForm::from_csv(&v, &form.to_csv(&v)).unwrap();
        assert_eq!(back, form);
    }

    #[test]
    fn form_eval_gasket_unit() {
        let g = presets::gasket();
        assert_eq!(form_eval(&g, &QuadraticForm::unit(&g), &[1.0, 0.0, 0.0]), 2.0);
    }
}
