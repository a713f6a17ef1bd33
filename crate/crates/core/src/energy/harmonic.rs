use super::{eigen_residual, Level1Network, QuadraticForm};
use crate::error::{Error, Result};
use crate::function::{FunctionProvider, VertexFunction};
use crate::ifs::{GraphApprox, NestedFractal};

/// Largest relative eigen-residual accepted for a form used in harmonic extension.
pub const EIGENFORM_ACCEPT: f64 = 1e-10;

/// One-step harmonic extension for an eigenform, applied cell by cell.
#[derive(Debug, Clone)]
pub struct HarmonicExtender {
    rho: f64,
    boundary_len: usize,
    /// row-major `|V_1 ∖ V_0| × |V_0|` matrix `−L_II⁻¹ L_IB`
    extension: Vec<f64>,
    /// each interior level-1 vertex as `w_i(p_j)`
    interior_reps: Vec<(usize, usize)>,
}

impl HarmonicExtender {
    pub fn new(fractal: &NestedFractal, form: &QuadraticForm) -> Result<Self> {
        let (rho, residual) = eigen_residual(fractal, form)?;
        if !(residual <= EIGENFORM_ACCEPT) {
            return Err(Error::NotAnEigenform { residual });
        }
        let net = Level1Network::new(fractal)?;
        let (_, ext) = net.reduce(fractal, form)?;
        let nb = fractal.v0().len();
        let interior_reps = net
            .interior
            .iter()
            .map(|&v| {
                (0..fractal.k())
                    .flat_map(|i| (0..nb).map(move |j| (i, j)))
                    .find(|&(i, j)| net.graph.cell(i)[j] as usize == v)
                    .expect("every level-1 vertex lies in some cell")
            })
            .collect();
        let extension = (0..ext.nrows())
            .flat_map(|r| (0..ext.ncols()).map(move |c| (r, c)))
            .map(|(r, c)| ext[(r, c)])
            .collect();
        Ok(Self {
            rho,
            boundary_len: nb,
            extension,
            interior_reps,
        })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Values at the level-1 interior vertices, in the order of `w_i(p_j)`
    /// representatives.
    pub fn extend_once(&self, boundary: &[f64]) -> Vec<f64> {
        self.extension
            .chunks_exact(self.boundary_len)
            .map(|row| row.iter().zip(boundary).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn interior_points(&self, fractal: &NestedFractal) -> Vec<Vec<f64>> {
        self.interior_reps
            .iter()
            .map(|&(i, j)| fractal.maps()[i].apply(&fractal.v0()[j]))
            .collect()
    }

    /// Harmonic function on the vertices of `graph` with boundary values `f`.
    pub fn extend(&self, graph: &GraphApprox, f: &[f64]) -> Result<VertexFunction> {
        if f.len() != self.boundary_len {
            return Err(Error::IncompleteFunction(format!(
                "{} boundary values for {} boundary vertices",
                f.len(),
                self.boundary_len
            )));
        }
        let k = graph.k();
        let mut values = vec![f64::NAN; graph.vertex_count()];
        for (j, &v) in f.iter().enumerate() {
            values[graph.coarse_cell_vertex(0, 0, j) as usize] = v;
        }
        let mut boundary = vec![0.0; self.boundary_len];
        for m in 0..graph.level() {
            for cell in 0..k.pow(m as u32) {
                for (j, b) in boundary.iter_mut().enumerate() {
                    *b = values[graph.coarse_cell_vertex(m, cell, j) as usize];
                }
                let interior = self.extend_once(&boundary);
                for (&(i, j), v) in self.interior_reps.iter().zip(interior) {
                    values[graph.coarse_cell_vertex(m + 1, cell * k + i, j) as usize] = v;
                }
            }
        }
        VertexFunction::new(graph, values)
    }
}

/// Harmonic extension of `f` (values on `V_0`) down to level `n` for an eigenform.
pub fn harmonic_extension(
    fractal: &NestedFractal,
    eigenform: &QuadraticForm,
    f: &[f64],
    level: usize,
) -> Result<VertexFunction> {
    let graph = fractal.build_graph(level)?;
    HarmonicExtender::new(fractal, eigenform)?.extend(&graph, f)
}

/// Harmonic extension of fixed boundary data, usable wherever a
/// [`FunctionProvider`] is expected.
#[derive(Debug, Clone)]
pub struct HarmonicProvider {
    pub extender: HarmonicExtender,
    pub boundary: Vec<f64>,
}

impl HarmonicProvider {
    pub fn new(fractal: &NestedFractal, eigenform: &QuadraticForm, boundary: Vec<f64>) -> Result<Self> {
        Ok(Self {
            extender: HarmonicExtender::new(fractal, eigenform)?,
            boundary,
        })
    }
}

impl FunctionProvider for HarmonicProvider {
    fn sample(&self, graph: &GraphApprox) -> Result<VertexFunction> {
        self.extender.extend(graph, &self.boundary)
    }
}
