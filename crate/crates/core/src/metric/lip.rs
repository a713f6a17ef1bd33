use crate::error::{Error, Result};
use crate::function::{FunctionProvider, VertexFunction};
use crate::ifs::{GraphApprox, NestedFractal};

/// `Lip_n(f) = max |f(a) − f(b)| / d_n(a, b)` over `V_n`.
///
/// The maximum over all pairs is attained on a single edge (a path
/// telescopes), so only edges are scanned.
pub fn lip_seminorm(graph: &GraphApprox, f: &VertexFunction) -> Result<f64> {
    f.check_complete(graph)?;
    Ok(graph
        .edges()
        .iter()
        .map(|e| (f.values[e.a as usize] - f.values[e.b as usize]).abs() / e.length)
        .fold(0.0, f64::max))
}

/// Largest difference quotient over edges of `E_j`, evaluated on the
/// vertices of a finer graph.
pub fn level_lip(fractal: &NestedFractal, graph: &GraphApprox, f: &VertexFunction, j: usize) -> Result<f64> {
    f.check_complete(graph)?;
    let scale = fractal.ratio().powi(j as i32);
    let mut best = 0.0f64;
    for cell in 0..fractal.k().pow(j as u32) {
        let corners = graph.coarse_cell(j, cell);
        for e in fractal.e0() {
            let df = f.values[corners[e.p] as usize] - f.values[corners[e.q] as usize];
            best = best.max(df.abs() / (scale * e.length));
        }
    }
    Ok(best)
}

/// Table `L_{n, n_max} = max_{n ≤ j ≤ n_max} level_lip(j)` for `n = n_min..=n_max`:
/// a finite truncation of the tail supremum whose infimum over `n` is the
/// essential seminorm.
#[derive(Debug, Clone, PartialEq)]
pub struct EssLipTable {
    pub n_min: usize,
    pub n_max: usize,
    /// `level_lip(j)` for `j = n_min..=n_max`.
    pub per_level: Vec<f64>,
    /// `L_{n, n_max}` for `n = n_min..=n_max`; non-increasing in `n`.
    pub table: Vec<f64>,
}

impl EssLipTable {
    /// Smallest entry, `L_{n_max, n_max}`.
    pub fn minimum(&self) -> f64 {
        *self.table.last().expect("non-empty table")
    }

    /// `(n, L_{n, n_max}, level_lip(n))` rows.
    pub fn rows(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        (self.n_min..=self.n_max)
            .zip(&self.table)
            .zip(&self.per_level)
            .map(|((n, &l), &p)| (n, l, p))
    }
}

pub fn ess_lip_seminorm(
    fractal: &NestedFractal,
    f: &dyn FunctionProvider,
    n_min: usize,
    n_max: usize,
) -> Result<EssLipTable> {
    if n_min > n_max {
        return Err(Error::InvalidArgument(format!("empty level range {n_min}..={n_max}")));
    }
    let graph = fractal.build_graph(n_max)?;
    let values = f.sample(&graph)?;
    let per_level = (n_min..=n_max)
        .map(|j| level_lip(fractal, &graph, &values, j))
        .collect::<Result<Vec<_>>>()?;
    let mut table = per_level.clone();
    for i in (0..table.len() - 1).rev() {
        table[i] = table[i].max(table[i + 1]);
    }
    Ok(EssLipTable {
        n_min,
        n_max,
        per_level,
        table,
    })
}
