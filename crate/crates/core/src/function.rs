//! Real functions sampled on the vertices of a level-n graph.

use crate::error::{Error, Result};
use crate::ifs::{GraphApprox, Word};

/// Values on `V_n`, indexed by the vertex ids of the level-n graph.
/// `NaN` marks a vertex without a value.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFunction {
    pub level: usize,
    pub values: Vec<f64>,
}

impl VertexFunction {
    pub fn new(graph: &GraphApprox, values: Vec<f64>) -> Result<Self> {
        if values.len() != graph.vertex_count() {
            return Err(Error::IncompleteFunction(format!(
                "{} values for {} vertices",
                values.len(),
                graph.vertex_count()
            )));
        }
        Ok(Self {
            level: graph.level(),
            values,
        })
    }

    pub fn constant(graph: &GraphApprox, c: f64) -> Self {
        Self {
            level: graph.level(),
            values: vec![c; graph.vertex_count()],
        }
    }

    pub fn from_formula(graph: &GraphApprox, f: impl Fn(&[f64]) -> f64) -> Self {
        Self {
            level: graph.level(),
            values: graph.vertices().map(f).collect(),
        }
    }

    /// Errors unless every vertex of `graph` carries a value.
    pub fn check_complete(&self, graph: &GraphApprox) -> Result<()> {
        if self.level != graph.level() || self.values.len() != graph.vertex_count() {
            return Err(Error::IncompleteFunction(format!(
                "function of level {} used on graph of level {}",
                self.level,
                graph.level()
            )));
        }
        if let Some(id) = self.values.iter().position(|v| v.is_nan()) {
            return Err(Error::IncompleteFunction(format!(
                "no value at vertex {id} {:?}",
                graph.vertex(id)
            )));
        }
        Ok(())
    }

    /// Restriction to a coarser graph, matching vertices by position.
    pub fn restrict(&self, fine: &GraphApprox, coarse: &GraphApprox) -> Result<Self> {
        let values = coarse
            .vertices()
            .map(|p| {
                fine.find_vertex(p)
                    .map(|id| self.values[id])
                    .ok_or_else(|| Error::NotAVertex(p.to_vec()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            level: coarse.level(),
            values,
        })
    }
}

/// Supplies a function's values on the vertices of any level.
pub trait FunctionProvider {
    fn sample(&self, graph: &GraphApprox) -> Result<VertexFunction>;
}

/// A function given by a formula in ambient coordinates.
pub struct Formula<F>(pub F);

impl<F: Fn(&[f64]) -> f64> FunctionProvider for Formula<F> {
    fn sample(&self, graph: &GraphApprox) -> Result<VertexFunction> {
        Ok(VertexFunction::from_formula(graph, &self.0))
    }
}

/// Explicit values at listed points; vertices without a listed point stay
/// undefined.
#[derive(Debug, Clone, Default)]
pub struct PointValues {
    pub points: Vec<(Vec<f64>, f64)>,
}

impl PointValues {
    /// Parses CSV rows `x1,…,xN,value`; blank lines and `#` comments are skipped.
    pub fn from_csv(text: &str, dim: usize) -> Result<Self> {
        let mut points = Vec::new();
        for (line_no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: std::result::Result<Vec<f64>, _> = line.split(',').map(|s| s.trim().parse::<f64>()).collect();
            let fields = fields.map_err(|e| Error::Parse(format!("line {}: {e}", line_no + 1)))?;
            if fields.len() != dim + 1 {
                return Err(Error::Parse(format!(
                    "line {}: expected {} fields, got {}",
                    line_no + 1,
                    dim + 1,
                    fields.len()
                )));
            }
            points.push((fields[..dim].to_vec(), fields[dim]));
        }
        Ok(Self { points })
    }
}

impl FunctionProvider for PointValues {
    fn sample(&self, graph: &GraphApprox) -> Result<VertexFunction> {
        let mut values = vec![f64::NAN; graph.vertex_count()];
        for (p, v) in &self.points {
            if let Some(id) = graph.find_vertex(p) {
                values[id] = *v;
            }
        }
        Ok(VertexFunction {
            level: graph.level(),
            values,
        })
    }
}

/// Indicator of the cell `w_τ(K)` sampled at vertices.
#[derive(Debug, Clone)]
pub struct CellIndicator(pub Word);

impl FunctionProvider for CellIndicator {
    fn sample(&self, graph: &GraphApprox) -> Result<VertexFunction> {
        let depth = self.0.level();
        if depth > graph.level() {
            return Err(Error::InvalidArgument(format!(
                "indicator of a level-{depth} cell needs a graph of level ≥ {depth}"
            )));
        }
        let k = graph.k();
        let span = k.pow((graph.level() - depth) as u32);
        let first = self.0.cell_index(k) * span;
        let mut values = vec![0.0; graph.vertex_count()];
        for c in first..first + span {
            for &v in graph.cell(c) {
                values[v as usize] = 1.0;
            }
        }
        Ok(VertexFunction {
            level: graph.level(),
            values,
        })
    }
}
