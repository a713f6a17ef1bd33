use crate::error::Result;
use crate::ifs::NestedFractal;
use crate::numerics::euclidean;

/// Relative tolerance for collinearity and for closing gaps in coverage.
const COVER_TOL: f64 = 1e-9;

/// A boundary edge whose straight segment is not covered by level-1 edges.
#[derive(Debug, Clone, PartialEq)]
pub struct SubdivisionWitness {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    /// First uncovered parameter interval `[t0, t1]` along `p → q`.
    pub gap: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubdivisionReport {
    pub holds: bool,
    pub witness: Option<SubdivisionWitness>,
}

/// Whether every segment `[p, q]`, `{p, q} ∈ E_0`, is a union of level-1
/// edge segments. When it holds, `d_n` is the same for all `n ≥ k(x, y)`.
pub fn edge_subdivision_check(fractal: &NestedFractal) -> Result<SubdivisionReport> {
    let g1 = fractal.build_graph(1)?;
    let v0 = fractal.v0();
    for e in fractal.e0() {
        let (p, q) = (&v0[e.p], &v0[e.q]);
        let dir: Vec<f64> = p.iter().zip(q).map(|(a, b)| b - a).collect();
        let len2 = e.length * e.length;
        let param = |x: &[f64]| -> Option<f64> {
            let t = x.iter().zip(p).zip(&dir).map(|((x, p), d)| (x - p) * d).sum::<f64>() / len2;
            let foot: Vec<f64> = p.iter().zip(&dir).map(|(p, d)| p + t * d).collect();
            (euclidean(x, &foot) <= COVER_TOL * e.length).then_some(t)
        };
        let mut pieces: Vec<(f64, f64)> = g1
            .edges()
            .iter()
            .filter_map(|ed| {
                let ta = param(g1.vertex(ed.a as usize))?;
                let tb = param(g1.vertex(ed.b as usize))?;
                Some((ta.min(tb), ta.max(tb)))
            })
            .collect();
        pieces.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut reach = 0.0f64;
        let mut gap = None;
        for (a, b) in pieces {
            if a > reach + COVER_TOL {
                gap = Some((reach, a.min(1.0)));
                break;
            }
            reach = reach.max(b);
        }
        if gap.is_none() && reach < 1.0 - COVER_TOL {
            gap = Some((reach, 1.0));
        }
        if let Some(gap) = gap {
            return Ok(SubdivisionReport {
                holds: false,
                witness: Some(SubdivisionWitness {
                    p: p.clone(),
                    q: q.clone(),
                    gap,
                }),
            });
        }
    }
    Ok(SubdivisionReport {
        holds: true,
        witness: None,
    })
}
