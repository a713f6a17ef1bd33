use super::NestedFractal;
use crate::error::Result;
use crate::numerics::euclidean;
use std::collections::HashMap;

/// One failure of the nesting property found at a finite level.
#[derive(Debug, Clone, PartialEq)]
pub enum NestingViolation {
    /// Two distinct words give the same combinatorial cell.
    IdenticalCells { first: usize, second: usize },
    /// Two cells share a point of their refinement that is not a common
    /// boundary vertex of both.
    ImproperIntersection {
        first: usize,
        second: usize,
        point: Vec<f64>,
    },
}

/// Diagnostic for condition (4) at one level.
#[derive(Debug, Clone)]
pub struct NestingReport {
    pub level: usize,
    pub violations: Vec<NestingViolation>,
    /// Whether every reflection exchanging two points of `V_0` maps `V_0` onto
    /// itself. A cheap level-0 indicator only; condition (5) is not verified.
    pub v0_reflection_symmetric: bool,
}

impl NestingReport {
    pub fn is_nested(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the nesting property among the level-n cells.
///
/// Cells are compared through their one-step refinements `w_σ(V_1)`: any
/// refined point shared by two distinct cells must be a boundary vertex of
/// both. This is a finite-level proxy for `w_σ(K) ∩ w_σ'(K) = w_σ(V_0) ∩ w_σ'(V_0)`.
pub fn check_nesting(fractal: &NestedFractal, level: usize) -> Result<NestingReport> {
    let fine = fractal.build_graph(level + 1)?;
    let k = fractal.k();
    let n_cells = k.pow(level as u32);
    let mut violations = Vec::new();

    let corners: Vec<Vec<u32>> = (0..n_cells).map(|c| fine.coarse_cell(level, c)).collect();
    let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
    for (c, ids) in corners.iter().enumerate() {
        let mut key = ids.clone();
        key.sort_unstable();
        if let Some(&first) = seen.get(&key) {
            violations.push(NestingViolation::IdenticalCells { first, second: c });
        } else {
            seen.insert(key, c);
        }
    }

    // refined vertex -> level-n cells containing it
    let mut owners: HashMap<u32, Vec<usize>> = HashMap::new();
    for c in 0..n_cells {
        let mut ids: Vec<u32> = (0..k).flat_map(|i| fine.cell(c * k + i).to_vec()).collect();
        ids.sort_unstable();
        ids.dedup();
        for id in ids {
            owners.entry(id).or_default().push(c);
        }
    }
    let mut shared: Vec<(u32, Vec<usize>)> = owners.into_iter().filter(|(_, c)| c.len() > 1).collect();
    shared.sort_unstable_by_key(|(id, _)| *id);
    for (id, cells) in shared {
        for (a, &first) in cells.iter().enumerate() {
            for &second in &cells[a + 1..] {
                if !corners[first].contains(&id) || !corners[second].contains(&id) {
                    violations.push(NestingViolation::ImproperIntersection {
                        first,
                        second,
                        point: fine.vertex(id as usize).to_vec(),
                    });
                }
            }
        }
    }

    Ok(NestingReport {
        level,
        violations,
        v0_reflection_symmetric: v0_reflection_symmetric(fractal),
    })
}

fn v0_reflection_symmetric(fractal: &NestedFractal) -> bool {
    let v0 = fractal.v0();
    let tol = 2.0 * fractal.dedup_tol();
    fractal.e0().iter().all(|e| {
        let (p, q) = (&v0[e.p], &v0[e.q]);
        let u: Vec<f64> = q.iter().zip(p).map(|(a, b)| (a - b) / e.length).collect();
        let mid: Vec<f64> = q.iter().zip(p).map(|(a, b)| 0.5 * (a + b)).collect();
        v0.iter().all(|x| {
            let along: f64 = x.iter().zip(&mid).zip(&u).map(|((xi, mi), ui)| (xi - mi) * ui).sum();
            let image: Vec<f64> = x.iter().zip(&u).map(|(xi, ui)| xi - 2.0 * along * ui).collect();
            v0.iter().any(|y| euclidean(&image, y) <= tol)
        })
    })
}
