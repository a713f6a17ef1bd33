//! Graph metrics `d_n` on `(V_n, E_n)` and their limit, the geodesic distance.

mod lip;
mod subdivision;

pub use lip::{ess_lip_seminorm, level_lip, lip_seminorm, EssLipTable};
pub use subdivision::{edge_subdivision_check, SubdivisionReport, SubdivisionWitness};

use crate::error::{Error, Result};
use crate::ifs::{GraphApprox, NestedFractal, DEFAULT_BUDGET};
use crate::numerics::euclidean;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// A path in a level-n graph given by its vertex ids.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphPath {
    pub level: usize,
    pub vertex_ids: Vec<usize>,
    pub length: f64,
}

impl GraphPath {
    pub fn is_simple(&self) -> bool {
        let mut seen = self.vertex_ids.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    pub fn points(&self, graph: &GraphApprox) -> Vec<Vec<f64>> {
        self.vertex_ids.iter().map(|&v| graph.vertex(v).to_vec()).collect()
    }
}

/// Adjacency lists with parallel edges collapsed to their shortest length,
/// neighbours sorted by id.
#[derive(Debug, Clone)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    lengths: Vec<f64>,
}

impl Adjacency {
    pub fn from_graph(graph: &GraphApprox) -> Self {
        Self::from_edges(graph.vertex_count(), graph.edges().iter().map(|e| (e.a, e.b, e.length)))
    }

    pub fn from_edges(vertex_count: usize, edges: impl Iterator<Item = (u32, u32, f64)>) -> Self {
        let mut pairs: Vec<(u32, u32, f64)> = Vec::new();
        for (a, b, len) in edges {
            if a != b {
                pairs.push((a, b, len));
                pairs.push((b, a, len));
            }
        }
        pairs.sort_unstable_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)).then(x.2.total_cmp(&y.2)));
        pairs.dedup_by(|later, first| later.0 == first.0 && later.1 == first.1);
        let mut offsets = vec![0; vertex_count + 1];
        for &(a, _, _) in &pairs {
            offsets[a as usize + 1] += 1;
        }
        for i in 0..vertex_count {
            offsets[i + 1] += offsets[i];
        }
        Self {
            offsets,
            targets: pairs.iter().map(|p| p.1).collect(),
            lengths: pairs.iter().map(|p| p.2).collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[v]..self.offsets[v + 1];
        self.targets[range.clone()]
            .iter()
            .zip(&self.lengths[range])
            .map(|(&t, &l)| (t as usize, l))
    }

    /// Length of the shortest parallel edge between `a` and `b`, if adjacent.
    pub fn edge_length(&self, a: usize, b: usize) -> Option<f64> {
        let range = self.offsets[a]..self.offsets[a + 1];
        self.targets[range.clone()]
            .binary_search(&(b as u32))
            .ok()
            .map(|i| self.lengths[range.start + i])
    }

    /// Single-source shortest distances and predecessors. Ties are broken
    /// toward the smaller vertex id, both in the queue and for predecessors.
    pub fn dijkstra(&self, source: usize) -> (Vec<f64>, Vec<usize>) {
        let n = self.vertex_count();
        let mut dist = vec![f64::INFINITY; n];
        let mut pred = vec![usize::MAX; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(QueueItem {
            dist: 0.0,
            vertex: source,
        });
        while let Some(QueueItem { dist: d, vertex: u }) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            for (v, len) in self.neighbours(u) {
                let cand = d + len;
                if cand < dist[v] || (cand == dist[v] && !done[v] && u < pred[v]) {
                    dist[v] = cand;
                    pred[v] = u;
                    heap.push(QueueItem { dist: cand, vertex: v });
                }
            }
        }
        (dist, pred)
    }

    pub fn shortest_path(&self, x: usize, y: usize) -> Result<(f64, Vec<usize>)> {
        let n = self.vertex_count();
        if x >= n || y >= n {
            return Err(Error::InvalidArgument(format!(
                "vertex id out of range ({x}, {y}) for {n} vertices"
            )));
        }
        let (dist, pred) = self.dijkstra(x);
        if dist[y].is_infinite() {
            return Err(Error::Unreachable {
                source_id: x,
                target: y,
            });
        }
        let mut path = vec![y];
        let mut cur = y;
        while cur != x {
            cur = pred[cur];
            path.push(cur);
        }
        path.reverse();
        Ok((dist[y], path))
    }
}

#[derive(Debug, Clone, Copy)]
struct QueueItem {
    dist: f64,
    vertex: usize,
}

impl PartialEq for QueueItem {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for QueueItem {}

impl PartialOrd for QueueItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QueueItem {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

/// Exact `d_n(x, y)` and a witness geodesic on the graph's own level.
pub fn shortest_path_distance(graph: &GraphApprox, x: usize, y: usize) -> Result<(f64, GraphPath)> {
    let adj = Adjacency::from_graph(graph);
    let (length, vertex_ids) = adj.shortest_path(x, y)?;
    Ok((
        length,
        GraphPath {
            level: graph.level(),
            vertex_ids,
            length,
        },
    ))
}

/// `d_n(x, y)` for `n = k(x,y), …, n_max` with a limit estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceSequence {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// `k(x, y)`: first level containing both points.
    pub start_level: usize,
    pub values: Vec<f64>,
    /// Geometric-increment extrapolation of the limit; equals the last value
    /// when increments vanish or no contraction ratio in (0, 1) is seen.
    pub extrapolated: f64,
    pub q_estimate: Option<f64>,
    /// `|q_last − q_prev|` when at least four values are available.
    pub fit_residual: Option<f64>,
    /// Geodesic witness at `n_max`.
    pub path: GraphPath,
}

impl DistanceSequence {
    pub fn last(&self) -> f64 {
        *self.values.last().expect("non-empty sequence")
    }

    /// `(n, d_n)` rows.
    pub fn rows(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values.iter().enumerate().map(|(i, &d)| (self.start_level + i, d))
    }
}

/// Relative slack allowed when asserting `d_n ≤ d_{n+1}` in floating point.
const MONOTONE_SLACK: f64 = 1e-12;

pub fn distance_sequence(fractal: &NestedFractal, x: &[f64], y: &[f64], n_max: usize) -> Result<DistanceSequence> {
    distance_sequence_with_budget(fractal, x, y, n_max, DEFAULT_BUDGET)
}

pub fn distance_sequence_with_budget(
    fractal: &NestedFractal,
    x: &[f64],
    y: &[f64],
    n_max: usize,
    budget: u64,
) -> Result<DistanceSequence> {
    fractal.check_budget(n_max, budget)?;
    let mut start_level = None;
    let mut values = Vec::new();
    let mut path = None;
    for n in 0..=n_max {
        let graph = fractal.build_graph_with_budget(n, budget)?;
        let (Some(xi), Some(yi)) = (graph.find_vertex(x), graph.find_vertex(y)) else {
            continue;
        };
        start_level.get_or_insert(n);
        let (d, p) = shortest_path_distance(&graph, xi, yi)?;
        if let Some(&prev) = values.last() {
            if d < prev * (1.0 - MONOTONE_SLACK) {
                return Err(Error::InvalidFractal {
                    condition: Some(4),
                    reason: format!("d_{n} = {d} < d_{} = {prev}", n - 1),
                });
            }
        }
        values.push(d);
        path = Some(p);
    }
    let Some(start_level) = start_level else {
        let finest = fractal.build_graph_with_budget(n_max, budget)?;
        let missing = if finest.find_vertex(x).is_none() { x } else { y };
        return Err(Error::NotAVertex(missing.to_vec()));
    };
    let (extrapolated, q_estimate, fit_residual) = extrapolate_geometric(&values);
    Ok(DistanceSequence {
        x: x.to_vec(),
        y: y.to_vec(),
        start_level,
        values,
        extrapolated,
        q_estimate,
        fit_residual,
        path: path.expect("path recorded with values"),
    })
}

/// Increments at or below this fraction of the last value count as zero.
const FLAT_INCREMENT: f64 = 1e-12;

fn extrapolate_geometric(values: &[f64]) -> (f64, Option<f64>, Option<f64>) {
    let last = *values.last().expect("non-empty");
    let incs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let flat = FLAT_INCREMENT * last.abs();
    if incs.last().is_none_or(|d| d.abs() <= flat) || incs.len() < 2 {
        return (last, None, None);
    }
    let ratio = |i: usize| incs[i] / incs[i - 1];
    let q = ratio(incs.len() - 1);
    if !(q > 0.0 && q < 1.0) {
        return (last, None, None);
    }
    let residual = (incs.len() >= 3 && incs[incs.len() - 3].abs() > flat).then(|| (q - ratio(incs.len() - 2)).abs());
    (last + incs[incs.len() - 1] * q / (1.0 - q), Some(q), residual)
}

/// Projection `Δ_n` of a simple level-m path onto level `n < m`: the
/// sequence of `V_n` vertices in the order the path first visits them.
pub fn project_path(fine: &GraphApprox, coarse: &GraphApprox, path: &GraphPath) -> Result<GraphPath> {
    if path.level != fine.level() || coarse.level() > fine.level() {
        return Err(Error::InvalidProjection(format!(
            "cannot project a level-{} path through graphs of levels {} -> {}",
            path.level,
            fine.level(),
            coarse.level()
        )));
    }
    if path.vertex_ids.is_empty() || !path.is_simple() {
        return Err(Error::InvalidProjection("path must be non-empty and simple".into()));
    }
    let coarse_ids: Vec<Option<usize>> = path
        .vertex_ids
        .iter()
        .map(|&v| coarse.find_vertex(fine.vertex(v)))
        .collect();
    if coarse_ids[0].is_none() || coarse_ids.last().is_some_and(Option::is_none) {
        return Err(Error::InvalidProjection(
            "path endpoints are not vertices of the target level".into(),
        ));
    }
    let vertex_ids: Vec<usize> = coarse_ids.into_iter().flatten().collect();
    let adj = Adjacency::from_graph(coarse);
    let mut length = 0.0;
    for w in vertex_ids.windows(2) {
        length += adj.edge_length(w[0], w[1]).ok_or_else(|| {
            Error::InvalidProjection(format!(
                "consecutive vertices {:?} and {:?} share no level-{} cell",
                coarse.vertex(w[0]),
                coarse.vertex(w[1]),
                coarse.level()
            ))
        })?;
    }
    Ok(GraphPath {
        level: coarse.level(),
        vertex_ids,
        length,
    })
}

/// `d_{n,∞}(x, y)`: shortest paths using edges of every level `≥ n`.
///
/// Equal to `d_n` once `n ≥ k(x, y)`; below that the search runs on
/// `(V_k, E_n ∪ … ∪ E_k)` with `k = k(x, y) ≤ k_cap`.
pub fn distance_multilevel(fractal: &NestedFractal, x: &[f64], y: &[f64], n: usize, k_cap: usize) -> Result<f64> {
    fractal.check_budget(k_cap, DEFAULT_BUDGET)?;
    let mut found = None;
    for level in 0..=k_cap {
        let graph = fractal.build_graph(level)?;
        if let (Some(xi), Some(yi)) = (graph.find_vertex(x), graph.find_vertex(y)) {
            found = Some((level, graph, xi, yi));
            break;
        }
    }
    let Some((k, graph, xi, yi)) = found else {
        return Err(Error::NotAVertex(x.to_vec()));
    };
    if n >= k {
        let graph = fractal.build_graph(n)?;
        let xi = graph.find_vertex(x).expect("V_k ⊂ V_n");
        let yi = graph.find_vertex(y).expect("V_k ⊂ V_n");
        return Ok(shortest_path_distance(&graph, xi, yi)?.0);
    }
    let e0 = fractal.e0();
    let mut edges = Vec::new();
    for j in n..=k {
        let scale = fractal.ratio().powi(j as i32);
        for cell in 0..fractal.k().pow(j as u32) {
            let corners = graph.coarse_cell(j, cell);
            for e in e0 {
                edges.push((corners[e.p], corners[e.q], scale * e.length));
            }
        }
    }
    let adj = Adjacency::from_edges(graph.vertex_count(), edges.into_iter());
    Ok(adj.shortest_path(xi, yi)?.0)
}

/// All-pairs shortest distances by repeated Dijkstra (small graphs).
pub fn all_pairs(graph: &GraphApprox) -> Vec<Vec<f64>> {
    use rayon::prelude::*;
    let adj = Adjacency::from_graph(graph);
    (0..graph.vertex_count())
        .into_par_iter()
        .map(|s| adj.dijkstra(s).0)
        .collect()
}

/// Euclidean distance between two vertices of a graph.
pub fn euclidean_between(graph: &GraphApprox, a: usize, b: usize) -> f64 {
    euclidean(graph.vertex(a), graph.vertex(b))
}
