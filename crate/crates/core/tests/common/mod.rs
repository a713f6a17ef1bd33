//! Independent reference computations shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use fractal_triple::{GraphApprox, NestedFractal};

/// Trace of a form on `V_0` computed by eliminating interior vertices of
/// the level-1 network one at a time (star-mesh transform).
pub fn star_mesh_trace(fractal: &NestedFractal, conductances: &[f64]) -> Vec<f64> {
    let g1 = fractal.build_graph(1).unwrap();
    let n = g1.vertex_count();
    let mut c = vec![vec![0.0; n]; n];
    for e in g1.edges() {
        let (a, b) = (e.a as usize, e.b as usize);
        c[a][b] += conductances[e.e0];
        c[b][a] += conductances[e.e0];
    }
    let boundary: Vec<usize> = fractal.v0().iter().map(|p| g1.find_vertex(p).unwrap()).collect();
    let mut alive = vec![true; n];
    for v in 0..n {
        if boundary.contains(&v) {
            continue;
        }
        alive[v] = false;
        let total: f64 = (0..n).filter(|&u| alive[u]).map(|u| c[v][u]).sum();
        let nbrs: Vec<usize> = (0..n).filter(|&u| alive[u] && c[v][u] != 0.0).collect();
        for &i in &nbrs {
            for &j in &nbrs {
                if i < j {
                    let add = c[v][i] * c[v][j] / total;
                    c[i][j] += add;
                    c[j][i] += add;
                }
            }
        }
        for u in 0..n {
            c[v][u] = 0.0;
            c[u][v] = 0.0;
        }
    }
    fractal.e0().iter().map(|e| c[boundary[e.p]][boundary[e.q]]).collect()
}

/// All-pairs shortest path lengths by Floyd-Warshall.
pub fn floyd_warshall(graph: &GraphApprox) -> Vec<Vec<f64>> {
    let n = graph.vertex_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for e in graph.edges() {
        let (a, b) = (e.a as usize, e.b as usize);
        d[a][b] = d[a][b].min(e.length);
        d[b][a] = d[b][a].min(e.length);
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i][k];
            if dik.is_infinite() {
                continue;
            }
            for j in 0..n {
                let cand = dik + d[k][j];
                if cand < d[i][j] {
                    d[i][j] = cand;
                }
            }
        }
    }
    d
}

/// Applies the maps of `fractal` along a word (letters 1-based, outermost first).
pub fn apply_letters(fractal: &NestedFractal, letters: &[usize], x: &[f64]) -> Vec<f64> {
    let mut p = x.to_vec();
    for &l in letters.iter().rev() {
        p = fractal.maps()[l - 1].apply(&p);
    }
    p
}

/// `V_n` by enumerating every word and deduplicating with a quadratic scan.
pub fn brute_force_vertices(fractal: &NestedFractal, level: usize) -> Vec<Vec<f64>> {
    let k = fractal.k();
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..level {
        words = words
            .iter()
            .flat_map(|w| (1..=k).map(move |l| [w.as_slice(), &[l]].concat()))
            .collect();
    }
    let mut points: Vec<Vec<f64>> = Vec::new();
    for w in &words {
        for p in fractal.v0() {
            let q = apply_letters(fractal, w, p);
            if !points.iter().any(|r| dist(r, &q) < 1e-9) {
                points.push(q);
            }
        }
    }
    points
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
