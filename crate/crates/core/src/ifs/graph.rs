use super::NestedFractal;
use crate::error::{Error, Result};
use crate::numerics::euclidean;
use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

/// Default cap on the number of oriented edges of a generated graph.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// One edge of `E_n`: the image under `w_σ` of the boundary edge `e0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: u32,
    pub b: u32,
    pub length: f64,
    /// Lexicographic index of the generating word σ.
    pub cell: usize,
    /// Index of the generating edge in `NestedFractal::e0`.
    pub e0: usize,
}

/// The level-n graph `(V_n, E_n)`.
///
/// Vertex ids follow first appearance when cells are visited in word order.
/// Parallel edges generated by different words are kept.
#[derive(Debug, Clone)]
pub struct GraphApprox {
    level: usize,
    dim: usize,
    k: usize,
    v0_len: usize,
    v0_maps: Vec<usize>,
    tol: f64,
    coords: Vec<f64>,
    cells: Vec<u32>,
    edges: Vec<Edge>,
    index: SpatialIndex,
}

impl GraphApprox {
    pub(crate) fn build(fractal: &NestedFractal, level: usize, budget: u64) -> Result<Self> {
        fractal.check_budget(level, budget)?;
        let dim = fractal.ambient_dim();
        let k = fractal.k();
        let v0_len = fractal.v0().len();

        // Raw corner coordinates of every level-n cell, cells in word order.
        // Level m+1 cell i·τ is w_i applied to level-m cell τ.
        let mut raw: Vec<f64> = fractal.v0().iter().flatten().copied().collect();
        let stride = v0_len * dim;
        for _ in 0..level {
            let cells = raw.len() / stride;
            let mut next = vec![0.0; raw.len() * k];
            for (i, map) in fractal.maps().iter().enumerate() {
                for c in 0..cells {
                    for j in 0..v0_len {
                        let src = &raw[c * stride + j * dim..c * stride + (j + 1) * dim];
                        let at = (i * cells + c) * stride + j * dim;
                        map.apply_into(src, &mut next[at..at + dim]);
                    }
                }
            }
            raw = next;
        }

        let tol = fractal.dedup_tol();
        let mut index = SpatialIndex::new(dim, tol);
        let mut coords = Vec::new();
        let n_cells = raw.len() / stride;
        let mut cells = Vec::with_capacity(n_cells * v0_len);
        for p in raw.chunks_exact(dim) {
            let id = match index.find(&coords, p) {
                Some(id) => id,
                None => {
                    let id = (coords.len() / dim) as u32;
                    coords.extend_from_slice(p);
                    index.insert(p, id);
                    id
                }
            };
            cells.push(id);
        }

        let scale = fractal.ratio().powi(level as i32);
        let e0 = fractal.e0();
        let mut edges = Vec::with_capacity(n_cells * e0.len());
        for cell in 0..n_cells {
            let corners = &cells[cell * v0_len..(cell + 1) * v0_len];
            for (ei, e) in e0.iter().enumerate() {
                edges.push(Edge {
                    a: corners[e.p],
                    b: corners[e.q],
                    length: scale * e.length,
                    cell,
                    e0: ei,
                });
            }
        }

        let graph = Self {
            level,
            dim,
            k,
            v0_len,
            v0_maps: fractal.v0_maps().to_vec(),
            tol,
            coords,
            cells,
            edges,
            index,
        };
        if !graph.is_connected() {
            return Err(Error::InvalidFractal {
                condition: Some(3),
                reason: format!("graph of level {level} is disconnected"),
            });
        }
        Ok(graph)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn vertex(&self, id: usize) -> &[f64] {
        &self.coords[id * self.dim..(id + 1) * self.dim]
    }

    pub fn vertices(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len() / self.v0_len
    }

    /// Vertex ids of `w_σ(V_0)` for the level-n cell with index `cell`.
    pub fn cell(&self, cell: usize) -> &[u32] {
        &self.cells[cell * self.v0_len..(cell + 1) * self.v0_len]
    }

    pub fn boundary_len(&self) -> usize {
        self.v0_len
    }

    pub fn dedup_tol(&self) -> f64 {
        self.tol
    }

    /// Id of the vertex within `2·dedup_tol` of `point`, if any.
    pub fn find_vertex(&self, point: &[f64]) -> Option<usize> {
        if point.len() != self.dim {
            return None;
        }
        self.index.find(&self.coords, point).map(|id| id as usize)
    }

    /// Vertex id (in this graph) of `w_σ(p_j)` for a coarser cell σ of level
    /// `m ≤ level`, given by its lexicographic index.
    ///
    /// Uses `w_σ(p_j) = w_{σ·c…c}(p_j)` where `w_c` fixes `p_j`.
    pub fn coarse_cell_vertex(&self, m: usize, cell: usize, j: usize) -> u32 {
        debug_assert!(m <= self.level);
        let r = (self.level - m) as u32;
        let c = self.v0_maps[j];
        let kr = self.k.pow(r);
        let repeated = if self.k > 1 { c * (kr - 1) / (self.k - 1) } else { 0 };
        self.cell(cell * kr + repeated)[j]
    }

    /// Vertex ids of `w_σ(V_0)` for a cell of level `m ≤ level`.
    pub fn coarse_cell(&self, m: usize, cell: usize) -> Vec<u32> {
        (0..self.v0_len).map(|j| self.coarse_cell_vertex(m, cell, j)).collect()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        let mut parent: Vec<u32> = (0..n as u32).collect();
        fn root(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        let mut components = n;
        for e in &self.edges {
            let (ra, rb) = (root(&mut parent, e.a), root(&mut parent, e.b));
            if ra != rb {
                parent[ra as usize] = rb;
                components -= 1;
            }
        }
        components <= 1
    }

    /// Smallest distance between two distinct vertices (brute force; for tests
    /// on small graphs).
    pub fn min_vertex_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.vertex_count() {
            for j in i + 1..self.vertex_count() {
                best = best.min(euclidean(self.vertex(i), self.vertex(j)));
            }
        }
        best
    }
}

/// Coordinates rounded to multiples of `tol`, hashed into buckets; a query
/// confirms candidates by exact distance `≤ 2·tol` and searches the
/// neighbouring buckets within that radius.
#[derive(Debug, Clone)]
struct SpatialIndex {
    dim: usize,
    tol: f64,
    heads: HashMap<u64, u32, BuildHasherDefault<PassThroughHasher>>,
    next: Vec<u32>,
    offsets: Vec<Vec<i64>>,
}

const NIL: u32 = u32::MAX;

impl SpatialIndex {
    fn new(dim: usize, tol: f64) -> Self {
        let mut offsets = vec![Vec::new()];
        for _ in 0..dim {
            offsets = offsets
                .into_iter()
                .flat_map(|o: Vec<i64>| {
                    (-2..=2).map(move |d| {
                        let mut o = o.clone();
                        o.push(d);
                        o
                    })
                })
                .collect();
        }
        // own bucket first
        offsets.sort_by_key(|o| o.iter().map(|d| d.abs()).sum::<i64>());
        Self {
            dim,
            tol,
            heads: HashMap::default(),
            next: Vec::new(),
            offsets,
        }
    }

    fn cell_of(&self, p: &[f64]) -> Vec<i64> {
        p.iter().map(|x| (x / self.tol).round() as i64).collect()
    }

    fn key(cell: &[i64], offset: &[i64]) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for (c, o) in cell.iter().zip(offset) {
            h ^= (c + o) as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
            h ^= h >> 29;
        }
        h.wrapping_mul(0x9e37_79b9_7f4a_7c15)
    }

    fn find(&self, coords: &[f64], p: &[f64]) -> Option<u32> {
        let cell = self.cell_of(p);
        for offset in &self.offsets {
            let mut cur = *self.heads.get(&Self::key(&cell, offset)).unwrap_or(&NIL);
            while cur != NIL {
                let q = &coords[cur as usize * self.dim..(cur as usize + 1) * self.dim];
                if euclidean(p, q) <= 2.0 * self.tol {
                    return Some(cur);
                }
                cur = self.next[cur as usize];
            }
        }
        None
    }

    fn insert(&mut self, p: &[f64], id: u32) {
        let cell = self.cell_of(p);
        let zero = vec![0; self.dim];
        let key = Self::key(&cell, &zero);
        let head = self.heads.insert(key, id).unwrap_or(NIL);
        if self.next.len() <= id as usize {
            self.next.resize(id as usize + 1, NIL);
        }
        self.next[id as usize] = head;
    }
}

#[derive(Default)]
struct PassThroughHasher(u64);

impl Hasher for PassThroughHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 << 8) | u64::from(b);
        }
    }

    fn write_u64(&mut self, n: u64) {
        self.0 = n;
    }
}
