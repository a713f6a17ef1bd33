//! Iterated function systems of equal-ratio similitudes, their essential
//! fixed points and the level-n graph approximations `(V_n, E_n)`.
//!
//! Points are plain `&[f64]` slices of length `ambient_dim`. Words are
//! 1-based as they are usually written (`w_σ = w_{σ(1)} ∘ … ∘ w_{σ(n)}`), and
//! level-n cells are numbered by the lexicographic order of their words.

mod file;
mod graph;
mod nesting;
pub mod presets;

pub use file::{FractalFile, MapEntry};
pub use graph::{Edge, GraphApprox, DEFAULT_BUDGET};
pub use nesting::{check_nesting, NestingReport, NestingViolation};

use crate::error::{Error, Result};
use crate::numerics::euclidean;
use nalgebra::{DMatrix, DVector};

/// Tolerance on `‖QᵀQ − I‖_∞` for the isometry part of a similitude.
pub const ORTHOGONALITY_TOL: f64 = 1e-12;
/// Relative tolerance used when checking that all maps share one ratio.
pub const COMMON_RATIO_TOL: f64 = 1e-12;
/// Default vertex identification tolerance, relative to `diam(V_0)`.
pub const RELATIVE_DEDUP_TOL: f64 = 1e-9;

/// A contracting similitude `x ↦ λ Q x + t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Similitude {
    ratio: f64,
    rotation: DMatrix<f64>,
    translation: DVector<f64>,
    // row-major λQ, used on the hot path
    linear: Vec<f64>,
}

impl Similitude {
    pub fn new(ratio: f64, rotation: DMatrix<f64>, translation: DVector<f64>) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidSimilitude(format!("ratio {ratio} outside (0, 1)")));
        }
        let n = translation.len();
        if n == 0 || rotation.nrows() != n || rotation.ncols() != n {
            return Err(Error::InvalidSimilitude(format!(
                "rotation is {}x{} but translation has length {n}",
                rotation.nrows(),
                rotation.ncols()
            )));
        }
        let defect = (rotation.transpose() * &rotation - DMatrix::<f64>::identity(n, n)).amax();
        if !(defect <= ORTHOGONALITY_TOL) {
            return Err(Error::InvalidSimilitude(format!(
                "rotation is not orthogonal (defect {defect:.3e})"
            )));
        }
        let mut linear = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                linear.push(ratio * rotation[(r, c)]);
            }
        }
        Ok(Self {
            ratio,
            rotation,
            translation,
            linear,
        })
    }

    /// Pure scaling toward the origin followed by a translation.
    pub fn homothety(ratio: f64, translation: &[f64]) -> Result<Self> {
        let n = translation.len();
        Self::new(ratio, DMatrix::identity(n, n), DVector::from_column_slice(translation))
    }

    /// Homothety of ratio `λ` with the given fixed point.
    pub fn homothety_about(ratio: f64, center: &[f64]) -> Result<Self> {
        let t: Vec<f64> = center.iter().map(|c| (1.0 - ratio) * c).collect();
        Self::homothety(ratio, &t)
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn rotation(&self) -> &DMatrix<f64> {
        &self.rotation
    }

    pub fn translation(&self) -> &DVector<f64> {
        &self.translation
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        let n = self.dim();
        for (r, (o, row)) in out.iter_mut().zip(self.linear.chunks_exact(n)).enumerate() {
            *o = self.translation[r] + row.iter().zip(x).map(|(a, xi)| a * xi).sum::<f64>();
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.apply_into(x, &mut out);
        out
    }

    /// Unique fixed point, from the linear system `(I − λQ) p = t`.
    pub fn fixed_point(&self) -> Result<Vec<f64>> {
        let n = self.dim();
        let system = DMatrix::<f64>::identity(n, n) - &self.rotation * self.ratio;
        let p = system
            .lu()
            .solve(&self.translation)
            .ok_or_else(|| Error::InvalidSimilitude("singular fixed-point system".into()))?;
        Ok(p.iter().copied().collect())
    }
}

/// A finite word over the alphabet `{1, …, k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>, k: usize) -> Result<Self> {
        if let Some(&letter) = letters.iter().find(|&&l| l == 0 || l > k) {
            return Err(Error::InvalidWord { letter, k });
        }
        Ok(Self(letters))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn level(&self) -> usize {
        self.0.len()
    }

    /// Lexicographic index among the `k^n` words of the same length.
    pub fn cell_index(&self, k: usize) -> usize {
        self.0.iter().fold(0, |acc, &l| acc * k + (l - 1))
    }

    pub fn from_cell_index(mut index: usize, level: usize, k: usize) -> Self {
        let mut letters = vec![0; level];
        for slot in letters.iter_mut().rev() {
            *slot = index % k + 1;
            index /= k;
        }
        Self(letters)
    }

    /// `σ·i`
    pub fn child(&self, letter: usize) -> Self {
        let mut letters = self.0.clone();
        letters.push(letter);
        Self(letters)
    }

    /// Parses `"1,2,3"`, `"123"` (single-digit letters) or `""`/`"-"` for the empty word.
    pub fn parse(text: &str, k: usize) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "-" {
            return Ok(Self::empty());
        }
        let letters: Option<Vec<usize>> = if text.contains(',') {
            text.split(',').map(|s| s.trim().parse().ok()).collect()
        } else {
            text.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
        };
        let letters = letters.ok_or_else(|| Error::Parse(format!("bad word {text:?}")))?;
        Self::new(letters, k)
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// An unordered edge of `E_0`, stored with `p < q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryEdge {
    pub p: usize,
    pub q: usize,
    pub length: f64,
}

/// An equal-ratio IFS together with its boundary graph `(V_0, E_0)`.
#[derive(Debug, Clone)]
pub struct NestedFractal {
    ambient_dim: usize,
    ratio: f64,
    maps: Vec<Similitude>,
    fixed_points: Vec<Vec<f64>>,
    v0: Vec<Vec<f64>>,
    v0_maps: Vec<usize>,
    e0: Vec<BoundaryEdge>,
    dedup_tol: f64,
}

impl NestedFractal {
    /// Validates the map data and derives `V_0`, `E_0`.
    ///
    /// Rejects maps without a common ratio (condition 1), fewer than two
    /// essential fixed points, and a disconnected level-1 graph (condition 3).
    pub fn new(maps: Vec<Similitude>, dedup_tol: Option<f64>) -> Result<Self> {
        if maps.len() < 2 {
            return Err(Error::InvalidFractal {
                condition: None,
                reason: format!("need at least 2 maps, got {}", maps.len()),
            });
        }
        let ambient_dim = maps[0].dim();
        if maps.iter().any(|m| m.dim() != ambient_dim) {
            return Err(Error::InvalidFractal {
                condition: None,
                reason: "maps act on different dimensions".into(),
            });
        }
        let ratio = maps[0].ratio();
        if let Some(bad) = maps
            .iter()
            .find(|m| (m.ratio() - ratio).abs() > COMMON_RATIO_TOL * ratio)
        {
            return Err(Error::InvalidFractal {
                condition: Some(1),
                reason: format!("maps have different ratios {ratio} and {}", bad.ratio()),
            });
        }
        if let Some(tol) = dedup_tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Error::InvalidArgument(format!("dedup_tol must be positive, got {tol}")));
            }
        }
        let fixed_points = maps.iter().map(Similitude::fixed_point).collect::<Result<Vec<_>>>()?;
        let search_tol = dedup_tol.unwrap_or(RELATIVE_DEDUP_TOL * diameter(&fixed_points).max(f64::MIN_POSITIVE));
        let essential = essential_fixed_points(&maps, search_tol)?;

        // V_0 is a point set: fixed points shared by several maps appear once.
        let mut v0: Vec<Vec<f64>> = Vec::new();
        let mut v0_maps = Vec::new();
        for i in essential {
            let p = &fixed_points[i];
            if v0.iter().all(|q| euclidean(p, q) > 2.0 * search_tol) {
                v0.push(p.clone());
                v0_maps.push(i);
            }
        }
        if v0.len() < 2 {
            return Err(Error::InvalidFractal {
                condition: None,
                reason: "fewer than two essential fixed points".into(),
            });
        }
        let dedup_tol = dedup_tol.unwrap_or(RELATIVE_DEDUP_TOL * diameter(&v0));
        let mut e0 = Vec::new();
        for p in 0..v0.len() {
            for q in p + 1..v0.len() {
                e0.push(BoundaryEdge {
                    p,
                    q,
                    length: euclidean(&v0[p], &v0[q]),
                });
            }
        }
        let fractal = Self {
            ambient_dim,
            ratio,
            maps,
            fixed_points,
            v0,
            v0_maps,
            e0,
            dedup_tol,
        };
        // condition (3); build_graph reports disconnection itself
        fractal.build_graph(1)?;
        Ok(fractal)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// The common contraction ratio λ.
    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    /// Number of maps `k`.
    pub fn k(&self) -> usize {
        self.maps.len()
    }

    pub fn maps(&self) -> &[Similitude] {
        &self.maps
    }

    pub fn fixed_points(&self) -> &[Vec<f64>] {
        &self.fixed_points
    }

    pub fn v0(&self) -> &[Vec<f64>] {
        &self.v0
    }

    /// Index of the map fixing each `V_0` point.
    pub fn v0_maps(&self) -> &[usize] {
        &self.v0_maps
    }

    /// Unordered boundary edges, in lexicographic `(p, q)` order.
    pub fn e0(&self) -> &[BoundaryEdge] {
        &self.e0
    }

    /// Lengths of the oriented edges of `E_0` (each unordered edge twice).
    pub fn oriented_lengths(&self) -> Vec<f64> {
        self.e0.iter().flat_map(|e| [e.length, e.length]).collect()
    }

    pub fn dedup_tol(&self) -> f64 {
        self.dedup_tol
    }

    /// Position of the unordered edge `{p, q}` in [`Self::e0`].
    pub fn e0_index(&self, p: usize, q: usize) -> Option<usize> {
        let (p, q) = if p < q { (p, q) } else { (q, p) };
        self.e0.iter().position(|e| e.p == p && e.q == q)
    }

    /// Applies `w_σ = w_{σ(1)} ∘ … ∘ w_{σ(n)}`, innermost map last in the word.
    pub fn apply_word(&self, word: &Word, point: &[f64]) -> Vec<f64> {
        let mut cur = point.to_vec();
        let mut next = vec![0.0; self.ambient_dim];
        for &letter in word.letters().iter().rev() {
            self.maps[letter - 1].apply_into(&cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
        cur
    }

    /// Builds `(V_n, E_n)` under the default oriented-edge budget.
    pub fn build_graph(&self, level: usize) -> Result<GraphApprox> {
        GraphApprox::build(self, level, DEFAULT_BUDGET)
    }

    pub fn build_graph_with_budget(&self, level: usize, budget: u64) -> Result<GraphApprox> {
        GraphApprox::build(self, level, budget)
    }

    /// Number of oriented edges `2·kⁿ·|E_0|` a level-n graph carries.
    pub fn oriented_edge_count(&self, level: usize) -> f64 {
        2.0 * (self.k() as f64).powi(level as i32) * self.e0.len() as f64
    }

    pub fn check_budget(&self, level: usize, budget: u64) -> Result<()> {
        let required = self.oriented_edge_count(level);
        if required > budget as f64 {
            return Err(Error::BudgetExceeded { required, budget });
        }
        Ok(())
    }
}

/// Fixed point of a single map.
pub fn fixed_point(map: &Similitude) -> Result<Vec<f64>> {
    map.fixed_point()
}

/// Indices `i` whose fixed point `p_i` is essential: some `w_j(p_i)` coincides
/// (within `tol`) with some `w_{j'}(p_{i'})`, `i' ≠ i`. Brute force over all
/// index tuples.
pub fn essential_fixed_points(maps: &[Similitude], tol: f64) -> Result<Vec<usize>> {
    let k = maps.len();
    if k < 2 {
        return Err(Error::InvalidFractal {
            condition: None,
            reason: "need at least 2 maps".into(),
        });
    }
    let fixed = maps.iter().map(Similitude::fixed_point).collect::<Result<Vec<_>>>()?;
    // images[j][i] = w_j(p_i)
    let images: Vec<Vec<Vec<f64>>> = maps
        .iter()
        .map(|w| fixed.iter().map(|p| w.apply(p)).collect())
        .collect();
    let essential: Vec<usize> = (0..k)
        .filter(|&i| {
            (0..k).any(|j| {
                (0..k)
                    .filter(|&i2| i2 != i)
                    .any(|i2| (0..k).any(|j2| euclidean(&images[j][i], &images[j2][i2]) <= tol))
            })
        })
        .collect();
    let distinct = essential
        .iter()
        .enumerate()
        .filter(|(pos, &i)| {
            essential[..*pos]
                .iter()
                .all(|&other| euclidean(&fixed[i], &fixed[other]) > tol)
        })
        .count();
    if distinct < 2 {
        return Err(Error::InvalidFractal {
            condition: None,
            reason: format!("found {distinct} essential fixed point(s), need at least two"),
        });
    }
    Ok(essential)
}

pub(crate) fn diameter(points: &[Vec<f64>]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            d = d.max(euclidean(p, q));
        }
    }
    d
}
