//! Small numerical helpers shared across modules.

/// Pairwise (cascade) summation with a fixed split, so the result depends only
/// on the order of `values` and never on how work was scheduled.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Polynomial (Neville) extrapolation of samples `(h_i, v_i)` to `h = 0`.
///
/// Assumes `v(h) = v0 + c1 h + c2 h^2 + ...`; with `m` samples the fitted
/// polynomial has degree `m - 1`. Returns the extrapolated value and the
/// difference between the last two diagonal entries of the tableau as an
/// error estimate.
pub fn richardson_to_zero(hs: &[f64], values: &[f64]) -> (f64, f64) {
    assert_eq!(hs.len(), values.len(), "mismatched extrapolation samples");
    assert!(!hs.is_empty(), "no samples to extrapolate");
    let m = hs.len();
    let mut table = values.to_vec();
    let mut prev_top = table[0];
    let mut estimate = 0.0;
    for level in 1..m {
        for i in 0..m - level {
            let (h_lo, h_hi) = (hs[i], hs[i + level]);
            table[i] = (h_lo * table[i + 1] - h_hi * table[i]) / (h_lo - h_hi);
        }
        estimate = (table[0] - prev_top).abs();
        prev_top = table[0];
    }
    (table[0], estimate)
}

/// Maximum absolute entry of the difference of two slices.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
