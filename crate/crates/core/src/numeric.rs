//! Deterministic summation.

/// Pairwise (tree) summation with a fixed split shape.
///
/// The result depends only on the order of `values`, so any caller that
/// enumerates in canonical order gets bit-identical sums.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 8;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}
