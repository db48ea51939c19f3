//! Order-fixed floating-point reductions.
//!
//! The shape of the combination tree depends only on the slice length, so
//! a reduction gives bit-identical results regardless of how the inputs were
//! produced (serially or by any number of worker threads).

const BLOCK: usize = 16;

/// Pairwise (cascade) summation with a fixed tree shape.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= BLOCK {
        let mut acc = 0.0;
        for &x in xs {
            acc += x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
