//! Composite Simpson rule on uniform grids.

use rayon::prelude::*;
use std::ops::{Add, Mul};

/// Smallest odd point count `≥ n` (and ≥ 3), as Simpson needs an even
/// number of intervals.
pub fn odd_points(n: usize) -> usize {
    let n = n.max(3);
    if n.is_multiple_of(2) {
        n + 1
    } else {
        n
    }
}

/// Composite Simpson sum over uniformly spaced samples with spacing `h`.
///
/// `values.len()` must be odd and at least 3.
pub fn simpson<T>(values: &[T], h: f64) -> T
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T>,
{
    let n = values.len();
    assert!(
        n >= 3 && n % 2 == 1,
        "Simpson needs an odd number of samples ≥ 3"
    );
    let mut acc = values[0] + values[n - 1];
    for (i, v) in values.iter().enumerate().take(n - 1).skip(1) {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc = acc + *v * w;
    }
    acc * (h / 3.0)
}

/// Integrate `f` over `[a, b]` with `n` points (rounded up to odd).
///
/// Samples are evaluated in parallel and summed in grid order, so the result
/// does not depend on the thread count.
pub fn integrate<T, F>(f: F, a: f64, b: f64, n: usize) -> T
where
    T: Copy + Send + Add<Output = T> + Mul<f64, Output = T>,
    F: Fn(f64) -> T + Sync,
{
    let n = odd_points(n);
    let h = (b - a) / (n - 1) as f64;
    let values: Vec<T> = (0..n)
        .into_par_iter()
        .map(|i| f(a + h * i as f64))
        .collect();
    simpson(&values, h)
}
