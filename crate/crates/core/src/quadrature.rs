//! Composite Simpson quadrature used for every cell average in the crate.

/// Subintervals per cell for cell averages and projections.
pub const SUBINTERVALS_PER_CELL: usize = 16;

/// Composite Simpson nodes and weights on `[a, b]` with `n` (even) subintervals.
pub fn simpson_nodes(a: f64, b: f64, n: usize) -> impl Iterator<Item = (f64, f64)> {
    debug_assert!(n >= 2 && n % 2 == 0);
    let h = (b - a) / n as f64;
    (0..=n).map(move |k| {
        let x = if k == n { b } else { a + k as f64 * h };
        let c = if k == 0 || k == n {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        (x, c * h / 3.0)
    })
}

pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    simpson_nodes(a, b, n).map(|(x, w)| w * f(x)).sum()
}

/// Tensor-product Simpson rule over `[a0, b0] x [a1, b1]`.
pub fn simpson_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    (a0, b0): (f64, f64),
    (a1, b1): (f64, f64),
    n: usize,
) -> f64 {
    if b0 <= a0 || b1 <= a1 {
        return 0.0;
    }
    let inner: Vec<(f64, f64)> = simpson_nodes(a1, b1, n).collect();
    simpson_nodes(a0, b0, n)
        .map(|(x, wx)| wx * inner.iter().map(|&(y, wy)| wy * f(x, y)).sum::<f64>())
        .sum()
}
