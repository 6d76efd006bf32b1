//! Scheduling-independent parallel helpers.
//!
//! Work items are mapped in parallel and collected in index order; sums are
//! taken with a fixed pairwise tree over that order. Results are therefore
//! bit-identical for any worker count.

use rayon::prelude::*;

use crate::error::Result;

/// Map `f` over `0..n` in parallel, keeping index order.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Fallible [`map_indexed`]; the error reported is the one with the lowest index.
pub fn try_map_indexed<T, F>(n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    let results: Vec<Result<T>> = map_indexed(n, f);
    results.into_iter().collect()
}

/// Index-ordered pairwise sum.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 8;
    if xs.len() <= LEAF {
        return xs.iter().fold(0.0, |acc, &x| acc + x);
    }
    let (lo, hi) = xs.split_at(xs.len() / 2);
    pairwise_sum(lo) + pairwise_sum(hi)
}

pub fn pairwise_mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    pairwise_sum(xs) / xs.len() as f64
}

/// Sample mean and standard error of the mean.
pub fn mean_and_std_error(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    let mean = pairwise_mean(xs);
    if n < 2 {
        return (mean, 0.0);
    }
    let sq: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&sq) / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Run `f` on a dedicated pool with `threads` workers.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("failed to build worker pool");
    pool.install(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_sum_is_exact_on_integers() {
        let xs: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 500_500.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn reduction_ignores_worker_count() {
        let f = |i: usize| ((i as f64) * 0.7).sin() / (1.0 + i as f64);
        let one = with_threads(1, || pairwise_sum(&map_indexed(10_000, f)));
        let four = with_threads(4, || pairwise_sum(&map_indexed(10_000, f)));
        assert_eq!(one.to_bits(), four.to_bits());
    }

    #[test]
    fn lowest_index_error_wins() {
        let r = try_map_indexed(100, |i| {
            if i % 10 == 7 {
                Err(crate::Error::Domain(format!("{i}")))
            } else {
                Ok(i)
            }
        });
        match r {
            Err(crate::Error::Domain(msg)) => assert_eq!(msg, "7"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn standard_error_of_constant_is_zero() {
        let (m, se) = mean_and_std_error(&[2.5; 10]);
        assert_eq!(m, 2.5);
        assert_eq!(se, 0.0);
    }
}
