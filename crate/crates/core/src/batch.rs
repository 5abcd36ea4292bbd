//! Batch execution lane for embarrassingly parallel workloads: randomized
//! trial suites, seeded attack matrices, parameter sweeps.
//!
//! With the default `parallel` feature the work fans out over rayon;
//! without it (`--no-default-features`) the same API runs sequentially.
//! [`run_sequential`] is always sequential, so benchmarks can compare the
//! two lanes inside one build.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Evaluate `f(0..n)`, in parallel when the `parallel` feature is enabled.
/// Results come back in index order either way.
pub fn run<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Always-sequential reference lane.
pub fn run_sequential<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// True when this build fans batches out over a thread pool.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
