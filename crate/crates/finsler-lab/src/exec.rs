//! Execution strategy for sample sweeps.
//!
//! Sweeps are data-parallel maps over deterministic sample indices. With the
//! `parallel` feature (default) they fan out through rayon; without it they
//! run sequentially. Either way results come back in index order, so every
//! report downstream is bit-identical across strategies and thread counts.
//! Reductions happen after collection, never inside the parallel region.

/// Name of the environment variable capping worker threads.
pub const THREADS_ENV: &str = "FINSLER_LAB_THREADS";

/// Ordered map over `0..count`, parallel when the feature allows it.
pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}

/// Always-sequential variant, the baseline the benchmarks compare against.
pub fn map_indexed_seq<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(f).collect()
}

/// Applies the `FINSLER_LAB_THREADS` cap to the global worker pool. Safe to
/// call more than once; only the first configuration wins, which is also
/// rayon's own semantics for the global pool.
pub fn configure_threads_from_env() {
    #[cfg(feature = "parallel")]
    {
        if let Ok(v) = std::env::var(THREADS_ENV) {
            if let Ok(n) = v.trim().parse::<usize>() {
                if n >= 1 {
                    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
                }
            }
        }
    }
}
