//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) these fan out over rayon's global
//! pool; without it, or when a caller passes `parallel = false`, they run in
//! order on the current thread. Results are always returned in index order,
//! so the output never depends on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Whether parallel execution is compiled in.
pub const ENABLED: bool = cfg!(feature = "parallel");

/// Applies `f` to `0..n` and collects the results in order.
pub fn map_indices<T, F>(n: usize, parallel: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = parallel;
    (0..n).map(f).collect()
}

/// Applies `f` to every item of `items` and collects the results in order.
pub fn map_slice<I, T, F>(items: &[I], parallel: bool, f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return items.par_iter().map(f).collect();
    }
    let _ = parallel;
    items.iter().map(f).collect()
}

/// Configures the global pool size; a no-op without the `parallel` feature.
pub fn init_threads(threads: usize) -> Result<(), String> {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| e.to_string())
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let seq = map_indices(1000, false, |i| i * i);
        let par = map_indices(1000, true, |i| i * i);
        assert_eq!(seq, par);
        let items: Vec<u64> = (0..100).collect();
        assert_eq!(map_slice(&items, true, |x| x + 1), map_slice(&items, false, |x| x + 1));
    }
}
