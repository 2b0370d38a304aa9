//! Index-parallel map with a sequential fallback.

/// `(0..n).map(f)`, run on the rayon pool when the `parallel` feature is on and
/// `parallel` is true. Output order is always the index order.
pub(crate) fn map_indexed<T, F>(n: usize, parallel: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = parallel;
    (0..n).map(f).collect()
}
