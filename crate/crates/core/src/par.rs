//! Data-parallel helpers that fall back to plain iteration when the
//! `parallel` feature is off. Every helper returns the same result as its
//! sequential reading, whatever the schedule.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// First `i` in `0..n` (by index) for which `f` returns `Some`.
pub fn find_map_first_range<T, F>(n: u64, f: F) -> Option<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().find_map_first(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).find_map(f)
    }
}

/// `f` applied to every item, results in input order.
pub fn map<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Whether the crate was built with the `parallel` feature.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
