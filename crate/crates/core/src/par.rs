//! Data-parallel helpers with a sequential fallback.
//!
//! Every helper preserves input order in its output, so results are the same
//! whether or not the `parallel` feature is enabled and regardless of the
//! size of the thread pool.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, keeping order.
#[cfg(feature = "parallel")]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Maps `f` over an index range, keeping order.
#[cfg(feature = "parallel")]
pub fn map_range<U, F>(range: Range<usize>, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    range.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_range<U, F>(range: Range<usize>, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    range.map(f).collect()
}

/// Filters and maps an index range, keeping order.
#[cfg(feature = "parallel")]
pub fn filter_map_range<U, F>(range: Range<usize>, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> Option<U> + Sync + Send,
{
    range.into_par_iter().filter_map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn filter_map_range<U, F>(range: Range<usize>, f: F) -> Vec<U>
where
    F: Fn(usize) -> Option<U>,
{
    range.filter_map(f).collect()
}

/// Smallest `(value, index)` over the range by `f`, ties to the lowest index.
/// Indices where `f` returns `None` are skipped.
#[cfg(feature = "parallel")]
pub fn argmin_range<F>(range: Range<usize>, f: F) -> Option<(f64, usize)>
where
    F: Fn(usize) -> Option<f64> + Sync + Send,
{
    range
        .into_par_iter()
        .filter_map(|i| f(i).map(|v| (v, i)))
        .reduce_with(min_pair)
}

#[cfg(not(feature = "parallel"))]
pub fn argmin_range<F>(range: Range<usize>, f: F) -> Option<(f64, usize)>
where
    F: Fn(usize) -> Option<f64>,
{
    range.filter_map(|i| f(i).map(|v| (v, i))).reduce(min_pair)
}

fn min_pair(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    match a.0.total_cmp(&b.0) {
        std::cmp::Ordering::Less => a,
        std::cmp::Ordering::Greater => b,
        std::cmp::Ordering::Equal => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    }
}

/// Runs `f` on a pool with `threads` workers (0 = library default).
#[cfg(feature = "parallel")]
pub fn with_threads<R, F>(threads: usize, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    if threads == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(e) => {
            log::warn!("could not build a {threads}-thread pool ({e}); using the global pool");
            f()
        }
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_threads<R, F>(_threads: usize, f: F) -> R
where
    F: FnOnce() -> R,
{
    f()
}
