//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the closures run on the rayon pool; without it
//! they run in a plain loop. Results are always returned in index order so that
//! any reduction performed by the caller is independent of scheduling.

use std::ops::Range;

/// Default number of items per work chunk for Monte Carlo style loops.
pub const CHUNK: usize = 4096;

/// Evaluates `f(i)` for `i in 0..n`, returning the results in index order.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Splits `0..n` into consecutive ranges of at most `chunk` items and evaluates
/// `f` on each range. Results come back in range order.
pub fn map_chunks<T, F>(n: usize, chunk: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<usize>) -> T + Sync + Send,
{
    let chunk = chunk.max(1);
    let count = n.div_ceil(chunk);
    map_indexed(count, |c| {
        let start = c * chunk;
        f(start..(start + chunk).min(n))
    })
}

/// Whether this build runs the helpers on the rayon pool.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
