//! Thin switch between rayon and the sequential fallback.

#[cfg(feature = "parallel")]
pub(crate) fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    rayon::join(a, b)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    (a(), b())
}

/// Maps `f` over `0..n` and concatenates the results in index order.
#[cfg(feature = "parallel")]
pub(crate) fn flat_map_range<T, F>(n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> Vec<T> + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().flat_map_iter(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn flat_map_range<T, F>(n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> Vec<T> + Sync + Send,
{
    flat_map_range_seq(n, f)
}

pub(crate) fn flat_map_range_seq<T, F>(n: u64, f: F) -> Vec<T>
where
    F: Fn(u64) -> Vec<T>,
{
    (0..n).flat_map(f).collect()
}
