//! Dispatch between rayon and plain iteration for the enumeration loops.
//!
//! Every counting routine splits its outermost coordinate (or subset range)
//! through these helpers, so the `parallel` feature swaps the execution
//! strategy without touching the counting logic. All reductions are sums of
//! exact integers, hence independent of evaluation order.

#[cfg(feature = "parallel")]
pub(crate) fn sum_range<F>(range: std::ops::Range<u64>, f: F) -> u64
where
    F: Fn(u64) -> u64 + Send + Sync,
{
    use rayon::prelude::*;
    range.into_par_iter().map(f).sum()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn sum_range<F>(range: std::ops::Range<u64>, f: F) -> u64
where
    F: Fn(u64) -> u64,
{
    range.map(f).sum()
}

/// Fold `range` into an accumulator, merging partial accumulators when run
/// in parallel. `init` must produce a neutral accumulator.
#[cfg(feature = "parallel")]
pub(crate) fn fold_range<T, I, F, M>(range: std::ops::Range<u64>, init: I, fold: F, merge: M) -> T
where
    T: Send,
    I: Fn() -> T + Send + Sync,
    F: Fn(T, u64) -> T + Send + Sync,
    M: Fn(T, T) -> T + Send + Sync,
{
    use rayon::prelude::*;
    range.into_par_iter().fold(&init, &fold).reduce(&init, merge)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn fold_range<T, I, F, M>(range: std::ops::Range<u64>, init: I, fold: F, _merge: M) -> T
where
    I: Fn() -> T,
    F: Fn(T, u64) -> T,
    M: Fn(T, T) -> T,
{
    range.fold(init(), fold)
}
