//! Order-preserving maps over independent work items.
//!
//! [`map_indexed`] uses rayon when the `parallel` feature is enabled and a
//! plain loop otherwise. Results always come back in input order, so output
//! assembled from them is identical either way. [`map_indexed_seq`] is
//! always sequential and exists so benchmarks can compare the two.

pub fn map_indexed_seq<T, R, Func>(items: &[T], f: Func) -> Vec<R>
where
    Func: Fn(usize, &T) -> R,
{
    items.iter().enumerate().map(|(i, x)| f(i, x)).collect()
}

#[cfg(feature = "parallel")]
pub fn map_indexed<T, R, Func>(items: &[T], f: Func) -> Vec<R>
where
    T: Sync,
    R: Send,
    Func: Fn(usize, &T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().enumerate().map(|(i, x)| f(i, x)).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, R, Func>(items: &[T], f: Func) -> Vec<R>
where
    T: Sync,
    R: Send,
    Func: Fn(usize, &T) -> R + Sync + Send,
{
    map_indexed_seq(items, f)
}

/// Whether [`map_indexed`] runs on the rayon pool.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
