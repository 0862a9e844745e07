//! Data-parallel helpers. With the `parallel` feature the closures run on the
//! rayon pool; without it they run as plain sequential iterators. Both paths
//! return results in input order, so callers see identical output.

/// Maps `f` over `items`, preserving order.
#[cfg(feature = "parallel")]
pub fn map_vec<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_vec<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    items.into_iter().map(f).collect()
}

/// Maps `f` over `0..len` and keeps the `Some` results, in index order.
#[cfg(feature = "parallel")]
pub fn filter_map_range<R, F>(len: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> Option<R> + Sync + Send,
{
    use rayon::prelude::*;
    (0..len).into_par_iter().filter_map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn filter_map_range<R, F>(len: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> Option<R> + Sync + Send,
{
    (0..len).filter_map(f).collect()
}

/// Sequential reference versions, always compiled. Benches and tests use
/// them to compare against the default path.
pub mod seq {
    pub fn map_vec<T, R, F: Fn(T) -> R>(items: Vec<T>, f: F) -> Vec<R> {
        items.into_iter().map(f).collect()
    }

    pub fn filter_map_range<R, F: Fn(u64) -> Option<R>>(len: u64, f: F) -> Vec<R> {
        (0..len).filter_map(f).collect()
    }
}

/// How a bulk computation should be scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    /// Use the rayon pool when the `parallel` feature is enabled.
    #[default]
    Auto,
    /// Force a single-threaded run.
    Sequential,
}

impl Exec {
    pub fn map_vec<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        match self {
            Exec::Auto => map_vec(items, f),
            Exec::Sequential => seq::map_vec(items, f),
        }
    }

    pub fn filter_map_range<R, F>(self, len: u64, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(u64) -> Option<R> + Sync + Send,
    {
        match self {
            Exec::Auto => filter_map_range(len, f),
            Exec::Sequential => seq::filter_map_range(len, f),
        }
    }
}
