//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) sweeps run on the rayon pool; without
//! it, or when [`Parallelism::Sequential`] is requested at run time, they run
//! on the calling thread. Results are always returned in input order, so
//! output is deterministic either way.

/// Execution strategy for batch sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    /// Evaluate cells one after another on the calling thread.
    Sequential,
    /// Distribute cells over the rayon pool (sequential if the `parallel`
    /// feature is disabled).
    #[default]
    Parallel,
}

impl Parallelism {
    /// Whether this build can actually run in parallel.
    pub fn available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// Map `f` over `items`, preserving order.
pub fn map<T, R, F>(mode: Parallelism, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        Parallelism::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Map a fallible `f` over `items`, returning the first error in input order.
pub fn try_map<T, R, E, F>(mode: Parallelism, items: &[T], f: F) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<R, E> + Sync + Send,
{
    map(mode, items, f).into_iter().collect()
}
