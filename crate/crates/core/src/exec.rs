//! Batch execution of independent per-item work.
//!
//! Sweeps over seeded random points and optimizer restarts are embarrassingly
//! parallel. With the `parallel` feature (on by default) they run on the rayon
//! pool; without it, or with [`Execution::Sequential`], they run in a plain
//! loop. Results always come back in index order, so both paths produce
//! identical output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Defaults to `Parallel` when the feature is enabled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Execution {
    /// `f(0), f(1), …, f(len − 1)` in order.
    pub fn map<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..len).map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..len).into_par_iter().map(f).collect(),
        }
    }

    /// Like [`Execution::map`] but stops at the first error (lowest index
    /// among those observed when running in parallel).
    pub fn try_map<T, E, F>(self, len: usize, f: F) -> Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(usize) -> Result<T, E> + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..len).map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..len).into_par_iter().map(f).collect(),
        }
    }

    /// Folds `f(i)` with an associative, commutative `combine`.
    pub fn reduce<T, F, C>(self, len: usize, identity: T, f: F, combine: C) -> T
    where
        T: Send + Sync + Clone,
        F: Fn(usize) -> T + Sync + Send,
        C: Fn(T, T) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..len).map(f).fold(identity, combine),
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..len)
                .into_par_iter()
                .map(f)
                .reduce(|| identity.clone(), combine),
        }
    }
}
