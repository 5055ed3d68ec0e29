//! Parallel/sequential execution of independent work items.
//!
//! All Monte Carlo engines funnel their per-trial work through [`map_reduce`]
//! or [`map_collect`]. With the `parallel` feature (default) these fan out
//! over rayon; without it, or with [`Execution::Sequential`], they run in
//! index order on the calling thread. Reductions are commutative integer or
//! multiset merges and `map_collect` preserves index order, so the output is
//! byte-identical either way.

/// How to run a batch of independent items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    /// rayon when the `parallel` feature is enabled, sequential otherwise.
    #[default]
    Auto,
    /// Always run on the calling thread, in index order.
    Sequential,
}

/// Map `f` over `0..n` and fold the outputs with `merge`.
pub fn map_reduce<T, F, M>(exec: Execution, n: usize, identity: T, f: F, merge: M) -> T
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
    M: Fn(T, T) -> T + Send + Sync,
{
    match exec {
        Execution::Sequential => (0..n).map(f).fold(identity, &merge),
        Execution::Auto => map_reduce_auto(n, identity, f, merge),
    }
}

#[cfg(feature = "parallel")]
fn map_reduce_auto<T, F, M>(n: usize, identity: T, f: F, merge: M) -> T
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
    M: Fn(T, T) -> T + Send + Sync,
{
    use rayon::prelude::*;
    (0..n)
        .into_par_iter()
        .map(f)
        .reduce_with(&merge)
        .map_or_else(|| identity, |v| v)
}

#[cfg(not(feature = "parallel"))]
fn map_reduce_auto<T, F, M>(n: usize, identity: T, f: F, merge: M) -> T
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
    M: Fn(T, T) -> T + Send + Sync,
{
    (0..n).map(f).fold(identity, &merge)
}

/// Map `f` over `0..n`, collecting outputs in index order.
pub fn map_collect<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        Execution::Sequential => (0..n).map(f).collect(),
        Execution::Auto => map_collect_auto(n, f),
    }
}

#[cfg(feature = "parallel")]
fn map_collect_auto<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_collect_auto<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Run `body` on a pool with `workers` threads (`None` = default pool).
/// Without the `parallel` feature the body just runs on the calling thread.
pub fn with_workers<R: Send>(workers: Option<usize>, body: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        match workers {
            Some(w) => rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .expect("thread pool")
                .install(body),
            None => body(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        body()
    }
}
