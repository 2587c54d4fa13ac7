//! Worker-count control. Parallel code paths merge results in sequential
//! order, so output never depends on the number of workers.

/// Runs `f` on a dedicated pool of `workers` threads (at least one).
pub fn with_workers<R, F>(workers: usize, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    match rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
    {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
