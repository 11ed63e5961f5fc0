use rayon::ThreadPoolBuilder;

/// Default worker count when the caller passes 0.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Runs `f` inside a dedicated rayon pool with `workers` threads
/// (0 = all cores). Every parallel routine in this crate reduces with
/// order-independent merges, so results do not depend on `workers`.
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> R {
    let n = if workers == 0 {
        default_workers()
    } else {
        workers
    };
    match ThreadPoolBuilder::new().num_threads(n).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
