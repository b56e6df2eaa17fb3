use rayon::ThreadPoolBuilder;

/// Runs `f` on a pool of `workers` threads; `0` uses rayon's global pool.
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> R {
    if workers == 0 {
        return f();
    }
    match ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
