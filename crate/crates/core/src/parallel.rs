use crate::error::{Error, Result};

/// Runs `work` on a pool with `threads` workers; `0` uses the global pool.
pub(crate) fn with_pool<R: Send>(threads: usize, work: impl FnOnce() -> R + Send) -> Result<R> {
    if threads == 0 {
        return Ok(work());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Resource(format!("cannot start {threads} worker threads: {e}")))?;
    Ok(pool.install(work))
}
