//! Ordered parallel maps. Results always come back in index order, so the
//! worker count never changes what a caller sees.

use crate::error::{Result, WitnessError};

#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..len).map(f).collect()
}

/// Run `op` on a pool of `workers` threads, or on the global pool for `None`.
#[cfg(feature = "parallel")]
pub fn with_workers<T, F>(workers: Option<usize>, op: F) -> Result<T>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    match workers {
        None => Ok(op()),
        Some(0) => Err(WitnessError::domain("worker count must be at least 1")),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| WitnessError::domain(format!("thread pool: {e}")))?;
            Ok(pool.install(op))
        }
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_workers<T, F>(workers: Option<usize>, op: F) -> Result<T>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    if workers == Some(0) {
        return Err(WitnessError::domain("worker count must be at least 1"));
    }
    Ok(op())
}
