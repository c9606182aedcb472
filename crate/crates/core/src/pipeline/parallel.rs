use rayon::prelude::*;

use crate::error::{domain, Result};

pub const THREADS_ENV: &str = "OTTO_TEM_THREADS";

/// Worker count: `OTTO_TEM_THREADS` if set, otherwise rayon's default.
pub fn worker_count() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => domain(format!(
                "{THREADS_ENV} must be a positive integer, got '{v}'"
            )),
        },
        Err(_) => Ok(rayon::current_num_threads()),
    }
}

/// Maps `f` over `items` on a bounded pool; output order follows input order.
pub fn par_map<T, U, F>(items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count()?)
        .build()
        .map_err(|e| crate::Error::Domain(format!("cannot start worker pool: {e}")))?;
    pool.install(|| items.par_iter().map(&f).collect())
}
