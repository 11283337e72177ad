use crate::error::CliError;

pub const THREADS_ENV: &str = "SQR_THREADS";

/// Worker pool sized by `SQR_THREADS`; unset or `0` lets rayon decide.
pub fn pool() -> Result<rayon::ThreadPool, CliError> {
    let n = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::usage(format!("{THREADS_ENV}={v} is not a non-negative integer")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| CliError::usage(format!("cannot start worker threads: {e}")))
}
