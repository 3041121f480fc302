//! Pipeline driver for the SIMON32 differential workbench.

pub mod config;
pub mod error;
pub mod output;
pub mod stages;
pub mod svg;

pub use config::{Format, RunConfig};
pub use error::CliError;

/// Runs `f` on a rayon pool of `workers` threads, or on the global pool.
pub fn with_workers<T: Send>(
    workers: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T, CliError> {
    match workers {
        None => Ok(f()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| CliError::Config(format!("cannot start {n} workers: {e}"))),
    }
}
