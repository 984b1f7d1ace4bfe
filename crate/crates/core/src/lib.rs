//! Fermion–antifermion scattering in the staggered massive Thirring model,
//! entanglement-threshold datasets built from fermion density images, and
//! small quantum/classical convolutional classifiers trained on them.
//!
//! The crate is organised bottom-up:
//!
//! - [`lattice`]: Jordan–Wigner Hamiltonian, free modes, wave packets,
//!   Lanczos vacuum, Krylov propagation and density/entropy observables.
//! - [`dataset`]: parameter sweeps, separation-time labelling, balancing,
//!   PCA and angle scaling.
//! - [`qml`]: statevector circuits, HEE/TPE encodings, the QCNN and its
//!   analytic gradients.
//! - [`classical`]: the 51/113-parameter CNN baselines.
//! - [`train`]: MSE + Adam training, multi-run experiments and reports.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod config;
pub mod dataset;
pub mod error;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod qml;
pub mod state;
pub mod train;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use state::Statevector;

/// Version tag written into every file this crate produces.
pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable selecting the worker-pool size.
pub const THREADS_ENV: &str = "QSCATTER_THREADS";

/// Runs `f` inside a rayon pool sized from [`THREADS_ENV`] (default: available
/// parallelism).
pub fn with_worker_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| {
            Error::Config(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))
        })?,
        Err(_) => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
    Ok(pool.install(f))
}
