//! Exact samplers, determinantal kernels and Fredholm determinants for Schur
//! and Macdonald processes.

pub mod error;
pub mod linalg;
pub mod macdonald;
pub mod quadrature;
pub mod rng;
pub mod samplers;
pub mod detcore;
pub mod fredholm;
pub mod kernels;
pub mod symcore;

pub use error::{Error, Result};
pub use rng::RngStream;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
