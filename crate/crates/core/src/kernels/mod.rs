//! Correlation kernels of Schur measures and their bulk and edge limits.

mod airy;
mod lattice;
mod limits;

pub use airy::{
    airy_ai, airy_ai_pair, airy_ai_prime, airy_kernel, airy_kernel_closed, airy_kernel_closed_matrix,
    airy_kernel_contour, airy_series, AiryValue,
};
pub use lattice::{
    plancherel_kernel, plancherel_kernel_contour, schur_kernel, schur_kernel_window, site_value, ContourPair,
    ContourSpec, KernelWindow, SeriesKernel, PLANCHEREL_INNER, PLANCHEREL_OUTER,
};
pub use limits::{bulk_deviation, edge_deviation, edge_site, sine_kernel};

use crate::symcore::Specialization;

/// Kernel variant with its evaluation route.
#[derive(Clone, Debug)]
pub enum KernelSpec {
    Schur { rho1: Specialization, rho2: Specialization, contours: ContourPair },
    Plancherel { theta: f64 },
    Sine { phi: f64 },
    Airy,
}
