//! Partitions, Schur-positive specializations and Schur function evaluation.

mod dims;
mod partition;
mod schur;
mod specialization;
mod sympoly;

pub use dims::{binomial, dim_ssyt, dim_std, dim_std_f64, factorial};
pub use partition::{
    partitions_in_box, partitions_of, partitions_of_capped, partitions_up_to, subpartitions_of, supersets_of, Partition,
    DEFAULT_ENUM_CAP,
};
pub use schur::{
    complete_homogeneous, pair_h, pair_h_log, pair_h_series, schur_bialternant, schur_eval, schur_jacobi_trudi,
    schur_spec, skew_schur_spec, SpecTable,
};
pub use specialization::{SpecMode, Specialization};
pub use sympoly::{monomial_eval, monomial_orbit, Basis, SymPoly};

/// Default truncation cap for infinite sums over partitions.
pub const DEFAULT_TRUNCATION: u32 = 30;
