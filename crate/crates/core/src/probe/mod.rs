//! Finite-field realization of the tangent-space probe: random flags, the
//! constrained hom space, Schubert positions, induced flags and kernel
//! filtrations.

mod field;
mod filtration;
mod flag;
mod hom;
mod matrix;

pub use field::{PrimeField, DEFAULT_PRIME};
pub use filtration::{
    build_filtration, verify_filtration, FiltrationCertificate, FiltrationCheck, FiltrationReport,
};
pub use flag::{
    induced_flags, position_index, random_flag, rank_profile, schubert_position, FlagBasis,
    InducedFlags, Position, Quotient, Subspace,
};
pub use hom::{
    certify_nonzero, generic_kernel_element, hom_constraints, hom_space, respects_flags, HomSpace,
    KernelSample, ProbeFlags, ProbeReport, ProbeVerdict,
};
pub use matrix::{Matrix, Rref};
