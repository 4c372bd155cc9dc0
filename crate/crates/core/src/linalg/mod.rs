//! Dense factorizations and norms.

pub mod cholesky;
pub mod lu;
pub mod norms;
pub mod qr;
pub mod svd;

pub use cholesky::{cholesky, right_solve_spd, solve_lower, solve_lower_transpose};
pub use lu::inverse;
pub use norms::{
    cond2, cond2_from_sigma, frobenius_norm, nuclear_norm, rank, sigma_bounds, spectral_norm, BoundsMode,
    SigmaBounds, DEFAULT_RANK_TOL,
};
pub use qr::qr_householder;
pub use svd::{svd, SvdResult};
