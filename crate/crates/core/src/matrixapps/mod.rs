//! Matrix operators built on the composite calculus: the matrix-fractional
//! function (real and complex), variational Gram functions and convex
//! spectral functions.

mod mff;
mod spectral;
mod vgf;

pub use mff::{mff_gamma, mff_map, CMat, MatrixPair};
pub use spectral::{spectral_conjugate, spectral_eval, spectral_subdifferential, von_neumann_gap, SpectralSpec};
pub use vgf::{vgf_conjugate, vgf_eval, vgf_oracle, vgf_subdifferential, VgfConjugate, VgfSet};
