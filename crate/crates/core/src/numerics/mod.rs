//! Dense complex linear algebra.

pub mod eigen;
pub mod expm;
pub mod hermitian;
pub mod lu;
pub mod matrix;
pub mod svd;

pub use eigen::{eigenvalues, spectral_decompose, spectral_order, SpectralDecomposition};
pub use expm::{mat_exp, propagator_powers};
pub use hermitian::{hermitian_eigen, psd_sqrt, HermitianEigen};
pub use lu::{inverse, solve};
pub use matrix::{dot, inner, norm2, ComplexMatrix, C64};
pub use svd::{moore_penrose_pinv, singular_values};
