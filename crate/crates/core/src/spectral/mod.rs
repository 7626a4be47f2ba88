//! Eigensolvers, spectral measures, Stieltjes transforms and their inversion,
//! histograms, and resolvent concentration checks.

pub mod eigen;
mod histogram;
mod measure;
mod resolvent;
mod stieltjes;

pub use eigen::{general_eigenvalues, hermitian_eigenvalues, tridiagonal_eigenvalues, DEFAULT_TOL};
pub use histogram::{esd_histogram, Histogram, HistogramMode};
pub use measure::{semicircle_cdf, semicircle_density, marchenko_pastur_density, SpectralMeasure};
pub use resolvent::{resolvent_trace_variance, ResolventStats};
pub use stieltjes::{semicircle_stieltjes, stieltjes_invert, InversionResult, DEFAULT_EPS_SCHEDULE};
