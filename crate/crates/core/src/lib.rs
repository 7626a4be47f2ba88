pub mod edge;
pub mod ensembles;
pub mod combinatorics;
pub mod error;
pub mod harer_zagier;
pub mod hermite;
pub mod matrix;
pub mod parallel;
pub mod paths;
pub mod quadrature;
pub mod rng;
pub mod rsk;
pub mod spectral;

pub use error::{Result, RmtError};
