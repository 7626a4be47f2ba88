use num_complex::Complex64;
use serde::Serialize;

use super::eigen::{hermitian_eigenvalues, DEFAULT_TOL};
use crate::ensembles::{sample, EnsembleKind, EnsembleSpec};
use crate::error::{Result, RmtError};
use crate::parallel::map_trials;

/// Monte Carlo statistics of the normalized resolvent trace `tr (A - z)^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolventStats {
    pub n: usize,
    pub z: Complex64,
    pub trials: usize,
    pub mean: Complex64,
    /// `E |S - E S|^2` with the unbiased sample estimator.
    pub variance: f64,
    /// `32 / (N (Im z)^4)`.
    pub bound: f64,
    /// `|mean^2 + z mean + 1|`.
    pub residual: f64,
}

/// Variance of the resolvent trace of a normalized GOE matrix over `trials` draws.
pub fn resolvent_trace_variance(spec: &EnsembleSpec, z: Complex64, trials: usize) -> Result<ResolventStats> {
    if spec.kind != EnsembleKind::Goe {
        return Err(RmtError::Parameter("resolvent variance is defined for GOE".into()));
    }
    if !(z.im > 0.0) {
        return Err(RmtError::Domain(format!("resolvent needs Im z > 0, got {z}")));
    }
    if trials < 100 {
        return Err(RmtError::Parameter(format!("need at least 100 trials, got {trials}")));
    }
    let values = map_trials(trials, |t| {
        let m = sample(spec, t)?;
        let eigs = hermitian_eigenvalues(&m.entries, DEFAULT_TOL)?;
        Ok(eigs.iter().map(|&l| (l - z).inv()).sum::<Complex64>() / eigs.len() as f64)
    })?;
    let nt = trials as f64;
    let mean = values.iter().sum::<Complex64>() / nt;
    let variance = values.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / (nt - 1.0);
    Ok(ResolventStats {
        n: spec.n,
        z,
        trials,
        mean,
        variance,
        bound: 32.0 / (spec.n as f64 * z.im.powi(4)),
        residual: (mean * mean + z * mean + 1.0).norm(),
    })
}
