//! Determinantal path counting: Karlin–McGregor for walks on the integers,
//! Gessel–Viennot for weighted acyclic graphs, Catalan Hankel determinants,
//! and ordering checks for discretized Dyson walks.

mod dag;
mod walks;

pub use dag::{
    bareiss_det, catalan_hankel_det, catalan_lattice, gv_determinant, gv_path_weights, gv_vertex_disjoint_sum,
    CatalanLattice, WeightedDag, MAX_GV_TUPLE, MAX_GV_VISITS,
};
pub use walks::{km_determinant, km_enumerate, transition_matrix, WalkSpec, MAX_HORIZON, MAX_JOINT_STATES, MAX_WALKERS};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::fmt::Write as _;

use crate::ensembles::{sample_dyson_walk, EnsembleSpec};
use crate::error::Result;
use crate::spectral::{hermitian_eigenvalues, DEFAULT_TOL};

/// Exact determinant by Gaussian elimination over the rationals.
pub fn rational_det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= &m[k][k];
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &m[k][k];
            for j in k..n {
                let v = &f * &m[k][j];
                m[i][j] -= v;
            }
        }
    }
    det
}

/// Sorted eigenvalues after each step of a Dyson walk.
pub fn dyson_trajectory(spec: &EnsembleSpec, steps: usize, delta: f64, trial: u64) -> Result<Vec<Vec<f64>>> {
    sample_dyson_walk(spec, steps, delta, trial)?
        .iter()
        .map(|m| hermitian_eigenvalues(&m.entries, DEFAULT_TOL))
        .collect()
}

/// Ordering report for a trajectory of sorted eigenvalue vectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DysonCheck {
    /// Steps at which two tracked eigenvalues coincide (zero spacing).
    pub violations: usize,
    /// `min_i (lambda_{i+1} - lambda_i)` per step; infinite for a single path.
    pub min_spacing_per_step: Vec<f64>,
    pub min_spacing: f64,
}

pub fn dyson_crossing_check(trajectory: &[Vec<f64>]) -> DysonCheck {
    let per_step: Vec<f64> = trajectory
        .iter()
        .map(|l| l.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min))
        .collect();
    DysonCheck {
        violations: per_step.iter().filter(|&&s| s <= 0.0).count(),
        min_spacing: per_step.iter().copied().fold(f64::INFINITY, f64::min),
        min_spacing_per_step: per_step,
    }
}

/// CSV `step,lambda_1,...,lambda_N` with steps numbered from 1.
pub fn dyson_csv(trajectory: &[Vec<f64>]) -> String {
    let n = trajectory.first().map_or(0, Vec::len);
    let mut out = String::from("step");
    for i in 1..=n {
        let _ = write!(out, ",lambda_{i}");
    }
    out.push('\n');
    for (k, l) in trajectory.iter().enumerate() {
        let _ = write!(out, "{}", k + 1);
        for x in l {
            let _ = write!(out, ",{x}");
        }
        out.push('\n');
    }
    out
}
