//! Soft-edge statistics: the Airy function, the Painlevé II route to the
//! Tracy–Widom law `F_2`, a low-order Fredholm cross-check, and Monte Carlo
//! for the rescaled largest eigenvalue.

mod airy;
mod painleve;

pub use airy::{airy, airy_pair, airy_prime, AIRY_WINDOW};
pub use painleve::{
    f2_cdf, painleve2_solve, F2Table, F2Value, PainleveSolution, DEFAULT_STEP, DEFAULT_T_RANGE, DEFAULT_X0,
    DEFAULT_X_MIN,
};

use crate::ensembles::{sample, EnsembleKind, EnsembleSpec, Normalization};
use crate::error::{param, Result};
use crate::hermite::hermite_function;
use crate::parallel::map_trials;
use crate::quadrature::gauss_legendre_on;
use crate::spectral::hermitian_eigenvalues;

/// Airy kernel `(Ai(x) Ai'(y) - Ai'(x) Ai(y)) / (x - y)`, with the diagonal
/// `Ai'(x)^2 - x Ai(x)^2`.
pub fn airy_kernel(x: f64, y: f64) -> Result<f64> {
    let (ax, dx) = airy_pair(x)?;
    if (x - y).abs() < 1e-9 {
        return Ok(dx * dx - x * ax * ax);
    }
    let (ay, dy) = airy_pair(y)?;
    Ok((ax * dy - dx * ay) / (x - y))
}

/// Fredholm series `sum_{r <= order} (-1)^r / r! int_{[t, t+12]^r} det(A(x_i, x_j))`
/// by Gauss–Legendre Nyström discretization with `nodes` points. Power sums of
/// the discretized operator feed Newton's identities, so `order` up to 3 costs
/// a few matrix products.
pub fn fredholm_f2(t: f64, order: usize, nodes: usize) -> Result<f64> {
    if order > 3 {
        return param("Fredholm cross-check is truncated at order 3");
    }
    if t + 12.0 > AIRY_WINDOW.1 || t < AIRY_WINDOW.0 {
        return param(format!("t = {t} puts [t, t+12] outside the Airy window"));
    }
    let (xs, ws) = gauss_legendre_on(nodes, t, t + 12.0);
    let m = nodes;
    let mut k = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            k[i * m + j] = ws[i].sqrt() * airy_kernel(xs[i], xs[j])? * ws[j].sqrt();
        }
    }
    let mul = |a: &[f64], b: &[f64]| {
        let mut c = vec![0.0; m * m];
        for i in 0..m {
            for l in 0..m {
                let ail = a[i * m + l];
                for j in 0..m {
                    c[i * m + j] += ail * b[l * m + j];
                }
            }
        }
        c
    };
    let trace = |a: &[f64]| (0..m).map(|i| a[i * m + i]).sum::<f64>();
    let k2 = mul(&k, &k);
    let p = [trace(&k), trace(&k2), trace(&mul(&k2, &k))];
    // elementary symmetric functions from power sums
    let e1 = p[0];
    let e2 = (e1 * p[0] - p[1]) / 2.0;
    let e3 = (e2 * p[0] - e1 * p[1] + p[2]) / 3.0;
    Ok([1.0, -e1, e2, -e3][..=order].iter().sum())
}

/// Kolmogorov–Smirnov distance between a sample and a continuous distribution function.
pub fn ks_distance(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

/// `N^{2/3} (lambda_max - 2)` for `trials` draws of a normalized GUE(N).
pub fn edge_statistic_mc(spec: &EnsembleSpec, trials: usize) -> Result<Vec<f64>> {
    if spec.kind != EnsembleKind::Gue || spec.normalization != Normalization::Normalized {
        return param("edge statistic is defined for the normalized GUE");
    }
    if trials < 100 {
        return param(format!("need at least 100 trials, got {trials}"));
    }
    let scale = (spec.n as f64).cbrt().powi(2);
    map_trials(trials, |t| {
        let m = sample(spec, t)?;
        let eigs = hermitian_eigenvalues(&m.entries, crate::spectral::DEFAULT_TOL)?;
        Ok(scale * (eigs[eigs.len() - 1] - 2.0))
    })
}

/// `N^{1/12} Psi_N(2 sqrt N + x N^{-1/6})`.
pub fn rescaled_hermite(n: usize, x: f64) -> f64 {
    let nf = n as f64;
    nf.powf(1.0 / 12.0) * hermite_function(n, 2.0 * nf.sqrt() + x * nf.powf(-1.0 / 6.0))
}
