use num_complex::Complex64;

use super::measure::SpectralMeasure;
use crate::error::{Result, RmtError};

/// Geometric default schedule for the imaginary offset in [`stieltjes_invert`].
pub const DEFAULT_EPS_SCHEDULE: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];

/// Differences between levels below this are treated as exact agreement.
const AGREEMENT_TOL: f64 = 1e-9;
/// Extrapolated densities this negative are reported rather than clamped.
const NEGATIVITY_TOL: f64 = 1e-6;

fn check_upper(z: Complex64) -> Result<()> {
    if z.im > 0.0 && z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(RmtError::Domain(format!("Stieltjes transform needs Im z > 0, got {z}")))
    }
}

/// Stieltjes transform of the semicircle, the root of `S^2 + z S + 1 = 0` in
/// the upper half-plane.
pub fn semicircle_stieltjes(z: Complex64) -> Result<Complex64> {
    check_upper(z)?;
    let w = (z * z - 4.0).sqrt();
    // The two roots multiply to 1. Take the large one without cancellation and
    // recover the small one as its reciprocal.
    let big = if (z.conj() * w).re >= 0.0 { (-z - w) / 2.0 } else { (-z + w) / 2.0 };
    let small = big.inv();
    Ok(if big.im > 0.0 { big } else { small })
}

impl SpectralMeasure {
    /// `int (t - z)^{-1} dmu(t)` for measures on the real line.
    pub fn stieltjes(&self, z: Complex64) -> Result<Complex64> {
        check_upper(z)?;
        match self {
            SpectralMeasure::Semicircle => semicircle_stieltjes(z),
            SpectralMeasure::Empirical(v) => {
                if v.is_empty() {
                    return Err(RmtError::Domain("empty empirical measure".into()));
                }
                Ok(v.iter().map(|&l| (l - z).inv()).sum::<Complex64>() / v.len() as f64)
            }
            SpectralMeasure::EmpiricalComplex(_) | SpectralMeasure::CircularUniform => {
                Err(RmtError::Domain("Stieltjes transform needs a measure on the real line".into()))
            }
            _ if !self.is_real() => {
                Err(RmtError::Domain("Stieltjes transform needs a measure on the real line".into()))
            }
            _ => {
                let re = self.integrate_real(|t| ((t - z).inv()).re, &[z.re], 1e-10)?;
                let im = self.integrate_real(|t| ((t - z).inv()).im, &[z.re], 1e-10)?;
                Ok(Complex64::new(re, im))
            }
        }
    }
}

/// Density recovered from a Stieltjes transform on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct InversionResult {
    pub x: Vec<f64>,
    /// Extrapolated density at each grid point.
    pub density: Vec<f64>,
    pub eps: Vec<f64>,
    /// `levels[k][i]` is `Im S(x_i + i eps_k) / pi`.
    pub levels: Vec<Vec<f64>>,
    /// Grid indices whose levels oscillate or whose limit is clearly negative.
    pub flagged: Vec<usize>,
}

impl InversionResult {
    pub fn is_flagged(&self) -> bool {
        !self.flagged.is_empty()
    }
}

/// Invert a Stieltjes transform on `grid` equally spaced points of `[a, b]`
/// by evaluating `Im S(x + i eps) / pi` along a decreasing schedule and
/// extrapolating linearly in `eps` from the two smallest offsets.
pub fn stieltjes_invert<F>(s: F, a: f64, b: f64, eps: &[f64], grid: usize) -> Result<InversionResult>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if grid == 0 || !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(RmtError::Parameter(format!("bad inversion grid: [{a}, {b}] with {grid} points")));
    }
    if eps.is_empty() || eps.iter().any(|&e| !(e > 0.0)) || eps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(RmtError::Parameter("eps schedule must be positive and strictly decreasing".into()));
    }
    let x: Vec<f64> = if grid == 1 {
        vec![a]
    } else {
        (0..grid).map(|i| a + (b - a) * i as f64 / (grid - 1) as f64).collect()
    };
    let mut levels = Vec::with_capacity(eps.len());
    for &e in eps {
        let row = x
            .iter()
            .map(|&xi| s(Complex64::new(xi, e)).map(|v| v.im / std::f64::consts::PI))
            .collect::<Result<Vec<_>>>()?;
        levels.push(row);
    }
    let k = eps.len();
    let mut density = Vec::with_capacity(grid);
    let mut flagged = Vec::new();
    for i in 0..grid {
        let last = levels[k - 1][i];
        let mut d = if k >= 2 {
            let prev = levels[k - 2][i];
            let (e1, e0) = (eps[k - 1], eps[k - 2]);
            last - e1 * (last - prev) / (e1 - e0)
        } else {
            last
        };
        let diffs: Vec<f64> = (1..k).map(|j| levels[j][i] - levels[j - 1][i]).collect();
        let oscillates = diffs
            .windows(2)
            .any(|w| w[0].abs() > AGREEMENT_TOL && w[1].abs() > AGREEMENT_TOL && w[0].signum() != w[1].signum());
        if oscillates || d < -NEGATIVITY_TOL || !d.is_finite() {
            flagged.push(i);
        }
        if d < 0.0 && d >= -NEGATIVITY_TOL {
            d = 0.0;
        }
        density.push(d);
    }
    Ok(InversionResult { x, density, eps: eps.to_vec(), levels, flagged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::measure::semicircle_density;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn semicircle_transform_solves_quadratic_and_decays() {
        for z in [c(0.0, 1.0), c(1.0, 0.01), c(-3.0, 0.5), c(50.0, 1e-3), c(0.3, 1e4)] {
            let s = semicircle_stieltjes(z).unwrap();
            assert!(s.im > 0.0);
            assert!((s * s + z * s + 1.0).norm() < 1e-10 * (1.0 + z.norm()));
        }
        let y = 1e6;
        let s = semicircle_stieltjes(c(0.0, y)).unwrap();
        assert!((c(0.0, y) * s + 1.0).norm() < 1e-5);
    }

    #[test]
    fn lower_half_plane_is_rejected() {
        assert!(matches!(semicircle_stieltjes(c(0.0, 0.0)), Err(RmtError::Domain(_))));
        assert!(SpectralMeasure::Semicircle.stieltjes(c(1.0, -1.0)).is_err());
    }

    #[test]
    fn single_atom() {
        let m = SpectralMeasure::empirical(vec![0.0]);
        for z in [c(1.0, 1.0), c(-2.0, 0.1)] {
            assert!((m.stieltjes(z).unwrap() + z.inv()).norm() < 1e-15);
        }
    }

    #[test]
    fn quadrature_agrees_with_closed_form() {
        // semicircle routed through the same quadrature used for MP and kernels
        let mp = SpectralMeasure::marchenko_pastur(1.0).unwrap();
        for z in [c(0.5, 0.5), c(3.0, 0.2), c(-1.0, 2.0)] {
            let s = mp.stieltjes(z).unwrap();
            // MP(1) satisfies z S^2 + z S + 1 = 0
            assert!((z * s * s + z * s + 1.0).norm() < 1e-7, "{z}: {s}");
            assert!(s.im > 0.0);
        }
    }

    #[test]
    fn cauchy_transform_by_quadrature() {
        let f = |t: f64| 1.0 / (PI * (1.0 + t * t));
        let re = crate::quadrature::integrate(|u: f64| {
            let t = u.tan();
            f(t) * (t / (t * t + 1.0)) / u.cos().powi(2)
        }, -PI / 2.0, PI / 2.0, 1e-12, 0.0)
        .unwrap()
        .value;
        let im = crate::quadrature::integrate(|u: f64| {
            let t = u.tan();
            f(t) * (1.0 / (t * t + 1.0)) / u.cos().powi(2)
        }, -PI / 2.0, PI / 2.0, 1e-12, 0.0)
        .unwrap()
        .value;
        assert!(re.abs() < 1e-10);
        assert!((im - 0.5).abs() < 1e-10);
        let closed = (c(0.0, -1.0) - c(0.0, 1.0)).inv();
        assert!((closed - c(0.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn inversion_recovers_densities() {
        let r = stieltjes_invert(semicircle_stieltjes, -3.0, 3.0, &DEFAULT_EPS_SCHEDULE, 7).unwrap();
        assert!((r.density[3] - 1.0 / PI).abs() < 1e-4);
        assert!(r.density[0].abs() < 1e-4 && r.density[6].abs() < 1e-4);
        assert!(!r.is_flagged());

        let cauchy = |z: Complex64| Ok((c(0.0, -1.0) - z).inv());
        let r = stieltjes_invert(cauchy, 0.0, 0.0, &DEFAULT_EPS_SCHEDULE, 1).unwrap();
        assert!((r.density[0] - 1.0 / PI).abs() < 1e-4);

        let r = stieltjes_invert(semicircle_stieltjes, -1.9, 1.9, &DEFAULT_EPS_SCHEDULE, 381).unwrap();
        let sup = r.x.iter().zip(&r.density).map(|(&x, &d)| (d - semicircle_density(x)).abs()).fold(0.0, f64::max);
        assert!(sup < 1e-3, "{sup}");
    }

    #[test]
    fn oscillating_levels_are_flagged() {
        let bad = |z: Complex64| Ok(c(0.0, if (z.im.log10().round() as i64) % 2 == 0 { 1.0 } else { 2.0 }));
        let r = stieltjes_invert(bad, 0.0, 1.0, &DEFAULT_EPS_SCHEDULE, 3).unwrap();
        assert_eq!(r.flagged, vec![0, 1, 2]);
        assert!(stieltjes_invert(semicircle_stieltjes, 0.0, 1.0, &[1e-2, 1e-1], 3).is_err());
    }
}
