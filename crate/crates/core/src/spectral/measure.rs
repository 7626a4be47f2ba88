use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::PI;

use crate::error::{Result, RmtError};
use crate::hermite::{KernelDensity, KernelKind};
use crate::quadrature::integrate_with_breaks;
use crate::rng::trial_rng;

/// Semicircle density `sqrt(4 - x^2) / (2 pi)` on `[-2, 2]`.
pub fn semicircle_density(x: f64) -> f64 {
    if x.abs() >= 2.0 {
        0.0
    } else {
        (4.0 - x * x).sqrt() / (2.0 * PI)
    }
}

/// Closed-form semicircle distribution function.
pub fn semicircle_cdf(x: f64) -> f64 {
    if x <= -2.0 {
        0.0
    } else if x >= 2.0 {
        1.0
    } else {
        0.5 + x * (4.0 - x * x).sqrt() / (4.0 * PI) + (x / 2.0).asin() / PI
    }
}

/// Marchenko–Pastur density with ratio `c = N/p` in `(0, 1]`, for `W = X X^*`
/// with `X` of size N x p and entries of variance `1/p`.
pub fn marchenko_pastur_density(c: f64, x: f64) -> f64 {
    let (a, b) = mp_edges(c);
    if x <= a || x >= b {
        0.0
    } else {
        ((b - x) * (x - a)).sqrt() / (2.0 * PI * c * x)
    }
}

fn mp_edges(c: f64) -> (f64, f64) {
    let s = c.sqrt();
    ((1.0 - s).powi(2), (1.0 + s).powi(2))
}

/// A probability measure on the line or the plane with a common
/// evaluate / moment / sample / Stieltjes interface.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralMeasure {
    /// Uniform measure on a sorted list of real eigenvalues.
    Empirical(Vec<f64>),
    /// Uniform measure on complex eigenvalues.
    EmpiricalComplex(Vec<Complex64>),
    Semicircle,
    MarchenkoPastur { ratio: f64 },
    /// Uniform distribution on the unit disc.
    CircularUniform,
    FiniteNKernel(KernelDensity),
}

impl SpectralMeasure {
    /// Empirical measure of real eigenvalues; sorts its input.
    pub fn empirical(mut eigs: Vec<f64>) -> Self {
        eigs.sort_by(f64::total_cmp);
        SpectralMeasure::Empirical(eigs)
    }

    pub fn marchenko_pastur(ratio: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio <= 1.0) {
            return Err(RmtError::Parameter(format!("Marchenko–Pastur ratio {ratio} not in (0, 1]")));
        }
        Ok(SpectralMeasure::MarchenkoPastur { ratio })
    }

    pub fn mass(&self) -> f64 {
        1.0
    }

    /// Whether the measure lives on the real line.
    pub fn is_real(&self) -> bool {
        match self {
            SpectralMeasure::Empirical(_)
            | SpectralMeasure::Semicircle
            | SpectralMeasure::MarchenkoPastur { .. } => true,
            SpectralMeasure::FiniteNKernel(k) => matches!(k.kind, KernelKind::GueHermite(_)),
            SpectralMeasure::EmpiricalComplex(_) | SpectralMeasure::CircularUniform => false,
        }
    }

    /// Lebesgue density at a real point, for absolutely continuous measures on the line.
    pub fn density(&self, x: f64) -> Option<f64> {
        match self {
            SpectralMeasure::Semicircle => Some(semicircle_density(x)),
            SpectralMeasure::MarchenkoPastur { ratio } => Some(marchenko_pastur_density(*ratio, x)),
            SpectralMeasure::FiniteNKernel(k) if self.is_real() => Some(k.eval(Complex64::new(x, 0.0))),
            _ => None,
        }
    }

    /// Density with respect to area, for absolutely continuous measures on the plane.
    pub fn density_complex(&self, z: Complex64) -> Option<f64> {
        match self {
            SpectralMeasure::CircularUniform => Some(if z.norm() <= 1.0 { 1.0 / PI } else { 0.0 }),
            SpectralMeasure::FiniteNKernel(k) if !self.is_real() => Some(k.eval(z)),
            _ => None,
        }
    }

    /// Interval carrying the measure up to double-precision noise, for real measures.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            SpectralMeasure::Empirical(v) => Some((*v.first()?, *v.last()?)),
            SpectralMeasure::Semicircle => Some((-2.0, 2.0)),
            SpectralMeasure::MarchenkoPastur { ratio } => Some(mp_edges(*ratio)),
            SpectralMeasure::FiniteNKernel(k) if self.is_real() => {
                let r = k.support_radius();
                Some((-r, r))
            }
            _ => None,
        }
    }

    /// Break points for quadrature of the density: support ends plus interior kinks.
    pub(crate) fn breaks(&self) -> Option<Vec<f64>> {
        let (a, b) = self.support()?;
        let mut br = vec![a, b];
        if let SpectralMeasure::FiniteNKernel(k) = self {
            if let KernelKind::GueHermite(n) = k.kind {
                let edge = if k.normalized { 2.0 } else { 2.0 * (n as f64).sqrt() };
                br.extend([-edge, 0.0, edge]);
            }
        }
        br.sort_by(f64::total_cmp);
        br.dedup();
        Some(br)
    }

    /// `int f dmu` for real absolutely continuous measures, by adaptive quadrature.
    pub(crate) fn integrate_real(&self, f: impl Fn(f64) -> f64, extra_breaks: &[f64], tol: f64) -> Result<f64> {
        let mut br = self.breaks().ok_or_else(|| RmtError::Domain("measure has no density on the line".into()))?;
        let (a, b) = (br[0], br[br.len() - 1]);
        br.extend(extra_breaks.iter().copied().filter(|&x| x > a && x < b));
        br.sort_by(f64::total_cmp);
        br.dedup();
        let rho = |x: f64| self.density(x).unwrap_or(0.0);
        Ok(integrate_with_breaks(|x| f(x) * rho(x), &br, tol, 0.0)?.value)
    }

    /// `int z^k dmu(z)`. Real measures return a real number in the real part.
    pub fn moment(&self, k: u32) -> Result<Complex64> {
        match self {
            SpectralMeasure::Empirical(v) => {
                if v.is_empty() {
                    return Err(RmtError::Domain("empty empirical measure".into()));
                }
                Ok(Complex64::new(v.iter().map(|x| x.powi(k as i32)).sum::<f64>() / v.len() as f64, 0.0))
            }
            SpectralMeasure::EmpiricalComplex(v) => {
                if v.is_empty() {
                    return Err(RmtError::Domain("empty empirical measure".into()));
                }
                Ok(v.iter().map(|z| z.powu(k)).sum::<Complex64>() / v.len() as f64)
            }
            SpectralMeasure::CircularUniform => Ok(Complex64::new(if k == 0 { 1.0 } else { 0.0 }, 0.0)),
            SpectralMeasure::FiniteNKernel(kd) if !self.is_real() => {
                // rotation invariant: only the mass survives
                if k == 0 {
                    let r = kd.support_radius();
                    let v = integrate_with_breaks(
                        |t| 2.0 * PI * t * kd.eval(Complex64::new(t, 0.0)),
                        &[0.0, r.min(1.0), r],
                        1e-12,
                        0.0,
                    )?;
                    Ok(Complex64::new(v.value, 0.0))
                } else {
                    Ok(Complex64::new(0.0, 0.0))
                }
            }
            _ => Ok(Complex64::new(self.integrate_real(|x| x.powi(k as i32), &[], 1e-12)?, 0.0)),
        }
    }

    /// `count` independent draws, reproducible from `seed`. Real measures
    /// return points on the real axis.
    pub fn sample(&self, seed: u64, count: usize) -> Result<Vec<Complex64>> {
        let mut rng = trial_rng(seed, 0);
        match self {
            SpectralMeasure::Empirical(v) => {
                if v.is_empty() {
                    return Err(RmtError::Domain("empty empirical measure".into()));
                }
                Ok((0..count).map(|_| Complex64::new(v[rng.random_range(0..v.len())], 0.0)).collect())
            }
            SpectralMeasure::EmpiricalComplex(v) => {
                if v.is_empty() {
                    return Err(RmtError::Domain("empty empirical measure".into()));
                }
                Ok((0..count).map(|_| v[rng.random_range(0..v.len())]).collect())
            }
            SpectralMeasure::CircularUniform => Ok((0..count)
                .map(|_| Complex64::from_polar(rng.random::<f64>().sqrt(), 2.0 * PI * rng.random::<f64>()))
                .collect()),
            SpectralMeasure::FiniteNKernel(kd) if !self.is_real() => {
                let rmax = kd.support_radius();
                let table = CdfTable::build(|t| 2.0 * PI * t * kd.eval(Complex64::new(t, 0.0)), 0.0, rmax)?;
                Ok((0..count)
                    .map(|_| Complex64::from_polar(table.invert(rng.random()), 2.0 * PI * rng.random::<f64>()))
                    .collect())
            }
            _ => {
                let (a, b) = self.support().expect("real continuous measure");
                let table = CdfTable::build(|x| self.density(x).unwrap_or(0.0), a, b)?;
                Ok((0..count).map(|_| Complex64::new(table.invert(rng.random()), 0.0)).collect())
            }
        }
    }
}

/// Tabulated distribution function for inverse-transform sampling.
struct CdfTable {
    grid: Vec<f64>,
    cdf: Vec<f64>,
}

impl CdfTable {
    const CELLS: usize = 2048;

    fn build(f: impl Fn(f64) -> f64, a: f64, b: f64) -> Result<Self> {
        let h = (b - a) / Self::CELLS as f64;
        let grid: Vec<f64> = (0..=Self::CELLS).map(|i| a + h * i as f64).collect();
        let mut cdf = vec![0.0; grid.len()];
        for i in 0..Self::CELLS {
            let cell = integrate_with_breaks(&f, &[grid[i], grid[i + 1]], 1e-13, 0.0)?.value;
            cdf[i + 1] = cdf[i] + cell.max(0.0);
        }
        let total = cdf[Self::CELLS];
        if !(total > 0.0) {
            return Err(RmtError::Domain("distribution has no mass on its window".into()));
        }
        for c in &mut cdf {
            *c /= total;
        }
        Ok(Self { grid, cdf })
    }

    fn invert(&self, u: f64) -> f64 {
        let i = self.cdf.partition_point(|&c| c < u).clamp(1, self.cdf.len() - 1);
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let t = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.5 };
        self.grid[i - 1] + t * (self.grid[i] - self.grid[i - 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;

    #[test]
    fn closed_forms_integrate_to_one() {
        let semi = integrate(semicircle_density, -2.0, 2.0, 1e-11, 0.0).unwrap().value;
        assert!((semi - 1.0).abs() < 1e-8);
        for c in [0.25, 0.5, 1.0] {
            let m = SpectralMeasure::marchenko_pastur(c).unwrap();
            let v = m.moment(0).unwrap().re;
            assert!((v - 1.0).abs() < 1e-8, "c={c}: {v}");
        }
        let k = SpectralMeasure::FiniteNKernel(KernelDensity::gue(7, true));
        assert!((k.moment(0).unwrap().re - 1.0).abs() < 1e-8);
        let g = SpectralMeasure::FiniteNKernel(KernelDensity::ginibre(7, true));
        assert!((g.moment(0).unwrap().re - 1.0).abs() < 1e-8);
    }

    #[test]
    fn semicircle_moments_are_catalan() {
        let expect = [1.0, 0.0, 1.0, 0.0, 2.0, 0.0, 5.0, 0.0, 14.0, 0.0, 42.0];
        for (k, &e) in expect.iter().enumerate() {
            let m = SpectralMeasure::Semicircle.moment(k as u32).unwrap().re;
            assert!((m - e).abs() < 1e-6, "k={k}: {m}");
        }
    }

    #[test]
    fn marchenko_pastur_mean_is_one() {
        // E[x] = 1 and E[x^2] = 1 + c
        for c in [0.3, 0.5, 1.0] {
            let m = SpectralMeasure::marchenko_pastur(c).unwrap();
            assert!((m.moment(1).unwrap().re - 1.0).abs() < 1e-8);
            assert!((m.moment(2).unwrap().re - (1.0 + c)).abs() < 1e-8);
        }
        assert!(SpectralMeasure::marchenko_pastur(1.5).is_err());
    }

    #[test]
    fn cdf_matches_density() {
        for &x in &[-1.5, 0.0, 0.7, 1.99] {
            let q = integrate(semicircle_density, -2.0, x, 1e-12, 0.0).unwrap().value;
            assert!((semicircle_cdf(x) - q).abs() < 1e-9);
        }
    }

    #[test]
    fn sampling_reproduces_moments() {
        let xs = SpectralMeasure::Semicircle.sample(3, 40_000).unwrap();
        let m2 = xs.iter().map(|z| z.re * z.re).sum::<f64>() / xs.len() as f64;
        assert!((m2 - 1.0).abs() < 0.03, "{m2}");
        assert_eq!(xs, SpectralMeasure::Semicircle.sample(3, 40_000).unwrap());
        let zs = SpectralMeasure::CircularUniform.sample(4, 40_000).unwrap();
        assert!(zs.iter().all(|z| z.norm() <= 1.0));
        let r2 = zs.iter().map(|z| z.norm_sqr()).sum::<f64>() / zs.len() as f64;
        assert!((r2 - 0.5).abs() < 0.01);
    }

    #[test]
    fn empirical_basics() {
        let m = SpectralMeasure::empirical(vec![3.0, -1.0, 1.0]);
        assert_eq!(m, SpectralMeasure::Empirical(vec![-1.0, 1.0, 3.0]));
        assert_eq!(m.moment(1).unwrap().re, 1.0);
        assert_eq!(m.support(), Some((-1.0, 3.0)));
    }
}
