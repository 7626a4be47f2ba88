//! Hermite polynomials and functions, the Hermite and Ginibre kernels, and the
//! exact finite-N averaged eigenvalue densities they produce.
//!
//! Hermite functions are evaluated by the orthonormal three-term recursion
//! `Psi_{k+1} = (x Psi_k - sqrt(k) Psi_{k-1}) / sqrt(k+1)` carried with a
//! separate logarithmic scale, so neither factorials nor `exp(-x^2/4)` ever
//! overflow or underflow in intermediate steps.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Degree above which [`hermite_poly`] switches from the monic recursion to
/// the log-scaled normalized recursion.
pub const NAIVE_POLY_MAX_DEGREE: usize = 150;

/// Below this separation the Christoffel–Darboux quotient is replaced by its
/// confluent (derivative) form.
pub const CONFLUENT_THRESHOLD: f64 = 1e-6;

const RESCALE: f64 = 1e100;

fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// Monic Hermite polynomial `H_k(x)` (probabilists' convention, `x H_n = H_{n+1} + n H_{n-1}`).
pub fn hermite_poly(k: usize, x: f64) -> f64 {
    if k <= NAIVE_POLY_MAX_DEGREE {
        let (mut prev, mut cur) = (1.0, x);
        if k == 0 {
            return 1.0;
        }
        for n in 1..k {
            let next = x * cur - n as f64 * prev;
            prev = cur;
            cur = next;
        }
        return cur;
    }
    let s = ScaledPair::run(k, x);
    if s.cur == 0.0 {
        return 0.0;
    }
    let log_mag = s.cur.abs().ln() + s.log_scale + 0.25 * (2.0 * PI).ln() + 0.5 * ln_factorial(k) + 0.25 * x * x;
    s.cur.signum() * log_mag.exp()
}

/// `Psi_{k-1}` and `Psi_k` as `value * exp(log_scale)`.
#[derive(Debug, Clone, Copy)]
struct ScaledPair {
    prev: f64,
    cur: f64,
    log_scale: f64,
}

impl ScaledPair {
    fn start(x: f64) -> Self {
        Self { prev: 0.0, cur: 1.0, log_scale: -0.25 * x * x - 0.25 * (2.0 * PI).ln() }
    }

    /// Advance from `Psi_k` to `Psi_{k+1}`.
    fn step(&mut self, k: usize, x: f64) {
        let next = (x * self.cur - (k as f64).sqrt() * self.prev) / ((k + 1) as f64).sqrt();
        self.prev = self.cur;
        self.cur = next;
        if self.cur.abs() > RESCALE {
            self.cur /= RESCALE;
            self.prev /= RESCALE;
            self.log_scale += RESCALE.ln();
        }
    }

    fn run(k: usize, x: f64) -> Self {
        let mut s = Self::start(x);
        for j in 0..k {
            s.step(j, x);
        }
        s
    }

    fn unscale(v: f64, log_scale: f64) -> f64 {
        if v == 0.0 {
            0.0
        } else {
            v.signum() * (v.abs().ln() + log_scale).exp()
        }
    }

    fn current(&self) -> f64 {
        Self::unscale(self.cur, self.log_scale)
    }

    fn previous(&self) -> f64 {
        Self::unscale(self.prev, self.log_scale)
    }
}

/// Hermite function `Psi_k(x) = (2 pi)^{-1/4} (k!)^{-1/2} e^{-x^2/4} H_k(x)`.
pub fn hermite_function(k: usize, x: f64) -> f64 {
    ScaledPair::run(k, x).current()
}

/// `(Psi_{k-1}(x), Psi_k(x))`; the first entry is 0 for `k = 0`.
pub fn hermite_function_pair(k: usize, x: f64) -> (f64, f64) {
    let s = ScaledPair::run(k, x);
    (s.previous(), s.current())
}

/// `Psi_k'(x) = -(x/2) Psi_k(x) + sqrt(k) Psi_{k-1}(x)`.
pub fn hermite_function_derivative(k: usize, x: f64) -> f64 {
    let (prev, cur) = hermite_function_pair(k, x);
    -0.5 * x * cur + (k as f64).sqrt() * prev
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HermiteMode {
    /// Monic polynomials `H_k`.
    Polynomial,
    /// Orthonormal functions `Psi_k`.
    Function,
}

/// Evaluates all degrees `0..=max_degree` at a point in one pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HermiteEvaluator {
    pub max_degree: usize,
    pub mode: HermiteMode,
}

impl HermiteEvaluator {
    pub fn new(max_degree: usize, mode: HermiteMode) -> Self {
        Self { max_degree, mode }
    }

    pub fn values(&self, x: f64) -> Vec<f64> {
        match self.mode {
            HermiteMode::Function => {
                let mut out = Vec::with_capacity(self.max_degree + 1);
                let mut s = ScaledPair::start(x);
                out.push(s.current());
                for k in 0..self.max_degree {
                    s.step(k, x);
                    out.push(s.current());
                }
                out
            }
            HermiteMode::Polynomial => (0..=self.max_degree).map(|k| hermite_poly(k, x)).collect(),
        }
    }
}

/// Hermite kernel `K_N(x, y) = sum_{k<N} Psi_k(x) Psi_k(y)` by direct summation.
pub fn hermite_kernel_direct(n: usize, x: f64, y: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let ev = HermiteEvaluator::new(n - 1, HermiteMode::Function);
    let (px, py) = (ev.values(x), ev.values(y));
    px.iter().zip(&py).map(|(a, b)| a * b).sum()
}

/// Hermite kernel by the Christoffel–Darboux form
/// `sqrt(N) (Psi_N(x) Psi_{N-1}(y) - Psi_{N-1}(x) Psi_N(y)) / (x - y)`,
/// switching to the confluent derivative form when `|x - y| < 1e-6`.
pub fn hermite_kernel(n: usize, x: f64, y: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let rn = (n as f64).sqrt();
    if (x - y).abs() < CONFLUENT_THRESHOLD {
        let t = 0.5 * (x + y);
        let (pm1, pn) = hermite_function_pair(n, t);
        let pm2 = if n >= 2 { hermite_function_pair(n - 1, t).0 } else { 0.0 };
        let dpn = -0.5 * t * pn + rn * pm1;
        let dpm1 = -0.5 * t * pm1 + ((n - 1) as f64).sqrt() * pm2;
        return rn * (dpn * pm1 - dpm1 * pn);
    }
    let (xm1, xn) = hermite_function_pair(n, x);
    let (ym1, yn) = hermite_function_pair(n, y);
    rn * (xn * ym1 - xm1 * yn) / (x - y)
}

/// Averaged eigenvalue density of GUE(N). Unnormalized (unit-variance
/// entries): `p_N(mu) = K_N(mu, mu) / N`. Normalized: `q_N(l) = sqrt(N) p_N(sqrt(N) l)`.
pub fn gue_density_exact(n: usize, lambda: f64, normalized: bool) -> f64 {
    let nf = n as f64;
    if normalized {
        let s = nf.sqrt();
        s * hermite_kernel(n, s * lambda, s * lambda) / nf
    } else {
        hermite_kernel(n, lambda, lambda) / nf
    }
}

/// `P(Poisson(r) < n) = e^{-r} sum_{k<n} r^k / k!`, summed in log space.
pub fn poisson_cdf_below(n: usize, r: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if r == 0.0 {
        return 1.0;
    }
    let lr = r.ln();
    let mut log_term = -r;
    let mut logs = Vec::with_capacity(n);
    for k in 0..n {
        if k > 0 {
            log_term += lr - (k as f64).ln();
        }
        logs.push(log_term);
    }
    let peak = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (peak + logs.iter().map(|l| (l - peak).exp()).sum::<f64>().ln()).exp().min(1.0)
}

/// Averaged eigenvalue density of the complex Ginibre ensemble. Unnormalized:
/// `p_N(z) = e^{-|z|^2} sum_{k<N} |z|^{2k}/k! / (N pi)`. Normalized:
/// `q_N(z) = N p_N(sqrt(N) z)`.
pub fn ginibre_density_exact(n: usize, z: Complex64, normalized: bool) -> f64 {
    let nf = n as f64;
    if normalized {
        poisson_cdf_below(n, nf * z.norm_sqr()) / PI
    } else {
        poisson_cdf_below(n, z.norm_sqr()) / (nf * PI)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelKind {
    GueHermite(usize),
    Ginibre(usize),
}

/// Exact finite-N one-point density from a determinantal kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelDensity {
    pub kind: KernelKind,
    pub normalized: bool,
}

impl KernelDensity {
    pub fn gue(n: usize, normalized: bool) -> Self {
        Self { kind: KernelKind::GueHermite(n), normalized }
    }

    pub fn ginibre(n: usize, normalized: bool) -> Self {
        Self { kind: KernelKind::Ginibre(n), normalized }
    }

    /// Density at a point of the plane; GUE densities read only the real part.
    pub fn eval(&self, z: Complex64) -> f64 {
        match self.kind {
            KernelKind::GueHermite(n) => gue_density_exact(n, z.re, self.normalized),
            KernelKind::Ginibre(n) => ginibre_density_exact(n, z, self.normalized),
        }
    }

    /// Half-width of a window outside which the density is below double precision noise.
    pub fn support_radius(&self) -> f64 {
        match self.kind {
            KernelKind::GueHermite(n) => {
                let r = 2.0 * (n as f64).sqrt() + 12.0;
                if self.normalized {
                    r / (n as f64).sqrt()
                } else {
                    r
                }
            }
            KernelKind::Ginibre(n) => {
                let r = (n as f64).sqrt() + 9.0;
                if self.normalized {
                    r / (n as f64).sqrt()
                } else {
                    r
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, integrate_with_breaks};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn h4_values() {
        for (x, v) in [(0.0f64, 3.0), (1.0, -2.0), (2.0, -5.0)] {
            assert_eq!(hermite_poly(4, x), v);
        }
        assert_eq!(hermite_poly(2, 1.0), 0.0);
    }

    #[test]
    fn recursion_holds_on_grid() {
        for &x in &[-3.0, -0.5, 0.7, 2.5] {
            for n in 1..30 {
                let lhs = x * hermite_poly(n, x);
                let rhs = hermite_poly(n + 1, x) + n as f64 * hermite_poly(n - 1, x);
                assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn large_degree_polynomial_switches_mode() {
        // both branches agree near the switch
        let x = 3.3;
        let naive = {
            let (mut p, mut c) = (1.0, x);
            for n in 1..151 {
                let nx = x * c - n as f64 * p;
                p = c;
                c = nx;
            }
            c
        };
        let via = hermite_poly(151, x);
        assert!(((via - naive) / naive).abs() < 1e-9, "{via} vs {naive}");
    }

    #[test]
    fn functions_match_polynomial_definition() {
        for k in 0..12usize {
            for &x in &[-2.0f64, 0.0, 0.3, 1.7] {
                let fact: f64 = (1..=k).map(|i| i as f64).product();
                let direct =
                    (2.0 * PI).powf(-0.25) / fact.sqrt() * (-x * x / 4.0).exp() * hermite_poly(k, x);
                assert!(close(hermite_function(k, x), direct, 1e-13), "k={k}");
            }
        }
    }

    #[test]
    fn orthonormality() {
        for n in 0..=10 {
            for m in 0..=n {
                let r = integrate(|x| hermite_function(n, x) * hermite_function(m, x), -20.0, 20.0, 1e-11, 0.0)
                    .unwrap();
                let expect = if n == m { 1.0 } else { 0.0 };
                assert!(close(r.value, expect, 1e-8), "n={n} m={m}: {}", r.value);
            }
        }
    }

    #[test]
    fn differential_equations() {
        let h = 1e-4;
        for n in 0..=20 {
            for i in 0..=40 {
                let x = -10.0 + 0.5 * i as f64;
                let f = |t: f64| hermite_function(n, t);
                let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
                let resid = d2 + (n as f64 + 0.5 - x * x / 4.0) * f(x);
                assert!(resid.abs() < 1e-6, "n={n} x={x} resid={resid}");
                let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
                assert!((d1 - hermite_function_derivative(n, x)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn kernel_paths_agree_and_are_symmetric() {
        for n in 1..=12 {
            for &(x, y) in &[(0.1f64, -0.4), (1.5, 1.5), (2.0, 2.0 + 5e-7), (-3.0, 0.8), (4.0, 4.1)] {
                let a = hermite_kernel(n, x, y);
                let b = hermite_kernel_direct(n, x, y);
                assert!(close(a, b, 1e-8), "n={n} ({x},{y}): {a} vs {b}");
                assert_eq!(a, hermite_kernel(n, y, x));
                assert_eq!(b, hermite_kernel_direct(n, y, x));
            }
        }
        let (x, y) = (0.3f64, -1.1f64);
        let k1 = (2.0 * PI).powf(-0.5) * (-(x * x + y * y) / 4.0).exp();
        assert!(close(hermite_kernel(1, x, y), k1, 1e-15));
    }

    #[test]
    fn reproducing_property() {
        for n in 1..=6 {
            for &(x, y) in &[(0.0, 0.5), (1.2, -0.7)] {
                let r = integrate(|u| hermite_kernel(n, x, u) * hermite_kernel(n, u, y), -25.0, 25.0, 1e-10, 0.0)
                    .unwrap();
                assert!(close(r.value, hermite_kernel(n, x, y), 1e-6), "n={n}");
            }
        }
    }

    #[test]
    fn kernel_trace_is_n() {
        for n in 1..=10 {
            let r = integrate(|x| hermite_kernel(n, x, x), -30.0, 30.0, 1e-10, 0.0).unwrap();
            assert!(close(r.value, n as f64, 1e-7), "n={n}: {}", r.value);
        }
    }

    #[test]
    fn gue_density_n1_is_gaussian() {
        for &mu in &[-2.0f64, 0.0, 0.9] {
            let g = (-mu * mu / 2.0).exp() / (2.0 * PI).sqrt();
            assert!(close(gue_density_exact(1, mu, false), g, 1e-15));
        }
    }

    #[test]
    fn gue_density_normalizes() {
        for n in [1usize, 2, 3, 5, 10, 20, 50] {
            let kd = KernelDensity::gue(n, true);
            let r = kd.support_radius();
            let v = integrate_with_breaks(|x| gue_density_exact(n, x, true), &[-r, -2.0, 0.0, 2.0, r], 1e-10, 0.0)
                .unwrap()
                .value;
            assert!(close(v, 1.0, 1e-6), "n={n}: {v}");
        }
    }

    #[test]
    fn gue_density_approaches_semicircle() {
        let semi = |x: f64| if x.abs() < 2.0 { (4.0 - x * x).sqrt() / (2.0 * PI) } else { 0.0 };
        let mut prev = f64::INFINITY;
        for n in [5usize, 10, 20, 50] {
            let r = KernelDensity::gue(n, true).support_radius();
            let l1 = integrate_with_breaks(
                |x| (gue_density_exact(n, x, true) - semi(x)).abs(),
                &[-r, -2.0, 0.0, 2.0, r],
                1e-7,
                0.0,
            )
            .unwrap()
            .value;
            assert!(l1 < prev, "L1 distance did not decrease at n={n}");
            prev = l1;
        }
        assert!(prev <= 0.1, "L1 at N=50 is {prev}");
    }

    #[test]
    fn ginibre_density() {
        let z = Complex64::new(0.4, -0.3);
        assert!(close(ginibre_density_exact(1, z, false), (-z.norm_sqr()).exp() / PI, 1e-15));
        for n in [1usize, 2, 5, 10, 20] {
            let rmax = KernelDensity::ginibre(n, true).support_radius();
            let v = integrate_with_breaks(
                |r| 2.0 * PI * r * ginibre_density_exact(n, Complex64::new(r, 0.0), true),
                &[0.0, 1.0, rmax],
                1e-10,
                0.0,
            )
            .unwrap()
            .value;
            assert!(close(v, 1.0, 1e-6), "n={n}: {v}");
        }
        let q0 = ginibre_density_exact(200, Complex64::new(0.0, 0.0), true);
        assert!(close(q0, 1.0 / PI, 1e-3));
        assert!(ginibre_density_exact(200, Complex64::new(1.2, 0.0), true) <= 1e-3);
    }

    #[test]
    fn huge_degree_is_finite() {
        let n = 10_000;
        for i in 0..=10 {
            let x = 2.0 * (n as f64).sqrt() + (-5.0 + i as f64) * (n as f64).powf(-1.0 / 6.0);
            assert!(hermite_function(n, x).is_finite());
        }
    }
}
