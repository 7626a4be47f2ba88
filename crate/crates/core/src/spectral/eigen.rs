//! Eigenvalue solvers.
//!
//! Hermitian input: Householder reduction to tridiagonal form, a diagonal
//! unitary scaling that makes the off-diagonal real and nonnegative, then
//! implicit QL with Wilkinson shifts. General input: Householder reduction to
//! upper Hessenberg form followed by single-shift complex QR with deflation.

use num_complex::Complex64;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::error::{Result, RmtError};
use crate::matrix::CMatrix;

/// Default relative tolerance for both solvers.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Relative Hermitian defect accepted before rejecting input.
const HERMITIAN_SLACK: f64 = 1e-10;

trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn from_re(x: f64) -> Self;
    fn conj(self) -> Self;
    fn re(self) -> f64;
    fn abs(self) -> f64;
    fn norm_sqr(self) -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_re(x: f64) -> Self {
        x
    }
    fn conj(self) -> Self {
        self
    }
    fn re(self) -> f64 {
        self
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn norm_sqr(self) -> f64 {
        self * self
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn from_re(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn abs(self) -> f64 {
        self.norm()
    }
    fn norm_sqr(self) -> f64 {
        Complex64::norm_sqr(&self)
    }
}

/// Householder tridiagonalization of a Hermitian matrix stored row-major in `a`
/// (only the lower triangle is read). Returns the real diagonal and the moduli
/// of the subdiagonal.
fn tridiagonalize<T: Scalar>(a: &mut [T], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    // mirror the lower triangle so rank-2 updates can run on full rows
    for i in 0..n {
        for j in 0..i {
            a[j * n + i] = a[i * n + j].conj();
        }
        a[i * n + i] = T::from_re(a[i * n + i].re());
    }
    let mut v = vec![T::zero(); n];
    let mut p = vec![T::zero(); n];
    for k in 0..n.saturating_sub(1) {
        let m = n - k - 1;
        let base = k + 1;
        let alpha = (base..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        let x0 = a[base * n + k];
        let tail = (base + 1..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>();
        diag[k] = a[k * n + k].re();
        if alpha == 0.0 || tail == 0.0 {
            off[k] = x0.abs();
            continue;
        }
        let phase = if x0.abs() == 0.0 { T::from_re(1.0) } else { x0 * (1.0 / x0.abs()) };
        for (idx, i) in (base..n).enumerate() {
            v[idx] = a[i * n + k];
        }
        v[0] += phase * alpha;
        let vnorm2: f64 = v[..m].iter().map(|z| z.norm_sqr()).sum();
        let tau = 2.0 / vnorm2;
        // p = tau * A22 v
        for (r, i) in (base..n).enumerate() {
            let row = &a[i * n + base..i * n + n];
            let mut s = T::zero();
            for (x, y) in row.iter().zip(&v[..m]) {
                s += *x * *y;
            }
            p[r] = s * tau;
        }
        // K = tau/2 * v^* p (real for Hermitian A22)
        let mut vp = T::zero();
        for (x, y) in v[..m].iter().zip(&p[..m]) {
            vp += x.conj() * *y;
        }
        let kappa = 0.5 * tau * vp.re();
        for r in 0..m {
            p[r] -= v[r] * kappa;
        }
        // A22 -= v w^* + w v^*
        for r in 0..m {
            let (vr, wr) = (v[r], p[r]);
            let row = &mut a[(base + r) * n + base..(base + r) * n + n];
            for (c, entry) in row.iter_mut().enumerate() {
                *entry -= vr * p[c].conj() + wr * v[c].conj();
            }
        }
        off[k] = alpha;
    }
    if n > 0 {
        diag[n - 1] = a[(n - 1) * n + n - 1].re();
    }
    (diag, off)
}

/// Eigenvalues of a real symmetric tridiagonal matrix by implicit QL with
/// Wilkinson shifts. `off[i]` couples rows `i` and `i + 1`.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if off.len() + 1 != n {
        return Err(RmtError::Parameter("off-diagonal must have length n - 1".into()));
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let cap = 50 * n.max(1);
    let mut sweeps = 0usize;
    for l in 0..n {
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > cap {
                return Err(RmtError::Convergence(format!(
                    "tridiagonal QL exceeded {cap} sweeps"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(RmtError::Contract(format!(
            "expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_SLACK * scale {
        return Err(RmtError::Contract(format!(
            "matrix is not Hermitian (defect {defect:e})"
        )));
    }
    Ok(())
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &CMatrix, tol: f64) -> Result<Vec<f64>> {
    if !(tol > 0.0) {
        return Err(RmtError::Parameter("tolerance must be positive".into()));
    }
    check_hermitian(m)?;
    let n = m.rows();
    let (d, e) = if m.is_real() {
        let mut a: Vec<f64> = m.as_slice().iter().map(|z| z.re).collect();
        tridiagonalize(&mut a, n)
    } else {
        let mut a = m.as_slice().to_vec();
        tridiagonalize(&mut a, n)
    };
    tridiagonal_eigenvalues(&d, &e)
}

/// Reduce a square complex matrix to upper Hessenberg form in place.
fn hessenberg(a: &mut [Complex64], n: usize) {
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    let mut s = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n.saturating_sub(2) {
        let base = k + 1;
        let m = n - base;
        let alpha = (base..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        let tail = (base + 1..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>();
        if alpha == 0.0 || tail == 0.0 {
            continue;
        }
        let x0 = a[base * n + k];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        for (idx, i) in (base..n).enumerate() {
            v[idx] = a[i * n + k];
        }
        v[0] += phase * alpha;
        let tau = 2.0 / v[..m].iter().map(|z| z.norm_sqr()).sum::<f64>();
        // left: rows base.., columns k..
        for x in s[k..n].iter_mut() {
            *x = Complex64::new(0.0, 0.0);
        }
        for (idx, i) in (base..n).enumerate() {
            let vc = v[idx].conj();
            let row = &a[i * n + k..i * n + n];
            for (acc, x) in s[k..n].iter_mut().zip(row) {
                *acc += vc * x;
            }
        }
        for (idx, i) in (base..n).enumerate() {
            let vi = v[idx] * tau;
            let row = &mut a[i * n + k..i * n + n];
            for (x, acc) in row.iter_mut().zip(&s[k..n]) {
                *x -= vi * acc;
            }
        }
        // right: all rows, columns base..
        for i in 0..n {
            let row = &mut a[i * n + base..i * n + n];
            let mut t = Complex64::new(0.0, 0.0);
            for (x, y) in row.iter().zip(&v[..m]) {
                t += x * y;
            }
            t *= tau;
            for (x, y) in row.iter_mut().zip(&v[..m]) {
                *x -= t * y.conj();
            }
        }
        for i in base + 1..n {
            a[i * n + k] = Complex64::new(0.0, 0.0);
        }
    }
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    // eigenvalue of [[a, b], [c, d]] closest to d
    let half_tr = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (half_tr * half_tr - det).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Eigenvalues (unordered) of a general square complex matrix.
pub fn general_eigenvalues(m: &CMatrix, tol: f64) -> Result<Vec<Complex64>> {
    if !(tol > 0.0) {
        return Err(RmtError::Parameter("tolerance must be positive".into()));
    }
    if !m.is_square() {
        return Err(RmtError::Contract(format!(
            "expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let mut h = m.as_slice().to_vec();
    hessenberg(&mut h, n);
    let mut eig = vec![Complex64::new(0.0, 0.0); n];
    if n == 0 {
        return Ok(eig);
    }
    let eps = f64::EPSILON;
    let norm = h.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut rot: Vec<(f64, Complex64)> = vec![(1.0, Complex64::new(0.0, 0.0)); n];
    let mut hi = n - 1;
    let mut iter = 0usize;
    let cap = 60;
    loop {
        if hi == 0 {
            eig[0] = h[0];
            break;
        }
        // locate the start of the unreduced block ending at hi
        let mut l = hi;
        while l > 0 {
            let sub = h[l * n + l - 1].norm();
            let mut scale = h[(l - 1) * n + l - 1].norm() + h[l * n + l].norm();
            if scale == 0.0 {
                scale = norm;
            }
            if sub <= eps * scale {
                h[l * n + l - 1] = Complex64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[hi * n + hi];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > cap {
            return Err(RmtError::Convergence(format!(
                "Hessenberg QR did not converge for eigenvalue {hi} after {cap} iterations"
            )));
        }
        let mu = if iter % 11 == 0 {
            // exceptional shift
            h[hi * n + hi] + Complex64::new(h[hi * n + hi - 1].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1) * n + hi - 1],
                h[(hi - 1) * n + hi],
                h[hi * n + hi - 1],
                h[hi * n + hi],
            )
        };
        for i in l..=hi {
            h[i * n + i] -= mu;
        }
        // H - mu I = QR by Givens rotations on the active block
        for k in l..hi {
            let x = h[k * n + k];
            let y = h[(k + 1) * n + k];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (1.0, Complex64::new(0.0, 0.0))
            } else if x.norm() == 0.0 {
                (0.0, y.conj() / y.norm())
            } else {
                let c = x.norm() / r;
                let s = (x / x.norm()) * y.conj() / r;
                (c, s)
            };
            rot[k] = (c, s);
            // [c, s; -conj(s), c] applied to rows k, k+1
            for j in k..=hi {
                let a = h[k * n + j];
                let b = h[(k + 1) * n + j];
                h[k * n + j] = a * c + s * b;
                h[(k + 1) * n + j] = b * c - s.conj() * a;
            }
        }
        // R Q: apply the adjoint rotations on the right
        for k in l..hi {
            let (c, s) = rot[k];
            let top = (k + 2).min(hi);
            for i in l..=top {
                let a = h[i * n + k];
                let b = h[i * n + k + 1];
                h[i * n + k] = a * c + b * s.conj();
                h[i * n + k + 1] = b * c - a * s;
            }
        }
        for i in l..=hi {
            h[i * n + i] += mu;
        }
    }
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn two_by_two_examples() {
        let ones = CMatrix::from_real_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        let ev = hermitian_eigenvalues(&ones, DEFAULT_TOL).unwrap();
        assert!(ev[0].abs() < 1e-14 && (ev[1] - 2.0).abs() < 1e-14);
        let m = CMatrix::from_real_rows(&[vec![1.0, 1.0], vec![1.0, -1.0]]);
        let ev = hermitian_eigenvalues(&m, DEFAULT_TOL).unwrap();
        let r2 = 2f64.sqrt();
        assert!((ev[0] + r2).abs() < 1e-14 && (ev[1] - r2).abs() < 1e-14);
    }

    #[test]
    fn all_ones_matrix() {
        for n in [1, 3, 10, 40] {
            let m = CMatrix::from_fn(n, n, |_, _| c(1.0, 0.0));
            let ev = hermitian_eigenvalues(&m, DEFAULT_TOL).unwrap();
            assert!((ev[n - 1] - n as f64).abs() < 1e-10 * n as f64);
            assert!(ev[..n - 1].iter().all(|x| x.abs() < 1e-10 * n as f64));
        }
    }

    #[test]
    fn complex_hermitian_2x2() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let m = CMatrix::from_complex_rows(&[vec![c(2.0, 0.0), c(0.0, 1.0)], vec![c(0.0, -1.0), c(2.0, 0.0)]]);
        let ev = hermitian_eigenvalues(&m, DEFAULT_TOL).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert!(matches!(hermitian_eigenvalues(&m, DEFAULT_TOL), Err(RmtError::Contract(_))));
        let r = CMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eigenvalues(&r, DEFAULT_TOL), Err(RmtError::Contract(_))));
    }

    #[test]
    fn nilpotent_shift_has_zero_spectrum() {
        let n = 8;
        let m = CMatrix::from_fn(n, n, |i, j| if j == i + 1 { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let ev = general_eigenvalues(&m, DEFAULT_TOL).unwrap();
        assert!(ev.iter().all(|z| z.norm() < 1e-12), "{ev:?}");
    }

    #[test]
    fn cyclic_shift_gives_roots_of_unity() {
        let n = 9;
        let m = CMatrix::from_fn(n, n, |i, j| if j == (i + 1) % n { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let mut ev = general_eigenvalues(&m, DEFAULT_TOL).unwrap();
        ev.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
        let mut roots: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
            .collect();
        roots.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
        for (a, b) in ev.iter().zip(&roots) {
            assert!((a - b).norm() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn diagonal_general() {
        let m = CMatrix::from_complex_rows(&[vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 2.0)]]);
        let mut ev = general_eigenvalues(&m, DEFAULT_TOL).unwrap();
        ev.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((ev[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((ev[1] - c(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn tridiagonal_known_spectrum() {
        // path-graph Laplacian-like matrix: eigenvalues 2cos(k pi/(n+1))
        let n = 12;
        let ev = tridiagonal_eigenvalues(&vec![0.0; n], &vec![1.0; n - 1]).unwrap();
        let mut expect: Vec<f64> =
            (1..=n).map(|k| 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos()).collect();
        expect.sort_by(f64::total_cmp);
        for (a, b) in ev.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-13);
        }
    }
}
