//! Harer–Zagier recursion for `E[tr A^{2k}] = C_k b_k` of normalized GUE and
//! the largest-eigenvalue tail bounds built on it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::catalan;
use crate::error::{param, Result};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `b_k` as a polynomial in `N^{-2}`: `coeffs[g]` multiplies `N^{-2g}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HzPolynomial {
    pub coeffs: Vec<BigRational>,
}

impl HzPolynomial {
    fn one() -> Self {
        Self { coeffs: vec![BigRational::one()] }
    }

    /// `self + c * N^{-2} * other`
    fn add_shifted(&self, c: &BigRational, other: &HzPolynomial) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len() + 1);
        let mut coeffs = vec![BigRational::zero(); len];
        for (g, a) in self.coeffs.iter().enumerate() {
            coeffs[g] += a;
        }
        for (g, a) in other.coeffs.iter().enumerate() {
            coeffs[g + 1] += c * a;
        }
        Self { coeffs }
    }

    pub fn eval(&self, n: u64) -> BigRational {
        let x = BigRational::new(BigInt::one(), BigInt::from(n) * BigInt::from(n));
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * &x + c)
    }

    /// Coefficients rendered as `"p/q"` strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

/// Symbolic `b_k` for `k >= 1`.
pub fn hz_bk_symbolic(k: usize) -> Result<HzPolynomial> {
    if k == 0 {
        return param("Harer–Zagier index starts at k = 1");
    }
    // b_0 = b_1 = 1; b_{j+1} = b_j + j(j+1)/4 N^{-2} b_{j-1}
    let (mut prev, mut cur) = (HzPolynomial::one(), HzPolynomial::one());
    for j in 1..k {
        let c = rat((j * (j + 1)) as i64, 4);
        let next = cur.add_shifted(&c, &prev);
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// Exact `b_k` at a given `N`.
pub fn hz_bk(k: usize, n: u64) -> Result<BigRational> {
    Ok(HzState::new(n, k)?.b(k).clone())
}

/// `b_0 ..= b_kmax` at fixed `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HzState {
    pub n: u64,
    b: Vec<BigRational>,
}

impl HzState {
    pub fn new(n: u64, k_max: usize) -> Result<Self> {
        if n == 0 {
            return param("N must be positive");
        }
        if k_max == 0 {
            return param("Harer–Zagier index starts at k = 1");
        }
        let n2 = BigInt::from(4) * BigInt::from(n) * BigInt::from(n);
        let mut b = vec![BigRational::one(), BigRational::one()];
        for j in 1..k_max {
            let c = BigRational::new(BigInt::from(j * (j + 1)), n2.clone());
            let next = &b[j] + c * &b[j - 1];
            b.push(next);
        }
        Ok(Self { n, b })
    }

    pub fn k_max(&self) -> usize {
        self.b.len() - 1
    }

    /// `b_k`; panics past `k_max`.
    pub fn b(&self, k: usize) -> &BigRational {
        &self.b[k]
    }

    /// `E[tr A^{2k}] = C_k b_k`.
    pub fn moment(&self, k: usize) -> BigRational {
        BigRational::from_integer(BigInt::from(catalan(k as u64))) * &self.b[k]
    }
}

/// Worst absolute gap between the truncated series
/// `1 + sum_{k<K} b_k (2Ns)^{k+1}/(k+1)!` and `((1+s)/(1-s))^N` over `s_grid`.
pub fn hz_generating_check(n: u64, s_grid: &[f64], k_trunc: usize) -> Result<f64> {
    if k_trunc < 2 {
        return param("truncation order must be at least 2");
    }
    if let Some(&s) = s_grid.iter().find(|&&s| !(0.0..1.0).contains(&s)) {
        return param(format!("s = {s} outside [0, 1)"));
    }
    let state = HzState::new(n, k_trunc)?;
    let b: Vec<f64> = (0..=k_trunc).map(|k| state.b(k).to_f64().unwrap_or(f64::INFINITY)).collect();
    let nf = n as f64;
    let mut worst = 0.0f64;
    for &s in s_grid {
        let x = 2.0 * nf * s;
        // term_k = b_k x^{k+1}/(k+1)!
        let mut pow = x;
        let mut terms = Vec::with_capacity(k_trunc);
        for (k, bk) in b.iter().enumerate().take(k_trunc) {
            terms.push(bk * pow);
            pow *= x / (k + 2) as f64;
        }
        let tail = terms[k_trunc - 1];
        let before = terms[k_trunc - 2];
        if s > 0.0 && tail > 0.5 * before {
            let ratio = tail / before;
            return param(format!(
                "series truncated at K = {k_trunc} does not converge at s = {s}; try s below {:.3e}",
                s * 0.5 / ratio
            ));
        }
        let series = 1.0 + terms.iter().rev().sum::<f64>();
        let closed = ((1.0 + s) / (1.0 - s)).powf(nf);
        worst = worst.max((series - closed).abs());
    }
    Ok(worst)
}

fn ln_catalan(k: usize) -> f64 {
    (2..=k).map(|i| ((k + i) as f64 / i as f64).ln()).sum()
}

/// `C_k exp(k^3 / (2N^2))`, an upper bound for `E[tr A^{2k}]`.
pub fn moment_upper_bound(k: usize, n: u64) -> f64 {
    let (kf, nf) = (k as f64, n as f64);
    (ln_catalan(k) + kf.powi(3) / (2.0 * nf * nf)).exp()
}

/// Moment bound on `P(lambda_max >= 2 + eps)`:
/// `N (2+eps)^{-2k} 4^k k^{-3/2} exp(k^3/(2N^2))`.
pub fn lambda_max_tail(eps: f64, k: usize, n: u64) -> f64 {
    let (kf, nf) = (k as f64, n as f64);
    let ln = nf.ln() - 2.0 * kf * (2.0 + eps).ln() + kf * 4f64.ln() - 1.5 * kf.ln() + kf.powi(3) / (2.0 * nf * nf);
    ln.exp()
}

/// `t^{-3/4} exp(-t^{3/2}/2)`.
pub fn lambda_max_tail_limit(t: f64) -> f64 {
    t.powf(-0.75) * (-0.5 * t.powf(1.5)).exp()
}

/// The tail bound at `eps = t N^{-2/3}` with `k = floor(N^{2/3} sqrt t)` (at
/// least 1), next to its `N -> infinity` limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizedTail {
    pub t: f64,
    pub n: u64,
    pub k: usize,
    pub eps: f64,
    pub at_n: f64,
    pub limit: f64,
}

pub fn lambda_max_tail_optimized(t: f64, n: u64) -> Result<OptimizedTail> {
    if !(t > 0.0) || n == 0 {
        return param(format!("need t > 0 and N >= 1, got t = {t}, N = {n}"));
    }
    let scale = (n as f64).cbrt().powi(2);
    let k = ((scale * t.sqrt()).floor() as usize).max(1);
    let eps = t / scale;
    Ok(OptimizedTail { t, n, k, eps, at_n: lambda_max_tail(eps, k, n), limit: lambda_max_tail_limit(t) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::gue_moment_exact;

    #[test]
    fn small_cases() {
        let b3 = hz_bk_symbolic(3).unwrap();
        assert_eq!(b3.coeffs, vec![rat(1, 1), rat(2, 1)]);
        let b4 = hz_bk_symbolic(4).unwrap();
        assert_eq!(b4.coeffs, vec![rat(1, 1), rat(5, 1), rat(3, 2)]);
        assert_eq!(hz_bk_symbolic(2).unwrap().coeffs, vec![rat(1, 1), rat(1, 2)]);
        assert_eq!(hz_bk(1, 7).unwrap(), rat(1, 1));
        assert!(hz_bk_symbolic(0).is_err());
    }

    #[test]
    fn recursion_step_between_examples() {
        for n in 1..6u64 {
            let s = HzState::new(n, 4).unwrap();
            let step = s.b(3) + rat(12, 4 * (n * n) as i64) * s.b(2);
            assert_eq!(&step, s.b(4));
        }
    }

    #[test]
    fn symbolic_agrees_with_numeric() {
        for n in 1..=10u64 {
            let s = HzState::new(n, 10).unwrap();
            for k in 1..=10 {
                assert_eq!(hz_bk_symbolic(k).unwrap().eval(n), *s.b(k));
            }
            for k in 1..10 {
                assert!(s.b(k + 1) > s.b(k));
            }
        }
    }

    #[test]
    fn matches_genus_enumeration() {
        for k in 1..=8usize {
            let genus = gue_moment_exact(2 * k).unwrap();
            let ck = BigRational::from_integer(BigInt::from(catalan(k as u64)));
            let hz = hz_bk_symbolic(k).unwrap();
            assert_eq!(genus.genus_coeffs().len(), hz.coeffs.len());
            for (g, e) in genus.genus_coeffs().iter().enumerate() {
                assert_eq!(&ck * &hz.coeffs[g], BigRational::from_integer(BigInt::from(e.clone())), "k={k} g={g}");
            }
        }
    }

    #[test]
    fn generating_function() {
        assert!(hz_generating_check(1, &[0.05], 40).unwrap() <= 1e-10);
        assert!(hz_generating_check(3, &[0.02], 40).unwrap() <= 1e-10);
        assert_eq!(hz_generating_check(5, &[0.0], 10).unwrap(), 0.0);
        let grid: Vec<f64> = (1..10).map(|i| i as f64 * 0.1 / 20.0).collect();
        assert!(hz_generating_check(10, &grid, 60).unwrap() <= 1e-8);
        let err = hz_generating_check(10, &[0.9], 20).unwrap_err();
        assert!(err.to_string().contains("try s below"));
    }

    #[test]
    fn exponential_moment_bound() {
        for n in [5u64, 10, 50] {
            let s = HzState::new(n, 10).unwrap();
            for k in 1..=10usize {
                let exact = s.moment(k).to_f64().unwrap();
                assert!(exact <= moment_upper_bound(k, n) * (1.0 + 1e-12), "k={k} N={n}");
            }
        }
    }

    #[test]
    fn tail_forms() {
        assert!((lambda_max_tail_limit(1.0) - (-0.5f64).exp()).abs() < 1e-15);
        let o = lambda_max_tail_optimized(1.0, 1000).unwrap();
        assert_eq!(o.k, 100);
        assert!((o.eps - 0.01).abs() < 1e-12);
        let far = lambda_max_tail_optimized(1.0, 1_000_000_000).unwrap();
        assert!((far.at_n / far.limit - 1.0).abs() < 0.01);
        let direct = 10.0 / 2.5f64.powi(6) * 64.0 / 27f64.sqrt() * (27.0f64 / 200.0).exp();
        assert!((lambda_max_tail(0.5, 3, 10) / direct - 1.0).abs() < 1e-12);
    }
}
