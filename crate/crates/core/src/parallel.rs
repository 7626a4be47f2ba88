//! Deterministic parallel Monte Carlo over trial indices.

use rayon::prelude::*;

use crate::error::Result;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "RMT_LAB_THREADS";

/// Worker count requested through `RMT_LAB_THREADS`, if set to a positive integer.
pub fn requested_threads() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Configure the global rayon pool from `RMT_LAB_THREADS`. Safe to call more
/// than once; later calls are ignored by rayon.
pub fn init_thread_pool() {
    if let Some(n) = requested_threads() {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Run `f` on trials `0..trials`; results come back in trial order regardless
/// of scheduling.
pub fn map_trials<T, F>(trials: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    (0..trials as u64).into_par_iter().map(f).collect()
}

/// Mean and standard error of a sample.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let v = map_trials(100, |t| Ok(t * t)).unwrap();
        assert_eq!(v, (0..100u64).map(|t| t * t).collect::<Vec<_>>());
    }

    #[test]
    fn mean_se() {
        let (m, se) = mean_and_se(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((se - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
    }
}
