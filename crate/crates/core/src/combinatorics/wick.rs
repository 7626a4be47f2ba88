use super::pairings::enumerate_pairings;

/// Wick formula: the joint moment `E[w_1 ... w_n]` of centered jointly
/// Gaussian symbols with covariance `cov` is the sum over pairings of the
/// product of pair covariances. Odd words give zero.
pub fn wick_moment<S: Copy>(word: &[S], cov: impl Fn(S, S) -> f64) -> f64 {
    enumerate_pairings(word.len())
        .map(|p| p.pairs().iter().map(|&(i, j)| cov(word[i - 1], word[j - 1])).product::<f64>())
        .sum()
}
