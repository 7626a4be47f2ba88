use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Result, RmtError};

/// Large-N limit of `E tr(A_{i_1} ... A_{i_m})` for independent normalized GUE
/// matrices: the number of non-crossing pairings of `[m]` that only pair equal
/// colors. Interval dynamic programming over the first element's partner.
pub fn mixed_gue_moment_limit<C: Eq>(colors: &[C]) -> BigUint {
    let m = colors.len();
    if m % 2 == 1 {
        return BigUint::zero();
    }
    // count[i][j] for the half-open interval i..j
    let mut count = vec![vec![BigUint::zero(); m + 1]; m + 1];
    for i in 0..=m {
        count[i][i] = BigUint::one();
    }
    for len in (2..=m).step_by(2) {
        for i in 0..=m - len {
            let j = i + len;
            let mut total = BigUint::zero();
            for k in (i + 1..j).step_by(2) {
                if colors[i] == colors[k] {
                    total += &count[i + 1][k] * &count[k + 1][j];
                }
            }
            count[i][j] = total;
        }
    }
    count[0][m].clone()
}

/// [`mixed_gue_moment_limit`] as a float, for use as a moment functional.
pub fn nc_moment(word: &[usize]) -> f64 {
    mixed_gue_moment_limit(word).to_f64().unwrap_or(f64::INFINITY)
}

/// Evaluate `phi[(s_{i_1}^{p_1} - phi(s_{i_1}^{p_1})) ... (s_{i_m}^{p_m} - phi(s_{i_m}^{p_m}))]`
/// by expanding the product over subsets of kept factors. `factors` lists
/// `(color, power)`; adjacent colors must differ. Words handed to `phi` are
/// color sequences. For freely independent variables the result is zero.
pub fn freeness_check(phi: impl Fn(&[usize]) -> f64, factors: &[(usize, usize)]) -> Result<f64> {
    if factors.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(RmtError::Parameter("colors of consecutive factors must alternate".into()));
    }
    if factors.len() > 20 {
        return Err(RmtError::Resource("more than 20 factors in a freeness check".into()));
    }
    let single: Vec<f64> = factors.iter().map(|&(c, p)| phi(&vec![c; p])).collect();
    let m = factors.len();
    let mut total = 0.0;
    let mut word = Vec::new();
    for mask in 0u32..(1 << m) {
        word.clear();
        let mut coeff = 1.0;
        for (k, &(c, p)) in factors.iter().enumerate() {
            if mask & (1 << k) != 0 {
                word.extend(std::iter::repeat_n(c, p));
            } else {
                coeff *= -single[k];
            }
        }
        if coeff != 0.0 {
            total += coeff * phi(&word);
        }
    }
    Ok(total)
}
