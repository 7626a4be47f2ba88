//! Exact enumeration engine: Catalan numbers, pairings and their genus, the
//! Wick formula, kernels of multi-indices, and the non-crossing moment
//! calculus of several independent GUE matrices.

mod freeness;
mod moments;
mod pairings;
mod partitions;
mod wick;

pub use freeness::{freeness_check, mixed_gue_moment_limit, nc_moment};
pub use moments::{gue_moment_exact, MomentPolynomial, MAX_PAIRING_SIZE};
pub use pairings::{
    enumerate_nc_pairings, enumerate_pairings, genus, is_noncrossing, is_noncrossing_by_quadruples,
    is_noncrossing_by_reduction, GenusInfo, NcPairingIter, Pairing, PairingIter,
};
pub use partitions::{
    count_tree_pair_partitions, enumerate_partitions, graph_is_tree, kernel_of_index, Partition, PartitionIter,
    MAX_PARTITION_SIZE,
};
pub use wick::wick_moment;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Catalan number `C_k = binom(2k, k) / (k + 1)`.
pub fn catalan(k: u64) -> BigUint {
    let mut binom = BigUint::one();
    for i in 0..k {
        binom = binom * BigUint::from(2 * k - i) / BigUint::from(i + 1);
    }
    binom / BigUint::from(k + 1)
}

/// `C_0..=C_k` from the convolution recursion `C_{k+1} = sum_i C_i C_{k-i}`.
pub fn catalan_by_recursion(k: usize) -> Vec<BigUint> {
    let mut c = vec![BigUint::one()];
    for j in 0..k {
        let next = (0..=j).fold(BigUint::zero(), |acc, i| acc + &c[i] * &c[j - i]);
        c.push(next);
    }
    c
}

/// `(n - 1)!!` for even `n`, i.e. the number of pairings of `[n]`; zero for odd `n`.
pub fn pairing_count(n: u64) -> BigUint {
    if n % 2 == 1 {
        return BigUint::zero();
    }
    (1..n).step_by(2).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}
