//! Robinson–Schensted–Knuth correspondence by row insertion, longest
//! increasing subsequences, and Monte Carlo for the Baik–Deift–Johansson statistic.

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::cmp::Reverse;
use std::collections::BTreeMap;

use crate::error::{param, Result, RmtError};
use crate::parallel::map_trials;
use crate::rng::trial_rng;

/// Largest `n` for [`erdos_szekeres_scan`] (a scan of `S_{n^2+1}`).
pub const MAX_ES_N: usize = 3;
/// Largest `n` for [`tableau_census`].
pub const MAX_CENSUS_N: usize = 10;

/// Young tableau stored as rows, serialized as a JSON array of rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct YoungTableau {
    pub rows: Vec<Vec<usize>>,
}

impl YoungTableau {
    pub fn new(rows: Vec<Vec<usize>>) -> Self {
        Self { rows }
    }

    pub fn shape(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    pub fn size(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn first_row_len(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    /// Checks the shape, strict row and column increase, and (for standard
    /// tableaux) that the entries are exactly `1..=n`.
    pub fn validate_standard(&self) -> Result<()> {
        let shape = self.shape();
        if shape.iter().any(|&l| l == 0) || shape.windows(2).any(|w| w[0] < w[1]) {
            return Err(RmtError::Contract(format!("shape {shape:?} is not a partition")));
        }
        for (r, row) in self.rows.iter().enumerate() {
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(RmtError::Contract(format!("row {} is not increasing", r + 1)));
            }
            if r > 0 {
                if let Some(c) = (0..row.len()).find(|&c| self.rows[r - 1][c] >= row[c]) {
                    return Err(RmtError::Contract(format!("column {} is not increasing", c + 1)));
                }
            }
        }
        let mut all: Vec<usize> = self.rows.iter().flatten().copied().collect();
        all.sort_unstable();
        if all.iter().enumerate().any(|(i, &v)| v != i + 1) {
            return Err(RmtError::Contract("entries are not 1..n".into()));
        }
        Ok(())
    }
}

fn check_permutation(sigma: &[usize]) -> Result<()> {
    let n = sigma.len();
    let mut seen = vec![false; n + 1];
    for &v in sigma {
        if v == 0 || v > n || seen[v] {
            return Err(RmtError::Contract(format!("{sigma:?} is not a permutation of 1..{n}")));
        }
        seen[v] = true;
    }
    Ok(())
}

/// Row insertion: `P` collects the inserted values, `Q` records where each new box appeared.
pub fn rsk(sigma: &[usize]) -> Result<(YoungTableau, YoungTableau)> {
    check_permutation(sigma)?;
    let mut p: Vec<Vec<usize>> = Vec::new();
    let mut q: Vec<Vec<usize>> = Vec::new();
    for (k, &v) in sigma.iter().enumerate() {
        let mut x = v;
        let mut r = 0;
        loop {
            if r == p.len() {
                p.push(vec![x]);
                q.push(vec![k + 1]);
                break;
            }
            let pos = p[r].partition_point(|&y| y < x);
            if pos == p[r].len() {
                p[r].push(x);
                q[r].push(k + 1);
                break;
            }
            x = std::mem::replace(&mut p[r][pos], x);
            r += 1;
        }
    }
    Ok((YoungTableau::new(p), YoungTableau::new(q)))
}

/// Inverse of [`rsk`]: peel off the boxes of `Q` from `n` down to 1.
pub fn rsk_inverse(p: &YoungTableau, q: &YoungTableau) -> Result<Vec<usize>> {
    p.validate_standard()?;
    q.validate_standard()?;
    if p.shape() != q.shape() {
        return Err(RmtError::Contract(format!("shapes {:?} and {:?} differ", p.shape(), q.shape())));
    }
    let n = p.size();
    let mut p = p.rows.clone();
    let mut q = q.rows.clone();
    let mut sigma = vec![0; n];
    for k in (1..=n).rev() {
        let r = q.iter().position(|row| row.last() == Some(&k)).expect("standard tableau has k at a row end");
        q[r].pop();
        let mut x = p[r].pop().expect("shapes agree");
        for row in p[..r].iter_mut().rev() {
            // largest entry below x gets bumped out
            let pos = row.partition_point(|&y| y < x) - 1;
            x = std::mem::replace(&mut row[pos], x);
        }
        if p[r].is_empty() {
            p.pop();
            q.pop();
        }
        sigma[k - 1] = x;
    }
    Ok(sigma)
}

/// Length of a longest strictly increasing subsequence (patience sorting).
pub fn lis<T: Ord + Copy>(seq: &[T]) -> usize {
    let mut tails: Vec<T> = Vec::new();
    for &x in seq {
        let pos = tails.partition_point(|t| *t < x);
        if pos == tails.len() {
            tails.push(x);
        } else {
            tails[pos] = x;
        }
    }
    tails.len()
}

/// Length of a longest strictly decreasing subsequence.
pub fn lds<T: Ord + Copy>(seq: &[T]) -> usize {
    let rev: Vec<Reverse<T>> = seq.iter().map(|&x| Reverse(x)).collect();
    lis(&rev)
}

/// Visit every permutation of `1..=n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut a: Vec<usize> = (1..=n).collect();
    let mut c = vec![0usize; n];
    f(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Number of permutations of `S_{n^2+1}` without a monotone subsequence of length `n + 1`.
pub fn erdos_szekeres_scan(n: usize) -> Result<u64> {
    if n > MAX_ES_N {
        return Err(RmtError::Resource(format!("S_{} is beyond the exhaustive budget", n * n + 1)));
    }
    let mut violations = 0u64;
    for_each_permutation(n * n + 1, |s| {
        if lis(s).max(lds(s)) < n + 1 {
            violations += 1;
        }
    });
    Ok(violations)
}

/// Partitions of `n` in decreasing lexicographic order.
pub fn partitions_of(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All standard Young tableaux of a shape, built by placing `1, 2, ...` in
/// turn at every admissible box.
pub fn standard_tableaux(shape: &[usize]) -> Vec<YoungTableau> {
    fn rec(shape: &[usize], rows: &mut Vec<Vec<usize>>, next: usize, total: usize, out: &mut Vec<YoungTableau>) {
        if next > total {
            out.push(YoungTableau::new(rows.iter().filter(|r| !r.is_empty()).cloned().collect()));
            return;
        }
        for r in 0..shape.len() {
            let len = rows[r].len();
            if len < shape[r] && (r == 0 || rows[r - 1].len() > len) {
                rows[r].push(next);
                rec(shape, rows, next + 1, total, out);
                rows[r].pop();
            }
        }
    }
    let mut out = Vec::new();
    let total = shape.iter().sum();
    rec(shape, &mut vec![Vec::new(); shape.len()], 1, total, &mut out);
    out
}

/// Number of standard tableaux of every shape of size `n`, and `sum (#Tab)^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableauCensus {
    pub n: usize,
    pub counts: BTreeMap<Vec<usize>, u64>,
    pub sum_of_squares: u128,
}

pub fn tableau_census(n: usize) -> Result<TableauCensus> {
    if n > MAX_CENSUS_N {
        return Err(RmtError::Resource(format!("tableau census limited to n <= {MAX_CENSUS_N}")));
    }
    let counts: BTreeMap<Vec<usize>, u64> = partitions_of(n)
        .into_iter()
        .map(|shape| {
            let count = standard_tableaux(&shape).len() as u64;
            (shape, count)
        })
        .collect();
    let sum_of_squares = counts.values().map(|&c| (c as u128) * (c as u128)).sum();
    Ok(TableauCensus { n, counts, sum_of_squares })
}

/// A uniform permutation in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationSample {
    pub perm: Vec<usize>,
    pub n: usize,
    pub seed: u64,
    pub trial: u64,
}

/// Fisher–Yates shuffle of `1..=n` on the `(seed, trial)` stream.
pub fn random_permutation(n: usize, seed: u64, trial: u64) -> PermutationSample {
    let mut rng = trial_rng(seed, trial);
    let mut perm: Vec<usize> = (1..=n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    PermutationSample { perm, n, seed, trial }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BdjSample {
    pub n: usize,
    pub seed: u64,
    pub lengths: Vec<usize>,
    /// `(L_n - 2 sqrt n) / n^{1/6}`
    pub statistic: Vec<f64>,
}

impl BdjSample {
    /// `mean(L_n) / sqrt(n)`.
    pub fn scaled_mean_length(&self) -> f64 {
        self.lengths.iter().sum::<usize>() as f64 / self.lengths.len() as f64 / (self.n as f64).sqrt()
    }
}

pub fn bdj_statistic_mc(n: usize, trials: usize, seed: u64) -> Result<BdjSample> {
    if n == 0 {
        return param("permutation size must be positive");
    }
    if trials < 100 {
        return param(format!("need at least 100 trials, got {trials}"));
    }
    let lengths = map_trials(trials, |t| Ok(lis(&random_permutation(n, seed, t).perm)))?;
    let nf = n as f64;
    let statistic = lengths.iter().map(|&l| (l as f64 - 2.0 * nf.sqrt()) / nf.powf(1.0 / 6.0)).collect();
    Ok(BdjSample { n, seed, lengths, statistic })
}
