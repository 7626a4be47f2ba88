use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

use super::rational_det;
use crate::error::{param, Result, RmtError};

/// Largest horizon accepted by the exact walk routines.
pub const MAX_HORIZON: usize = 30;
/// Largest number of walkers for the exhaustive enumerator.
pub const MAX_WALKERS: usize = 5;
/// Cap on simultaneously tracked joint configurations in [`km_enumerate`].
pub const MAX_JOINT_STATES: usize = 200_000;

/// Nearest-neighbour walk on the integers: from site `i` step up with
/// probability `p_i`, down with `q_i = 1 - p_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkSpec {
    /// Up-probability at sites without an override.
    pub p_default: BigRational,
    /// Site-specific up-probabilities.
    pub p_sites: BTreeMap<i64, BigRational>,
    pub horizon: usize,
    /// Starting points, strictly decreasing.
    pub starts: Vec<i64>,
    /// Targets; `ends[i]` is assigned to walker `i`.
    pub ends: Vec<i64>,
}

impl WalkSpec {
    /// Symmetric walk (`p = q = 1/2`).
    pub fn symmetric(horizon: usize, starts: Vec<i64>, ends: Vec<i64>) -> Self {
        Self {
            p_default: BigRational::new(BigInt::one(), BigInt::from(2)),
            p_sites: BTreeMap::new(),
            horizon,
            starts,
            ends,
        }
    }

    pub fn with_site(mut self, site: i64, p: BigRational) -> Self {
        self.p_sites.insert(site, p);
        self
    }

    pub fn up(&self, site: i64) -> &BigRational {
        self.p_sites.get(&site).unwrap_or(&self.p_default)
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |p: &BigRational| *p >= BigRational::zero() && *p <= BigRational::one();
        if !unit(&self.p_default) || !self.p_sites.values().all(unit) {
            return param("transition probabilities must lie in [0, 1]");
        }
        if self.horizon > MAX_HORIZON {
            return Err(RmtError::Resource(format!("horizon {} exceeds {MAX_HORIZON}", self.horizon)));
        }
        if self.starts.is_empty() || self.starts.len() != self.ends.len() {
            return param("need equally many (and at least one) starts and ends");
        }
        if self.starts.windows(2).any(|w| w[0] <= w[1]) {
            return param("starting points must be strictly decreasing");
        }
        let mut e = self.ends.clone();
        e.sort_unstable();
        if e.windows(2).any(|w| w[0] == w[1]) {
            return param("targets must be distinct");
        }
        // crossing walkers must meet, which needs all start gaps even
        if self.starts.iter().any(|&x| (x - self.starts[0]).rem_euclid(2) != 0) {
            return param("starting points must have pairwise even distances");
        }
        Ok(())
    }

    fn step(&self, dist: &HashMap<i64, BigRational>) -> HashMap<i64, BigRational> {
        let mut next: HashMap<i64, BigRational> = HashMap::new();
        for (&x, w) in dist {
            let p = self.up(x);
            let q = BigRational::one() - p;
            if !p.is_zero() {
                *next.entry(x + 1).or_insert_with(BigRational::zero) += w * p;
            }
            if !q.is_zero() {
                *next.entry(x - 1).or_insert_with(BigRational::zero) += w * q;
            }
        }
        next
    }
}

/// `P_t(x_i, y_j)` for all start/target pairs.
pub fn transition_matrix(spec: &WalkSpec) -> Result<Vec<Vec<BigRational>>> {
    spec.validate()?;
    let mut out = Vec::with_capacity(spec.starts.len());
    for &x in &spec.starts {
        let mut dist = HashMap::from([(x, BigRational::one())]);
        for _ in 0..spec.horizon {
            dist = spec.step(&dist);
        }
        out.push(spec.ends.iter().map(|y| dist.get(y).cloned().unwrap_or_else(BigRational::zero)).collect());
    }
    Ok(out)
}

/// `det(P_t(x_i, y_j))`.
pub fn km_determinant(spec: &WalkSpec) -> Result<BigRational> {
    Ok(rational_det(transition_matrix(spec)?))
}

/// Probability that walker `i` ends at `ends[i]` for every `i` and the walkers
/// stay strictly ordered at every time, summed exactly over all joint paths.
pub fn km_enumerate(spec: &WalkSpec) -> Result<BigRational> {
    spec.validate()?;
    let n = spec.starts.len();
    if n > MAX_WALKERS {
        return Err(RmtError::Resource(format!("{n} walkers exceed the enumeration budget of {MAX_WALKERS}")));
    }
    let mut states: HashMap<Vec<i64>, BigRational> = HashMap::from([(spec.starts.clone(), BigRational::one())]);
    for _ in 0..spec.horizon {
        let mut next: HashMap<Vec<i64>, BigRational> = HashMap::new();
        for (pos, w) in &states {
            for mask in 0..(1u32 << n) {
                let mut weight = w.clone();
                let mut np = Vec::with_capacity(n);
                for (i, &x) in pos.iter().enumerate() {
                    let p = spec.up(x);
                    if mask >> i & 1 == 1 {
                        weight *= p;
                        np.push(x + 1);
                    } else {
                        weight *= BigRational::one() - p;
                        np.push(x - 1);
                    }
                }
                if weight.is_zero() || np.windows(2).any(|v| v[0] <= v[1]) {
                    continue;
                }
                *next.entry(np).or_insert_with(BigRational::zero) += weight;
            }
        }
        if next.len() > MAX_JOINT_STATES {
            return Err(RmtError::Resource(format!(
                "{} joint configurations exceed the budget of {MAX_JOINT_STATES}",
                next.len()
            )));
        }
        states = next;
    }
    Ok(states.get(&spec.ends).cloned().unwrap_or_else(BigRational::zero))
}
