use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use crate::error::{Result, RmtError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HistogramMode {
    Density,
    Count,
}

/// Uniform-bin histogram. `counts` holds in-range values only; values below
/// or above the range go to `underflow` / `overflow`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    pub total: u64,
    pub underflow: u64,
    pub overflow: u64,
    pub mode: HistogramMode,
}

impl Histogram {
    pub fn new(bins: usize, lo: f64, hi: f64, mode: HistogramMode) -> Result<Self> {
        if bins == 0 {
            return Err(RmtError::Parameter("histogram needs at least one bin".into()));
        }
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(RmtError::Parameter(format!("bad histogram range [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi, counts: vec![0; bins], total: 0, underflow: 0, overflow: 0, mode })
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.bins() as f64
    }

    pub fn edges(&self) -> Vec<f64> {
        (0..=self.bins()).map(|i| self.edge(i)).collect()
    }

    fn edge(&self, i: usize) -> f64 {
        if i == self.bins() {
            self.hi
        } else {
            self.lo + self.width() * i as f64
        }
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.bins()).map(|i| 0.5 * (self.edge(i) + self.edge(i + 1))).collect()
    }

    /// Bin index for `x`, or `None` when out of range. The right end is closed.
    pub fn bin_of(&self, x: f64) -> Option<usize> {
        if !(x >= self.lo && x <= self.hi) {
            return None;
        }
        Some((((x - self.lo) / self.width()) as usize).min(self.bins() - 1))
    }

    pub fn add(&mut self, x: f64) {
        match self.bin_of(x) {
            Some(i) => {
                self.counts[i] += 1;
                self.total += 1;
            }
            None if x < self.lo => self.underflow += 1,
            None => self.overflow += 1,
        }
    }

    pub fn extend(&mut self, xs: impl IntoIterator<Item = f64>) {
        for x in xs {
            self.add(x);
        }
    }

    /// Add the tallies of a histogram with the same binning.
    pub fn merge(&mut self, other: &Histogram) -> Result<()> {
        if self.bins() != other.bins() || self.lo != other.lo || self.hi != other.hi {
            return Err(RmtError::Parameter("cannot merge histograms with different bins".into()));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total += other.total;
        self.underflow += other.underflow;
        self.overflow += other.overflow;
        Ok(())
    }

    /// Normalized so the in-range histogram integrates to 1.
    pub fn densities(&self) -> Vec<f64> {
        let norm = self.total as f64 * self.width();
        self.counts.iter().map(|&c| if self.total == 0 { 0.0 } else { c as f64 / norm }).collect()
    }

    /// Heights according to `mode`.
    pub fn values(&self) -> Vec<f64> {
        match self.mode {
            HistogramMode::Density => self.densities(),
            HistogramMode::Count => self.counts.iter().map(|&c| c as f64).collect(),
        }
    }

    /// `sum_i |h_i w - (F(r_i) - F(l_i))|` against a distribution function.
    pub fn l1_distance_to_cdf(&self, cdf: impl Fn(f64) -> f64) -> f64 {
        let w = self.width();
        self.densities()
            .iter()
            .enumerate()
            .map(|(i, d)| (d * w - (cdf(self.edge(i + 1)) - cdf(self.edge(i)))).abs())
            .sum()
    }

    /// L1 distance to a density, integrating the density per bin.
    pub fn l1_distance_to_density(&self, rho: impl Fn(f64) -> f64) -> Result<f64> {
        let w = self.width();
        let mut acc = 0.0;
        for (i, d) in self.densities().iter().enumerate() {
            let mass = crate::quadrature::integrate(&rho, self.edge(i), self.edge(i + 1), 1e-11, 1e-9)?.value;
            acc += (d * w - mass).abs();
        }
        Ok(acc)
    }

    /// CSV with header `bin_left,bin_right,density` (the last column holds
    /// counts in count mode).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_left,bin_right,density\n");
        for (i, v) in self.values().iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", self.edge(i), self.edge(i + 1), v);
        }
        out
    }
}

/// Density-normalized histogram of eigenvalues over `range`.
pub fn esd_histogram(eigs: &[f64], bins: usize, range: (f64, f64)) -> Result<Histogram> {
    if eigs.is_empty() {
        return Err(RmtError::Domain("histogram of an empty list".into()));
    }
    let mut h = Histogram::new(bins, range.0, range.1, HistogramMode::Density)?;
    h.extend(eigs.iter().copied());
    Ok(h)
}
