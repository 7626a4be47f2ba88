//! Seed-reproducible samplers for the matrix ensembles.
//!
//! Every sample is a pure function of `(spec, trial)`: the trial index selects
//! an independent ChaCha stream (see [`crate::rng`]), so trials can be drawn
//! in any order or in parallel without changing their values.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::matrix::CMatrix;
use crate::rng::{trial_rng, NormalSource, TrialRng, DEFAULT_SEED};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnsembleKind {
    Goe,
    Gue,
    GinibreComplex,
    WignerGeneric,
    Wishart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalization {
    /// Entries of variance about `1/N` (`1/p` for Wishart factors).
    Normalized,
    /// Entries of variance about 1.
    Unnormalized,
}

/// Entry law for Wigner and Wishart matrices. All laws except `CauchyStd`
/// have mean 0 and variance 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EntryLaw {
    Gauss,
    Rademacher,
    /// Uniform on `[-sqrt 3, sqrt 3]`.
    UniformSymmetric,
    /// Standard Cauchy; has no variance, so moment checks must skip it.
    CauchyStd,
}

impl EntryLaw {
    pub fn has_variance(self) -> bool {
        !matches!(self, EntryLaw::CauchyStd)
    }

    fn draw(self, src: &mut NormalSource<TrialRng>) -> f64 {
        match self {
            EntryLaw::Gauss => src.next_normal(),
            EntryLaw::Rademacher => {
                if src.rng().random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            EntryLaw::UniformSymmetric => (2.0 * src.rng().random::<f64>() - 1.0) * 3f64.sqrt(),
            EntryLaw::CauchyStd => (std::f64::consts::PI * (src.rng().random::<f64>() - 0.5)).tan(),
        }
    }
}

/// Treatment of the diagonal of GOE matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiagonalMode {
    /// Orthogonally invariant choice: diagonal variance twice the off-diagonal one.
    Standard,
    /// Diagonal variance equal to the off-diagonal variance.
    Unit,
    /// Diagonal set to zero.
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub n: usize,
    /// Second dimension of the Wishart factor `X` (N x p). Ignored otherwise.
    pub p: usize,
    pub normalization: Normalization,
    pub entry_law: EntryLaw,
    pub diagonal: DiagonalMode,
    pub seed: u64,
}

impl EnsembleSpec {
    fn base(kind: EnsembleKind, n: usize) -> Self {
        Self {
            kind,
            n,
            p: n,
            normalization: Normalization::Normalized,
            entry_law: EntryLaw::Gauss,
            diagonal: DiagonalMode::Standard,
            seed: DEFAULT_SEED,
        }
    }

    pub fn gue(n: usize) -> Self {
        Self::base(EnsembleKind::Gue, n)
    }

    pub fn goe(n: usize) -> Self {
        Self::base(EnsembleKind::Goe, n)
    }

    pub fn ginibre(n: usize) -> Self {
        Self::base(EnsembleKind::GinibreComplex, n)
    }

    pub fn wigner(n: usize, law: EntryLaw) -> Self {
        Self { entry_law: law, ..Self::base(EnsembleKind::WignerGeneric, n) }
    }

    pub fn wishart(n: usize, p: usize) -> Self {
        Self { p, ..Self::base(EnsembleKind::Wishart, n) }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn with_diagonal(mut self, diagonal: DiagonalMode) -> Self {
        self.diagonal = diagonal;
        self
    }

    pub fn with_entry_law(mut self, law: EntryLaw) -> Self {
        self.entry_law = law;
        self
    }

    pub fn is_hermitian(&self) -> bool {
        matches!(self.kind, EnsembleKind::Goe | EnsembleKind::Gue | EnsembleKind::WignerGeneric)
    }

    /// Shape of the sampled matrix.
    pub fn shape(&self) -> (usize, usize) {
        match self.kind {
            EnsembleKind::Wishart => (self.n, self.p),
            _ => (self.n, self.n),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return param("matrix dimension N must be at least 1");
        }
        if self.kind == EnsembleKind::Wishart && self.p == 0 {
            return param("Wishart second dimension p must be at least 1");
        }
        Ok(())
    }

    fn scale(&self) -> f64 {
        match (self.normalization, self.kind) {
            (Normalization::Unnormalized, _) => 1.0,
            (Normalization::Normalized, EnsembleKind::Wishart) => 1.0 / (self.p as f64).sqrt(),
            (Normalization::Normalized, _) => 1.0 / (self.n as f64).sqrt(),
        }
    }
}

/// One realization of an ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSample {
    pub entries: CMatrix,
    pub spec: EnsembleSpec,
    pub trial: u64,
}

fn draw_matrix(spec: &EnsembleSpec, src: &mut NormalSource<TrialRng>, scale: f64) -> CMatrix {
    let n = spec.n;
    let zero = Complex64::new(0.0, 0.0);
    match spec.kind {
        EnsembleKind::Gue => {
            let mut m = CMatrix::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = Complex64::new(src.next_normal() * scale, 0.0);
                for j in i + 1..n {
                    let z = src.next_complex() * scale;
                    m[(i, j)] = z;
                    m[(j, i)] = z.conj();
                }
            }
            m
        }
        EnsembleKind::Goe => {
            let diag_scale = match spec.diagonal {
                DiagonalMode::Standard => scale * std::f64::consts::SQRT_2,
                DiagonalMode::Unit => scale,
                DiagonalMode::Zero => 0.0,
            };
            let mut m = CMatrix::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = Complex64::new(src.next_normal() * diag_scale, 0.0);
                for j in i + 1..n {
                    let x = Complex64::new(src.next_normal() * scale, 0.0);
                    m[(i, j)] = x;
                    m[(j, i)] = x;
                }
            }
            m
        }
        EnsembleKind::WignerGeneric => {
            let mut m = CMatrix::zeros(n, n);
            for i in 0..n {
                let d = spec.entry_law.draw(src) * scale;
                m[(i, i)] = if spec.diagonal == DiagonalMode::Zero { zero } else { Complex64::new(d, 0.0) };
                for j in i + 1..n {
                    let x = Complex64::new(spec.entry_law.draw(src) * scale, 0.0);
                    m[(i, j)] = x;
                    m[(j, i)] = x;
                }
            }
            m
        }
        EnsembleKind::GinibreComplex => CMatrix::from_fn(n, n, |_, _| src.next_complex() * scale),
        EnsembleKind::Wishart => {
            CMatrix::from_fn(n, spec.p, |_, _| Complex64::new(spec.entry_law.draw(src) * scale, 0.0))
        }
    }
}

/// Draw trial `trial` of `spec`.
pub fn sample(spec: &EnsembleSpec, trial: u64) -> Result<MatrixSample> {
    spec.validate()?;
    let mut src = NormalSource::new(trial_rng(spec.seed, trial));
    let entries = draw_matrix(spec, &mut src, spec.scale());
    Ok(MatrixSample { entries, spec: *spec, trial })
}

/// `W = X X^*` for a Wishart factor sample.
pub fn wishart_product(x: &MatrixSample) -> CMatrix {
    let mut w = x.entries.matmul(&x.entries.adjoint());
    // X X^* is Hermitian in exact arithmetic; force it bit-for-bit
    let n = w.rows();
    for i in 0..n {
        w[(i, i)] = Complex64::new(w[(i, i)].re, 0.0);
        for j in 0..i {
            w[(j, i)] = w[(i, j)].conj();
        }
    }
    w
}

/// Discretized Dyson walk: partial sums `A(k) = sum_{i<=k} delta * A^(i)` of
/// independent normalized GUE or GOE increments, all drawn from the stream of
/// `(spec.seed, trial)`.
pub fn sample_dyson_walk(spec: &EnsembleSpec, steps: usize, delta: f64, trial: u64) -> Result<Vec<MatrixSample>> {
    spec.validate()?;
    if !matches!(spec.kind, EnsembleKind::Gue | EnsembleKind::Goe) {
        return param("Dyson walks are defined for GUE and GOE increments only");
    }
    if steps == 0 {
        return param("a Dyson walk needs at least one step");
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return param("the walk increment must be positive");
    }
    let mut src = NormalSource::new(trial_rng(spec.seed, trial));
    let scale = spec.scale() * delta;
    let mut acc = CMatrix::zeros(spec.n, spec.n);
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let inc = draw_matrix(spec, &mut src, scale);
        acc.add_assign(&inc);
        out.push(MatrixSample { entries: acc.clone(), spec: *spec, trial });
    }
    Ok(out)
}

/// `n` independent scalar walks `sum_{i<=k} delta * x^(i)` with standard real
/// Gaussian steps, for comparison with Dyson walks. Row `k` holds the positions after step `k + 1`.
pub fn sample_independent_walks(n: usize, steps: usize, delta: f64, seed: u64, trial: u64) -> Result<Vec<Vec<f64>>> {
    if n == 0 || steps == 0 {
        return param("need at least one walker and one step");
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return param("the walk increment must be positive");
    }
    let mut src = NormalSource::new(trial_rng(seed, trial));
    let mut pos = vec![0.0; n];
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        for p in pos.iter_mut() {
            *p += delta * src.next_normal();
        }
        out.push(pos.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn goe_is_real_symmetric() {
        for seed in 0..5 {
            let s = sample(&EnsembleSpec::goe(2).with_seed(seed), 0).unwrap();
            assert!(s.entries.is_real());
            assert_eq!(s.entries.hermitian_defect(), 0.0);
        }
    }

    #[test]
    fn hermitian_kinds_are_exactly_self_adjoint() {
        for n in [1, 2, 7, 33, 64] {
            for spec in [
                EnsembleSpec::gue(n),
                EnsembleSpec::goe(n),
                EnsembleSpec::wigner(n, EntryLaw::Rademacher),
                EnsembleSpec::wigner(n, EntryLaw::UniformSymmetric),
                EnsembleSpec::wigner(n, EntryLaw::CauchyStd),
            ] {
                let s = sample(&spec, 3).unwrap();
                assert_eq!(s.entries.hermitian_defect(), 0.0, "{spec:?}");
                for i in 0..n {
                    assert_eq!(s.entries[(i, i)].im, 0.0);
                }
            }
        }
    }

    #[test]
    fn sampling_is_a_pure_function_of_spec_and_trial() {
        let spec = EnsembleSpec::ginibre(5).with_seed(99);
        assert_eq!(sample(&spec, 4).unwrap(), sample(&spec, 4).unwrap());
        assert_ne!(sample(&spec, 4).unwrap().entries, sample(&spec, 5).unwrap().entries);
    }

    #[test]
    fn dimensions_follow_spec() {
        let x = sample(&EnsembleSpec::wishart(3, 7), 0).unwrap();
        assert_eq!((x.entries.rows(), x.entries.cols()), (3, 7));
        let w = wishart_product(&x);
        assert_eq!((w.rows(), w.cols()), (3, 3));
        assert_eq!(w.hermitian_defect(), 0.0);
    }

    #[test]
    fn invalid_dimensions_rejected() {
        assert!(sample(&EnsembleSpec::gue(0), 0).is_err());
        assert!(sample(&EnsembleSpec::wishart(3, 0), 0).is_err());
        assert!(sample_dyson_walk(&EnsembleSpec::gue(2), 0, 0.1, 0).is_err());
        assert!(sample_dyson_walk(&EnsembleSpec::gue(2), 3, 0.0, 0).is_err());
        assert!(sample_dyson_walk(&EnsembleSpec::ginibre(2), 3, 0.1, 0).is_err());
    }

    #[test]
    fn zeroed_goe_diagonal() {
        let s = sample(&EnsembleSpec::goe(6).with_diagonal(DiagonalMode::Zero), 1).unwrap();
        assert!((0..6).all(|i| s.entries[(i, i)] == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn single_step_walk_is_scaled_sample() {
        let spec = EnsembleSpec::gue(4).with_seed(5);
        let walk = sample_dyson_walk(&spec, 1, 0.25, 2).unwrap();
        let mut direct = sample(&spec, 2).unwrap().entries;
        direct.scale(0.25);
        assert_eq!(walk.len(), 1);
        for (a, b) in walk[0].entries.as_slice().iter().zip(direct.as_slice()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn long_walk_is_hermitian_throughout() {
        let walk = sample_dyson_walk(&EnsembleSpec::gue(15), 1500, 0.01, 0).unwrap();
        assert_eq!(walk.len(), 1500);
        assert!(walk.iter().all(|a| a.entries.rows() == 15 && a.entries.hermitian_defect() == 0.0));
    }
}
