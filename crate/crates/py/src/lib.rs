//! Python bindings: `import rmt_lab_py`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use rmt_lab::combinatorics;
use rmt_lab::edge;
use rmt_lab::ensembles::{self, EnsembleKind, EntryLaw, Normalization};
use rmt_lab::harer_zagier;
use rmt_lab::hermite;
use rmt_lab::paths;
use rmt_lab::rng::DEFAULT_SEED;
use rmt_lab::rsk as rsk_core;
use rmt_lab::spectral;
use rmt_lab::RmtError;

fn py_err(e: RmtError) -> PyErr {
    match e {
        RmtError::Resource(_) | RmtError::Convergence(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for rmt_lab::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn fraction<'py>(py: Python<'py>, r: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((r.numer().clone(), r.denom().clone()))
}

fn parse_law(law: &str) -> PyResult<EntryLaw> {
    Ok(match law {
        "gauss" => EntryLaw::Gauss,
        "rademacher" => EntryLaw::Rademacher,
        "uniform" => EntryLaw::UniformSymmetric,
        "cauchy" => EntryLaw::CauchyStd,
        other => return Err(PyValueError::new_err(format!("unknown entry law `{other}`"))),
    })
}

/// Ensemble description; sampling is a pure function of `(spec, trial)`.
#[pyclass(name = "EnsembleSpec", frozen)]
struct PyEnsembleSpec {
    inner: ensembles::EnsembleSpec,
}

#[pymethods]
impl PyEnsembleSpec {
    #[new]
    #[pyo3(signature = (kind, n, p=None, seed=DEFAULT_SEED, normalized=true, law="gauss"))]
    fn new(kind: &str, n: usize, p: Option<usize>, seed: u64, normalized: bool, law: &str) -> PyResult<Self> {
        let law = parse_law(law)?;
        let spec = match kind {
            "gue" => ensembles::EnsembleSpec::gue(n),
            "goe" => ensembles::EnsembleSpec::goe(n),
            "ginibre" => ensembles::EnsembleSpec::ginibre(n),
            "wigner" => ensembles::EnsembleSpec::wigner(n, law),
            "wishart" => ensembles::EnsembleSpec::wishart(n, p.unwrap_or(n)).with_entry_law(law),
            other => return Err(PyValueError::new_err(format!("unknown ensemble `{other}`"))),
        };
        let norm = if normalized { Normalization::Normalized } else { Normalization::Unnormalized };
        let inner = spec.with_seed(seed).with_normalization(norm);
        inner.validate().py()?;
        Ok(Self { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    /// Entries of trial `trial` as a list of rows.
    #[pyo3(signature = (trial=0))]
    fn sample(&self, trial: u64) -> PyResult<Vec<Vec<Complex64>>> {
        let m = ensembles::sample(&self.inner, trial).py()?.entries;
        Ok((0..m.rows()).map(|i| m.row(i).to_vec()).collect())
    }

    /// Sorted real eigenvalues (of `X X^*` for Wishart).
    #[pyo3(signature = (trial=0))]
    fn eigenvalues(&self, trial: u64) -> PyResult<Vec<f64>> {
        let s = ensembles::sample(&self.inner, trial).py()?;
        match self.inner.kind {
            EnsembleKind::GinibreComplex => Err(PyValueError::new_err("use complex_eigenvalues for ginibre")),
            EnsembleKind::Wishart => {
                spectral::hermitian_eigenvalues(&ensembles::wishart_product(&s), spectral::DEFAULT_TOL).py()
            }
            _ => spectral::hermitian_eigenvalues(&s.entries, spectral::DEFAULT_TOL).py(),
        }
    }

    #[pyo3(signature = (trial=0))]
    fn complex_eigenvalues(&self, trial: u64) -> PyResult<Vec<Complex64>> {
        let s = ensembles::sample(&self.inner, trial).py()?;
        spectral::general_eigenvalues(&s.entries, spectral::DEFAULT_TOL).py()
    }

    fn __repr__(&self) -> String {
        format!("EnsembleSpec({:?}, n={}, seed={})", self.inner.kind, self.inner.n, self.inner.seed)
    }
}

#[pyclass(name = "Histogram", frozen)]
struct PyHistogram {
    inner: spectral::Histogram,
}

#[pymethods]
impl PyHistogram {
    #[getter]
    fn counts(&self) -> Vec<u64> {
        self.inner.counts.iter().map(|&c| c as u64).collect()
    }

    #[getter]
    fn edges(&self) -> Vec<f64> {
        self.inner.edges()
    }

    #[getter]
    fn densities(&self) -> Vec<f64> {
        self.inner.densities()
    }

    fn l1_to_semicircle(&self) -> PyResult<f64> {
        self.inner.l1_distance_to_density(spectral::semicircle_density).py()
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }
}

#[pyfunction]
fn esd_histogram(eigs: Vec<f64>, bins: usize, lo: f64, hi: f64) -> PyResult<PyHistogram> {
    Ok(PyHistogram { inner: spectral::esd_histogram(&eigs, bins, (lo, hi)).py()? })
}

/// Tabulated Tracy–Widom F2.
#[pyclass(name = "F2Table", frozen)]
struct PyF2Table {
    inner: edge::F2Table,
}

#[pymethods]
impl PyF2Table {
    #[new]
    #[pyo3(signature = (t_min=-6.0, t_max=5.0, dt=0.01, step=1e-3))]
    fn new(t_min: f64, t_max: f64, dt: f64, step: f64) -> PyResult<Self> {
        Ok(Self { inner: edge::F2Table::build(t_min, t_max, dt, step).py()? })
    }

    fn cdf(&self, t: f64) -> f64 {
        edge::f2_cdf(&self.inner, t).value
    }

    fn quantile(&self, p: f64) -> Option<f64> {
        self.inner.quantile(p)
    }

    fn q(&self, x: f64) -> f64 {
        self.inner.solution.q_at(x)
    }

    fn ks_distance(&self, sample: Vec<f64>) -> f64 {
        edge::ks_distance(&sample, |t| edge::f2_cdf(&self.inner, t).value)
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }
}

#[pyfunction]
fn gue_moment_exact(m: usize) -> PyResult<Vec<num_bigint::BigUint>> {
    Ok(combinatorics::gue_moment_exact(m).py()?.genus_coeffs().to_vec())
}

#[pyfunction]
fn catalan(k: u64) -> num_bigint::BigUint {
    combinatorics::catalan(k)
}

#[pyfunction]
fn mixed_gue_moment_limit(colors: Vec<i64>) -> num_bigint::BigUint {
    combinatorics::mixed_gue_moment_limit(&colors)
}

#[pyfunction]
fn hz_bk(py: Python<'_>, k: usize, n: u64) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &harer_zagier::hz_bk(k, n).py()?)
}

/// Coefficients of `b_k` in powers of `N^{-2}`, as `Fraction`s.
#[pyfunction]
fn hz_bk_symbolic(py: Python<'_>, k: usize) -> PyResult<Vec<Bound<'_, PyAny>>> {
    harer_zagier::hz_bk_symbolic(k).py()?.coeffs.iter().map(|c| fraction(py, c)).collect()
}

/// `(k, eps, bound at N, limit bound)` for `P(lambda_max >= 2 + t N^{-2/3})`.
#[pyfunction]
fn lambda_max_tail(t: f64, n: u64) -> PyResult<(usize, f64, f64, f64)> {
    let o = harer_zagier::lambda_max_tail_optimized(t, n).py()?;
    Ok((o.k, o.eps, o.at_n, o.limit))
}

#[pyfunction]
fn semicircle_density(x: f64) -> f64 {
    spectral::semicircle_density(x)
}

#[pyfunction]
fn semicircle_stieltjes(z: Complex64) -> PyResult<Complex64> {
    spectral::semicircle_stieltjes(z).py()
}

#[pyfunction]
fn marchenko_pastur_density(c: f64, x: f64) -> f64 {
    spectral::marchenko_pastur_density(c, x)
}

#[pyfunction]
#[pyo3(signature = (n, x, normalized=true))]
fn gue_density(n: usize, x: f64, normalized: bool) -> f64 {
    hermite::gue_density_exact(n, x, normalized)
}

#[pyfunction]
#[pyo3(signature = (n, z, normalized=true))]
fn ginibre_density(n: usize, z: Complex64, normalized: bool) -> f64 {
    hermite::ginibre_density_exact(n, z, normalized)
}

#[pyfunction]
fn airy(x: f64) -> PyResult<f64> {
    edge::airy(x).py()
}

#[pyfunction]
#[pyo3(signature = (n, trials, seed=DEFAULT_SEED))]
fn edge_statistic_mc(n: usize, trials: usize, seed: u64) -> PyResult<Vec<f64>> {
    edge::edge_statistic_mc(&ensembles::EnsembleSpec::gue(n).with_seed(seed), trials).py()
}

fn walk_spec(horizon: usize, starts: Vec<i64>, ends: Vec<i64>) -> paths::WalkSpec {
    paths::WalkSpec::symmetric(horizon, starts, ends)
}

/// Karlin–McGregor determinant for symmetric simple walks, as a `Fraction`.
#[pyfunction]
fn km_determinant(py: Python<'_>, horizon: usize, starts: Vec<i64>, ends: Vec<i64>) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &paths::km_determinant(&walk_spec(horizon, starts, ends)).py()?)
}

#[pyfunction]
fn km_enumerate(py: Python<'_>, horizon: usize, starts: Vec<i64>, ends: Vec<i64>) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &paths::km_enumerate(&walk_spec(horizon, starts, ends)).py()?)
}

#[pyfunction]
fn catalan_hankel_det(n: usize) -> BigInt {
    paths::catalan_hankel_det(n)
}

/// `(P, Q)` as lists of rows.
#[pyfunction]
fn rsk(perm: Vec<usize>) -> PyResult<(Vec<Vec<usize>>, Vec<Vec<usize>>)> {
    let (p, q) = rsk_core::rsk(&perm).py()?;
    Ok((p.rows, q.rows))
}

#[pyfunction]
fn rsk_inverse(p: Vec<Vec<usize>>, q: Vec<Vec<usize>>) -> PyResult<Vec<usize>> {
    rsk_core::rsk_inverse(&rsk_core::YoungTableau::new(p), &rsk_core::YoungTableau::new(q)).py()
}

#[pyfunction]
fn lis(seq: Vec<i64>) -> usize {
    rsk_core::lis(&seq)
}

/// `(L_n - 2 sqrt n) / n^{1/6}` over `trials` uniform permutations.
#[pyfunction]
#[pyo3(signature = (n, trials, seed=DEFAULT_SEED))]
fn bdj_statistic_mc(n: usize, trials: usize, seed: u64) -> PyResult<Vec<f64>> {
    Ok(rsk_core::bdj_statistic_mc(n, trials, seed).py()?.statistic)
}

#[pymodule]
fn rmt_lab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DEFAULT_SEED", DEFAULT_SEED)?;
    m.add_class::<PyEnsembleSpec>()?;
    m.add_class::<PyHistogram>()?;
    m.add_class::<PyF2Table>()?;
    m.add_function(wrap_pyfunction!(esd_histogram, m)?)?;
    m.add_function(wrap_pyfunction!(gue_moment_exact, m)?)?;
    m.add_function(wrap_pyfunction!(catalan, m)?)?;
    m.add_function(wrap_pyfunction!(mixed_gue_moment_limit, m)?)?;
    m.add_function(wrap_pyfunction!(hz_bk, m)?)?;
    m.add_function(wrap_pyfunction!(hz_bk_symbolic, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_max_tail, m)?)?;
    m.add_function(wrap_pyfunction!(semicircle_density, m)?)?;
    m.add_function(wrap_pyfunction!(semicircle_stieltjes, m)?)?;
    m.add_function(wrap_pyfunction!(marchenko_pastur_density, m)?)?;
    m.add_function(wrap_pyfunction!(gue_density, m)?)?;
    m.add_function(wrap_pyfunction!(ginibre_density, m)?)?;
    m.add_function(wrap_pyfunction!(airy, m)?)?;
    m.add_function(wrap_pyfunction!(edge_statistic_mc, m)?)?;
    m.add_function(wrap_pyfunction!(km_determinant, m)?)?;
    m.add_function(wrap_pyfunction!(km_enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(catalan_hankel_det, m)?)?;
    m.add_function(wrap_pyfunction!(rsk, m)?)?;
    m.add_function(wrap_pyfunction!(rsk_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(lis, m)?)?;
    m.add_function(wrap_pyfunction!(bdj_statistic_mc, m)?)?;
    Ok(())
}
