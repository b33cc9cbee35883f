//! Python bindings for the decomposition, the separability diagnostics,
//! and the automatic grouping, importable as `ssa_autogroup`.
//!
//! The module is the cdylib artifact of this crate renamed to
//! `ssa_autogroup.so` (see `python/smoke_test.py`); it targets the stable
//! CPython ABI for 3.10+. Input errors surface as `ValueError`, numerical
//! failures as `RuntimeError`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ssa_autogroup::{
    hc_grouping_with, run_inference as run_inference_rs, wcorr, wcorr_matrix,
    weights as weights_rs, BlockSize, BootstrapConfig, SsaDecomposition, TimeSeries,
};

fn to_py(e: ssa_autogroup::Error) -> PyErr {
    match e.exit_code() {
        1 => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse<T>(s: &str) -> PyResult<T>
where
    T: std::str::FromStr<Err = ssa_autogroup::Error>,
{
    s.parse().map_err(to_py)
}

/// Eigendecomposition of a series' trajectory matrix.
#[pyclass(frozen)]
struct Decomposition {
    inner: SsaDecomposition,
}

#[pymethods]
impl Decomposition {
    /// Series length N.
    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    /// Window length L.
    #[getter]
    fn window(&self) -> usize {
        self.inner.window()
    }

    /// Number of components above the rank tolerance.
    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    /// All L eigenvalues of X·Xᵀ, descending.
    fn eigenvalues(&self) -> Vec<f64> {
        self.inner.eigenvalues().to_vec()
    }

    /// Series reconstructed from the given 1-based component indices.
    fn reconstruct(&self, indices: Vec<usize>) -> PyResult<Vec<f64>> {
        Ok(self
            .inner
            .reconstruct(&indices)
            .map_err(to_py)?
            .into_values())
    }

    /// Reconstruction of the single component `i` (1-based).
    fn elementary(&self, i: usize) -> PyResult<Vec<f64>> {
        Ok(self.inner.elementary(i).map_err(to_py)?.into_values())
    }

    /// `(signal, residual)` for grouping index `g`: the signal rebuilds
    /// components 1..=g, and `signal + residual` is the original series.
    fn split(&self, g: usize) -> PyResult<(Vec<f64>, Vec<f64>)> {
        let split = self.inner.split(g).map_err(to_py)?;
        Ok((
            split.signal.into_values(),
            split.residual.into_values(),
        ))
    }

    /// The rank×rank matrix of absolute w-correlations between elementary
    /// components, as a list of rows.
    fn wcorr_matrix(&self) -> PyResult<Vec<Vec<f64>>> {
        let m = wcorr_matrix(&self.inner).map_err(to_py)?;
        Ok(m.rows().map(<[f64]>::to_vec).collect())
    }

    /// Clusters the components by w-correlation distance and returns
    /// `(first, second, g_hc, trivial)`: the cluster containing component
    /// 1, the remaining components, the largest index in the first
    /// cluster, and whether the partition was trivial (rank < 2).
    #[pyo3(signature = (linkage = "complete"))]
    fn hc_grouping(&self, linkage: &str) -> PyResult<(Vec<usize>, Vec<usize>, usize, bool)> {
        let hc = hc_grouping_with(&self.inner, parse(linkage)?).map_err(to_py)?;
        Ok((hc.first, hc.second, hc.g_hc, hc.trivial))
    }

    fn __repr__(&self) -> String {
        format!(
            "Decomposition(n={}, window={}, rank={})",
            self.inner.n(),
            self.inner.window(),
            self.inner.rank()
        )
    }
}

/// One tested grouping index.
#[pyclass(frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct HypothesisTest {
    g: usize,
    t_obs: f64,
    p_raw: f64,
    p_adjusted: f64,
    rejected: bool,
    degenerate: bool,
}

#[pymethods]
impl HypothesisTest {
    fn __repr__(&self) -> String {
        format!(
            "HypothesisTest(g={}, t_obs={:e}, p_raw={}, p_adjusted={}, rejected={}, degenerate={})",
            self.g, self.t_obs, self.p_raw, self.p_adjusted, self.rejected, self.degenerate
        )
    }
}

/// Outcome of the automatic grouping selection.
#[pyclass(frozen)]
struct Grouping {
    /// Selected grouping index.
    #[pyo3(get)]
    g_hat: usize,
    /// Decomposition rank (one more than the number of tests).
    #[pyo3(get)]
    rank: usize,
    #[pyo3(get)]
    alpha: f64,
    #[pyo3(get)]
    correction: String,
    tests: Vec<HypothesisTest>,
}

#[pymethods]
impl Grouping {
    /// Per-index test results, in order g = 1..rank−1.
    #[getter]
    fn tests(&self) -> Vec<HypothesisTest> {
        self.tests.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "Grouping(g_hat={}, rank={}, alpha={}, correction='{}')",
            self.g_hat, self.rank, self.alpha, self.correction
        )
    }
}

/// Decomposes `values` with window length `window`.
#[pyfunction]
fn decompose(values: Vec<f64>, window: usize) -> PyResult<Decomposition> {
    let series = TimeSeries::new(values).map_err(to_py)?;
    let x = ssa_autogroup::embed(&series, window).map_err(to_py)?;
    Ok(Decomposition {
        inner: ssa_autogroup::decompose(&x).map_err(to_py)?,
    })
}

/// Diagonal weights w_t = min{t, L, N−t+1} (1-based t).
#[pyfunction]
fn weights(n: usize, window: usize) -> PyResult<Vec<f64>> {
    Ok(weights_rs(n, window).map_err(to_py)?.values().to_vec())
}

/// Weighted correlation of two equal-length series under the diagonal
/// weights for `window`.
#[pyfunction]
fn w_correlation(a: Vec<f64>, b: Vec<f64>, window: usize) -> PyResult<f64> {
    let w = weights_rs(a.len(), window).map_err(to_py)?;
    wcorr(&a, &b, &w).map_err(to_py)
}

/// Runs the full automatic grouping: decompose, bootstrap-test every
/// candidate index, correct for multiplicity, select.
///
/// `ell=None` picks the block size max(2, round(N^(1/5))).
#[pyfunction]
#[pyo3(signature = (
    values,
    window,
    *,
    alpha = 0.1,
    correction = "holm",
    replications = 1000,
    seed = 0,
    ell = None,
    taper = "triangle",
    aux = "gaussian",
))]
#[allow(clippy::too_many_arguments)]
fn run_inference(
    values: Vec<f64>,
    window: usize,
    alpha: f64,
    correction: &str,
    replications: usize,
    seed: u64,
    ell: Option<usize>,
    taper: &str,
    aux: &str,
) -> PyResult<Grouping> {
    let series = TimeSeries::new(values).map_err(to_py)?;
    let cfg = BootstrapConfig {
        block_size: ell.map_or(BlockSize::Auto, BlockSize::Fixed),
        window: parse(taper)?,
        aux: parse(aux)?,
        replications,
        seed,
    };
    let result =
        run_inference_rs(&series, window, &cfg, parse(correction)?, alpha).map_err(to_py)?;
    Ok(Grouping {
        g_hat: result.g_hat,
        rank: result.rank,
        alpha: result.alpha,
        correction: result.correction.to_string(),
        tests: result
            .results
            .iter()
            .map(|t| HypothesisTest {
                g: t.g,
                t_obs: t.t_obs,
                p_raw: t.p_raw,
                p_adjusted: t.p_adjusted,
                rejected: t.rejected,
                degenerate: t.degenerate,
            })
            .collect(),
    })
}

#[pymodule]
#[pyo3(name = "ssa_autogroup")]
fn bindings(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Decomposition>()?;
    m.add_class::<Grouping>()?;
    m.add_class::<HypothesisTest>()?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(weights, m)?)?;
    m.add_function(wrap_pyfunction!(w_correlation, m)?)?;
    m.add_function(wrap_pyfunction!(run_inference, m)?)?;
    Ok(())
}
