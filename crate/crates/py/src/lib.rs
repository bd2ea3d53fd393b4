//! Python bindings for `ia_core`.
//!
//! Matrices cross the boundary as row-major nested lists of Python `complex`.
//! Indices are zero-based.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ia_core::metrics::{self, Algorithm, AlgorithmOptions};
use ia_core::optimizer::SdOptions;
use ia_core::{baseline, differential, network, optimizer, CMat, Complex, IaError};

type Rows = Vec<Vec<Complex<f64>>>;

fn to_py_err(e: IaError) -> PyErr {
    if e.is_input_error() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn to_rows(m: &CMat) -> Rows {
    (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect()
}

fn from_rows(rows: &Rows) -> PyResult<CMat> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || cols == 0 || rows.iter().any(|r| r.len() != cols) {
        return Err(PyValueError::new_err("matrix must be a non-empty rectangular list of rows"));
    }
    Ok(CMat::from_fn(rows.len(), cols, |r, c| rows[r][c]))
}

fn parse_algorithm(name: &str) -> PyResult<Algorithm> {
    match name {
        "one_sided_sd" => Ok(Algorithm::OneSidedSd),
        "distributed_ia" => Ok(Algorithm::DistributedIa),
        other => Err(PyValueError::new_err(format!(
            "unknown algorithm {other:?}; expected \"one_sided_sd\" or \"distributed_ia\""
        ))),
    }
}

/// Antenna counts, stream counts and powers of a K-user network.
#[pyclass(name = "NetworkConfig", module = "onesided_ia", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyNetworkConfig(network::NetworkConfig);

#[pymethods]
impl PyNetworkConfig {
    #[new]
    #[pyo3(signature = (k, m, n, d, power, noise_var = 1.0))]
    fn new(k: usize, m: Vec<usize>, n: Vec<usize>, d: Vec<usize>, power: Vec<f64>, noise_var: f64) -> PyResult<Self> {
        network::NetworkConfig::new(k, m, n, d, power, noise_var).map(Self).map_err(to_py_err)
    }

    /// Every user gets `m` transmit and `n` receive antennas, `d` streams and
    /// power `power`.
    #[staticmethod]
    fn symmetric(k: usize, m: usize, n: usize, d: usize, power: f64) -> PyResult<Self> {
        network::NetworkConfig::symmetric(k, m, n, d, power).map(Self).map_err(to_py_err)
    }

    fn with_snr_db(&self, snr_db: f64) -> Self {
        Self(self.0.with_snr_db(snr_db))
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k
    }
    #[getter]
    fn m(&self) -> Vec<usize> {
        self.0.m.clone()
    }
    #[getter]
    fn n(&self) -> Vec<usize> {
        self.0.n.clone()
    }
    #[getter]
    fn d(&self) -> Vec<usize> {
        self.0.d.clone()
    }
    #[getter]
    fn power(&self) -> Vec<f64> {
        self.0.power.clone()
    }
    #[getter]
    fn noise_var(&self) -> f64 {
        self.0.noise_var
    }

    fn __repr__(&self) -> String {
        let c = &self.0;
        format!(
            "NetworkConfig(k={}, m={:?}, n={:?}, d={:?}, power={:?}, noise_var={})",
            c.k, c.m, c.n, c.d, c.power, c.noise_var
        )
    }
}

/// Channel matrices `H[k][j]`, receiver `k` by transmitter `j`.
#[pyclass(name = "Channels", module = "onesided_ia", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyChannels(network::ChannelSet);

#[pymethods]
impl PyChannels {
    /// I.i.d. unit-variance circular complex Gaussian entries.
    #[staticmethod]
    fn draw(config: &PyNetworkConfig, seed: u64) -> Self {
        Self(network::draw_channels(&config.0, seed))
    }

    /// `matrices[k][j]` is `H[k][j]`.
    #[staticmethod]
    fn from_matrices(config: &PyNetworkConfig, matrices: Vec<Vec<Rows>>) -> PyResult<Self> {
        let h = matrices.iter().flatten().map(from_rows).collect::<PyResult<_>>()?;
        network::ChannelSet::from_matrices(&config.0, h).map(Self).map_err(to_py_err)
    }

    fn get(&self, k: usize, j: usize) -> PyResult<Rows> {
        let users = self.0.users();
        if k >= users || j >= users {
            return Err(PyValueError::new_err(format!("link ({k}, {j}) out of range for {users} users")));
        }
        Ok(to_rows(self.0.get(k, j)))
    }

    /// Reverse-link channels `H[j][k]^H`.
    fn reciprocal(&self) -> Self {
        Self(self.0.reciprocal())
    }

    #[getter]
    fn users(&self) -> usize {
        self.0.users()
    }
}

/// One precoder `V[j]` with orthonormal columns per transmitter.
#[pyclass(name = "Precoders", module = "onesided_ia", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPrecoders(network::PrecoderSet);

#[pymethods]
impl PyPrecoders {
    #[staticmethod]
    fn random(config: &PyNetworkConfig, seed: u64) -> PyResult<Self> {
        network::random_precoders(&config.0, seed).map(Self).map_err(to_py_err)
    }

    #[staticmethod]
    fn from_matrices(config: &PyNetworkConfig, matrices: Vec<Rows>) -> PyResult<Self> {
        let v = matrices.iter().map(from_rows).collect::<PyResult<_>>()?;
        network::PrecoderSet::new(&config.0, v).map(Self).map_err(to_py_err)
    }

    fn matrices(&self) -> Vec<Rows> {
        self.0.v.iter().map(to_rows).collect()
    }

    fn orthonormality_error(&self) -> f64 {
        self.0.orthonormality_error()
    }

    fn __len__(&self) -> usize {
        self.0.v.len()
    }
}

/// Outcome of an optimizer run.
#[pyclass(name = "RunResult", module = "onesided_ia", frozen, get_all)]
struct PyRunResult {
    precoders: PyPrecoders,
    /// Total leakage before the first iteration and after each one.
    costs: Vec<f64>,
    status: String,
    iterations: usize,
}

#[pymethods]
impl PyRunResult {
    fn __repr__(&self) -> String {
        format!(
            "RunResult(status={:?}, iterations={}, initial={:e}, final={:e})",
            self.status,
            self.iterations,
            self.costs[0],
            self.costs[self.costs.len() - 1]
        )
    }
}

/// Interference covariance seen by receiver `k`.
#[pyfunction]
fn interference_covariance(
    channels: &PyChannels,
    precoders: &PyPrecoders,
    config: &PyNetworkConfig,
    k: usize,
) -> PyResult<Rows> {
    let q = network::interference_covariance(&channels.0, &precoders.0, &config.0, k).map_err(to_py_err)?;
    Ok(to_rows(q.as_matrix()))
}

/// Sum over receivers of the `d` smallest interference eigenvalues.
#[pyfunction]
fn leakage_cost(channels: &PyChannels, precoders: &PyPrecoders, config: &PyNetworkConfig) -> PyResult<f64> {
    differential::leakage_cost(&channels.0, &precoders.0, &config.0).map_err(to_py_err)
}

#[pyfunction]
fn receiver_leakage(channels: &PyChannels, precoders: &PyPrecoders, config: &PyNetworkConfig) -> PyResult<Vec<f64>> {
    differential::receiver_leakage(&channels.0, &precoders.0, &config.0).map_err(to_py_err)
}

/// Steepest-descent direction of transmitter `j`, an `m x d` matrix.
#[pyfunction]
fn descent_direction(
    channels: &PyChannels,
    precoders: &PyPrecoders,
    config: &PyNetworkConfig,
    j: usize,
) -> PyResult<Rows> {
    let jac = differential::tx_gradient(&channels.0, &precoders.0, &config.0, j).map_err(to_py_err)?;
    let z = differential::descent_direction(&jac, config.0.m[j], config.0.d[j]).map_err(to_py_err)?;
    Ok(to_rows(&z))
}

/// Transmitter-only steepest descent from `init`.
#[pyfunction]
#[pyo3(signature = (channels, config, init, max_sweeps = 1000, tol = 1e-10, gamma_init = 0.1))]
fn sd_optimize(
    py: Python<'_>,
    channels: &PyChannels,
    config: &PyNetworkConfig,
    init: &PyPrecoders,
    max_sweeps: usize,
    tol: f64,
    gamma_init: f64,
) -> PyResult<PyRunResult> {
    let opts = SdOptions { max_sweeps, tol, gamma_init, ..SdOptions::default() };
    let out = py
        .detach(|| optimizer::run(&channels.0, &config.0, &init.0, &opts))
        .map_err(to_py_err)?;
    Ok(PyRunResult {
        costs: out.trace.iter().map(|r| r.f).collect(),
        status: out.status.as_str().to_string(),
        iterations: out.sweeps(),
        precoders: PyPrecoders(out.precoders),
    })
}

/// Forward/reverse alternating alignment from `init`.
#[pyfunction]
#[pyo3(signature = (channels, config, init, max_iters = 20000, tol = 1e-10))]
fn distributed_ia(
    py: Python<'_>,
    channels: &PyChannels,
    config: &PyNetworkConfig,
    init: &PyPrecoders,
    max_iters: usize,
    tol: f64,
) -> PyResult<PyRunResult> {
    let out = py
        .detach(|| baseline::distributed_ia_run(&channels.0, &config.0, &init.0, max_iters, tol))
        .map_err(to_py_err)?;
    Ok(PyRunResult {
        iterations: out.iterations(),
        status: out.status.as_str().to_string(),
        costs: out.trace,
        precoders: PyPrecoders(out.precoders),
    })
}

/// Sum rate in bits with each receiver projecting onto its least-interfered
/// subspace.
#[pyfunction]
fn effective_sum_rate(channels: &PyChannels, precoders: &PyPrecoders, config: &PyNetworkConfig) -> PyResult<f64> {
    metrics::effective_sum_rate(&channels.0, &precoders.0, &config.0).map_err(to_py_err)
}

/// Largest principal angle between interferer pairs at any receiver, or
/// `None` with fewer than three users.
#[pyfunction]
fn max_alignment_angle(
    channels: &PyChannels,
    precoders: &PyPrecoders,
    config: &PyNetworkConfig,
) -> PyResult<Option<f64>> {
    metrics::max_alignment_angle(&channels.0, &precoders.0, &config.0).map_err(to_py_err)
}

#[pyfunction]
fn theoretical_capacity(k: usize, m: usize, p: f64) -> f64 {
    metrics::theoretical_capacity(k, m, p)
}

/// Mean effective sum rate over one optimized channel draw per seed.
#[pyfunction]
#[pyo3(signature = (config, seeds, algorithm, snr_db))]
fn ergodic_sum_rate(
    py: Python<'_>,
    config: &PyNetworkConfig,
    seeds: Vec<u64>,
    algorithm: &str,
    snr_db: f64,
) -> PyResult<f64> {
    let alg = parse_algorithm(algorithm)?;
    py.detach(|| metrics::ergodic_sum_rate(&config.0, &seeds, alg, snr_db, &AlgorithmOptions::default()))
        .map_err(to_py_err)
}

#[pymodule]
fn onesided_ia(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyNetworkConfig>()?;
    m.add_class::<PyChannels>()?;
    m.add_class::<PyPrecoders>()?;
    m.add_class::<PyRunResult>()?;
    m.add_function(wrap_pyfunction!(interference_covariance, m)?)?;
    m.add_function(wrap_pyfunction!(leakage_cost, m)?)?;
    m.add_function(wrap_pyfunction!(receiver_leakage, m)?)?;
    m.add_function(wrap_pyfunction!(descent_direction, m)?)?;
    m.add_function(wrap_pyfunction!(sd_optimize, m)?)?;
    m.add_function(wrap_pyfunction!(distributed_ia, m)?)?;
    m.add_function(wrap_pyfunction!(effective_sum_rate, m)?)?;
    m.add_function(wrap_pyfunction!(max_alignment_angle, m)?)?;
    m.add_function(wrap_pyfunction!(theoretical_capacity, m)?)?;
    m.add_function(wrap_pyfunction!(ergodic_sum_rate, m)?)?;
    Ok(())
}
