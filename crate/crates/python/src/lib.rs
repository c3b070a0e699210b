//! Python bindings. Matrices cross the boundary as nested lists of complex
//! numbers, so NumPy is optional on the Python side.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use releq::classical::{self, ProbDist};
use releq::entanglement::{self, ReeOptions};
use releq::matcore::{CMatrix, CVector};
use releq::qalgo::{self, BoolFn};
use releq::qchannel::{self, KrausChannel};
use releq::qentropy::{self, Ensemble};
use releq::qstate::{self, Ket};
use releq::{protocols, selftest, Units};

fn err(e: releq::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn units(s: &str) -> PyResult<Units> {
    s.parse().map_err(PyValueError::new_err)
}

fn to_matrix(rows: Vec<Vec<Complex64>>) -> PyResult<CMatrix> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(PyValueError::new_err("ragged matrix rows"));
    }
    Ok(CMatrix::from_fn(n, m, |i, j| rows[i][j]))
}

fn from_matrix(m: &CMatrix) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn ket(amps: Vec<Complex64>, dims: Option<Vec<usize>>) -> PyResult<Ket> {
    let dims = dims.unwrap_or_else(|| vec![amps.len()]);
    Ket::normalized(CVector::from_vec(amps), dims).map_err(err)
}

#[pyclass(name = "DensityMatrix", module = "pyreleq", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyDensity(qstate::DensityMatrix);

#[pymethods]
impl PyDensity {
    /// Density matrix from a nested list; `dims` defaults to a single system.
    #[new]
    #[pyo3(signature = (rows, dims=None))]
    fn new(rows: Vec<Vec<Complex64>>, dims: Option<Vec<usize>>) -> PyResult<Self> {
        let m = to_matrix(rows)?;
        let dims = dims.unwrap_or_else(|| vec![m.nrows()]);
        Ok(Self(qstate::DensityMatrix::new(m, dims).map_err(err)?))
    }

    /// `|ψ><ψ|` for amplitudes `amps` (normalized on the way in).
    #[staticmethod]
    #[pyo3(signature = (amps, dims=None))]
    fn from_ket(amps: Vec<Complex64>, dims: Option<Vec<usize>>) -> PyResult<Self> {
        Ok(Self(ket(amps, dims)?.to_density()))
    }

    #[staticmethod]
    fn maximally_mixed(dims: Vec<usize>) -> Self {
        Self(qstate::DensityMatrix::maximally_mixed(dims))
    }

    #[staticmethod]
    #[pyo3(signature = (dims, rank=None, seed=0))]
    fn random(dims: Vec<usize>, rank: Option<usize>, seed: u64) -> PyResult<Self> {
        let d: usize = dims.iter().product();
        let mut rng = releq::random::seeded(seed);
        Ok(Self(qstate::DensityMatrix::random(dims, rank.unwrap_or(d), &mut rng).map_err(err)?))
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.0.dims().to_vec()
    }

    fn to_list(&self) -> Vec<Vec<Complex64>> {
        from_matrix(self.0.matrix())
    }

    /// Eigenvalues in ascending order.
    fn spectrum(&self) -> Vec<f64> {
        self.0.spectrum()
    }

    fn purity(&self) -> f64 {
        self.0.purity()
    }

    /// Partial trace keeping the listed subsystems.
    fn reduce(&self, keep: Vec<usize>) -> PyResult<Self> {
        Ok(Self(self.0.reduce(&keep).map_err(err)?))
    }

    fn tensor(&self, other: &PyDensity) -> Self {
        Self(self.0.tensor(&other.0))
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(dims={:?}, purity={:.6})", self.0.dims(), self.0.purity())
    }
}

#[pyclass(name = "KrausChannel", module = "pyreleq", frozen)]
pub struct PyChannel(KrausChannel);

#[pymethods]
impl PyChannel {
    #[new]
    fn new(ops: Vec<Vec<Vec<Complex64>>>) -> PyResult<Self> {
        let ops = ops.into_iter().map(to_matrix).collect::<PyResult<Vec<_>>>()?;
        Ok(Self(KrausChannel::new(ops).map_err(err)?))
    }

    fn apply(&self, rho: &PyDensity) -> PyResult<PyDensity> {
        Ok(PyDensity(qchannel::apply(&self.0, &rho.0).map_err(err)?))
    }

    fn choi_state(&self) -> PyDensity {
        PyDensity(qchannel::choi_state(&self.0))
    }

    /// `(U, ancilla amplitudes)` of the unitary dilation.
    fn dilate(&self) -> (Vec<Vec<Complex64>>, Vec<Complex64>) {
        let d = qchannel::dilate(&self.0);
        (from_matrix(&d.unitary), d.ancilla_state.amps().iter().copied().collect())
    }
}

#[pyfunction]
#[pyo3(signature = (rho, units="bits"))]
fn von_neumann(rho: &PyDensity, units: &str) -> PyResult<f64> {
    Ok(qentropy::von_neumann(&rho.0, self::units(units)?))
}

/// `S(sigma‖rho)`; infinite when the supports are incompatible.
#[pyfunction]
#[pyo3(signature = (sigma, rho, units="bits"))]
fn relative_entropy(sigma: &PyDensity, rho: &PyDensity, units: &str) -> PyResult<f64> {
    qentropy::qrelent(&sigma.0, &rho.0, self::units(units)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (rho, units="bits"))]
fn mutual_information(rho: &PyDensity, units: &str) -> PyResult<f64> {
    qentropy::qmutual(&rho.0, self::units(units)?).map_err(err)
}

/// Holevo quantity of `[(p, state), ...]`.
#[pyfunction]
#[pyo3(signature = (ensemble, units="bits"))]
fn holevo(ensemble: Vec<(f64, PyDensity)>, units: &str) -> PyResult<f64> {
    let e = Ensemble::new(ensemble.into_iter().map(|(p, s)| (p, s.0)).collect()).map_err(err)?;
    Ok(qentropy::holevo(&e, self::units(units)?))
}

#[pyfunction]
fn fidelity(rho: &PyDensity, sigma: &PyDensity) -> PyResult<f64> {
    qstate::fidelity(&rho.0, &sigma.0).map_err(err)
}

#[pyfunction]
fn bures_distance(rho: &PyDensity, sigma: &PyDensity) -> PyResult<f64> {
    qstate::bures_distance(&rho.0, &sigma.0).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (p, units="bits"))]
fn shannon_entropy(p: Vec<f64>, units: &str) -> PyResult<f64> {
    Ok(classical::shannon_entropy(&ProbDist::new(p).map_err(err)?, self::units(units)?))
}

#[pyfunction]
#[pyo3(signature = (p, q, units="bits"))]
fn kl_divergence(p: Vec<f64>, q: Vec<f64>, units: &str) -> PyResult<f64> {
    let (p, q) = (ProbDist::new(p).map_err(err)?, ProbDist::new(q).map_err(err)?);
    classical::kl_divergence(&p, &q, self::units(units)?).map_err(err)
}

#[pyfunction]
fn ppt_check<'py>(py: Python<'py>, rho: &PyDensity) -> PyResult<Bound<'py, PyDict>> {
    let v = qchannel::ppt_check(&rho.0).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("min_eig", v.min_eig)?;
    d.set_item("is_ppt", v.is_ppt)?;
    d.set_item("conclusive", v.conclusive)?;
    d.set_item("verdict", v.label())?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (amps, dims, units="bits"))]
fn pure_entanglement(amps: Vec<Complex64>, dims: Vec<usize>, units: &str) -> PyResult<f64> {
    entanglement::pure_entanglement(&ket(amps, Some(dims))?, self::units(units)?).map_err(err)
}

/// Relative entropy of entanglement with the closest separable state found.
#[pyfunction]
#[pyo3(signature = (rho, restarts=8, tol=1e-8, seed=0, units="bits"))]
fn ree<'py>(
    py: Python<'py>,
    rho: &PyDensity,
    restarts: usize,
    tol: f64,
    seed: u64,
    units: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let opts = ReeOptions { restarts, tol, seed, units: self::units(units)?, ..Default::default() };
    let r = py.detach(|| entanglement::ree(&rho.0, &opts)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("value", r.value)?;
    d.set_item("converged", r.converged)?;
    d.set_item("iterations", r.iterations)?;
    d.set_item("restarts_used", r.restarts_used)?;
    d.set_item("closest_state", PyDensity(r.closest_state))?;
    Ok(d)
}

/// One seeded teleportation run of a qubit state.
#[pyfunction]
#[pyo3(signature = (amps, seed=0))]
fn teleport<'py>(py: Python<'py>, amps: Vec<Complex64>, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let o = protocols::teleport(&ket(amps, None)?, seed).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("classical_bits", o.classical_bits)?;
    d.set_item("probability", o.probability)?;
    d.set_item("fidelity", o.fidelity_to_input)?;
    d.set_item("output", o.output.amps().iter().copied().collect::<Vec<_>>())?;
    Ok(d)
}

#[pyfunction]
fn dense_coding_capacity(x: f64) -> PyResult<f64> {
    protocols::dense_coding_capacity(x).map_err(err)
}

#[pyfunction]
fn sdc_capacity(w0: &PyDensity) -> PyResult<f64> {
    protocols::sdc_capacity(&w0.0).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (theta, n, trials=1000, seed=0))]
fn schumacher_compress<'py>(
    py: Python<'py>,
    theta: f64,
    n: usize,
    trials: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = protocols::schumacher_compress(theta, n, trials, seed).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("typical_dim", r.typical_dim)?;
    d.set_item("success_prob", r.success_prob)?;
    d.set_item("exact_success_prob", r.exact_success_prob)?;
    d.set_item("rate_bits_per_symbol", r.rate_bits_per_symbol)?;
    d.set_item("entropy_bits", r.entropy_bits)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (rho, omega, units="bits"))]
fn landauer_erasure(rho: &PyDensity, omega: &PyDensity, units: &str) -> PyResult<f64> {
    protocols::landauer_erasure(&rho.0, &omega.0, self::units(units)?).map_err(err)
}

/// `(capacity, classical_limit, quantum_limit, zero_temperature)` in bits/s.
#[pyfunction]
fn bosonic_capacity(power: f64, temperature: f64) -> PyResult<(f64, f64, f64, f64)> {
    let c = qentropy::bosonic_capacity(power, temperature).map_err(err)?;
    Ok((c.capacity, c.classical_limit, c.quantum_limit, c.zero_temperature))
}

/// `(bound in bits, processing rate in bits/s)`.
#[pyfunction]
fn bekenstein(energy: f64, radius: f64) -> PyResult<(f64, f64)> {
    Ok((
        protocols::bekenstein(energy, radius).map_err(err)?,
        protocols::processing_rate(energy).map_err(err)?,
    ))
}

/// Verdict (`"constant"` or `"varying"`) for the truth table `f`, e.g. `"01"`.
#[pyfunction]
fn deutsch(f: &str) -> PyResult<(String, f64)> {
    let f: BoolFn = f.parse().map_err(err)?;
    let r = qalgo::deutsch(f).map_err(err)?;
    let verdict = match r.verdict {
        qalgo::Verdict::Constant => "constant",
        qalgo::Verdict::Varying => "varying",
    };
    Ok((verdict.to_string(), r.holevo_diag))
}

/// `I_MC(k)` in bits for `k = 0..=kmax`.
#[pyfunction]
#[pyo3(signature = (qubits, p=1.0, kmax=40))]
fn grover_mutual_info(py: Python<'_>, qubits: usize, p: f64, kmax: usize) -> PyResult<Vec<f64>> {
    Ok(py.detach(|| qalgo::grover_trace(qubits, p, kmax, 0)).map_err(err)?.mutual_info())
}

#[pyfunction]
fn bitwise_mutual_info(qubits: usize) -> PyResult<Vec<f64>> {
    qalgo::bitwise_mi_sequence(qubits).map_err(err)
}

/// `(all_passed, table)` for the invariant suite.
#[pyfunction]
#[pyo3(signature = (seed=0, filter=None))]
fn run_selftest(py: Python<'_>, seed: u64, filter: Option<String>) -> (bool, String) {
    let report = py.detach(|| selftest::run(seed, filter.as_deref()));
    (report.all_passed(), report.table())
}

#[pymodule]
fn pyreleq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDensity>()?;
    m.add_class::<PyChannel>()?;
    m.add_function(wrap_pyfunction!(von_neumann, m)?)?;
    m.add_function(wrap_pyfunction!(relative_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(mutual_information, m)?)?;
    m.add_function(wrap_pyfunction!(holevo, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(bures_distance, m)?)?;
    m.add_function(wrap_pyfunction!(shannon_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(kl_divergence, m)?)?;
    m.add_function(wrap_pyfunction!(ppt_check, m)?)?;
    m.add_function(wrap_pyfunction!(pure_entanglement, m)?)?;
    m.add_function(wrap_pyfunction!(ree, m)?)?;
    m.add_function(wrap_pyfunction!(teleport, m)?)?;
    m.add_function(wrap_pyfunction!(dense_coding_capacity, m)?)?;
    m.add_function(wrap_pyfunction!(sdc_capacity, m)?)?;
    m.add_function(wrap_pyfunction!(schumacher_compress, m)?)?;
    m.add_function(wrap_pyfunction!(landauer_erasure, m)?)?;
    m.add_function(wrap_pyfunction!(bosonic_capacity, m)?)?;
    m.add_function(wrap_pyfunction!(bekenstein, m)?)?;
    m.add_function(wrap_pyfunction!(deutsch, m)?)?;
    m.add_function(wrap_pyfunction!(grover_mutual_info, m)?)?;
    m.add_function(wrap_pyfunction!(bitwise_mutual_info, m)?)?;
    m.add_function(wrap_pyfunction!(run_selftest, m)?)?;
    Ok(())
}
