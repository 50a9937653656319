//! Python bindings: lattices, potentials, spectra, isospectrality checks,
//! polynomial recovery and the rigidity suites.

use floquet_core::charpoly::{self, RecoveryOptions, TildeRoute};
use floquet_core::floquet::{self as fq, torus_point};
use floquet_core::io;
use floquet_core::laurent::LaurentPoly;
use floquet_core::lattice::{LatticeKind, LatticeSpec, MultiIndex};
use floquet_core::potential::{self as pot, PotentialMode, SeparabilityPattern};
use floquet_core::rigidity::{self, Tolerances};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde::Serialize;

fn err(e: floquet_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn kind(name: &str) -> PyResult<LatticeKind> {
    name.parse().map_err(err)
}

fn json_to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any().unbind(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.into_pyobject(py)?.into_any().unbind(),
            (None, Some(u)) => u.into_pyobject(py)?.into_any().unbind(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any().unbind(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any().unbind(),
        Value::Array(items) => {
            let items = items.iter().map(|x| json_to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_any().unbind()
        }
        Value::Object(map) => {
            let d = PyDict::new(py);
            for (k, x) in map {
                d.set_item(k, json_to_py(py, x)?)?;
            }
            d.into_any().unbind()
        }
    })
}

fn to_dict<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let v = serde_json::to_value(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    json_to_py(py, &v)
}

fn poly_dict(py: Python<'_>, p: &LaurentPoly) -> PyResult<Py<PyAny>> {
    let d = PyDict::new(py);
    for (m, c) in p.terms() {
        let mut key: Vec<i64> = m.z.iter().map(|&a| a as i64).collect();
        key.push(m.b as i64);
        d.set_item(pyo3::types::PyTuple::new(py, key)?, *c)?;
    }
    Ok(d.into_any().unbind())
}

#[pyclass(name = "Lattice", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyLattice(LatticeSpec);

#[pymethods]
impl PyLattice {
    #[new]
    #[pyo3(signature = (periods, kind = "hypercubic"))]
    fn new(periods: Vec<usize>, kind: &str) -> PyResult<Self> {
        Ok(PyLattice(LatticeSpec::new(periods, self::kind(kind)?).map_err(err)?))
    }

    #[getter]
    fn periods(&self) -> Vec<usize> {
        self.0.periods().to_vec()
    }

    #[getter]
    fn kind(&self) -> String {
        self.0.kind().to_string()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn volume(&self) -> usize {
        self.0.volume()
    }

    fn fundamental_domain(&self) -> Vec<Vec<i64>> {
        self.0.fundamental_domain().into_iter().map(|n| n.0).collect()
    }

    fn __repr__(&self) -> String {
        format!("Lattice({:?}, {:?})", self.0.periods(), self.0.kind().to_string())
    }
}

#[pyclass(name = "Potential", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPotential(pot::Potential);

#[pymethods]
impl PyPotential {
    #[new]
    #[pyo3(signature = (periods, values, kind = "hypercubic"))]
    fn new(periods: Vec<usize>, values: Vec<Complex64>, kind: &str) -> PyResult<Self> {
        let spec = LatticeSpec::new(periods, self::kind(kind)?).map_err(err)?;
        Ok(PyPotential(pot::Potential::new(spec, values).map_err(err)?))
    }

    /// `mode` is one of real, complex, separable, nonseparable.
    #[staticmethod]
    #[pyo3(signature = (periods, seed, mode = "real", pattern = None, complex = false, kind = "hypercubic"))]
    fn random(periods: Vec<usize>, seed: u64, mode: &str, pattern: Option<Vec<usize>>, complex: bool, kind: &str) -> PyResult<Self> {
        let spec = LatticeSpec::new(periods, self::kind(kind)?).map_err(err)?;
        let need = || pattern.clone().ok_or_else(|| PyValueError::new_err("this mode needs a pattern"));
        let mode = match mode {
            "real" => PotentialMode::Real,
            "complex" => PotentialMode::Complex,
            "separable" => PotentialMode::Separable { pattern: need()?, complex },
            "nonseparable" => PotentialMode::Nonseparable { pattern: need()?, complex },
            other => return Err(PyValueError::new_err(format!("unknown mode {other:?}"))),
        };
        Ok(PyPotential(pot::random_potential(&spec, seed, &mode).map_err(err)?))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyPotential(io::potential_from_json(text).map_err(err)?))
    }

    fn to_json(&self) -> PyResult<String> {
        io::potential_to_json(&self.0).map_err(err)
    }

    #[getter]
    fn lattice(&self) -> PyLattice {
        PyLattice(self.0.spec().clone())
    }

    #[getter]
    fn values(&self) -> Vec<Complex64> {
        self.0.values().to_vec()
    }

    fn is_real(&self) -> bool {
        self.0.is_real()
    }

    fn mean(&self) -> Complex64 {
        pot::mean(&self.0)
    }

    /// Fourier coefficients in canonical order.
    fn dft(&self) -> Vec<Complex64> {
        pot::dft(&self.0).coefficients().to_vec()
    }

    /// `n ↦ V(n + t)`.
    fn translate(&self, t: Vec<i64>) -> PyResult<Self> {
        Ok(PyPotential(pot::translate(&self.0, &MultiIndex(t)).map_err(err)?))
    }

    fn shifted(&self, c: Complex64) -> Self {
        PyPotential(self.0.shifted(c))
    }

    fn __len__(&self) -> usize {
        self.0.values().len()
    }

    fn __repr__(&self) -> String {
        format!("Potential({:?}, {} values)", self.0.spec().periods(), self.0.values().len())
    }
}

fn pattern(v: &pot::Potential, blocks: &[usize]) -> PyResult<SeparabilityPattern> {
    SeparabilityPattern::new(v.spec(), blocks).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (v, pattern, tol = pot::DEFAULT_SEPARABILITY_TOL))]
fn is_separable(py: Python<'_>, v: &PyPotential, pattern: Vec<usize>, tol: f64) -> PyResult<Py<PyAny>> {
    let p = self::pattern(&v.0, &pattern)?;
    to_dict(py, &pot::is_separable(&pot::dft(&v.0), &p, tol).map_err(err)?)
}

/// Returns `(constant, components)`.
#[pyfunction]
#[pyo3(signature = (v, pattern, tol = pot::DEFAULT_SEPARABILITY_TOL))]
fn split(v: &PyPotential, pattern: Vec<usize>, tol: f64) -> PyResult<(Complex64, Vec<PyPotential>)> {
    let p = self::pattern(&v.0, &pattern)?;
    let parts = pot::split(&v.0, &p, tol).map_err(err)?;
    Ok((parts.constant, parts.components.into_iter().map(PyPotential).collect()))
}

/// Floquet matrix at torus point `z` as a list of rows.
#[pyfunction]
fn floquet_matrix(v: &PyPotential, z: Vec<Complex64>) -> PyResult<Vec<Vec<Complex64>>> {
    let m = fq::floquet_at(&v.0, &z).map_err(err)?;
    let e = m.entries();
    Ok((0..e.nrows()).map(|i| (0..e.ncols()).map(|j| e[(i, j)]).collect()).collect())
}

/// Characteristic polynomial coefficients at `z`, constant term first.
#[pyfunction]
fn charpoly_at(v: &PyPotential, z: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    Ok(fq::floquet_at(&v.0, &z).map_err(err)?.charpoly())
}

/// Sorted eigenvalues at real quasimomentum `k`; `None` unless Hermitian.
#[pyfunction]
fn spectrum(v: &PyPotential, k: Vec<f64>) -> PyResult<Option<Vec<f64>>> {
    let k: Vec<Complex64> = k.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
    Ok(fq::floquet_at(&v.0, &torus_point(&k)).map_err(err)?.hermitian_eigenvalues())
}

#[pyfunction]
#[pyo3(signature = (v, y, tol = 1e-9))]
fn floquet_isospectral(py: Python<'_>, v: &PyPotential, y: &PyPotential, tol: f64) -> PyResult<Py<PyAny>> {
    to_dict(py, &fq::floquet_isospectral(&v.0, &y.0, tol).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (v, y, energy, tol = 1e-9))]
fn fermi_isospectral(py: Python<'_>, v: &PyPotential, y: &PyPotential, energy: Complex64, tol: f64) -> PyResult<Py<PyAny>> {
    to_dict(py, &fq::fermi_isospectral_at(&v.0, &y.0, energy, tol).map_err(err)?)
}

/// Laurent coefficients keyed by `(a_1, …, a_d, b)`.
#[pyfunction]
#[pyo3(signature = (v, tilde = false, guard = 1))]
fn recover_charpoly(py: Python<'_>, v: &PyPotential, tilde: bool, guard: usize) -> PyResult<Py<PyAny>> {
    let opts = RecoveryOptions { guard };
    let p = if tilde {
        charpoly::recover_ptilde_with(&v.0, TildeRoute::Dual, opts)
    } else {
        charpoly::recover_p_with(&v.0, opts)
    }
    .map_err(err)?;
    poly_dict(py, &p)
}

/// Component polynomial for block `component` (from 0).
#[pyfunction]
#[pyo3(signature = (v, pattern, component, tol = pot::DEFAULT_SEPARABILITY_TOL))]
fn extract_component(py: Python<'_>, v: &PyPotential, pattern: Vec<usize>, component: usize, tol: f64) -> PyResult<Py<PyAny>> {
    let p = self::pattern(&v.0, &pattern)?;
    if component >= p.block_count() {
        return Err(PyValueError::new_err("component out of range"));
    }
    let poly = charpoly::extract_component_charpoly(&v.0, &p, component, tol, RecoveryOptions::default()).map_err(err)?;
    poly_dict(py, &poly)
}

#[pyfunction]
#[pyo3(signature = (v, y, pattern = None, samples = 0, seed = 0))]
fn invariants(py: Python<'_>, v: &PyPotential, y: &PyPotential, pattern: Option<Vec<usize>>, samples: usize, seed: u64) -> PyResult<Py<PyAny>> {
    let p = pattern.map(|b| self::pattern(&v.0, &b)).transpose()?;
    to_dict(py, &charpoly::invariant_report(&v.0, &y.0, p.as_ref(), samples, seed).map_err(err)?)
}

/// Runs `main2`, `main3`, `key`, `tri` or `all` and returns the report.
#[pyfunction]
#[pyo3(signature = (suite, periods, pattern = None, trials = rigidity::DEFAULT_TRIALS, seed = 0))]
fn verify(py: Python<'_>, suite: &str, periods: Vec<usize>, pattern: Option<Vec<usize>>, trials: usize, seed: u64) -> PyResult<Py<PyAny>> {
    let tol = Tolerances::default();
    let blocks = pattern.unwrap_or_else(|| vec![1; periods.len()]);
    let spec = || LatticeSpec::hypercubic(&periods).map_err(err);
    let pat = |s: &LatticeSpec| SeparabilityPattern::new(s, &blocks).map_err(err);
    match suite {
        "all" => to_dict(py, &rigidity::verify_all(&periods, &blocks, trials, seed, &tol).map_err(err)?),
        "main2" => {
            let s = spec()?;
            to_dict(py, &rigidity::verify_thm_main2(&s, &pat(&s)?, trials, seed, &tol).map_err(err)?)
        }
        "main3" => {
            let s = spec()?;
            to_dict(py, &rigidity::verify_thm_main3(&s, &pat(&s)?, trials, seed, &tol, None).map_err(err)?)
        }
        "key" => {
            let s = spec()?;
            to_dict(py, &rigidity::verify_key_suite(&s, Some(&pat(&s)?), trials, seed, &tol).map_err(err)?)
        }
        "tri" => {
            let [q1, q2] = periods[..] else {
                return Err(PyValueError::new_err("the triangular suite needs two periods"));
            };
            let s = LatticeSpec::triangular(q1, q2).map_err(err)?;
            to_dict(py, &rigidity::verify_triangular(&s, trials, seed, &tol).map_err(err)?)
        }
        other => Err(PyValueError::new_err(format!("unknown suite {other:?}"))),
    }
}

#[pymodule]
fn floquet_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLattice>()?;
    m.add_class::<PyPotential>()?;
    m.add_function(wrap_pyfunction!(is_separable, m)?)?;
    m.add_function(wrap_pyfunction!(split, m)?)?;
    m.add_function(wrap_pyfunction!(floquet_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(charpoly_at, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(floquet_isospectral, m)?)?;
    m.add_function(wrap_pyfunction!(fermi_isospectral, m)?)?;
    m.add_function(wrap_pyfunction!(recover_charpoly, m)?)?;
    m.add_function(wrap_pyfunction!(extract_component, m)?)?;
    m.add_function(wrap_pyfunction!(invariants, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
