//! Python bindings: quasi-set construction and the `≡` relation,
//! occupancy counting, EPRB statistics and a validated n-body gravity
//! simulation.

use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;

use quasiq::qmss;
use quasiq::qset;
use quasiq::quantum;

/// Finite quasi-set of species-counted micro-atoms, macro-atoms and
/// nested collections.
#[pyclass(name = "QSet", from_py_object)]
#[derive(Clone)]
struct PyQSet {
    inner: qset::QSet,
}

#[pymethods]
impl PyQSet {
    #[new]
    fn new() -> Self {
        PyQSet {
            inner: qset::QSet::empty(),
        }
    }

    /// Returns a copy extended by `count` micro-atoms of `species`.
    fn with_micro(&self, species: &str, count: u64) -> Self {
        PyQSet {
            inner: self.inner.clone().with_micro(qset::Species::new(species), count),
        }
    }

    /// Returns a copy extended by one macro-atom.
    fn with_macro(&self, id: &str) -> Self {
        PyQSet {
            inner: self.inner.clone().with_macro(qset::MacroId::new(id)),
        }
    }

    /// Returns a copy extended by `mult` indistinguishable copies of `sub`.
    fn with_sub(&self, sub: &PyQSet, mult: u64) -> Self {
        PyQSet {
            inner: self.inner.clone().with_sub(sub.inner.clone(), mult),
        }
    }

    /// Quasi-cardinality.
    fn qc(&self) -> u64 {
        self.inner.qc()
    }

    fn is_pure(&self) -> bool {
        self.inner.is_pure()
    }

    fn is_classical_set(&self) -> bool {
        self.inner.is_classical_set()
    }

    fn micro_count(&self, species: &str) -> u64 {
        self.inner.micro_count(&qset::Species::new(species))
    }

    /// `≡` on quasi-sets.
    fn indist(&self, other: &PyQSet) -> bool {
        qset::weak_ext_indist(&self.inner, &other.inner)
    }

    fn is_sub_qset_of(&self, other: &PyQSet) -> bool {
        self.inner.is_sub_qset_of(&other.inner)
    }

    /// Deterministic sub-quasi-set of quasi-cardinality `beta`.
    fn sub_qset_with_qc(&self, beta: u64) -> PyResult<PyQSet> {
        qset::sub_qset_with_qc(&self.inner, beta)
            .map(|q| PyQSet { inner: q })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// Declared power quasi-cardinality `2^qc`.
    fn power_qc(&self) -> PyResult<u64> {
        qset::power_qc(&self.inner).map_err(|e| PyOverflowError::new_err(e.to_string()))
    }

    /// Number of pairwise non-`≡` sub-quasi-sets.
    fn sub_class_count(&self) -> PyResult<u64> {
        qset::enumerate_sub_classes(&self.inner)
            .map(|v| v.len() as u64)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn serialize(&self) -> String {
        qset::serialize_universe(&self.inner)
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<PyQSet> {
        qset::parse_universe(text)
            .map(|q| PyQSet { inner: q })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!("QSet(qc={})", self.inner.qc())
    }
}

/// Number of configurations of `n` particles over `k` states;
/// `mode` is "individuals" (kⁿ) or "nonindividuals" (C(n+k−1, n)).
#[pyfunction]
fn count_configurations(n: u64, k: u64, mode: &str) -> PyResult<u64> {
    let mode = match mode {
        "individuals" => quantum::OccupancyMode::Individuals,
        "nonindividuals" => quantum::OccupancyMode::NonIndividuals,
        other => {
            return Err(PyValueError::new_err(format!(
                "mode must be 'individuals' or 'nonindividuals', got '{other}'"
            )))
        }
    };
    quantum::count_configurations(n, k, mode).map_err(|e| PyOverflowError::new_err(e.to_string()))
}

/// Repeated joint singlet measurement along directions given as
/// spherical angles. Returns (counts 2x2 by outcome pair, correlation,
/// standard error).
#[pyfunction]
fn eprb_statistics(
    a_theta: f64,
    a_phi: f64,
    b_theta: f64,
    b_phi: f64,
    trials: u64,
    seed: u64,
) -> PyResult<(Vec<Vec<u64>>, f64, f64)> {
    let dir = |theta: f64, phi: f64| {
        [
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        ]
    };
    let stats = quantum::eprb_statistics(dir(a_theta, a_phi), dir(b_theta, b_phi), trials, seed)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let counts = stats.counts.iter().map(|row| row.to_vec()).collect();
    Ok((counts, stats.correlation, stats.std_error))
}

/// Simulates same-species n-body gravity from (mass, pos, vel) triples
/// and validates the mechanical axioms on the result. Returns
/// (all_pass, max_residual, all_singleton_classes).
#[pyfunction]
#[allow(clippy::too_many_arguments)]
fn simulate_gravity(
    species: &str,
    bodies: Vec<(f64, [f64; 3], [f64; 3])>,
    gamma: f64,
    h: f64,
    t0: f64,
    t1: f64,
    tol: f64,
    eps: f64,
) -> PyResult<(bool, f64, bool)> {
    let bodies: Vec<qmss::QBody> = bodies
        .into_iter()
        .map(|(mass, pos, vel)| qmss::QBody { mass, pos, vel })
        .collect();
    let sys = qmss::simulate_gravity(
        qset::Species::new(species),
        &bodies,
        gamma,
        h,
        1e-6,
        t0,
        t1,
    )
    .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let grid = sys.sample_times();
    let report = qmss::validate_q(&sys, tol, &grid);
    let ind = qmss::individuation_report(&sys, &grid, eps)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok((report.all_pass(), report.max_residual(), ind.all_singletons()))
}

#[pymodule]
fn _quasiq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQSet>()?;
    m.add_function(wrap_pyfunction!(count_configurations, m)?)?;
    m.add_function(wrap_pyfunction!(eprb_statistics, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_gravity, m)?)?;
    Ok(())
}
