//! Python bindings. Bit strings cross the boundary as `str` of '0'/'1'.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

use kolmo::certlab::{self, BoundedLowerBoundCertificate, CertError};
use kolmo::complexity::{self, count_below, ComplexityEstimate};
use kolmo::generators::{self, SourceSpec};
use kolmo::randomness::{self, Classifier, DEFAULT_MAX_STAGE};
use kolmo::space::MAX_ENUMERATION_LENGTH;
use kolmo::tbvm;
use kolmo::BitSequence;

create_exception!(kolmo_py, DomainError, PyException, "A well-formed request with no answer.");

fn bits(s: &str) -> PyResult<BitSequence> {
    BitSequence::parse(s).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn domain(e: impl std::fmt::Display) -> PyErr {
    DomainError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.into_pyobject(py)?.into_any(),
            (None, Some(u)) => u.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

#[pyclass(name = "RunLimits", frozen, eq, from_py_object)]
#[derive(Clone, Copy, PartialEq)]
struct PyRunLimits(tbvm::RunLimits);

#[pymethods]
impl PyRunLimits {
    #[new]
    #[pyo3(signature = (step_budget=tbvm::DEFAULT_STEP_BUDGET, output_cap=4096, reg_cap=4096, tracked_state_cap=65_536))]
    fn new(step_budget: u64, output_cap: usize, reg_cap: u64, tracked_state_cap: usize) -> PyResult<Self> {
        let limits = tbvm::RunLimits {
            step_budget,
            output_cap,
            reg_cap,
            tracked_state_cap,
        };
        limits.validate().map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Self(limits))
    }

    #[getter]
    fn step_budget(&self) -> u64 {
        self.0.step_budget
    }

    #[getter]
    fn output_cap(&self) -> usize {
        self.0.output_cap
    }

    #[getter]
    fn reg_cap(&self) -> u64 {
        self.0.reg_cap
    }

    #[getter]
    fn tracked_state_cap(&self) -> usize {
        self.0.tracked_state_cap
    }

    fn __repr__(&self) -> String {
        format!(
            "RunLimits(step_budget={}, output_cap={}, reg_cap={}, tracked_state_cap={})",
            self.0.step_budget, self.0.output_cap, self.0.reg_cap, self.0.tracked_state_cap
        )
    }
}

fn limits_or_default(limits: Option<PyRunLimits>) -> tbvm::RunLimits {
    limits.map(|l| l.0).unwrap_or_default()
}

/// A parsed machine program.
#[pyclass(name = "Program", frozen)]
struct PyProgram(tbvm::Program);

#[pymethods]
impl PyProgram {
    #[new]
    fn new(code: &str) -> PyResult<Self> {
        tbvm::parse(&bits(code)?)
            .map(Self)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[staticmethod]
    fn literal(payload: &str) -> PyResult<Self> {
        Ok(Self(tbvm::Program::literal(&bits(payload)?)))
    }

    #[getter]
    fn bits(&self) -> String {
        self.0.code().to_string()
    }

    #[getter]
    fn is_literal(&self) -> bool {
        self.0.is_literal()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn disassemble(&self) -> String {
        self.0.disassemble()
    }

    #[pyo3(signature = (n, limits=None))]
    fn run(&self, n: u64, limits: Option<PyRunLimits>) -> Outcome {
        Outcome::from(tbvm::run(&self.0, n, &limits_or_default(limits)))
    }

    fn __repr__(&self) -> String {
        format!("Program('{}')", self.0.code())
    }
}

#[pyclass(frozen, get_all)]
struct Outcome {
    status: String,
    output: String,
    steps_used: u64,
}

impl From<tbvm::MachineOutcome> for Outcome {
    fn from(o: tbvm::MachineOutcome) -> Self {
        Self {
            status: o.status.as_str().to_string(),
            output: o.output.to_string(),
            steps_used: o.steps_used,
        }
    }
}

#[pymethods]
impl Outcome {
    fn __repr__(&self) -> String {
        format!(
            "Outcome(status='{}', output='{}', steps_used={})",
            self.status, self.output, self.steps_used
        )
    }
}

#[pyclass(frozen, get_all)]
struct Estimate {
    value: usize,
    witness: String,
    certified: bool,
    stages: Option<usize>,
}

impl From<&ComplexityEstimate> for Estimate {
    fn from(e: &ComplexityEstimate) -> Self {
        Self {
            value: e.value,
            witness: e.witness.code().to_string(),
            certified: e.certified,
            stages: e.budget.stages,
        }
    }
}

#[pymethods]
impl Estimate {
    fn __repr__(&self) -> String {
        format!(
            "Estimate(value={}, witness='{}', certified={})",
            self.value,
            self.witness,
            if self.certified { "True" } else { "False" }
        )
    }
}

#[pyclass(frozen, get_all)]
struct Verdict {
    /// One of "certified-non-random", "certified-random", "no-evidence-at-budget".
    kind: String,
    deficiency: i64,
    witness: Option<String>,
}

#[pymethods]
impl Verdict {
    fn __repr__(&self) -> String {
        format!("Verdict('{}', deficiency={})", self.kind, self.deficiency)
    }
}

/// Exact complexity of every sequence of one length.
#[pyclass(name = "Table", frozen)]
struct PyTable(complexity::ComplexityTable);

#[pymethods]
impl PyTable {
    #[new]
    #[pyo3(signature = (n, limits=None))]
    fn new(py: Python<'_>, n: usize, limits: Option<PyRunLimits>) -> PyResult<Self> {
        let limits = limits_or_default(limits);
        py.detach(|| complexity::build_table(n, &limits))
            .map(Self)
            .map_err(domain)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn get(&self, x: &str) -> PyResult<Option<Estimate>> {
        Ok(self.0.get(&bits(x)?).map(Estimate::from))
    }

    fn histogram(&self) -> Vec<(usize, usize)> {
        complexity::histogram(&self.0).into_iter().collect()
    }

    fn count_below(&self, m: usize) -> usize {
        count_below(&self.0, m)
    }

    fn deficiency_fraction(&self, k: i64) -> f64 {
        randomness::deficiency_fraction(&self.0, k)
    }

    fn to_csv(&self) -> String {
        self.0.to_csv()
    }

    fn to_json(&self) -> String {
        self.0.to_json().to_string()
    }
}

/// Runs a program given as bits; malformed programs report status "parse-error".
#[pyfunction]
#[pyo3(signature = (program, n=0, limits=None))]
fn run(program: &str, n: u64, limits: Option<PyRunLimits>) -> PyResult<Outcome> {
    Ok(tbvm::run_code(&bits(program)?, n, &limits_or_default(limits)).into())
}

#[pyfunction]
#[pyo3(signature = (x, limits=None, max_program_length=MAX_ENUMERATION_LENGTH))]
fn exact(py: Python<'_>, x: &str, limits: Option<PyRunLimits>, max_program_length: usize) -> PyResult<Estimate> {
    let x = bits(x)?;
    let limits = limits_or_default(limits);
    py.detach(|| complexity::exact_with_max_length(&x, &limits, max_program_length))
        .map(|e| Estimate::from(&e))
        .map_err(domain)
}

#[pyfunction]
#[pyo3(signature = (x, stages=DEFAULT_MAX_STAGE, limits=None))]
fn upper_bound(py: Python<'_>, x: &str, stages: usize, limits: Option<PyRunLimits>) -> PyResult<Estimate> {
    let x = bits(x)?;
    let limits = limits_or_default(limits);
    py.detach(|| complexity::upper_bound(&x, stages, &limits))
        .map(|e| Estimate::from(&e))
        .map_err(domain)
}

#[pyfunction]
fn delta0(n: usize, c_value: usize) -> i64 {
    randomness::delta0(n, c_value)
}

#[pyfunction]
#[pyo3(signature = (x, c=0, stages=DEFAULT_MAX_STAGE, limits=None, max_program_length=MAX_ENUMERATION_LENGTH))]
fn classify(
    py: Python<'_>,
    x: &str,
    c: i64,
    stages: usize,
    limits: Option<PyRunLimits>,
    max_program_length: usize,
) -> PyResult<Verdict> {
    let x = bits(x)?;
    let classifier =
        Classifier::new(stages, limits_or_default(limits)).with_max_program_length(max_program_length);
    let v = py.detach(|| classifier.classify(&x, c)).map_err(domain)?;
    Ok(Verdict {
        kind: v.kind().as_str().to_string(),
        deficiency: v.deficiency_lower_bound(x.len()),
        witness: v.witness().map(|w| w.code().to_string()),
    })
}

/// Classifies blocks of a source URI and returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (source, bits, block_n, c=0, stages=DEFAULT_MAX_STAGE, limits=None, table=None))]
#[allow(clippy::too_many_arguments)]
fn analyze<'py>(
    py: Python<'py>,
    source: &str,
    bits: usize,
    block_n: usize,
    c: i64,
    stages: usize,
    limits: Option<PyRunLimits>,
    table: Option<PyRef<'py, PyTable>>,
) -> PyResult<Bound<'py, PyAny>> {
    let spec = SourceSpec::parse(source).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let stream = spec.generate(bits).map_err(domain)?;
    let mut classifier = Classifier::new(stages, limits_or_default(limits));
    if let Some(t) = &table {
        classifier = classifier.with_table(&t.0);
    }
    let report = py
        .detach(|| classifier.analyze_stream(&stream, block_n, c))
        .map_err(domain)?;
    let value = serde_json::to_value(&report).map_err(domain)?;
    to_py(py, &value)
}

#[pyfunction]
fn generate(source: &str, count: usize) -> PyResult<String> {
    let spec = SourceSpec::parse(source).map_err(|e| PyValueError::new_err(e.to_string()))?;
    spec.generate(count).map(|b| b.to_string()).map_err(domain)
}

#[pyfunction]
fn sha1_hex(data: &[u8]) -> String {
    generators::to_hex(&generators::sha1_digest(data))
}

#[pyfunction]
fn sha1_stream(seed: &[u8], count: usize) -> String {
    generators::sha1_stream(seed, count).to_string()
}

#[pyfunction]
fn pi_bits(count: usize) -> String {
    generators::pi_bits(count).to_string()
}

/// Issues a bounded lower-bound certificate as JSON text.
#[pyfunction]
#[pyo3(signature = (x, m, s=tbvm::DEFAULT_STEP_BUDGET))]
fn cert_issue(py: Python<'_>, x: &str, m: usize, s: u64) -> PyResult<String> {
    let x = bits(x)?;
    match py.detach(|| certlab::issue(&x, m, s)) {
        Ok(cert) => Ok(cert.to_json()),
        Err(CertError::WitnessExists(p)) => Err(DomainError::new_err(format!(
            "witness exists: {}",
            p.code()
        ))),
        Err(e) => Err(domain(e)),
    }
}

/// Verifies certificate JSON; returns the verification report as a dict.
#[pyfunction]
fn cert_verify<'py>(py: Python<'py>, certificate: &str) -> PyResult<Bound<'py, PyAny>> {
    let cert = BoundedLowerBoundCertificate::from_json(certificate)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let report = py.detach(|| certlab::verify(&cert));
    to_py(py, &serde_json::to_value(&report).map_err(domain)?)
}

#[pyfunction]
fn chaitin_gap(c: u32) -> u64 {
    certlab::chaitin_gap(c)
}

#[pymodule]
fn kolmo_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DomainError", m.py().get_type::<DomainError>())?;
    m.add_class::<PyRunLimits>()?;
    m.add_class::<PyProgram>()?;
    m.add_class::<Outcome>()?;
    m.add_class::<Estimate>()?;
    m.add_class::<Verdict>()?;
    m.add_class::<PyTable>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(exact, m)?)?;
    m.add_function(wrap_pyfunction!(upper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(delta0, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(sha1_hex, m)?)?;
    m.add_function(wrap_pyfunction!(sha1_stream, m)?)?;
    m.add_function(wrap_pyfunction!(pi_bits, m)?)?;
    m.add_function(wrap_pyfunction!(cert_issue, m)?)?;
    m.add_function(wrap_pyfunction!(cert_verify, m)?)?;
    m.add_function(wrap_pyfunction!(chaitin_gap, m)?)?;
    Ok(())
}
