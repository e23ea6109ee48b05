//! Python bindings: event logs, constraints, automata, Petri nets, frames,
//! and the mine/detect pipeline. Traces cross the boundary as lists of
//! activity-name strings.

use std::collections::BTreeSet;
use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use procframe::formats::{declare_text, log_files, manifest, net_text, pnml, LogFormat};
use procframe::miner::{self, MinerConfig};
use procframe::rigidity;
use procframe::{
    Activity, ActivitySet, Constraint, Dfa, EventLog, ProcessFrame, SpecBody, Specification,
    Template, Trace, DEFAULT_STATE_CAP, DEFAULT_START_NAME,
};

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn io_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyIOError::new_err(e.to_string())
}

fn to_trace(events: Vec<String>) -> PyResult<Trace> {
    Trace::from_names(events).map_err(value_err)
}

fn from_trace(trace: &Trace) -> Vec<String> {
    trace.iter().map(|a| a.name().to_string()).collect()
}

fn to_alphabet(names: Vec<String>) -> PyResult<ActivitySet> {
    names
        .into_iter()
        .map(|n| Activity::new(&n).map_err(value_err))
        .collect()
}

/// An ordered multiset of traces.
#[pyclass(module = "procframe_py", name = "EventLog", from_py_object)]
#[derive(Clone)]
struct PyEventLog {
    inner: EventLog,
}

#[pymethods]
impl PyEventLog {
    #[new]
    fn new(traces: Vec<Vec<String>>) -> PyResult<Self> {
        let traces = traces
            .into_iter()
            .map(to_trace)
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PyEventLog {
            inner: EventLog::new(traces),
        })
    }

    /// Reads a log file (.lines/.csv/.xes by extension).
    #[staticmethod]
    fn read(path: PathBuf) -> PyResult<Self> {
        Ok(PyEventLog {
            inner: log_files::read_log_auto(&path).map_err(io_err)?,
        })
    }

    fn write(&self, path: PathBuf) -> PyResult<()> {
        let format = LogFormat::from_path(&path).map_err(io_err)?;
        log_files::write_log(&path, &self.inner, format).map_err(io_err)
    }

    fn traces(&self) -> Vec<Vec<String>> {
        self.inner.traces().iter().map(from_trace).collect()
    }

    fn alphabet(&self) -> Vec<String> {
        self.inner.alphabet().iter().map(|a| a.name().to_string()).collect()
    }

    fn prepend_start(&self, name: &str) -> PyResult<Self> {
        let start = Activity::new(name).map_err(value_err)?;
        Ok(PyEventLog {
            inner: self.inner.prepend_start(&start).map_err(value_err)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// A constraint-template instance, e.g. `Response[A,B]`.
#[pyclass(module = "procframe_py", name = "Constraint", from_py_object)]
#[derive(Clone)]
struct PyConstraint {
    inner: Constraint,
}

#[pymethods]
impl PyConstraint {
    /// Parses the text form, e.g. `AlternateSuccession[A,B]`.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let parsed = declare_text::parse_constraints(text).map_err(value_err)?;
        match <[Constraint; 1]>::try_from(parsed) {
            Ok([inner]) => Ok(PyConstraint { inner }),
            Err(_) => Err(PyValueError::new_err("expected exactly one constraint")),
        }
    }

    fn template(&self) -> String {
        self.inner.template().to_string()
    }

    fn args(&self) -> Vec<String> {
        self.inner.args().iter().map(|a| a.name().to_string()).collect()
    }

    fn compile(&self) -> PyDfa {
        PyDfa {
            inner: self.inner.compile(),
        }
    }

    /// Evaluates on one trace: returns `(status, activations)` with status
    /// one of "satisfied", "violated", "vacuous".
    fn evaluate(&self, trace: Vec<String>) -> PyResult<(String, usize)> {
        let result = self.inner.evaluate(&to_trace(trace)?);
        let status = match result.status {
            procframe::ConstraintStatus::Satisfied => "satisfied",
            procframe::ConstraintStatus::Violated => "violated",
            procframe::ConstraintStatus::VacuouslySatisfied => "vacuous",
        };
        Ok((status.to_string(), result.activations))
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        self.inner.to_string()
    }
}

/// A total deterministic automaton over an open alphabet.
#[pyclass(module = "procframe_py", name = "Dfa", from_py_object)]
#[derive(Clone)]
struct PyDfa {
    inner: Dfa,
}

#[pymethods]
impl PyDfa {
    fn accepts(&self, trace: Vec<String>) -> PyResult<bool> {
        Ok(self.inner.accepts(&to_trace(trace)?))
    }

    fn state_count(&self) -> usize {
        self.inner.state_count()
    }

    fn symbols(&self) -> Vec<String> {
        self.inner.symbols().iter().map(|a| a.name().to_string()).collect()
    }

    fn minimize(&self) -> PyDfa {
        PyDfa {
            inner: self.inner.minimized(),
        }
    }

    fn embed(&self, alphabet: Vec<String>) -> PyResult<PyDfa> {
        Ok(PyDfa {
            inner: self
                .inner
                .embed(&to_alphabet(alphabet)?)
                .map_err(value_err)?,
        })
    }

    fn equivalent(&self, other: &PyDfa) -> bool {
        self.inner.equivalent(&other.inner)
    }

    fn counterexample(&self, other: &PyDfa) -> Option<Vec<String>> {
        self.inner.counterexample(&other.inner).map(|t| from_trace(&t))
    }

    /// All accepted traces with at most `revisit_bound` state revisits.
    fn enumerate(&self, revisit_bound: usize) -> Vec<Vec<String>> {
        self.inner
            .enumerate_traces(revisit_bound)
            .iter()
            .map(from_trace)
            .collect()
    }

    #[pyo3(signature = (hide_trap = false))]
    fn to_dot(&self, hide_trap: bool) -> String {
        self.inner.to_dot(hide_trap)
    }
}

/// A labeled Petri net with silent transitions and final markings.
#[pyclass(module = "procframe_py", name = "PetriNet", from_py_object)]
#[derive(Clone)]
struct PyPetriNet {
    inner: procframe::PetriNet,
}

#[pymethods]
impl PyPetriNet {
    /// Parses the native net text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyPetriNet {
            inner: net_text::parse_net(text).map_err(value_err)?,
        })
    }

    /// Reads a .net or .pnml file.
    #[staticmethod]
    fn read(path: PathBuf) -> PyResult<Self> {
        let inner = if path.extension().and_then(|e| e.to_str()) == Some("pnml") {
            pnml::read_pnml(&path).map_err(io_err)?
        } else {
            net_text::read_net(&path).map_err(io_err)?
        };
        Ok(PyPetriNet { inner })
    }

    fn write(&self, path: PathBuf) -> PyResult<()> {
        if path.extension().and_then(|e| e.to_str()) == Some("pnml") {
            pnml::write_pnml(&path, &self.inner).map_err(io_err)
        } else {
            net_text::write_net(&path, &self.inner).map_err(io_err)
        }
    }

    fn alphabet(&self) -> Vec<String> {
        self.inner.alphabet().iter().map(|a| a.name().to_string()).collect()
    }

    fn accepts(&self, trace: Vec<String>) -> PyResult<bool> {
        self.inner
            .accepts(&to_trace(trace)?, DEFAULT_STATE_CAP)
            .map_err(value_err)
    }

    /// The net's automaton, closed over its own alphabet.
    fn to_dfa(&self) -> PyResult<PyDfa> {
        Ok(PyDfa {
            inner: self.inner.to_dfa(DEFAULT_STATE_CAP).map_err(value_err)?,
        })
    }

    /// The net's automaton under the open-world reading: activities the net
    /// does not know are ignored.
    fn to_open_dfa(&self) -> PyResult<PyDfa> {
        let dfa = self.inner.to_dfa(DEFAULT_STATE_CAP).map_err(value_err)?;
        Ok(PyDfa {
            inner: dfa.embed(&self.inner.alphabet()).map_err(value_err)?.minimized(),
        })
    }

    fn to_dot(&self) -> String {
        self.inner.to_dot()
    }
}

/// A set of specifications composed by projection.
#[pyclass(module = "procframe_py", name = "ProcessFrame", from_py_object)]
#[derive(Clone)]
struct PyProcessFrame {
    inner: ProcessFrame,
}

#[pymethods]
impl PyProcessFrame {
    /// Loads a frame manifest (.toml).
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(PyProcessFrame {
            inner: manifest::load_frame(&path).map_err(io_err)?,
        })
    }

    fn save(&self, dir: PathBuf) -> PyResult<String> {
        let path = manifest::save_frame(&self.inner, &dir, "frame.toml").map_err(io_err)?;
        Ok(path.display().to_string())
    }

    fn spec_names(&self) -> Vec<String> {
        self.inner.specs().iter().map(|s| s.name().to_string()).collect()
    }

    fn all_tasks(&self) -> Vec<String> {
        self.inner.all_tasks().iter().map(|a| a.name().to_string()).collect()
    }

    fn common_tasks(&self) -> Vec<String> {
        self.inner.common_tasks().iter().map(|a| a.name().to_string()).collect()
    }

    fn accepts(&self, trace: Vec<String>) -> PyResult<bool> {
        self.inner.accepts(&to_trace(trace)?).map_err(value_err)
    }

    /// The first specification rejecting its projection of the trace.
    fn violating_spec(&self, trace: Vec<String>) -> PyResult<Option<String>> {
        Ok(self
            .inner
            .violating_spec(&to_trace(trace)?)
            .map_err(value_err)?
            .map(|s| s.to_string()))
    }

    fn global_dfa(&self) -> PyResult<PyDfa> {
        Ok(PyDfa {
            inner: self.inner.global_dfa(DEFAULT_STATE_CAP).map_err(value_err)?,
        })
    }
}

/// One detected construct with its synthesized net.
#[pyclass(module = "procframe_py", name = "Fragment")]
struct PyFragment {
    #[pyo3(get)]
    construct: String,
    #[pyo3(get)]
    variant: String,
    #[pyo3(get)]
    predecessor_group: Vec<String>,
    #[pyo3(get)]
    branches: Vec<Vec<String>>,
    #[pyo3(get)]
    follower_group: Vec<String>,
    #[pyo3(get)]
    consumed: Vec<String>,
    #[pyo3(get)]
    approximate: bool,
    #[pyo3(get)]
    counterexample: Option<Vec<String>>,
    #[pyo3(get)]
    net: PyPetriNet,
}

/// Result of construct detection: fragments, residual constraints, and the
/// rewritten frame.
#[pyclass(module = "procframe_py", name = "Rewrite")]
struct PyRewrite {
    #[pyo3(get)]
    fragments: Vec<Py<PyFragment>>,
    #[pyo3(get)]
    residual: Vec<String>,
    #[pyo3(get)]
    frame: PyProcessFrame,
}

fn miner_config(
    templates: Option<Vec<String>>,
    ternary: bool,
    start: Option<String>,
) -> PyResult<MinerConfig> {
    let mut cfg = MinerConfig {
        ternary_enabled: ternary,
        ..MinerConfig::default()
    };
    if let Some(names) = templates {
        cfg.templates = names
            .iter()
            .map(|n| n.parse::<Template>().map_err(value_err))
            .collect::<PyResult<BTreeSet<_>>>()?;
    }
    if let Some(name) = start {
        cfg.include_start = true;
        cfg.start_name = name;
    }
    Ok(cfg)
}

/// Discovers constraints at 100% support.
#[pyfunction]
#[pyo3(signature = (log, templates = None, ternary = true, start = None))]
fn mine(
    log: &PyEventLog,
    templates: Option<Vec<String>>,
    ternary: bool,
    start: Option<String>,
) -> PyResult<Vec<PyConstraint>> {
    let cfg = miner_config(templates, ternary, start)?;
    let model = miner::mine(&log.inner, &cfg).map_err(value_err)?;
    Ok(model
        .constraints()
        .map(|c| PyConstraint { inner: c.clone() })
        .collect())
}

/// Detects rigid constructs in a constraint model mined from `log` and
/// rewrites them into net fragments, validating by language equivalence.
#[pyfunction]
#[pyo3(signature = (log, constraints, start = DEFAULT_START_NAME))]
fn detect(
    py: Python<'_>,
    log: &PyEventLog,
    constraints: Vec<PyConstraint>,
    start: &str,
) -> PyResult<PyRewrite> {
    let model = miner::MinedModel::from_constraints(
        constraints.into_iter().map(|c| c.inner).collect(),
        log.inner.alphabet().clone(),
    );
    let cfg = MinerConfig {
        start_name: start.to_string(),
        ..MinerConfig::default()
    };
    let rewrite = rigidity::detect(&model, &log.inner, &cfg).map_err(value_err)?;
    let fragments = rewrite
        .fragments
        .into_iter()
        .map(|f| {
            Py::new(
                py,
                PyFragment {
                    construct: f.construct.to_string(),
                    variant: f.variant.to_string(),
                    predecessor_group: f
                        .predecessor_group
                        .iter()
                        .map(|a| a.name().to_string())
                        .collect(),
                    branches: f
                        .body_branches
                        .iter()
                        .map(|b| b.iter().map(|a| a.name().to_string()).collect())
                        .collect(),
                    follower_group: f
                        .follower_group
                        .iter()
                        .map(|a| a.name().to_string())
                        .collect(),
                    consumed: f.consumed.iter().map(|c| c.to_string()).collect(),
                    approximate: f.approximate,
                    counterexample: f.validation_failure.as_ref().map(from_trace),
                    net: PyPetriNet { inner: f.net },
                },
            )
        })
        .collect::<PyResult<Vec<_>>>()?;
    Ok(PyRewrite {
        fragments,
        residual: rewrite.residual.iter().map(|c| c.to_string()).collect(),
        frame: PyProcessFrame {
            inner: rewrite.frame,
        },
    })
}

/// Builds a frame from (name, alphabet-or-None, constraints) declare specs
/// and (name, net) procedural specs.
#[pyfunction]
#[pyo3(signature = (declare_specs, net_specs = Vec::new()))]
fn build_frame(
    declare_specs: Vec<(String, Option<Vec<String>>, Vec<PyConstraint>)>,
    net_specs: Vec<(String, PyPetriNet)>,
) -> PyResult<PyProcessFrame> {
    let mut specs = Vec::new();
    for (name, alphabet, constraints) in declare_specs {
        let body = SpecBody::Declare(constraints.into_iter().map(|c| c.inner).collect());
        let spec = match alphabet {
            Some(names) => {
                Specification::new(name, to_alphabet(names)?, body).map_err(value_err)?
            }
            None => Specification::inferred(name, body),
        };
        specs.push(spec);
    }
    for (name, net) in net_specs {
        specs.push(Specification::inferred(name, SpecBody::Net(net.inner)));
    }
    Ok(PyProcessFrame {
        inner: ProcessFrame::new(specs).map_err(value_err)?,
    })
}

#[pymodule]
fn procframe_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEventLog>()?;
    m.add_class::<PyConstraint>()?;
    m.add_class::<PyDfa>()?;
    m.add_class::<PyPetriNet>()?;
    m.add_class::<PyProcessFrame>()?;
    m.add_class::<PyFragment>()?;
    m.add_class::<PyRewrite>()?;
    m.add_function(wrap_pyfunction!(mine, m)?)?;
    m.add_function(wrap_pyfunction!(detect, m)?)?;
    m.add_function(wrap_pyfunction!(build_frame, m)?)?;
    m.add("DEFAULT_START_NAME", DEFAULT_START_NAME)?;
    Ok(())
}
