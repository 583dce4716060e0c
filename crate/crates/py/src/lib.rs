//! Python bindings: parameter sets, coverage probabilities, analytic and
//! simulated rates, parameter sweeps and coded-caching delivery.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::IntoPyObjectExt;

use crs_core::caching::{cc_delivery_schedule, cc_place, CcConfig, Mode, Request, Subcase};
use crs_core::config::Settings as CoreSettings;
use crs_core::distributions::DistSpec;
use crs_core::model::{self, stream_powers, ReceiverClass, SinrKind};
use crs_core::montecarlo::{estimate_rates_many, MonteCarloReport};
use crs_core::rates::{RateEngine, RateQuantities, RateReport};
use crs_core::sweep::{self as core_sweep, Grid, Methods, ModeSelector, SweepSpec, SweepVar};
use crs_core::CrsError;

fn to_py(err: CrsError) -> PyErr {
    if err.is_numerical() {
        PyArithmeticError::new_err(err.to_string())
    } else {
        PyValueError::new_err(err.to_string())
    }
}

fn parse<T: std::str::FromStr<Err = CrsError>>(text: &str) -> PyResult<T> {
    text.parse().map_err(to_py)
}

/// Parameter set of one operating point; keys as in the config file
/// format (`P`, `alpha`, `K`, `beta`, `rho`, `samples`, `seed`, ...).
#[pyclass(module = "crs_py")]
#[derive(Clone, Default)]
struct Settings {
    inner: CoreSettings,
}

impl Settings {
    fn checked(&self) -> PyResult<&CoreSettings> {
        self.inner.validate().map_err(to_py)?;
        Ok(&self.inner)
    }
}

#[pymethods]
impl Settings {
    #[new]
    #[pyo3(signature = (**kwargs))]
    fn new(kwargs: Option<BTreeMap<String, Bound<'_, PyAny>>>) -> PyResult<Self> {
        let mut s = Settings::default();
        for (key, value) in kwargs.unwrap_or_default() {
            s.set(&key, &value)?;
        }
        Ok(s)
    }

    /// Parses the `key = value` config file format.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(Settings { inner: CoreSettings::from_text(text).map_err(to_py)? })
    }

    fn set(&mut self, key: &str, value: &Bound<'_, PyAny>) -> PyResult<()> {
        let text = value.str()?.to_string();
        let mut next = self.inner.clone();
        next.apply(key, &text).map_err(to_py)?;
        next.validate().map_err(to_py)?;
        self.inner = next;
        Ok(())
    }

    fn get(&self, key: &str) -> PyResult<String> {
        self.to_dict().remove(key).ok_or_else(|| PyValueError::new_err(format!("unknown key `{key}`")))
    }

    fn to_dict(&self) -> BTreeMap<String, String> {
        self.inner
            .to_text()
            .lines()
            .filter_map(|l| l.split_once(" = "))
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn __repr__(&self) -> String {
        let body: Vec<String> = self.to_dict().into_iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("Settings({})", body.join(", "))
    }
}

fn settings_or_default(settings: Option<&Settings>) -> Settings {
    settings.cloned().unwrap_or_default()
}

/// Pre-log factors (omega_1, omega_2, omega_3) of a coded-caching system.
#[pyfunction]
fn prelog(k: u32, m: u32, n: u32) -> PyResult<(f64, f64, f64)> {
    let w = model::prelog_set(k, m, n).map_err(to_py)?;
    Ok((w.omega1, w.omega2, w.omega3))
}

/// SINR threshold a private stream must exceed to carry rate `xi` under
/// pre-log factor `omega`.
#[pyfunction]
fn private_threshold(omega: f64, xi: f64) -> f64 {
    model::private_threshold(omega, xi)
}

fn dist(kind: &str, class: &str, settings: Option<&Settings>) -> PyResult<DistSpec> {
    let s = settings_or_default(settings);
    let s = s.checked()?;
    let powers = stream_powers(s.params.power, s.split().map_err(to_py)?);
    Ok(DistSpec::new(parse::<SinrKind>(kind)?, parse::<ReceiverClass>(class)?, &s.params, &powers))
}

/// P[SINR > t] for an SINR kind (`common`, `private`, ...) and class
/// (`center`, `edge`).
#[pyfunction]
#[pyo3(signature = (kind, class_, t, settings=None))]
fn coverage(kind: &str, class_: &str, t: f64, settings: Option<&Settings>) -> PyResult<f64> {
    Ok(dist(kind, class_, settings)?.coverage(t))
}

/// Density of the SINR at `t`.
#[pyfunction]
#[pyo3(signature = (kind, class_, t, settings=None))]
fn pdf(kind: &str, class_: &str, t: f64, settings: Option<&Settings>) -> PyResult<f64> {
    Ok(dist(kind, class_, settings)?.pdf(t))
}

/// Upper end of the SINR support (infinite when interference is removed).
#[pyfunction]
#[pyo3(signature = (kind, class_, settings=None))]
fn sinr_bound(kind: &str, class_: &str, settings: Option<&Settings>) -> PyResult<f64> {
    Ok(dist(kind, class_, settings)?.theta())
}

fn selected(mode: &str, k: u32, only: Option<&str>) -> PyResult<Vec<Subcase>> {
    let all: Vec<Subcase> = parse::<ModeSelector>(mode)?.modes().into_iter().flat_map(|m| m.subcases(k)).collect();
    match only {
        None => Ok(all),
        Some(label) => {
            let hit: Vec<Subcase> = all.into_iter().filter(|s| s.label() == label).collect();
            if hit.is_empty() {
                return Err(PyValueError::new_err(format!("no subcase `{label}` in mode `{mode}`")));
            }
            Ok(hit)
        }
    }
}

/// Labels of the subcases of a mode (`all`, `all-cc`, `cc-mpc`, ...).
#[pyfunction]
#[pyo3(signature = (mode="all", k=5))]
fn subcases(mode: &str, k: u32) -> PyResult<Vec<String>> {
    Ok(selected(mode, k, None)?.iter().map(Subcase::label).collect())
}

/// Names of the fourteen rate quantities, in report order.
#[pyfunction]
fn quantity_names() -> Vec<&'static str> {
    RateQuantities::NAMES.to_vec()
}

fn report_dict(py: Python<'_>, report: &RateReport) -> PyResult<BTreeMap<String, Py<PyAny>>> {
    let s = &report.subcase;
    let mut d = BTreeMap::new();
    d.insert("mode".to_string(), s.mode.name().into_py_any(py)?);
    d.insert("subcase".to_string(), s.label().into_py_any(py)?);
    d.insert("method".to_string(), report.method.name().into_py_any(py)?);
    for (name, v) in RateQuantities::NAMES.iter().zip(report.rates.values()) {
        d.insert(name.to_string(), v.into_py_any(py)?);
    }
    if let Some(se) = &report.stderr {
        for (name, v) in RateQuantities::NAMES.iter().zip(se.values()) {
            d.insert(format!("stderr_{name}"), v.into_py_any(py)?);
        }
    }
    Ok(d)
}

/// Analytic rate report of every selected subcase, one dict per subcase.
#[pyfunction]
#[pyo3(signature = (settings=None, mode="all", subcase=None))]
fn rates(
    py: Python<'_>,
    settings: Option<&Settings>,
    mode: &str,
    subcase: Option<&str>,
) -> PyResult<Vec<BTreeMap<String, Py<PyAny>>>> {
    let s = settings_or_default(settings);
    let s = s.checked()?;
    let engine = RateEngine::new(&s.params, s.split().map_err(to_py)?).map_err(to_py)?;
    selected(mode, s.params.receivers, subcase)?
        .iter()
        .map(|sc| report_dict(py, &engine.report(sc).map_err(to_py)?))
        .collect()
}

/// Monte-Carlo estimate of the same report, with standard errors and the
/// number of draws behind each quantity (`events_<name>`).
#[pyfunction]
#[pyo3(signature = (settings=None, mode="all", subcase=None))]
fn simulate_rates(
    py: Python<'_>,
    settings: Option<&Settings>,
    mode: &str,
    subcase: Option<&str>,
) -> PyResult<Vec<BTreeMap<String, Py<PyAny>>>> {
    let s = settings_or_default(settings);
    let s = s.checked()?.clone();
    let chosen = selected(mode, s.params.receivers, subcase)?;
    let powers = stream_powers(s.params.power, s.split().map_err(to_py)?);
    let reports: Vec<MonteCarloReport> =
        py.detach(|| estimate_rates_many(&chosen, &s.params, &powers, &s.sim)).map_err(to_py)?;
    reports
        .iter()
        .map(|m| {
            let mut d = report_dict(py, &m.report)?;
            for (name, n) in RateQuantities::NAMES.iter().zip(m.events) {
                d.insert(format!("events_{name}"), n.into_py_any(py)?);
            }
            Ok(d)
        })
        .collect()
}

/// Runs a sweep over `var` (`beta`, `rho`, `u` or `P`) and returns the
/// CSV text.
#[pyfunction]
#[pyo3(signature = (var, start, stop, points, settings=None, mode="all", subcase=None, methods="analytic"))]
#[allow(clippy::too_many_arguments)]
fn sweep(
    py: Python<'_>,
    var: &str,
    start: f64,
    stop: f64,
    points: usize,
    settings: Option<&Settings>,
    mode: &str,
    subcase: Option<&str>,
    methods: &str,
) -> PyResult<String> {
    let mut spec =
        SweepSpec::new(parse::<SweepVar>(var)?, Grid::new(start, stop, points), settings_or_default(settings).inner);
    spec.modes = parse(mode)?;
    spec.methods = parse::<Methods>(methods)?;
    spec.subcases = subcase.map(|s| vec![s.to_string()]).unwrap_or_default();
    spec.validate().map_err(to_py)?;
    let rows = py.detach(|| core_sweep::run_sweep(&spec)).map_err(to_py)?;
    core_sweep::to_csv_string(&rows).map_err(to_py)
}

/// Compares the analytic and Monte-Carlo rows of a sweep CSV; returns
/// (passed, summary text).
#[pyfunction]
fn compare(csv_text: &str) -> PyResult<(bool, String)> {
    let summary = core_sweep::compare_csv(csv_text.as_bytes()).map_err(to_py)?;
    Ok((summary.passed(), summary.to_string()))
}

/// Subfiles cached by each receiver: {receiver: [subfile labels]}.
#[pyfunction]
fn placement(k: u32, m: u32, n: u32) -> PyResult<BTreeMap<u32, Vec<String>>> {
    let cfg = CcConfig::new(k, m, n).map_err(to_py)?;
    let map = cc_place(&cfg);
    Ok((1..=k).map(|i| (i, map.cache(i).iter().map(|s| s.to_string()).collect())).collect())
}

/// XOR transmissions for a demand vector (file rank per receiver) and the
/// per-receiver load as (numerator, denominator).
#[pyfunction]
fn delivery(k: u32, m: u32, n: u32, demand: Vec<u32>) -> PyResult<(Vec<String>, (u64, u64))> {
    let cfg = CcConfig::new(k, m, n).map_err(to_py)?;
    let requests: Vec<Request> =
        demand.iter().enumerate().map(|(i, &rank)| Request { receiver: i as u32 + 1, rank }).collect();
    let schedule = cc_delivery_schedule(&cfg, &requests).map_err(to_py)?;
    let load = schedule.per_receiver_load();
    Ok((schedule.transmissions.iter().map(|t| t.to_string()).collect(), (*load.numer(), *load.denom())))
}

/// Names of the caching modes.
#[pyfunction]
fn modes() -> Vec<&'static str> {
    Mode::ALL.iter().map(|m| m.name()).collect()
}

#[pymodule]
fn crs_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Settings>()?;
    m.add_function(wrap_pyfunction!(prelog, m)?)?;
    m.add_function(wrap_pyfunction!(private_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(coverage, m)?)?;
    m.add_function(wrap_pyfunction!(pdf, m)?)?;
    m.add_function(wrap_pyfunction!(sinr_bound, m)?)?;
    m.add_function(wrap_pyfunction!(subcases, m)?)?;
    m.add_function(wrap_pyfunction!(modes, m)?)?;
    m.add_function(wrap_pyfunction!(quantity_names, m)?)?;
    m.add_function(wrap_pyfunction!(rates, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_rates, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(placement, m)?)?;
    m.add_function(wrap_pyfunction!(delivery, m)?)?;
    Ok(())
}
