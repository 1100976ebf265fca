//! Python bindings: fence solves on body specs and the verification campaigns.

use poincare_core::fencesolver::{self, SolverOptions, Which};
use poincare_core::harness::{self, BodySpec, CampaignConfig, CampaignResult, PartitionField};
use poincare_core::Error;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    if e.is_input_error() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn parse_which(which: &str) -> PyResult<Which> {
    match which {
        "sigma1" => Ok(Which::Sigma1),
        "mu1" => Ok(Which::Mu1),
        other => Err(PyValueError::new_err(format!("unknown objective {other:?}; use \"sigma1\" or \"mu1\""))),
    }
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

/// A convex planar body built from a JSON body spec.
#[pyclass(module = "poincare_fence")]
struct Body {
    spec: BodySpec,
    body: poincare_core::convex2d::ConvexBody2D,
}

#[pymethods]
impl Body {
    #[new]
    fn new(spec_json: &str) -> PyResult<Self> {
        let mut specs = harness::parse_specs(spec_json).map_err(to_py)?;
        if specs.len() != 1 {
            return Err(PyValueError::new_err(format!("expected one body spec, found {}", specs.len())));
        }
        let spec = specs.remove(0);
        let body = spec.to_body().map_err(to_py)?;
        Ok(Body { spec, body })
    }

    #[getter]
    fn area(&self) -> f64 {
        self.body.area()
    }

    #[getter]
    fn perimeter(&self) -> f64 {
        self.body.perimeter()
    }

    #[getter]
    fn diameter(&self) -> f64 {
        self.body.diameter()
    }

    #[getter]
    fn inradius(&self) -> f64 {
        self.body.inradius().0
    }

    /// Shortest-fence constant; returns the value and the fence row as a dict.
    #[pyo3(signature = (which = "sigma1", oracle_grid = 0))]
    fn solve<'py>(&self, py: Python<'py>, which: &str, oracle_grid: usize) -> PyResult<Bound<'py, PyAny>> {
        let which = parse_which(which)?;
        let entry = py
            .detach(|| harness::run_fence("body", &self.spec, which, &SolverOptions::default(), oracle_grid))
            .map_err(to_py)?;
        json_to_py(py, &serde_json::to_string(&entry).map_err(|e| to_py(e.into()))?)
    }

    fn __repr__(&self) -> String {
        format!("Body(kind={}, area={:.6}, diameter={:.6})", self.spec.kind.name(), self.body.area(), self.body.diameter())
    }
}

/// Closed-form shortest-fence constant of the unit-diameter disc truncated at half-width `rho`.
#[pyfunction]
fn truncated_disc_sigma1(rho: f64) -> PyResult<f64> {
    fencesolver::truncated_disc_sigma1_exact(rho).map_err(to_py)
}

/// Lower bound `2/D + (4/3) rho^2 / D^3` for convex planar bodies.
#[pyfunction]
fn bonnesen_bound(diameter: f64, inradius: f64) -> f64 {
    harness::bonnesen_bound(diameter, inradius)
}

/// Run a verification campaign and return its manifest as a dict.
#[pyfunction]
#[pyo3(signature = (name, seed = harness::DEFAULT_SEED, count = None, grid = harness::DEFAULT_ORACLE_GRID))]
fn run_campaign<'py>(
    py: Python<'py>,
    name: &str,
    seed: u64,
    count: Option<usize>,
    grid: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = CampaignConfig { seed, grid, ..CampaignConfig::default() };
    let run = || -> poincare_core::Result<CampaignResult> {
        match name {
            "bonnesen" => harness::campaign_bonnesen(&cfg, count.unwrap_or(200)),
            "constwidth" => harness::campaign_constwidth(&cfg, count.unwrap_or(50)),
            "series" => harness::campaign_series(&harness::default_series_grid()),
            "oned" => harness::campaign_oned(&cfg, count.unwrap_or(200), &[1, 2, 3]),
            "perturb" => harness::campaign_perturb(&harness::default_eps_ladder()),
            "appendix" => harness::campaign_appendix(&harness::default_p_ladder(), 1.0, harness::APPENDIX_RATIO),
            "partition" => harness::campaign_partition(3, PartitionField::SinSin),
            other => Err(Error::DomainError(format!("unknown campaign {other:?}"))),
        }
    };
    let result = py.detach(run).map_err(to_py)?;
    json_to_py(py, &harness::manifest_json(&result).map_err(to_py)?)
}

#[pymodule]
fn poincare_fence(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Body>()?;
    m.add_function(wrap_pyfunction!(truncated_disc_sigma1, m)?)?;
    m.add_function(wrap_pyfunction!(bonnesen_bound, m)?)?;
    m.add_function(wrap_pyfunction!(run_campaign, m)?)?;
    Ok(())
}
