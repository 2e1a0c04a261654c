//! Python bindings: `import electrovac`.
//!
//! Reports come back as plain dicts with the same layout as the library's
//! serialized types.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;
use serde::Serialize;

use electrovac::checks::{Grid, DEFAULT_GRID_COUNT};
use electrovac::{self as ev, Error};

fn err(e: Error) -> PyErr {
    match e {
        Error::Parameter(_) | Error::Domain(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn mode(name: &str) -> PyResult<ev::PerturbationMode> {
    match name {
        "radial" => Ok(ev::PerturbationMode::Radial),
        "tangential" => Ok(ev::PerturbationMode::Tangential),
        "both" => Ok(ev::PerturbationMode::Both),
        _ => Err(PyValueError::new_err(format!("mode must be radial, tangential or both, got {name:?}"))),
    }
}

fn quadrature(panels: usize) -> PyResult<ev::Quadrature> {
    ev::Quadrature::new(ev::QuadratureConfig { panels, ..Default::default() }).map_err(err)
}

/// Reissner–Nordström parameters `(n, m, q)`.
#[pyclass(name = "RNParameters", frozen, skip_from_py_object)]
struct PyRN(ev::RNParameters);

#[pymethods]
impl PyRN {
    #[new]
    #[pyo3(signature = (n, m, q = 0.0))]
    fn new(n: usize, m: f64, q: f64) -> PyResult<Self> {
        ev::RNParameters::new(n, m, q).map(Self).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n.get()
    }

    #[getter]
    fn m(&self) -> f64 {
        self.0.m
    }

    #[getter]
    fn q(&self) -> f64 {
        self.0.q
    }

    #[getter]
    fn regime(&self) -> &'static str {
        self.0.regime().as_str()
    }

    /// Outer horizon radius, or `None` for super-extremal data.
    fn horizon(&self) -> Option<f64> {
        ev::rn_horizon(&self.0)
    }

    /// Lower end of the area-radius domain.
    fn r0(&self) -> f64 {
        ev::rn_r0(&self.0)
    }

    fn surface_gravity(&self) -> PyResult<f64> {
        ev::surface_gravity(&self.0).map_err(err)
    }

    /// Admissible photon-sphere radii in increasing order.
    fn photon_spheres(&self) -> Vec<f64> {
        ev::photon_sphere_radii(&self.0).radii()
    }

    /// Full photon-sphere result including rejected roots.
    fn photon_sphere_report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &ev::photon_sphere_radii(&self.0))
    }

    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &ev::classify_configuration(&self.0))
    }

    /// Area radius and fields at isotropic radius `s`.
    fn isotropic<'py>(&self, py: Python<'py>, s: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &ev::isotropic_map(&self.0, s).map_err(err)?)
    }

    fn isotropic_inverse(&self, r: f64) -> PyResult<f64> {
        ev::isotropic_inverse(&self.0, r).map_err(err)
    }

    fn phi_identity_residual(&self, s: f64) -> PyResult<f64> {
        ev::phi_identity_residual(&self.0, s).map_err(err)
    }

    fn data(&self) -> PyData {
        PyData { data: ev::rn_data(&self.0), params: Some(self.0) }
    }

    fn __repr__(&self) -> String {
        format!("RNParameters(n={}, m={}, q={})", self.0.n.get(), self.0.m, self.0.q)
    }
}

/// Static spherically symmetric data `(A, V, |E|)` with optional `Psi`.
#[pyclass(name = "SphericalData", frozen)]
struct PyData {
    data: ev::SphericalStaticData,
    params: Option<ev::RNParameters>,
}

#[pymethods]
impl PyData {
    /// Spline-interpolated data from samples on strictly increasing radii.
    #[staticmethod]
    #[pyo3(signature = (n, r, a, v, emag, psi = None, cosmological_constant = 0.0))]
    fn from_samples(
        n: usize,
        r: Vec<f64>,
        a: Vec<f64>,
        v: Vec<f64>,
        emag: Vec<f64>,
        psi: Option<Vec<f64>>,
        cosmological_constant: f64,
    ) -> PyResult<Self> {
        let dim = ev::Dimension::new(n).map_err(err)?;
        let sampled = |vals: &[f64]| ev::RadialProfile::sampled(&r, vals).map_err(err);
        let mut data =
            ev::SphericalStaticData::new(dim, cosmological_constant, sampled(&a)?, sampled(&v)?, sampled(&emag)?)
                .map_err(err)?;
        if let Some(psi) = psi {
            data = data.with_psi(sampled(&psi)?);
        }
        Ok(Self { data, params: None })
    }

    /// `(A, V, |E|, Psi)` at `r`; `Psi` is `None` when absent.
    fn values(&self, r: f64) -> PyResult<(f64, f64, f64, Option<f64>)> {
        let d = &self.data;
        let psi = d.electric_potential().map(|p| p.value(r)).transpose().map_err(err)?;
        Ok((
            d.metric_coefficient().value(r).map_err(err)?,
            d.potential().value(r).map_err(err)?,
            d.field_magnitude().value(r).map_err(err)?,
            psi,
        ))
    }

    /// Orthonormal-frame Ricci eigenvalues `(radial, tangential)`.
    fn ricci(&self, r: f64) -> PyResult<(f64, f64)> {
        let t = ev::ricci_radial(&self.data, r).map_err(err)?;
        Ok((t.radial, t.tangential))
    }

    fn scalar_curvature(&self, r: f64) -> PyResult<f64> {
        ev::scalar_curvature(&self.data, r).map_err(err)
    }

    /// Residuals of every equation tag. The grid defaults to the
    /// verification grid of closed-form data; sampled data need `lo`/`hi`.
    #[pyo3(signature = (boundary = None, count = DEFAULT_GRID_COUNT, lo = None, hi = None, tol = None))]
    fn verify<'py>(
        &self,
        py: Python<'py>,
        boundary: Option<f64>,
        count: usize,
        lo: Option<f64>,
        hi: Option<f64>,
        tol: Option<f64>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let grid = match (self.params, lo, hi) {
            (_, Some(lo), Some(hi)) => Grid::log(lo, hi, count),
            (Some(p), None, None) => Grid::default_for_rn(&p, count),
            _ => Grid::default_for(&self.data, count),
        }
        .map_err(err)?;
        let tol = tol.unwrap_or_else(|| ev::Tolerances::for_mode(self.data.derivative_mode()).identity);
        to_py(py, &ev::residual_all(&self.data, boundary, &grid, tol).map_err(err)?)
    }

    /// Quasi-local photon-sphere residuals on the slice `r = const`.
    fn quasilocal<'py>(&self, py: Python<'py>, r: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &ev::quasilocal_check(&self.data, r).map_err(err)?)
    }

    /// Robin residual `dV/dnu - V H/(n-1)` on `r = const`.
    fn boundary_residual(&self, r: f64) -> PyResult<f64> {
        ev::boundary_residual(&self.data, r).map_err(err)
    }

    #[pyo3(signature = (r1, r2, panels = 32))]
    fn functional<'py>(&self, py: Python<'py>, r1: f64, r2: f64, panels: usize) -> PyResult<Bound<'py, PyAny>> {
        let annulus = ev::Annulus::new(r1, r2).map_err(err)?;
        to_py(py, &ev::evaluate_functional(&self.data, annulus, None, &quadrature(panels)?).map_err(err)?)
    }

    /// First variation of the functional along a bump centred in the annulus.
    #[pyo3(signature = (r1, r2, center = None, half_width = None, mode = "both", tol = 1e-5, panels = 32))]
    #[allow(clippy::too_many_arguments)]
    fn criticality<'py>(
        &self,
        py: Python<'py>,
        r1: f64,
        r2: f64,
        center: Option<f64>,
        half_width: Option<f64>,
        mode: &str,
        tol: f64,
        panels: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let annulus = ev::Annulus::new(r1, r2).map_err(err)?;
        let pert = ev::Perturbation::new(
            center.unwrap_or(0.5 * (r1 + r2)),
            half_width.unwrap_or(0.25 * (r2 - r1)),
            self::mode(mode)?,
        )
        .map_err(err)?;
        to_py(py, &ev::criticality_test(&self.data, annulus, &pert, &quadrature(panels)?, tol).map_err(err)?)
    }

    #[pyo3(signature = (r1, r2, panels = 32))]
    fn pohozaev<'py>(&self, py: Python<'py>, r1: f64, r2: f64, panels: usize) -> PyResult<Bound<'py, PyAny>> {
        let annulus = ev::Annulus::new(r1, r2).map_err(err)?;
        to_py(py, &ev::pohozaev_residual(&self.data, annulus, &quadrature(panels)?).map_err(err)?)
    }
}

/// Residuals of the Euclidean unit-ball example with `V = x . v`.
#[pyfunction]
fn euclidean_ball<'py>(py: Python<'py>, v: [f64; 3]) -> PyResult<Bound<'py, PyAny>> {
    let ex = ev::BallStaticExample::new(v).map_err(err)?;
    to_py(py, &ev::euclidean_ball_residuals(&ex).map_err(err)?)
}

#[pyfunction]
fn charge_constant(n: usize) -> PyResult<f64> {
    Ok(ev::charge_constant(ev::Dimension::new(n).map_err(err)?))
}

#[pymodule]
#[pyo3(name = "electrovac")]
pub fn electrovac_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRN>()?;
    m.add_class::<PyData>()?;
    m.add_function(wrap_pyfunction!(euclidean_ball, m)?)?;
    m.add_function(wrap_pyfunction!(charge_constant, m)?)?;
    Ok(())
}
