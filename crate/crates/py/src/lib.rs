//! Python bindings: models, Hamiltonians, integration, Hamilton-Jacobi
//! quadrature, action variables, the formula audit and Appell's `F1`.
//!
//! Structured results are returned as plain dictionaries and lists.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

use quadric_landau::action::action_i1_appell;
use quadric_landau::dynamics::{integrate_with, IntegratorSettings, Sampling};
use quadric_landau::hjq::{
    allowed_bands, audit_formula, bound_band, orbit_quadrature, radial_cycle,
};
use quadric_landau::special::{
    appell_f1 as f1_integral, appell_f1_series as f1_series, AppellParams,
};
use quadric_landau::{
    classify_reducible, energy, gauge_split, gradients, make_model, restrict_3d, Background,
    Dimensionality, DyonPair, Error, ParabolicBackground, PhasePoint, Restriction, SurfaceModel,
    SurfaceSpec,
};

create_exception!(
    quadric_landau_py,
    QuadricLandauError,
    PyValueError,
    "Raised for every library error; the message starts with the error kind."
);

fn raise(e: Error) -> PyErr {
    QuadricLandauError::new_err(format!("{}: {e}", e.kind()))
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn dimensionality(ambient: bool) -> Dimensionality {
    if ambient {
        Dimensionality::Ambient3D
    } else {
        Dimensionality::Surface2D
    }
}

/// `(u, p_u, phi, p_phi)` on a surface or
/// `(xi, p_xi, eta, p_eta, phi, p_phi)` in the ambient chart.
fn phase_point(v: &[f64]) -> PyResult<PhasePoint> {
    match v.len() {
        4 => Ok(PhasePoint::surface(v[0], v[1], v[2], v[3])),
        6 => Ok(PhasePoint::ambient(v[0], v[1], v[2], v[3], v[4], v[5])),
        n => Err(PyValueError::new_err(format!(
            "a phase point has 4 (surface) or 6 (ambient) components, got {n}"
        ))),
    }
}

fn flatten(s: &PhasePoint) -> Vec<f64> {
    let mut v = match s.shape {
        quadric_landau::model::Shape::Surface { u, p_u } => vec![u, p_u],
        quadric_landau::model::Shape::Ambient {
            xi,
            p_xi,
            eta,
            p_eta,
        } => vec![xi, p_xi, eta, p_eta],
    };
    v.extend([s.phi, s.p_phi]);
    v
}

/// A Hamiltonian: surface, background and dimensionality.
#[pyclass(frozen, skip_from_py_object, name = "Model")]
#[derive(Clone)]
pub struct PyModel {
    inner: SurfaceModel,
}

fn build(surface: SurfaceSpec, background: Background, ambient: bool) -> PyResult<PyModel> {
    make_model(surface, background, dimensionality(ambient))
        .map(|inner| PyModel { inner })
        .map_err(raise)
}

#[pymethods]
impl PyModel {
    /// Ellipsoid with foci at `±a` and eccentricity `e`; `charges` is
    /// `(q1, q2, g1, g2)`, free motion when omitted.
    #[staticmethod]
    #[pyo3(signature = (a, e, charges=None, ambient=false))]
    fn ellipsoid(
        a: f64,
        e: f64,
        charges: Option<(f64, f64, f64, f64)>,
        ambient: bool,
    ) -> PyResult<Self> {
        build(SurfaceSpec::Ellipsoid { a, e }, dyons(charges), ambient)
    }

    #[staticmethod]
    #[pyo3(signature = (a, e, charges=None, ambient=false))]
    fn hyperboloid(
        a: f64,
        e: f64,
        charges: Option<(f64, f64, f64, f64)>,
        ambient: bool,
    ) -> PyResult<Self> {
        build(SurfaceSpec::Hyperboloid { a, e }, dyons(charges), ambient)
    }

    /// Paraboloid with parameter `p`; `fields` is
    /// `(q, g, electric_field, magnetic_field)`, free motion when omitted.
    #[staticmethod]
    #[pyo3(signature = (p, fields=None, ambient=false))]
    fn paraboloid(p: f64, fields: Option<(f64, f64, f64, f64)>, ambient: bool) -> PyResult<Self> {
        let bg = match fields {
            Some((q, g, ef, bf)) => Background::Uniform(ParabolicBackground::new(q, g, ef, bf)),
            None => Background::Free,
        };
        build(SurfaceSpec::Paraboloid { p }, bg, ambient)
    }

    fn __repr__(&self) -> String {
        format!("Model({})", self.inner)
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner)
    }

    fn energy(&self, point: Vec<f64>) -> PyResult<f64> {
        energy(&self.inner, &phase_point(&point)?).map_err(raise)
    }

    /// Partial derivatives in the order of the phase point.
    fn gradients(&self, point: Vec<f64>) -> PyResult<Vec<f64>> {
        let g = gradients(&self.inner, &phase_point(&point)?).map_err(raise)?;
        let mut out = match g.shape {
            quadric_landau::model::ShapeGradient::Surface { d_u, d_p_u } => vec![d_u, d_p_u],
            quadric_landau::model::ShapeGradient::Ambient {
                d_xi,
                d_p_xi,
                d_eta,
                d_p_eta,
            } => vec![d_xi, d_p_xi, d_eta, d_p_eta],
        };
        out.extend([g.d_phi, g.d_p_phi]);
        Ok(out)
    }

    fn reducibility<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &classify_reducible(&self.inner))
    }

    /// `(A_phi(u), V(u))` of the canonical form.
    fn gauge_potentials(&self, u: f64) -> PyResult<(f64, f64)> {
        let split = gauge_split(&self.inner).map_err(raise)?;
        Ok((split.a_phi(u), split.potential(u)))
    }

    /// Surface model obtained by freezing `coordinate` ("xi" or "eta").
    fn restrict(&self, coordinate: &str, value: f64) -> PyResult<Self> {
        let fixed = match coordinate {
            "xi" => Restriction::Xi(value),
            "eta" => Restriction::Eta(value),
            other => {
                return Err(PyValueError::new_err(format!(
                    "coordinate must be 'xi' or 'eta', got {other:?}"
                )))
            }
        };
        restrict_3d(&self.inner, fixed)
            .map(|inner| PyModel { inner })
            .map_err(raise)
    }

    fn allowed_bands<'py>(
        &self,
        py: Python<'py>,
        energy: f64,
        p_phi: f64,
    ) -> PyResult<Bound<'py, PyAny>> {
        to_py(
            py,
            &allowed_bands(&self.inner, energy, p_phi).map_err(raise)?,
        )
    }

    /// Period and azimuthal advance of the oscillation through `u0`
    /// (the middle of the first bound band when omitted).
    #[pyo3(signature = (energy, p_phi, u0=None))]
    fn radial_cycle<'py>(
        &self,
        py: Python<'py>,
        energy: f64,
        p_phi: f64,
        u0: Option<f64>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let u0 = match u0 {
            Some(u) => u,
            None => {
                let band = bound_band(&self.inner, energy, p_phi).map_err(raise)?;
                0.5 * (band.lo + band.hi)
            }
        };
        to_py(
            py,
            &radial_cycle(&self.inner, energy, p_phi, u0).map_err(raise)?,
        )
    }

    /// `(t, delta_phi)` between two points of one allowed band.
    fn orbit_quadrature(
        &self,
        energy: f64,
        p_phi: f64,
        u_from: f64,
        u_to: f64,
    ) -> PyResult<(f64, f64)> {
        let seg = orbit_quadrature(&self.inner, energy, p_phi, u_from, u_to).map_err(raise)?;
        Ok((seg.time, seg.delta_phi))
    }

    /// Uniformly sampled trajectory as `{"t": [...], "state": [[...]], "energy": [...]}`.
    #[pyo3(signature = (point, t_end, tol=1e-10, samples=1001))]
    fn integrate<'py>(
        &self,
        py: Python<'py>,
        point: Vec<f64>,
        t_end: f64,
        tol: f64,
        samples: usize,
    ) -> PyResult<Bound<'py, PyDict>> {
        let settings = IntegratorSettings::new(tol).with_sampling(Sampling::Uniform(samples));
        let tr = py.detach(|| {
            integrate_with(&self.inner, &phase_point(&point)?, t_end, &settings).map_err(raise)
        })?;
        let out = PyDict::new(py);
        out.set_item("t", tr.samples.iter().map(|s| s.t).collect::<Vec<_>>())?;
        out.set_item(
            "state",
            tr.samples
                .iter()
                .map(|s| flatten(&s.state))
                .collect::<Vec<_>>(),
        )?;
        out.set_item(
            "energy",
            tr.samples.iter().map(|s| s.energy).collect::<Vec<_>>(),
        )?;
        Ok(out)
    }

    /// Quadrature `I1` with every closed-form reading compared against it.
    fn actions<'py>(
        &self,
        py: Python<'py>,
        energy: f64,
        p_phi: f64,
    ) -> PyResult<Bound<'py, PyAny>> {
        to_py(
            py,
            &action_i1_appell(&self.inner, energy, p_phi).map_err(raise)?,
        )
    }

    fn audit<'py>(&self, py: Python<'py>, energy: f64, p_phi: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(
            py,
            &audit_formula(&self.inner, energy, p_phi).map_err(raise)?,
        )
    }
}

fn dyons(charges: Option<(f64, f64, f64, f64)>) -> Background {
    match charges {
        Some((q1, q2, g1, g2)) => Background::Dyons(DyonPair::new(q1, q2, g1, g2)),
        None => Background::Free,
    }
}

/// `F1(alpha; rho, lambda; c; x, y)` by quadrature (`Re c > Re alpha > 0`).
#[pyfunction]
fn appell_f1(alpha: f64, rho: f64, lam: f64, c: f64, x: f64, y: f64) -> PyResult<f64> {
    f1_integral(&AppellParams::standard(alpha, rho, lam, c, x, y)).map_err(raise)
}

/// `F1(alpha; rho, lambda; c; x, y)` by its double series (`|x|, |y| < 1`).
#[pyfunction]
fn appell_f1_series(alpha: f64, rho: f64, lam: f64, c: f64, x: f64, y: f64) -> PyResult<f64> {
    f1_series(alpha, rho, lam, c, x, y).map_err(raise)
}

#[pymodule]
fn quadric_landau_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(appell_f1, m)?)?;
    m.add_function(wrap_pyfunction!(appell_f1_series, m)?)?;
    m.add(
        "QuadricLandauError",
        m.py().get_type::<QuadricLandauError>(),
    )?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
