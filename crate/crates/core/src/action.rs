//! Action variables of bound motion on the ellipsoid.
//!
//! `I1 = (1/2π) ∮ p_eta d eta` is computed by quadrature of the energy
//! equation; the closed form in terms of Appell's `F1` is evaluated with
//! both argument readings and compared against it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hjq::{self, b_constants, b_constants_fitted, turning_points_closed, Band};
use crate::model::{SurfaceModel, SurfaceSpec};
use crate::special::{appell_f1, AppellParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionMethod {
    Quadrature,
    Appell,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActionResult {
    #[serde(rename = "I1")]
    pub i1: f64,
    #[serde(rename = "I2")]
    pub i2: f64,
    pub method: ActionMethod,
    /// Angular frequency of the radial oscillation, `1 / (dI1/dE)`.
    pub radial_frequency: f64,
}

impl ActionResult {
    /// Radial period `2π dI1/dE`.
    pub fn radial_period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.radial_frequency
    }
}

/// `I2 = p_phi`.
pub fn action_i2(p_phi: f64) -> f64 {
    p_phi
}

fn require_ellipsoid(m: &SurfaceModel) -> Result<()> {
    if !m.is_surface() {
        return Err(Error::Unsupported(
            "action variables are computed on surface models".into(),
        ));
    }
    match m.surface() {
        SurfaceSpec::Ellipsoid { .. } => Ok(()),
        s => Err(Error::NoBoundMotion(format!(
            "motion on the {} is infinite; no action variables",
            s.name()
        ))),
    }
}

/// `I1` over the first bound band.
fn i1_at(m: &SurfaceModel, energy: f64, p_phi: f64) -> Result<f64> {
    let band = hjq::bound_band(m, energy, p_phi)?;
    hjq::band_action(m, energy, p_phi, &band)
}

/// Bottom of the effective potential well.
fn well_bottom(m: &SurfaceModel, p_phi: f64) -> Result<(f64, f64)> {
    hjq::effective_minimum(m, p_phi)
}

/// `dI1/dE` by Richardson extrapolation of central differences with steps
/// `h` and `h/2`.
pub fn d_i1_d_energy(m: &SurfaceModel, energy: f64, p_phi: f64) -> Result<f64> {
    require_ellipsoid(m)?;
    let (_, e_min) = well_bottom(m, p_phi)?;
    if energy <= e_min {
        return Err(Error::NoBoundMotion(format!(
            "E = {energy} is not above the well bottom {e_min}"
        )));
    }
    let h = (1e-3 * energy.abs()).min(0.25 * (energy - e_min));
    let central = |h: f64| -> Result<f64> {
        Ok((i1_at(m, energy + h, p_phi)? - i1_at(m, energy - h, p_phi)?) / (2.0 * h))
    };
    let (d1, d2) = (central(h)?, central(0.5 * h)?);
    Ok((4.0 * d2 - d1) / 3.0)
}

/// Angular frequency of small oscillations about the well bottom,
/// `sqrt(2 alpha U'')`, with `U''` from a five-point difference.
pub fn harmonic_frequency(m: &SurfaceModel, p_phi: f64) -> Result<f64> {
    require_ellipsoid(m)?;
    let (u0, _) = well_bottom(m, p_phi)?;
    let ev = m.evaluator(p_phi);
    let h = 1e-3 * (1.0 - u0.abs()).min(1.0);
    let v = |u: f64| ev.potential_unchecked(u);
    let d2 = (-v(u0 + 2.0 * h) + 16.0 * v(u0 + h) - 30.0 * v(u0) + 16.0 * v(u0 - h)
        - v(u0 - 2.0 * h))
        / (12.0 * h * h);
    let k = 2.0 * ev.alpha_unchecked(u0) * d2;
    if k <= 0.0 {
        return Err(Error::NoBoundMotion(format!(
            "effective potential is not convex at u = {u0}"
        )));
    }
    Ok(k.sqrt())
}

/// `I1 = (1/π) ∫_band |p_eta| d eta` with the turning-point substitution.
/// Exactly at the bottom of the well the band is a point and `I1 = 0`.
pub fn action_i1_quadrature(m: &SurfaceModel, energy: f64, p_phi: f64) -> Result<ActionResult> {
    require_ellipsoid(m)?;
    let (_, e_min) = well_bottom(m, p_phi)?;
    let at_bottom = (energy - e_min).abs() <= 1e-12 * e_min.abs().max(1.0);
    if at_bottom {
        return Ok(ActionResult {
            i1: 0.0,
            i2: action_i2(p_phi),
            method: ActionMethod::Quadrature,
            radial_frequency: harmonic_frequency(m, p_phi)?,
        });
    }
    let i1 = i1_at(m, energy, p_phi)?;
    Ok(ActionResult {
        i1,
        i2: action_i2(p_phi),
        method: ActionMethod::Quadrature,
        radial_frequency: 1.0 / d_i1_d_energy(m, energy, p_phi)?,
    })
}

/// How the two `F1` arguments are read from the printed
/// `F1(1/2, 1, -1/2, 2, a_-, a_-/a_+)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ArgumentReading {
    /// `(u a, v a) = (a_-, a_-/a_+)`: upper limit `a_-`, `u = 1`,
    /// `v = 1/a_+`.
    Products,
    /// `(u, v) = (a_-, a_-/a_+)` with upper limit `a_-`, so the standard
    /// arguments are `(a_-^2, a_-^2/a_+)`.
    Literal,
}

/// Where the `a_±` inserted into the closed form come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TurningInput {
    /// Roots of the quadratic fitted to the energy equation, in `y = 1 - x`.
    Oracle,
    /// The printed `a_±` with the printed `b` constants.
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AppellReading {
    pub turning: TurningInput,
    pub reading: ArgumentReading,
    pub a_minus: f64,
    pub a_plus: f64,
    /// `None` when `F1` diverges at these arguments.
    pub i1: Option<f64>,
    pub relative_deviation: Option<f64>,
    pub matches: bool,
}

/// Closed-form `I1` under every candidate reading, against quadrature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AppellComparison {
    pub energy: f64,
    pub p_phi: f64,
    pub quadrature: ActionResult,
    pub readings: Vec<AppellReading>,
    /// The result for the first matching reading, if any.
    pub appell: Option<ActionResult>,
    pub tolerance: f64,
}

/// Agreement threshold between the closed form and quadrature.
pub const APPELL_MATCH: f64 = 1e-6;

/// `a a_- sqrt(a_+ E / 2) F1(1/2, 1, -1/2, 2, ...)`.
pub fn i1_closed_form(
    a: f64,
    energy: f64,
    a_minus: f64,
    a_plus: f64,
    reading: ArgumentReading,
) -> Result<f64> {
    let (u, v) = match reading {
        ArgumentReading::Products => (1.0, 1.0 / a_plus),
        ArgumentReading::Literal => (a_minus, a_minus / a_plus),
    };
    let f1 = appell_f1(&AppellParams {
        alpha: 0.5,
        rho: 1.0,
        lambda: -0.5,
        gamma_sum: 2.0,
        u,
        v,
        a_limit: a_minus,
    })?;
    Ok(a * a_minus * (a_plus * energy / 2.0).sqrt() * f1)
}

/// `(a_-, a_+)` in `y = 1 - x` from the quadratic fitted to the energy
/// equation.
fn oracle_turning(m: &SurfaceModel, energy: f64, p_phi: f64) -> Result<(f64, f64)> {
    let fit = b_constants_fitted(m, energy, p_phi)?;
    let (x_lo, x_hi) = fit.quadratic.roots()?;
    Ok((1.0 - x_hi, 1.0 - x_lo))
}

/// Evaluates the printed closed form for `I1` and reports which readings
/// agree with quadrature to [`APPELL_MATCH`].
pub fn action_i1_appell(m: &SurfaceModel, energy: f64, p_phi: f64) -> Result<AppellComparison> {
    require_ellipsoid(m)?;
    let a = match m.surface() {
        SurfaceSpec::Ellipsoid { a, .. } => a,
        _ => unreachable!("checked above"),
    };
    let quadrature = action_i1_quadrature(m, energy, p_phi)?;
    let mut inputs = vec![(TurningInput::Oracle, oracle_turning(m, energy, p_phi)?)];
    if let Ok(tp) = b_constants(m, energy, p_phi).and_then(|rq| turning_points_closed(&rq)) {
        inputs.push((TurningInput::ClosedForm, (tp.a_minus, tp.a_plus)));
    }
    let mut readings = Vec::new();
    for (turning, (a_minus, a_plus)) in inputs {
        for reading in [ArgumentReading::Products, ArgumentReading::Literal] {
            let i1 = i1_closed_form(a, energy, a_minus, a_plus, reading).ok();
            let relative_deviation =
                i1.map(|v| (v - quadrature.i1).abs() / quadrature.i1.abs().max(f64::MIN_POSITIVE));
            readings.push(AppellReading {
                turning,
                reading,
                a_minus,
                a_plus,
                i1,
                relative_deviation,
                matches: relative_deviation.is_some_and(|d| d < APPELL_MATCH),
            });
        }
    }
    let appell = readings.iter().find(|r| r.matches).map(|r| ActionResult {
        i1: r.i1.unwrap_or(f64::NAN),
        method: ActionMethod::Appell,
        ..quadrature
    });
    Ok(AppellComparison {
        energy,
        p_phi,
        quadrature,
        readings,
        appell,
        tolerance: APPELL_MATCH,
    })
}

/// The bound band used for the actions at `(E, p_phi)`.
pub fn action_band(m: &SurfaceModel, energy: f64, p_phi: f64) -> Result<Band> {
    require_ellipsoid(m)?;
    hjq::bound_band(m, energy, p_phi)
}
