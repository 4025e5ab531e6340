//! The Hamiltonian family: free and Landau-type Hamiltonians on the
//! ellipsoid, hyperboloid and paraboloid of revolution, plus the ambient
//! three-dimensional systems they are cut from.
//!
//! All Hamiltonians use unit particle mass and unit probe charge.

mod elliptic;
mod gauge;
mod parabolic;
mod reduce;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::GUARD_BAND;

pub use gauge::{gauge_split, GaugeSplit};
pub use reduce::{classify_reducible, restrict_3d, ReducibilityReport, Restriction};

pub(crate) use elliptic::{gamma_el, gamma_hyp};
pub(crate) use gauge::printed_paraboloid_potential;
pub(crate) use parabolic::gamma_par;

use elliptic::{SurfaceKernel, TwoCenter};
use parabolic::{Parabolic3D, ParaboloidKernel};

/// Which quadric of revolution, with its shape parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurfaceSpec {
    /// `xi = 1/e` in elliptic coordinates with foci `(0, 0, ±a)`.
    Ellipsoid { a: f64, e: f64 },
    /// `eta = 1/e` in elliptic coordinates with foci `(0, 0, ±a)`.
    Hyperboloid { a: f64, e: f64 },
    /// `eta = p/2` in parabolic coordinates.
    Paraboloid { p: f64 },
}

impl SurfaceSpec {
    pub fn validate(&self) -> Result<()> {
        let finite = |v: f64| v.is_finite();
        match *self {
            SurfaceSpec::Ellipsoid { a, e } => {
                if !(a > 0.0 && finite(a)) {
                    return Err(Error::InvalidSurface(format!(
                        "ellipsoid requires a > 0, got a = {a}"
                    )));
                }
                if !(e > 0.0 && e < 1.0) {
                    return Err(Error::InvalidSurface(format!(
                        "ellipsoid requires eccentricity 0 < e < 1, got e = {e}"
                    )));
                }
            }
            SurfaceSpec::Hyperboloid { a, e } => {
                if !(a > 0.0 && finite(a)) {
                    return Err(Error::InvalidSurface(format!(
                        "hyperboloid requires a > 0, got a = {a}"
                    )));
                }
                if !(e > 1.0 && finite(e)) {
                    return Err(Error::InvalidSurface(format!(
                        "hyperboloid requires eccentricity e > 1, got e = {e}"
                    )));
                }
            }
            SurfaceSpec::Paraboloid { p } => {
                if !(p > 0.0 && finite(p)) {
                    return Err(Error::InvalidSurface(format!(
                        "paraboloid requires p > 0, got p = {p}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            SurfaceSpec::Ellipsoid { .. } => "ellipsoid",
            SurfaceSpec::Hyperboloid { .. } => "hyperboloid",
            SurfaceSpec::Paraboloid { .. } => "paraboloid",
        }
    }
}

/// Two dyons at the foci `(0, 0, -a)` (index 1) and `(0, 0, a)` (index 2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DyonPair {
    pub q1: f64,
    pub q2: f64,
    pub g1: f64,
    pub g2: f64,
}

impl DyonPair {
    pub fn new(q1: f64, q2: f64, g1: f64, g2: f64) -> Self {
        DyonPair { q1, q2, g1, g2 }
    }

    pub fn zero() -> Self {
        DyonPair::new(0.0, 0.0, 0.0, 0.0)
    }

    pub fn q_plus(&self) -> f64 {
        self.q1 + self.q2
    }
    pub fn q_minus(&self) -> f64 {
        self.q1 - self.q2
    }
    pub fn g_plus(&self) -> f64 {
        self.g1 + self.g2
    }
    pub fn g_minus(&self) -> f64 {
        self.g1 - self.g2
    }
}

/// A dyon at the focus plus parallel uniform electric and magnetic fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParabolicBackground {
    pub q: f64,
    pub g: f64,
    pub electric_field: f64,
    pub magnetic_field: f64,
}

impl ParabolicBackground {
    pub fn new(q: f64, g: f64, electric_field: f64, magnetic_field: f64) -> Self {
        ParabolicBackground {
            q,
            g,
            electric_field,
            magnetic_field,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Background {
    Free,
    Dyons(DyonPair),
    Uniform(ParabolicBackground),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dimensionality {
    #[serde(rename = "2d")]
    Surface2D,
    #[serde(rename = "3d")]
    Ambient3D,
}

/// A validated (surface, background, dimensionality) bundle.
///
/// For `Ambient3D` the surface only selects the chart: the elliptic chart
/// (focal half-separation `a`) for ellipsoid and hyperboloid specs, the
/// parabolic chart for paraboloid specs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceModel {
    surface: SurfaceSpec,
    background: Background,
    dim: Dimensionality,
}

impl fmt::Display for SurfaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bg = match self.background {
            Background::Free => "free",
            Background::Dyons(_) => "dyons",
            Background::Uniform(_) => "uniform",
        };
        let dim = match self.dim {
            Dimensionality::Surface2D => "2d",
            Dimensionality::Ambient3D => "3d",
        };
        write!(f, "{}/{}/{}", self.surface.name(), bg, dim)
    }
}

pub fn make_model(
    surface: SurfaceSpec,
    background: Background,
    dim: Dimensionality,
) -> Result<SurfaceModel> {
    surface.validate()?;
    let finite = match background {
        Background::Free => true,
        Background::Dyons(d) => [d.q1, d.q2, d.g1, d.g2].iter().all(|v| v.is_finite()),
        Background::Uniform(b) => [b.q, b.g, b.electric_field, b.magnetic_field]
            .iter()
            .all(|v| v.is_finite()),
    };
    if !finite {
        return Err(Error::InvalidCombination(
            "background charges must be finite".into(),
        ));
    }
    let elliptic_chart = !matches!(surface, SurfaceSpec::Paraboloid { .. });
    match (elliptic_chart, &background, dim) {
        (_, Background::Free, Dimensionality::Ambient3D) => Err(Error::InvalidCombination(
            "ambient 3D models need a dyon pair or a parabolic background".into(),
        )),
        (true, Background::Uniform(_), _) => Err(Error::InvalidCombination(format!(
            "{} pairs with a dyon pair, not a uniform-field background",
            surface.name()
        ))),
        (false, Background::Dyons(_), _) => Err(Error::InvalidCombination(
            "paraboloid pairs with a parabolic (focus dyon + uniform field) background, not a dyon pair".into(),
        )),
        _ => Ok(SurfaceModel {
            surface,
            background,
            dim,
        }),
    }
}

impl SurfaceModel {
    pub fn surface(&self) -> SurfaceSpec {
        self.surface
    }
    pub fn background(&self) -> Background {
        self.background
    }
    pub fn dim(&self) -> Dimensionality {
        self.dim
    }

    pub fn is_surface(&self) -> bool {
        self.dim == Dimensionality::Surface2D
    }

    /// Evaluation context with the `p_phi`-dependent constants cached.
    pub fn evaluator(&self, p_phi: f64) -> Evaluator {
        let kind = match (self.dim, self.surface, self.background) {
            (Dimensionality::Surface2D, SurfaceSpec::Ellipsoid { a, e }, bg) => {
                let d = match bg {
                    Background::Dyons(d) => Some(d),
                    _ => None,
                };
                EvalKind::Ellipsoid(SurfaceKernel::ellipsoid(a, e, d, p_phi))
            }
            (Dimensionality::Surface2D, SurfaceSpec::Hyperboloid { a, e }, bg) => {
                let d = match bg {
                    Background::Dyons(d) => Some(d),
                    _ => None,
                };
                EvalKind::Hyperboloid(SurfaceKernel::hyperboloid(a, e, d, p_phi))
            }
            (Dimensionality::Surface2D, SurfaceSpec::Paraboloid { p }, bg) => {
                let b = match bg {
                    Background::Uniform(b) => Some(b),
                    _ => None,
                };
                EvalKind::Paraboloid(ParaboloidKernel::new(p, b, p_phi))
            }
            (Dimensionality::Ambient3D, SurfaceSpec::Paraboloid { .. }, bg) => {
                let b = match bg {
                    Background::Uniform(b) => b,
                    _ => unreachable!("validated in make_model"),
                };
                EvalKind::Parabolic3D(Parabolic3D::new(b, p_phi))
            }
            (
                Dimensionality::Ambient3D,
                SurfaceSpec::Ellipsoid { a, .. } | SurfaceSpec::Hyperboloid { a, .. },
                bg,
            ) => {
                let d = match bg {
                    Background::Dyons(d) => d,
                    _ => unreachable!("validated in make_model"),
                };
                EvalKind::TwoCenter(TwoCenter::new(a, d, p_phi))
            }
        };
        Evaluator { p_phi, kind }
    }

    /// Map from the surface coordinate to the variable `x` in which the
    /// radial integrands are quadratic: `1 - u^2` on the elliptic charts,
    /// `u` itself on the paraboloid.
    pub fn x_of_u(&self, u: f64) -> f64 {
        match self.surface {
            SurfaceSpec::Paraboloid { .. } => u,
            _ => (1.0 - u) * (1.0 + u),
        }
    }
}

/// The shape (non-azimuthal) part of a phase point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    /// `u` is `eta` on the ellipsoid, `xi` on the hyperboloid and paraboloid.
    Surface { u: f64, p_u: f64 },
    Ambient {
        xi: f64,
        p_xi: f64,
        eta: f64,
        p_eta: f64,
    },
}

/// Canonical coordinates and momenta in the model's chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub shape: Shape,
    pub phi: f64,
    /// Conserved: `phi` is cyclic in every Hamiltonian.
    pub p_phi: f64,
}

impl PhasePoint {
    pub fn surface(u: f64, p_u: f64, phi: f64, p_phi: f64) -> Self {
        PhasePoint {
            shape: Shape::Surface { u, p_u },
            phi,
            p_phi,
        }
    }

    pub fn ambient(xi: f64, p_xi: f64, eta: f64, p_eta: f64, phi: f64, p_phi: f64) -> Self {
        PhasePoint {
            shape: Shape::Ambient {
                xi,
                p_xi,
                eta,
                p_eta,
            },
            phi,
            p_phi,
        }
    }

    /// `(u, p_u)` for surface points.
    pub fn surface_coords(&self) -> Option<(f64, f64)> {
        match self.shape {
            Shape::Surface { u, p_u } => Some((u, p_u)),
            Shape::Ambient { .. } => None,
        }
    }

    /// Flattened as `[coords..., momenta..., phi]`.
    pub(crate) fn to_state(self) -> Vec<f64> {
        match self.shape {
            Shape::Surface { u, p_u } => vec![u, p_u, self.phi],
            Shape::Ambient {
                xi,
                p_xi,
                eta,
                p_eta,
            } => vec![xi, eta, p_xi, p_eta, self.phi],
        }
    }

    pub(crate) fn from_state(y: &[f64], p_phi: f64) -> Self {
        match y.len() {
            3 => PhasePoint::surface(y[0], y[1], y[2], p_phi),
            5 => PhasePoint::ambient(y[0], y[2], y[1], y[3], y[4], p_phi),
            n => unreachable!("state vectors have 3 or 5 components, got {n}"),
        }
    }

    /// Same point with every momentum negated.
    pub fn reversed(&self) -> Self {
        let shape = match self.shape {
            Shape::Surface { u, p_u } => Shape::Surface { u, p_u: -p_u },
            Shape::Ambient {
                xi,
                p_xi,
                eta,
                p_eta,
            } => Shape::Ambient {
                xi,
                p_xi: -p_xi,
                eta,
                p_eta: -p_eta,
            },
        };
        PhasePoint {
            shape,
            phi: self.phi,
            p_phi: -self.p_phi,
        }
    }
}

/// Partial derivatives of the Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Gradients {
    pub shape: ShapeGradient,
    /// Always zero.
    pub d_phi: f64,
    pub d_p_phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShapeGradient {
    Surface {
        d_u: f64,
        d_p_u: f64,
    },
    Ambient {
        d_xi: f64,
        d_p_xi: f64,
        d_eta: f64,
        d_p_eta: f64,
    },
}

#[derive(Debug, Clone)]
enum EvalKind {
    Ellipsoid(SurfaceKernel),
    Hyperboloid(SurfaceKernel),
    Paraboloid(ParaboloidKernel),
    TwoCenter(TwoCenter),
    Parabolic3D(Parabolic3D),
}

/// Evaluates one model at a fixed `p_phi`.
#[derive(Debug, Clone)]
pub struct Evaluator {
    p_phi: f64,
    kind: EvalKind,
}

fn guard_open(v: f64, lo: f64, hi: f64, what: &str) -> Result<()> {
    if v > lo && v < hi && v.is_finite() {
        Ok(())
    } else {
        Err(Error::DomainError(format!(
            "{what} = {v} outside the open chart domain ({lo}, {hi})"
        )))
    }
}

impl Evaluator {
    pub fn p_phi(&self) -> f64 {
        self.p_phi
    }

    /// Checks the surface coordinate against the chart domain.
    pub fn check_u(&self, u: f64) -> Result<()> {
        match &self.kind {
            EvalKind::Ellipsoid(_) => guard_open(u, -1.0 + GUARD_BAND, 1.0 - GUARD_BAND, "eta"),
            EvalKind::Hyperboloid(_) => guard_open(u, 1.0 + GUARD_BAND, f64::INFINITY, "xi"),
            EvalKind::Paraboloid(_) => guard_open(u, GUARD_BAND, f64::INFINITY, "xi"),
            _ => Err(Error::Unsupported(
                "ambient models have no single surface coordinate".into(),
            )),
        }
    }

    fn check_point(&self, s: &PhasePoint) -> Result<()> {
        match (&self.kind, s.shape) {
            (EvalKind::TwoCenter(_), Shape::Ambient { xi, eta, .. }) => {
                guard_open(xi, 1.0 + GUARD_BAND, f64::INFINITY, "xi")?;
                guard_open(eta, -1.0 + GUARD_BAND, 1.0 - GUARD_BAND, "eta")
            }
            (EvalKind::Parabolic3D(_), Shape::Ambient { xi, eta, .. }) => {
                guard_open(xi, GUARD_BAND, f64::INFINITY, "xi")?;
                guard_open(eta, GUARD_BAND, f64::INFINITY, "eta")
            }
            (EvalKind::TwoCenter(_) | EvalKind::Parabolic3D(_), Shape::Surface { .. }) => Err(
                Error::DomainError("ambient model needs an ambient phase point".into()),
            ),
            (_, Shape::Surface { u, .. }) => self.check_u(u),
            (_, Shape::Ambient { .. }) => Err(Error::DomainError(
                "surface model needs a surface phase point".into(),
            )),
        }?;
        if !s.p_phi.is_finite() || !s.phi.is_finite() {
            return Err(Error::DomainError("non-finite phi or p_phi".into()));
        }
        Ok(())
    }

    /// The Hamiltonian, evaluated as the closed-form expression of the
    /// selected variant. `s.p_phi` must equal the evaluator's `p_phi`.
    pub fn energy(&self, s: &PhasePoint) -> Result<f64> {
        self.check_point(s)?;
        Ok(match (&self.kind, s.shape) {
            (EvalKind::Ellipsoid(k), Shape::Surface { u, p_u }) => k.energy_ellipsoid(u, p_u),
            (EvalKind::Hyperboloid(k), Shape::Surface { u, p_u }) => k.energy_hyperboloid(u, p_u),
            (EvalKind::Paraboloid(k), Shape::Surface { u, p_u }) => k.energy(u, p_u),
            (
                EvalKind::TwoCenter(k),
                Shape::Ambient {
                    xi,
                    p_xi,
                    eta,
                    p_eta,
                },
            ) => k.energy(xi, p_xi, eta, p_eta),
            (
                EvalKind::Parabolic3D(k),
                Shape::Ambient {
                    xi,
                    p_xi,
                    eta,
                    p_eta,
                },
            ) => k.energy(xi, p_xi, eta, p_eta),
            _ => unreachable!("checked by check_point"),
        })
    }

    pub fn gradients(&self, s: &PhasePoint) -> Result<Gradients> {
        self.check_point(s)?;
        let (shape, d_p_phi) = match (&self.kind, s.shape) {
            (EvalKind::Ellipsoid(k) | EvalKind::Hyperboloid(k), Shape::Surface { u, p_u }) => {
                let d_u = k.d_potential(u) + k.d_alpha(u) * p_u * p_u;
                let d_p_u = 2.0 * k.alpha(u) * p_u;
                (
                    ShapeGradient::Surface { d_u, d_p_u },
                    k.d_potential_d_p_phi(u),
                )
            }
            (EvalKind::Paraboloid(k), Shape::Surface { u, p_u }) => {
                let d_u = k.d_potential(u) + k.d_alpha(u) * p_u * p_u;
                let d_p_u = 2.0 * k.alpha(u) * p_u;
                (
                    ShapeGradient::Surface { d_u, d_p_u },
                    k.d_potential_d_p_phi(u),
                )
            }
            (
                EvalKind::TwoCenter(k),
                Shape::Ambient {
                    xi,
                    p_xi,
                    eta,
                    p_eta,
                },
            ) => k.gradients(xi, p_xi, eta, p_eta),
            (
                EvalKind::Parabolic3D(k),
                Shape::Ambient {
                    xi,
                    p_xi,
                    eta,
                    p_eta,
                },
            ) => k.gradients(xi, p_xi, eta, p_eta),
            _ => unreachable!("checked by check_point"),
        };
        Ok(Gradients {
            shape,
            d_phi: 0.0,
            d_p_phi,
        })
    }

    /// Coefficient of `p_u^2` in a surface Hamiltonian.
    pub fn kinetic_coefficient(&self, u: f64) -> Result<f64> {
        self.check_u(u)?;
        Ok(match &self.kind {
            EvalKind::Ellipsoid(k) | EvalKind::Hyperboloid(k) => k.alpha(u),
            EvalKind::Paraboloid(k) => k.alpha(u),
            _ => unreachable!("checked by check_u"),
        })
    }

    /// Surface Hamiltonian at `p_u = 0`.
    pub fn effective_potential(&self, u: f64) -> Result<f64> {
        self.check_u(u)?;
        Ok(self.potential_unchecked(u))
    }

    pub(crate) fn potential_unchecked(&self, u: f64) -> f64 {
        match &self.kind {
            EvalKind::Ellipsoid(k) | EvalKind::Hyperboloid(k) => k.potential(u),
            EvalKind::Paraboloid(k) => k.potential(u),
            _ => f64::NAN,
        }
    }

    pub(crate) fn alpha_unchecked(&self, u: f64) -> f64 {
        match &self.kind {
            EvalKind::Ellipsoid(k) | EvalKind::Hyperboloid(k) => k.alpha(u),
            EvalKind::Paraboloid(k) => k.alpha(u),
            _ => f64::NAN,
        }
    }

    /// `dH/dp_phi` with `p_u` dropped (the surface Hamiltonians carry
    /// `p_phi` only through the potential).
    pub(crate) fn d_potential_d_p_phi_unchecked(&self, u: f64) -> f64 {
        match &self.kind {
            EvalKind::Ellipsoid(k) | EvalKind::Hyperboloid(k) => k.d_potential_d_p_phi(u),
            EvalKind::Paraboloid(k) => k.d_potential_d_p_phi(u),
            _ => f64::NAN,
        }
    }

    /// `(E - U(u)) / alpha(u)` without domain checks.
    pub(crate) fn p_u_squared_unchecked(&self, u: f64, energy: f64) -> f64 {
        (energy - self.potential_unchecked(u)) / self.alpha_unchecked(u)
    }
}

/// Evaluates the model's Hamiltonian at `s`.
pub fn energy(m: &SurfaceModel, s: &PhasePoint) -> Result<f64> {
    m.evaluator(s.p_phi).energy(s)
}

/// Closed-form partial derivatives `(dH/dq, dH/dp, dH/dphi = 0, dH/dp_phi)`.
pub fn gradients(m: &SurfaceModel, s: &PhasePoint) -> Result<Gradients> {
    m.evaluator(s.p_phi).gradients(s)
}

/// The energy equation `H = E` solved for `p_u^2`. Negative values mark
/// classically forbidden `u`.
pub fn radial_momentum_squared(m: &SurfaceModel, u: f64, energy: f64, p_phi: f64) -> Result<f64> {
    if !m.is_surface() {
        return Err(Error::Unsupported(
            "radial momentum is defined for surface models; restrict the ambient model first"
                .into(),
        ));
    }
    let ev = m.evaluator(p_phi);
    ev.check_u(u)?;
    Ok(ev.p_u_squared_unchecked(u, energy))
}
