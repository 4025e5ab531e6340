//! Hamilton-Jacobi quadrature for the surface models.
//!
//! Every radial quantity is computed from the energy equation solved for
//! `p_u^2` (see [`crate::model::radial_momentum_squared`]). The printed
//! closed forms live in [`printed`] and are compared against it by
//! [`audit_formula`].

mod audit;
pub mod printed;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{classify_reducible, Background, Evaluator, SurfaceModel, SurfaceSpec};
use crate::quad::{integrate_doubling, integrate_orders};
use crate::tolerance::{GUARD_BAND, QUADRATURE, QUADRATURE_FLOOR};

pub use audit::{
    audit_formula, audit_suite, compare_on_grid, AuditReport, AuditSample, AuditSuite,
    FormulaCheck, RootCheck, RootRow, Skipped, Verdict,
};

const GRID: usize = 4000;
/// Stand-in for infinity on the unbounded charts.
const FAR: f64 = 1e12;

fn sq(v: f64) -> f64 {
    v * v
}

fn require_surface(m: &SurfaceModel) -> Result<()> {
    if m.is_surface() {
        Ok(())
    } else {
        Err(Error::Unsupported(
            "Hamilton-Jacobi quadrature works on surface models; restrict the ambient model first"
                .into(),
        ))
    }
}

/// A connected interval of `u` on which `p_u^2 >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
    /// Whether `lo` is a turning point (`p_u^2 = 0`) rather than the edge
    /// of the chart.
    pub lo_turning: bool,
    pub hi_turning: bool,
}

impl Band {
    /// Both edges are turning points.
    pub fn is_bound(&self) -> bool {
        self.lo_turning && self.hi_turning && self.hi.is_finite()
    }

    pub fn contains(&self, u: f64, tol: f64) -> bool {
        u >= self.lo - tol && u <= self.hi + tol
    }

    /// Range of `x` covered by the band (`x = 1 - u^2` or `x = u`).
    pub fn x_image(&self, m: &SurfaceModel) -> (f64, f64) {
        let (xa, xb) = (m.x_of_u(self.lo), m.x_of_u(self.hi));
        let (mut lo, mut hi) = (xa.min(xb), xa.max(xb));
        if !matches!(m.surface(), SurfaceSpec::Paraboloid { .. }) && self.lo < 0.0 && self.hi > 0.0
        {
            hi = 1.0;
        }
        if self.hi.is_infinite() {
            match m.surface() {
                SurfaceSpec::Paraboloid { .. } => hi = f64::INFINITY,
                _ => lo = f64::NEG_INFINITY,
            }
        }
        (lo, hi)
    }

    /// `x` values of the edges that are turning points.
    pub fn x_roots(&self, m: &SurfaceModel) -> Vec<f64> {
        let mut out = Vec::new();
        if self.lo_turning {
            out.push(m.x_of_u(self.lo));
        }
        if self.hi_turning {
            let x = m.x_of_u(self.hi);
            if out.iter().all(|r: &f64| (r - x).abs() > 1e-13) {
                out.push(x);
            }
        }
        out.sort_by(f64::total_cmp);
        out
    }
}

/// `p_u^2(u)` at fixed energy.
pub(crate) struct Radial {
    ev: Evaluator,
    energy: f64,
}

impl Radial {
    pub(crate) fn new(m: &SurfaceModel, energy: f64, p_phi: f64) -> Self {
        Radial {
            ev: m.evaluator(p_phi),
            energy,
        }
    }

    pub(crate) fn p2(&self, u: f64) -> f64 {
        self.ev.p_u_squared_unchecked(u, self.energy)
    }

    fn alpha(&self, u: f64) -> f64 {
        self.ev.alpha_unchecked(u)
    }

    fn d_potential_d_p_phi(&self, u: f64) -> f64 {
        self.ev.d_potential_d_p_phi_unchecked(u)
    }
}

/// Chart coordinate for a grid parameter `t in (0, 1)`.
fn chart_point(surface: SurfaceSpec, t: f64) -> f64 {
    match surface {
        SurfaceSpec::Ellipsoid { .. } => -(std::f64::consts::PI * t).cos(),
        SurfaceSpec::Hyperboloid { .. } => 1.0 + t / (1.0 - t),
        SurfaceSpec::Paraboloid { .. } => t / (1.0 - t),
    }
}

/// Chart edges kept clear of the singularities by twice the guard band.
fn chart_edges(surface: SurfaceSpec) -> (f64, f64) {
    match surface {
        SurfaceSpec::Ellipsoid { .. } => (-1.0 + 2.0 * GUARD_BAND, 1.0 - 2.0 * GUARD_BAND),
        SurfaceSpec::Hyperboloid { .. } => (1.0 + 2.0 * GUARD_BAND, FAR),
        SurfaceSpec::Paraboloid { .. } => (2.0 * GUARD_BAND, FAR),
    }
}

fn grid(surface: SurfaceSpec) -> Vec<f64> {
    let (lo, hi) = chart_edges(surface);
    let mut out = Vec::with_capacity(GRID + 2);
    out.push(lo);
    out.extend((0..GRID).map(|i| chart_point(surface, (i as f64 + 0.5) / GRID as f64)));
    out.push(hi);
    out
}

/// Bisection on a predicate that differs at the two ends; returns the end
/// of the final bracket on which `allowed` holds.
pub(crate) fn boundary<F: Fn(f64) -> bool>(mut a: f64, mut b: f64, allowed: F) -> f64 {
    let a_ok = allowed(a);
    debug_assert!(a_ok != allowed(b));
    for _ in 0..2000 {
        let mid = 0.5 * (a + b);
        if mid == a || mid == b {
            break;
        }
        if allowed(mid) == a_ok {
            a = mid;
        } else {
            b = mid;
        }
    }
    if a_ok {
        a
    } else {
        b
    }
}

/// Golden-section search for a maximum of `f` on `[a, b]`.
pub(crate) fn golden_max<F: Fn(f64) -> f64>(mut a: f64, mut b: f64, f: F) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 4.0 * f64::EPSILON * (a.abs() + b.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// All classically allowed bands at energy `E`, in increasing `u`.
pub fn allowed_bands(m: &SurfaceModel, energy: f64, p_phi: f64) -> Result<Vec<Band>> {
    require_surface(m)?;
    if !energy.is_finite() || !p_phi.is_finite() {
        return Err(Error::InvalidParameter(
            "energy and p_phi must be finite".into(),
        ));
    }
    let radial = Radial::new(m, energy, p_phi);
    let p2 = |u: f64| radial.p2(u);
    let mut pts: Vec<(f64, f64)> = grid(m.surface()).into_iter().map(|u| (u, p2(u))).collect();

    // narrow bands (or gaps) can hide between grid points
    let mut extra = Vec::new();
    for w in pts.windows(3) {
        let (p0, p1, p2v) = (w[0].1, w[1].1, w[2].1);
        if p1 < 0.0 && p1 >= p0 && p1 >= p2v {
            let (u, v) = golden_max(w[0].0, w[2].0, p2);
            if v >= 0.0 {
                extra.push((u, v));
            }
        } else if p1 >= 0.0 && p1 <= p0 && p1 <= p2v {
            let (u, v) = golden_max(w[0].0, w[2].0, |u| -p2(u));
            if -v < 0.0 {
                extra.push((u, -v));
            }
        }
    }
    if !extra.is_empty() {
        pts.extend(extra);
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    }

    let allowed = |u: f64| p2(u) >= 0.0;
    let mut bands = Vec::new();
    let mut open: Option<(f64, bool)> = if pts[0].1 >= 0.0 {
        Some((pts[0].0, false))
    } else {
        None
    };
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        match (a.1 >= 0.0, b.1 >= 0.0) {
            (false, true) => open = Some((boundary(a.0, b.0, allowed), true)),
            (true, false) => {
                let (lo, lo_turning) = open.take().expect("band opened before closing");
                bands.push(Band {
                    lo,
                    hi: boundary(a.0, b.0, allowed),
                    lo_turning,
                    hi_turning: true,
                });
            }
            _ => {}
        }
    }
    if let Some((lo, lo_turning)) = open {
        let last = pts[pts.len() - 1].0;
        let hi = if last >= FAR { f64::INFINITY } else { last };
        bands.push(Band {
            lo,
            hi,
            lo_turning,
            hi_turning: false,
        });
    }
    Ok(bands)
}

/// The allowed band containing `u0`.
pub fn allowed_band(m: &SurfaceModel, energy: f64, p_phi: f64, u0: f64) -> Result<Band> {
    let bands = allowed_bands(m, energy, p_phi)?;
    let tol = 1e-9 * u0.abs().max(1.0);
    bands
        .into_iter()
        .find(|b| b.contains(u0, tol))
        .ok_or_else(|| {
            Error::ForbiddenRegion(format!("u = {u0} is classically forbidden at E = {energy}"))
        })
}

/// The first bound band.
pub fn bound_band(m: &SurfaceModel, energy: f64, p_phi: f64) -> Result<Band> {
    allowed_bands(m, energy, p_phi)?
        .into_iter()
        .find(Band::is_bound)
        .ok_or_else(|| {
            Error::NoBoundMotion(format!(
                "no band bounded by two turning points at E = {energy}"
            ))
        })
}

/// Lowest interior minimum of the effective potential `H(u, p_u = 0)`,
/// as `(u*, U(u*))`.
pub fn effective_minimum(m: &SurfaceModel, p_phi: f64) -> Result<(f64, f64)> {
    require_surface(m)?;
    let ev = m.evaluator(p_phi);
    let u_of = grid(m.surface());
    let vals: Vec<f64> = u_of.iter().map(|&u| ev.potential_unchecked(u)).collect();
    let mut best: Option<(f64, f64)> = None;
    for i in 1..vals.len() - 1 {
        if vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1] {
            let (u, v) = golden_max(u_of[i - 1], u_of[i + 1], |u| -ev.potential_unchecked(u));
            if best.is_none_or(|(_, b)| -v < b) {
                best = Some((u, -v));
            }
        }
    }
    best.ok_or_else(|| {
        Error::NoBoundMotion(format!(
            "effective potential of {m} has no interior minimum"
        ))
    })
}

/// Which expression produced a set of `b` constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadraticSource {
    /// The constants exactly as printed.
    Printed,
    /// Closed forms obtained from the Hamiltonian by the same substitution.
    Derived,
    /// Interpolated from the energy equation.
    Fitted,
}

/// The constants of the reduced radial integrand `sqrt(x^2 + b1 x + b2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadicalQuadratic {
    pub b1: f64,
    pub b2: f64,
    /// `[0, 1]` on the ellipsoid, `(-inf, 0]` on the hyperboloid,
    /// `[0, inf)` on the paraboloid.
    pub x_domain: (f64, f64),
    /// Overall prefactor of the generating function.
    pub scale: f64,
    pub source: QuadraticSource,
}

impl RadicalQuadratic {
    fn new(m: &SurfaceModel, energy: f64, (b1, b2): (f64, f64), source: QuadraticSource) -> Self {
        let (x_domain, scale) = match m.surface() {
            SurfaceSpec::Ellipsoid { a, .. } => ((0.0, 1.0), -a * (energy / 2.0).sqrt()),
            SurfaceSpec::Hyperboloid { a, .. } => {
                ((f64::NEG_INFINITY, 0.0), -a * (energy / 2.0).sqrt())
            }
            SurfaceSpec::Paraboloid { .. } => ((0.0, f64::INFINITY), (energy / 2.0).sqrt()),
        };
        RadicalQuadratic {
            b1,
            b2,
            x_domain,
            scale,
            source,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        x * x + self.b1 * x + self.b2
    }

    pub fn discriminant(&self) -> f64 {
        self.b1 * self.b1 - 4.0 * self.b2
    }

    /// Roots of `x^2 + b1 x + b2`, ascending.
    pub fn roots(&self) -> Result<(f64, f64)> {
        let disc = self.discriminant();
        if disc < 0.0 {
            return Err(Error::ComplexRoots(disc));
        }
        let q = -0.5 * (self.b1 + self.b1.signum() * disc.sqrt());
        let (r1, r2) = if q == 0.0 {
            (0.0, 0.0)
        } else {
            (q, self.b2 / q)
        };
        Ok((r1.min(r2), r1.max(r2)))
    }

    /// `p_u^2` reconstructed from the quadratic: the free-particle form with
    /// these constants.
    pub fn momentum_squared(&self, m: &SurfaceModel, energy: f64, u: f64) -> f64 {
        let x = m.x_of_u(u);
        match m.surface() {
            SurfaceSpec::Ellipsoid { a, .. } | SurfaceSpec::Hyperboloid { a, .. } => {
                2.0 * a * a * energy * self.eval(x) / (x * x)
            }
            SurfaceSpec::Paraboloid { .. } => energy * self.eval(x) / (2.0 * x * x),
        }
    }
}

fn check_energy(energy: f64) -> Result<()> {
    if energy == 0.0 || !energy.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "the b constants need a finite non-zero energy, got {energy}"
        )));
    }
    Ok(())
}

/// Effective `(q, g)` of a free or reducible model.
fn reduced_charges(m: &SurfaceModel) -> Result<(f64, f64)> {
    let report = classify_reducible(m);
    match report.effective_charges {
        Some(c) if report.reducible => Ok(c),
        _ => Err(Error::NotReducible(format!(
            "{m}: {}",
            report.matched_condition
        ))),
    }
}

/// The printed `(b1, b2)` for the free or reducible configuration.
pub fn b_constants(m: &SurfaceModel, energy: f64, p_phi: f64) -> Result<RadicalQuadratic> {
    require_surface(m)?;
    check_energy(energy)?;
    let (q, g) = reduced_charges(m)?;
    let free = m.background() == Background::Free;
    let b = match m.surface() {
        SurfaceSpec::Ellipsoid { a, e } | SurfaceSpec::Hyperboloid { a, e } => {
            if free {
                printed::b_free_elliptic(a, e, energy, p_phi)
            } else {
                printed::b_reduced_elliptic(a, e, q, g, energy, p_phi)
            }
        }
        SurfaceSpec::Paraboloid { p } => {
            if free {
                printed::b_free_paraboloid(p, energy, p_phi)
            } else {
                printed::b_reduced_paraboloid(p, q, g, energy, p_phi)
            }
        }
    };
    Ok(RadicalQuadratic::new(
        m,
        energy,
        b,
        QuadraticSource::Printed,
    ))
}

/// `(b1, b2)` obtained by substituting `x` into the energy equation of the
/// free or reducible configuration.
pub fn b_constants_derived(m: &SurfaceModel, energy: f64, p_phi: f64) -> Result<RadicalQuadratic> {
    require_surface(m)?;
    check_energy(energy)?;
    let (q, g) = reduced_charges(m)?;
    let b = match m.surface() {
        SurfaceSpec::Ellipsoid { a, e } | SurfaceSpec::Hyperboloid { a, e } => {
            let sign = if matches!(m.surface(), SurfaceSpec::Ellipsoid { .. }) {
                -1.0
            } else {
                1.0
            };
            let e2 = e * e;
            let b1 = (2.0 * energy * a * a * sq(1.0 - e2) + sign * 4.0 * a * e * q * (1.0 - e2)
                - e2 * e2 * sq(p_phi)
                + 4.0 * e2 * e * g * p_phi)
                / (2.0 * energy * a * a * e2 * (1.0 - e2));
            let b2 = -(sq(p_phi) + 4.0 * sq(g)) / (2.0 * a * a * energy);
            (b1, b2)
        }
        SurfaceSpec::Paraboloid { p } => printed::b_reduced_paraboloid(p, q, g, energy, p_phi),
    };
    Ok(RadicalQuadratic::new(
        m,
        energy,
        b,
        QuadraticSource::Derived,
    ))
}

/// The energy equation rewritten as a function of `x`: `x^2 p^2 / (2 a^2 E)`
/// on the elliptic charts, `2 xi^2 p^2 / E` on the paraboloid. Quadratic
/// exactly when the configuration is free or reducible. `upper` picks the
/// sign of `u` on the ellipsoid.
pub(crate) fn x_form(m: &SurfaceModel, radial: &Radial, energy: f64, x: f64, upper: bool) -> f64 {
    match m.surface() {
        SurfaceSpec::Ellipsoid { a, .. } | SurfaceSpec::Hyperboloid { a, .. } => {
            let mut u = (1.0 - x).sqrt();
            if !upper {
                u = -u;
            }
            x * x * radial.p2(u) / (2.0 * a * a * energy)
        }
        SurfaceSpec::Paraboloid { .. } => 2.0 * x * x * radial.p2(x) / energy,
    }
}

/// Quadratic interpolated from the energy equation, with the residual of
/// the interpolation away from its nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticFit {
    pub quadratic: RadicalQuadratic,
    /// Fitted coefficient of `x^2` (1 for a reducible configuration).
    pub leading: f64,
    /// Largest deviation from the fitted quadratic on check points,
    /// relative to the largest sampled value.
    pub residual: f64,
}

pub fn b_constants_fitted(m: &SurfaceModel, energy: f64, p_phi: f64) -> Result<QuadraticFit> {
    require_surface(m)?;
    check_energy(energy)?;
    let radial = Radial::new(m, energy, p_phi);
    let (nodes, checks): ([f64; 3], Vec<f64>) = match m.surface() {
        SurfaceSpec::Ellipsoid { .. } => {
            ([0.2, 0.5, 0.8], (1..16).map(|k| k as f64 / 16.0).collect())
        }
        SurfaceSpec::Hyperboloid { .. } => (
            [1.5, 2.5, 4.0].map(|xi: f64| 1.0 - xi * xi),
            (1..16).map(|k| 1.0 - sq(1.0 + k as f64 / 4.0)).collect(),
        ),
        SurfaceSpec::Paraboloid { .. } => {
            ([0.5, 1.5, 3.0], (1..16).map(|k| k as f64 / 4.0).collect())
        }
    };
    let y = nodes.map(|x| x_form(m, &radial, energy, x, true));
    let [x0, x1, x2] = nodes;
    let d01 = (y[1] - y[0]) / (x1 - x0);
    let d12 = (y[2] - y[1]) / (x2 - x1);
    let c2 = (d12 - d01) / (x2 - x0);
    let c1 = d01 - c2 * (x0 + x1);
    let c0 = y[0] - c1 * x0 - c2 * x0 * x0;
    let mut dev: f64 = 0.0;
    let mut size: f64 = 0.0;
    let both = matches!(m.surface(), SurfaceSpec::Ellipsoid { .. });
    for &x in &checks {
        for upper in [true, false] {
            if !upper && !both {
                continue;
            }
            let v = x_form(m, &radial, energy, x, upper);
            dev = dev.max((v - (c2 * x * x + c1 * x + c0)).abs());
            size = size.max(v.abs());
        }
    }
    Ok(QuadraticFit {
        quadratic: RadicalQuadratic::new(m, energy, (c1 / c2, c0 / c2), QuadraticSource::Fitted),
        leading: c2,
        residual: if size > 0.0 { dev / size } else { dev },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TurningSource {
    ClosedForm,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TurningPoints {
    pub a_minus: f64,
    pub a_plus: f64,
    pub source: TurningSource,
    /// `x` values of actual turning points (oracle only).
    pub x_roots: Vec<f64>,
    /// The band in the chart coordinate (oracle only).
    pub u_band: Option<(f64, f64)>,
}

/// `a_± = (2 + b1 ± sqrt(b1^2 - 4 b2)) / 2`, as printed.
pub fn turning_points_closed(rq: &RadicalQuadratic) -> Result<TurningPoints> {
    let (a_minus, a_plus) =
        printed::a_pm(rq.b1, rq.b2).ok_or(Error::ComplexRoots(rq.discriminant()))?;
    Ok(TurningPoints {
        a_minus,
        a_plus,
        source: TurningSource::ClosedForm,
        x_roots: Vec::new(),
        u_band: None,
    })
}

/// The `x` range of the first bound band, with its turning points located
/// by bisection on the energy equation.
pub fn turning_points_oracle(m: &SurfaceModel, energy: f64, p_phi: f64) -> Result<TurningPoints> {
    let band = bound_band(m, energy, p_phi)?;
    let (a_minus, a_plus) = band.x_image(m);
    Ok(TurningPoints {
        a_minus,
        a_plus,
        source: TurningSource::Oracle,
        x_roots: band.x_roots(m),
        u_band: Some((band.lo, band.hi)),
    })
}

/// Elapsed time and azimuthal advance along a monotonic stretch of `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitSegment {
    pub time: f64,
    pub delta_phi: f64,
}

/// `t = dS/dE` and `phi = -dS/dp_phi` between `u_from` and `u_to`:
///
/// `t = ∫ du / (2 alpha |p_u|)`, `Δphi = ∫ (dU/dp_phi) du / (2 alpha |p_u|)`
///
/// with `H = U(u) + alpha(u) p_u^2`. Both ends may be turning points; the
/// substitution `u = u_end ± s^2` absorbs the inverse square roots.
pub fn orbit_quadrature(
    m: &SurfaceModel,
    energy: f64,
    p_phi: f64,
    u_from: f64,
    u_to: f64,
) -> Result<OrbitSegment> {
    require_surface(m)?;
    if u_from == u_to {
        return Ok(OrbitSegment {
            time: 0.0,
            delta_phi: 0.0,
        });
    }
    let (lo, hi) = (u_from.min(u_to), u_from.max(u_to));
    let band = allowed_band(m, energy, p_phi, 0.5 * (lo + hi))?;
    let tol = 1e-9 * hi.abs().max(1.0);
    if !band.contains(lo, tol) || !band.contains(hi, tol) {
        return Err(Error::ForbiddenRegion(format!(
            "[{lo}, {hi}] leaves the allowed band [{}, {}]",
            band.lo, band.hi
        )));
    }
    let (lo, hi) = (lo.max(band.lo), hi.min(band.hi));
    let radial = Radial::new(m, energy, p_phi);
    segment(&radial, lo, hi, (0.0, 0.0))
}

/// `floor` holds absolute tolerances for `(t, phi)` below which a
/// refinement change is accepted.
fn segment(radial: &Radial, lo: f64, hi: f64, floor: (f64, f64)) -> Result<OrbitSegment> {
    let time = regularized(radial, lo, hi, floor.0, |u, root_p2| {
        1.0 / (2.0 * radial.alpha(u) * root_p2)
    })?;
    let delta_phi = regularized(radial, lo, hi, floor.1, |u, root_p2| {
        radial.d_potential_d_p_phi(u) / (2.0 * radial.alpha(u) * root_p2)
    })?;
    Ok(OrbitSegment { time, delta_phi })
}

/// Rounding of `E - U` near an end of `[anchor, anchor + dir len]`.
/// Returns the `s` below which `p_u^2 = P' s^2` is dominated by it, where the
/// smooth `s` integrand is continued by its value at the cutoff, and the
/// relative accuracy it leaves at the far end.
fn rounding_limits(radial: &Radial, anchor: f64, dir: f64, len: f64) -> (f64, f64) {
    let d = 1e-3 * len;
    let u = anchor + dir * d;
    let p2 = radial.p2(u);
    let alpha = radial.alpha(u);
    let far = radial.p2(anchor + dir * len);
    if !(p2 > 0.0 && alpha > 0.0 && far > 0.0) {
        return (0.0, 0.0);
    }
    let scale = radial.energy.abs() + (radial.energy - alpha * p2).abs();
    let noise = 8.0 * f64::EPSILON * scale / alpha;
    (
        (1e6 * noise * d / p2).sqrt().min(1e-2 * len.sqrt()),
        noise / far,
    )
}

/// `∫_lo^hi f(u, sqrt(p_u^2)) du` with `u = lo + s^2` on the lower half and
/// `u = hi - s^2` on the upper half.
fn regularized<F: Fn(f64, f64) -> f64>(
    radial: &Radial,
    lo: f64,
    hi: f64,
    abs_floor: f64,
    f: F,
) -> Result<f64> {
    let mid = 0.5 * (lo + hi);
    let half = |anchor: f64, dir: f64, len: f64| {
        let (cut, rel_noise) = rounding_limits(radial, anchor, dir, len);
        let rel_floor = QUADRATURE_FLOOR.max(100.0 * rel_noise);
        let g = |s: f64| {
            let s = s.max(cut);
            let u = anchor + dir * s * s;
            let p2 = radial.p2(u);
            if p2 <= 0.0 {
                0.0
            } else {
                2.0 * s * f(u, p2.sqrt())
            }
        };
        let top = len.sqrt();
        let est = integrate_orders(0.0, top, QUADRATURE, 1e-300, g);
        if est.converged || est.error <= (rel_floor * est.value.abs()).max(0.5 * abs_floor) {
            return Ok(est.value);
        }
        let est = integrate_doubling(0.0, top, QUADRATURE, 0.5 * abs_floor, 1 << 14, g);
        if est.converged {
            Ok(est.value)
        } else {
            Err(Error::Nonconvergent(format!(
                "quadrature on [{lo}, {hi}] stalled at {} panels (last change {:e})",
                est.panels, est.error
            )))
        }
    };
    Ok(half(lo, 1.0, mid - lo)? + half(hi, -1.0, hi - mid)?)
}

/// One full radial oscillation in a bound band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialCycle {
    pub period: f64,
    pub phi_advance: f64,
    pub band: Band,
}

/// Period and apsidal advance of the oscillation through `u0`, twice the
/// turning-point-to-turning-point quadrature.
pub fn radial_cycle(m: &SurfaceModel, energy: f64, p_phi: f64, u0: f64) -> Result<RadialCycle> {
    require_surface(m)?;
    let band = allowed_band(m, energy, p_phi, u0)?;
    if !band.is_bound() {
        return Err(Error::NoBoundMotion(format!(
            "the band [{}, {}] through u = {u0} is not bounded by turning points",
            band.lo, band.hi
        )));
    }
    let seg = segment(&Radial::new(m, energy, p_phi), band.lo, band.hi, (0.0, 0.0))?;
    Ok(RadialCycle {
        period: 2.0 * seg.time,
        phi_advance: 2.0 * seg.delta_phi,
        band,
    })
}

/// `(1/π) ∫_band sqrt(p_u^2) du` over the given bound band.
pub(crate) fn band_action(m: &SurfaceModel, energy: f64, p_phi: f64, band: &Band) -> Result<f64> {
    let radial = Radial::new(m, energy, p_phi);
    let v = regularized(&radial, band.lo, band.hi, 0.0, |_, root_p2| root_p2)?;
    Ok(v / std::f64::consts::PI)
}

/// Points `(u, t, phi)` of the parametric orbit from the lower to the upper
/// edge of a bound band, with `t = phi = 0` at the lower turning point.
pub fn orbit_curve(
    m: &SurfaceModel,
    energy: f64,
    p_phi: f64,
    band: &Band,
    n: usize,
) -> Result<Vec<(f64, f64, f64)>> {
    require_surface(m)?;
    if n < 2 {
        return Err(Error::InvalidParameter(
            "an orbit curve needs at least two points".into(),
        ));
    }
    let radial = Radial::new(m, energy, p_phi);
    // short stretches next to a turning point only resolve to a fixed
    // absolute accuracy; measure it against the whole half cycle
    let whole = segment(&radial, band.lo, band.hi, (0.0, 0.0))?;
    let floor = (
        QUADRATURE * whole.time.abs(),
        QUADRATURE * whole.delta_phi.abs(),
    );
    let mut out = Vec::with_capacity(n);
    let (mut t, mut phi) = (0.0, 0.0);
    let mut prev = band.lo;
    out.push((prev, 0.0, 0.0));
    for k in 1..n {
        // cosine spacing crowds points towards the turning points
        let w = 0.5 * (1.0 - (std::f64::consts::PI * k as f64 / (n - 1) as f64).cos());
        let u = if k == n - 1 {
            band.hi
        } else {
            band.lo + w * (band.hi - band.lo)
        };
        let seg = segment(&radial, prev, u, floor)?;
        t += seg.time;
        phi += seg.delta_phi;
        out.push((u, t, phi));
        prev = u;
    }
    Ok(out)
}
