//! Canonical (gauge-split) forms of the surface Hamiltonians, exposing the
//! azimuthal vector potential `A_phi(u)` and the scalar potential `V(u)`:
//!
//! `H = f(u) [ g_uu p_u^2 + k(u) (p_phi - A_phi(u))^2 + V(u) ] + shift(p_phi)`.

use serde::Serialize;

use super::{
    classify_reducible, Background, DyonPair, ParabolicBackground, SurfaceModel, SurfaceSpec,
};
use crate::error::{Error, Result};

fn sq(v: f64) -> f64 {
    v * v
}

fn one_minus_sq(u: f64) -> f64 {
    (1.0 - u) * (1.0 + u)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GaugeSplit {
    /// No background: `A_phi = 0`, `V = 0`.
    Free {
        surface: SurfaceSpec,
    },
    Ellipsoid {
        a: f64,
        e: f64,
        dyons: DyonPair,
    },
    /// `q1 = q2 = q`, `g1 = -g2 = g`.
    EllipsoidReduced {
        a: f64,
        e: f64,
        q: f64,
        g: f64,
    },
    Hyperboloid {
        a: f64,
        e: f64,
        dyons: DyonPair,
    },
    /// `q1 = -q2 = q`, `g1 = g2 = g`.
    HyperboloidReduced {
        a: f64,
        e: f64,
        q: f64,
        g: f64,
    },
    Paraboloid {
        p: f64,
        background: ParabolicBackground,
    },
    /// Vanishing uniform fields; only the focus dyon `(q, g)` remains.
    ParaboloidReduced {
        p: f64,
        q: f64,
        g: f64,
    },
}

/// Splits a surface Hamiltonian into vector and scalar potentials.
/// Reducible configurations get the reduced pair.
pub fn gauge_split(m: &SurfaceModel) -> Result<GaugeSplit> {
    if !m.is_surface() {
        return Err(Error::Unsupported(
            "gauge split is defined for surface models".into(),
        ));
    }
    let report = classify_reducible(m);
    let (q, g) = report.effective_charges.unwrap_or((0.0, 0.0));
    match (m.surface(), m.background()) {
        (surface, Background::Free) => Ok(GaugeSplit::Free { surface }),
        (SurfaceSpec::Ellipsoid { a, e }, Background::Dyons(d)) => {
            if report.reducible {
                Ok(GaugeSplit::EllipsoidReduced { a, e, q, g })
            } else if d.g_minus() == 0.0 {
                Err(Error::GaugeUndefined(
                    "ellipsoid split divides by g1 - g2, which vanishes while q1 != q2 or g1 != -g2".into(),
                ))
            } else {
                Ok(GaugeSplit::Ellipsoid { a, e, dyons: d })
            }
        }
        (SurfaceSpec::Hyperboloid { a, e }, Background::Dyons(d)) => {
            if report.reducible {
                Ok(GaugeSplit::HyperboloidReduced { a, e, q, g })
            } else if d.g_plus() == 0.0 {
                Err(Error::GaugeUndefined(
                    "hyperboloid split divides by g1 + g2, which vanishes while q1 != -q2 or g1 != g2".into(),
                ))
            } else {
                Ok(GaugeSplit::Hyperboloid { a, e, dyons: d })
            }
        }
        (SurfaceSpec::Paraboloid { p }, Background::Uniform(b)) => {
            if report.reducible {
                Ok(GaugeSplit::ParaboloidReduced { p, q, g })
            } else if b.magnetic_field == 0.0 {
                Err(Error::GaugeUndefined(
                    "paraboloid split divides by B, which vanishes while the electric field does not".into(),
                ))
            } else {
                Ok(GaugeSplit::Paraboloid { p, background: b })
            }
        }
        _ => unreachable!("invalid pairings are rejected by make_model"),
    }
}

impl GaugeSplit {
    pub fn is_reduced(&self) -> bool {
        matches!(
            self,
            GaugeSplit::EllipsoidReduced { .. }
                | GaugeSplit::HyperboloidReduced { .. }
                | GaugeSplit::ParaboloidReduced { .. }
        )
    }

    /// Azimuthal vector potential.
    pub fn a_phi(&self, u: f64) -> f64 {
        match *self {
            GaugeSplit::Free { .. } => 0.0,
            // e g_- (1 + G^2 - (u - G)^2) with G = g_+ (1 - e^2) / (2 e g_-),
            // expanded so that small g_- does not cancel
            GaugeSplit::Ellipsoid { e, dyons, .. } => {
                elliptic_vector_potential(e, dyons.g_minus(), dyons.g_plus(), u) / (1.0 - sq(e * u))
            }
            GaugeSplit::EllipsoidReduced { e, g, .. }
            | GaugeSplit::HyperboloidReduced { e, g, .. } => {
                2.0 * e * g * one_minus_sq(u) / (1.0 - sq(e * u))
            }
            GaugeSplit::Hyperboloid { e, dyons, .. } => {
                elliptic_vector_potential(e, dyons.g_plus(), dyons.g_minus(), u) / (1.0 - sq(e * u))
            }
            // p B (G^2 - 2g/B - (u - G)^2) / (2 (p + 2u)) with G = 2g/(pB) - p/4
            GaugeSplit::Paraboloid { p, background } => {
                let (g, bf) = (background.g, background.magnetic_field);
                g * (2.0 * u - p) / (p + 2.0 * u) - p * bf * u / 4.0
            }
            GaugeSplit::ParaboloidReduced { p, g, .. } => g * (u - p / 2.0) / (u + p / 2.0),
        }
    }

    /// Scalar potential inside the braces of the canonical form.
    pub fn potential(&self, u: f64) -> f64 {
        match *self {
            GaugeSplit::Free { .. } => 0.0,
            GaugeSplit::Ellipsoid { a, e, dyons } => {
                let (gp, gm) = (dyons.g_plus(), dyons.g_minus());
                let e2 = e * e;
                2.0 * a * dyons.q_minus() * u
                    + elliptic_field_potential(e, gm, gp, u)
                    + e2 * sq(gp) / (1.0 - e2)
                    + 2.0 * a * dyons.q_plus() / e
            }
            GaugeSplit::EllipsoidReduced { a, e, q, g } => {
                reduced_elliptic_potential(e, g, u) + 4.0 * a * q / e
            }
            GaugeSplit::Hyperboloid { a, e, dyons } => {
                let (gp, gm) = (dyons.g_plus(), dyons.g_minus());
                let e2 = e * e;
                -2.0 * a * dyons.q_plus() * u
                    + elliptic_field_potential(e, gp, gm, u)
                    + e2 * sq(gm) / (1.0 - e2)
                    - 2.0 * a * dyons.q_minus() / e
            }
            GaugeSplit::HyperboloidReduced { a, e, q, g } => {
                reduced_elliptic_potential(e, g, u) - 4.0 * a * q / e
            }
            GaugeSplit::Paraboloid { p, background } => {
                // the printed form misses 8 g^2/(p + 2 xi) - p g B
                paraboloid_potential(p, &background, u) + 8.0 * sq(background.g) / (p + 2.0 * u)
                    - p * background.g * background.magnetic_field
            }
            GaugeSplit::ParaboloidReduced { p, q, g } => {
                sq(g) * (1.0 / u + 2.0 / p * (1.0 - sq(u - p / 2.0) / (u * (u + p / 2.0))))
                    + 4.0 * q
            }
        }
    }

    /// Energy offset outside the braces.
    pub fn constant_shift(&self, p_phi: f64) -> f64 {
        match *self {
            GaugeSplit::Paraboloid { background, .. } => -background.magnetic_field * p_phi,
            _ => 0.0,
        }
    }

    /// Reassembled canonical Hamiltonian at `(u, p_u, p_phi)`.
    pub fn canonical_energy(&self, u: f64, p_u: f64, p_phi: f64) -> f64 {
        let kinetic = sq(p_phi - self.a_phi(u));
        let v = self.potential(u);
        let shift = self.constant_shift(p_phi);
        match *self {
            GaugeSplit::Free {
                surface: SurfaceSpec::Paraboloid { p },
            }
            | GaugeSplit::Paraboloid { p, .. }
            | GaugeSplit::ParaboloidReduced { p, .. } => {
                let d = p + 2.0 * u;
                (4.0 * u * sq(p_u) + d / (p * u) * kinetic + v) / d + shift
            }
            GaugeSplit::Free {
                surface: SurfaceSpec::Ellipsoid { a, e } | SurfaceSpec::Hyperboloid { a, e },
            }
            | GaugeSplit::Ellipsoid { a, e, .. }
            | GaugeSplit::EllipsoidReduced { a, e, .. }
            | GaugeSplit::Hyperboloid { a, e, .. }
            | GaugeSplit::HyperboloidReduced { a, e, .. } => {
                let e2 = e * e;
                let c = 1.0 - e2 * u * u;
                let s = one_minus_sq(u);
                e2 / (2.0 * a * a * c) * (s * sq(p_u) + c / ((1.0 - e2) * s) * kinetic + v) + shift
            }
        }
    }
}

/// `e g_d (1 - u^2) + g_s (1 - e^2) u`: the numerator of the vector
/// potential with `g_d` the charge combination in the printed denominator.
fn elliptic_vector_potential(e: f64, g_d: f64, g_s: f64, u: f64) -> f64 {
    e * g_d * one_minus_sq(u) + g_s * (1.0 - e * e) * u
}

/// `g_d^2 ((1-e^2)(1-e^2 u^2) - e^2 (1 + 2 G u - u^2)^2) / ((1-e^2)(1-u^2)(1-e^2 u^2))`
/// with `G = g_s (1 - e^2) / (2 e g_d)`, free of the division by `g_d`.
fn elliptic_field_potential(e: f64, g_d: f64, g_s: f64, u: f64) -> f64 {
    let e2 = e * e;
    let c = 1.0 - e2 * u * u;
    (sq(g_d) * (1.0 - e2) * c - sq(elliptic_vector_potential(e, g_d, g_s, u)))
        / ((1.0 - e2) * one_minus_sq(u) * c)
}

/// [`printed_paraboloid_potential`] with `B (2g/B + 2 G xi - xi^2)` expanded.
fn paraboloid_potential(p: f64, b: &ParabolicBackground, xi: f64) -> f64 {
    let (q, g, ef, bf) = (b.q, b.g, b.electric_field, b.magnetic_field);
    let scaled = 2.0 * g + 4.0 * g * xi / p - p * bf * xi / 2.0 - bf * xi * xi;
    sq(g) / xi + 3.0 * g * bf * xi - ef * xi * xi + sq(bf) * xi.powi(3) / 4.0
        - p / 4.0 * sq(scaled) / (xi * (p + 2.0 * xi))
        + 4.0 * q
        + 2.0 * sq(g) / p
        + p / 32.0 * (bf * (p * p * bf - 48.0 * g) + 8.0 * p * ef)
}

/// `4 g^2 (1 + e^2 ((1 + e^2 - u^2) u^2 - 2)) / ((1-e^2)(1-u^2)(1-e^2 u^2))`.
fn reduced_elliptic_potential(e: f64, g: f64, u: f64) -> f64 {
    let e2 = e * e;
    let u2 = u * u;
    4.0 * sq(g) * (1.0 + e2 * ((1.0 + e2 - u2) * u2 - 2.0))
        / ((1.0 - e2) * one_minus_sq(u) * (1.0 - e2 * u2))
}

/// The paraboloid scalar potential exactly as printed alongside its vector
/// potential. Kept for auditing; [`GaugeSplit::potential`] carries the
/// terms needed to reproduce the Hamiltonian.
pub(crate) fn printed_paraboloid_potential(p: f64, b: &ParabolicBackground, xi: f64) -> f64 {
    let (q, g, ef, bf) = (b.q, b.g, b.electric_field, b.magnetic_field);
    let g_par = 2.0 * g / (p * bf) - p / 4.0;
    sq(g) / xi + 3.0 * g * bf * xi - ef * xi * xi + sq(bf) * xi.powi(3) / 4.0
        - p * sq(bf) / 4.0 * sq(2.0 * g / bf + 2.0 * g_par * xi - xi * xi) / (xi * (p + 2.0 * xi))
        + 4.0 * q
        + 2.0 * sq(g) / p
        + p / 32.0 * (bf * (p * p * bf - 48.0 * g) + 8.0 * p * ef)
}
