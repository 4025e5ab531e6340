//! Reducibility classification and restriction of ambient models to the
//! coordinate surfaces.

use serde::{Deserialize, Serialize};

use super::{make_model, Background, Dimensionality, SurfaceModel, SurfaceSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducibilityReport {
    pub reducible: bool,
    pub matched_condition: String,
    /// `(q, g)` of the free-like reduced problem.
    pub effective_charges: Option<(f64, f64)>,
}

/// Decides whether the charge configuration is one for which the radial
/// integral keeps the free-particle form. Conditions are tested exactly.
pub fn classify_reducible(m: &SurfaceModel) -> ReducibilityReport {
    let report = |reducible: bool, cond: &str, charges: Option<(f64, f64)>| ReducibilityReport {
        reducible,
        matched_condition: cond.to_string(),
        effective_charges: if reducible { charges } else { None },
    };
    match (m.surface(), m.background()) {
        (_, Background::Free) => report(true, "no background field", Some((0.0, 0.0))),
        (SurfaceSpec::Ellipsoid { .. }, Background::Dyons(d)) => {
            let ok = d.q_minus() == 0.0 && d.g_plus() == 0.0;
            let cond = if ok {
                "q1 - q2 = 0 and g1 + g2 = 0"
            } else {
                "requires q1 - q2 = 0 and g1 + g2 = 0"
            };
            report(ok, cond, Some((d.q1, d.g1)))
        }
        (SurfaceSpec::Hyperboloid { .. }, Background::Dyons(d)) => {
            let ok = d.q_plus() == 0.0 && d.g_minus() == 0.0;
            let cond = if ok {
                "q1 + q2 = 0 and g1 - g2 = 0"
            } else {
                "requires q1 + q2 = 0 and g1 - g2 = 0"
            };
            report(ok, cond, Some((d.q1, d.g1)))
        }
        (SurfaceSpec::Paraboloid { .. }, Background::Uniform(b)) => {
            let ok = b.electric_field == 0.0 && b.magnetic_field == 0.0;
            let cond = if ok {
                "electric_field = 0 and magnetic_field = 0"
            } else {
                "requires electric_field = 0 and magnetic_field = 0"
            };
            report(ok, cond, Some((b.q, b.g)))
        }
        _ => report(false, "unsupported pairing", None),
    }
}

/// Which coordinate is frozen by [`restrict_3d`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "coordinate", content = "value", rename_all = "snake_case")]
pub enum Restriction {
    Xi(f64),
    Eta(f64),
}

/// Freezes one coordinate of an ambient model (with vanishing conjugate
/// momentum), giving the Landau problem on the corresponding surface:
/// `xi = 1/e` is an ellipsoid, `eta = 1/e` a hyperboloid sheet and, in the
/// parabolic chart, `eta = p/2` a paraboloid.
pub fn restrict_3d(m3: &SurfaceModel, fixed: Restriction) -> Result<SurfaceModel> {
    if m3.dim() != Dimensionality::Ambient3D {
        return Err(Error::InvalidRestriction(
            "restriction needs an ambient 3D model".into(),
        ));
    }
    let surface = match (m3.surface(), fixed) {
        (
            SurfaceSpec::Ellipsoid { a, .. } | SurfaceSpec::Hyperboloid { a, .. },
            Restriction::Xi(xi),
        ) => {
            if !(xi > 1.0 && xi.is_finite()) {
                return Err(Error::InvalidRestriction(format!(
                    "elliptic xi must exceed 1, got {xi}"
                )));
            }
            SurfaceSpec::Ellipsoid { a, e: 1.0 / xi }
        }
        (
            SurfaceSpec::Ellipsoid { a, .. } | SurfaceSpec::Hyperboloid { a, .. },
            Restriction::Eta(eta),
        ) => {
            if !(eta > 0.0 && eta < 1.0) {
                return Err(Error::InvalidRestriction(format!(
                    "elliptic eta must lie in (0, 1) for a hyperboloid sheet, got {eta}"
                )));
            }
            SurfaceSpec::Hyperboloid { a, e: 1.0 / eta }
        }
        (SurfaceSpec::Paraboloid { .. }, Restriction::Eta(eta)) => {
            if !(eta > 0.0 && eta.is_finite()) {
                return Err(Error::InvalidRestriction(format!(
                    "parabolic eta must be positive, got {eta}"
                )));
            }
            SurfaceSpec::Paraboloid { p: 2.0 * eta }
        }
        (SurfaceSpec::Paraboloid { .. }, Restriction::Xi(_)) => {
            return Err(Error::InvalidRestriction(
                "the parabolic chart is restricted at fixed eta = p/2".into(),
            ))
        }
    };
    make_model(surface, m3.background(), Dimensionality::Surface2D)
}
