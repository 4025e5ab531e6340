//! Coordinate charts for the ambient space and the quadrics of revolution.
//!
//! Elliptic (prolate spheroidal) coordinates `(xi, eta, phi)` are built on two
//! foci at `(0, 0, -a)` and `(0, 0, a)`; parabolic coordinates `(xi, eta, phi)`
//! are their one-focus limit. Both share the azimuth `phi` with the
//! cylindrical chart `(rho, z, phi)`, and the transforms never modify it.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Wraps an angle into `[0, 2π)`.
pub fn normalize_angle(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylPoint {
    pub rho: f64,
    pub z: f64,
    pub phi: f64,
}

impl CylPoint {
    pub fn new(rho: f64, z: f64, phi: f64) -> Result<Self> {
        if !(rho >= 0.0) || !z.is_finite() || !rho.is_finite() || !phi.is_finite() {
            return Err(Error::DomainError(format!(
                "cylindrical point needs finite rho >= 0, got rho = {rho}, z = {z}, phi = {phi}"
            )));
        }
        Ok(CylPoint {
            rho,
            z,
            phi: normalize_angle(phi),
        })
    }

    pub fn to_cartesian(&self) -> [f64; 3] {
        [self.rho * self.phi.cos(), self.rho * self.phi.sin(), self.z]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticPoint {
    pub xi: f64,
    pub eta: f64,
    pub phi: f64,
    /// Half the distance between the foci.
    pub a: f64,
}

impl EllipticPoint {
    pub fn new(xi: f64, eta: f64, phi: f64, a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::DomainError(format!(
                "focal half-separation must be positive, got {a}"
            )));
        }
        if !(xi >= 1.0) || !xi.is_finite() {
            return Err(Error::DomainError(format!(
                "elliptic xi must be >= 1, got {xi}"
            )));
        }
        if !(eta.abs() <= 1.0) {
            return Err(Error::DomainError(format!(
                "elliptic eta must lie in [-1, 1], got {eta}"
            )));
        }
        if !phi.is_finite() {
            return Err(Error::DomainError("phi must be finite".into()));
        }
        Ok(EllipticPoint {
            xi,
            eta,
            phi: normalize_angle(phi),
            a,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParabolicPoint {
    pub xi: f64,
    pub eta: f64,
    pub phi: f64,
}

impl ParabolicPoint {
    pub fn new(xi: f64, eta: f64, phi: f64) -> Result<Self> {
        if !(xi >= 0.0) || !(eta >= 0.0) || !xi.is_finite() || !eta.is_finite() {
            return Err(Error::DomainError(format!(
                "parabolic coordinates must be finite and >= 0, got xi = {xi}, eta = {eta}"
            )));
        }
        if !phi.is_finite() {
            return Err(Error::DomainError("phi must be finite".into()));
        }
        Ok(ParabolicPoint {
            xi,
            eta,
            phi: normalize_angle(phi),
        })
    }
}

/// `rho = a sqrt((xi^2 - 1)(1 - eta^2))`, `z = a xi eta`.
pub fn elliptic_to_cylindrical(p: &EllipticPoint) -> CylPoint {
    // factored so that xi -> 1 and |eta| -> 1 keep full relative precision
    let radicand = (p.xi - 1.0) * (p.xi + 1.0) * (1.0 - p.eta) * (1.0 + p.eta);
    CylPoint {
        rho: p.a * radicand.max(0.0).sqrt(),
        z: p.a * p.xi * p.eta,
        phi: p.phi,
    }
}

/// Distances from `p` to the foci `(0, 0, -a)` and `(0, 0, a)`.
pub fn focal_distances(p: &CylPoint, a: f64) -> (f64, f64) {
    let r1 = p.rho.hypot(p.z + a);
    let r2 = p.rho.hypot(p.z - a);
    (r1, r2)
}

/// Inverse of [`elliptic_to_cylindrical`] via the focal distances,
/// `xi = (r1 + r2) / 2a`, `eta = (r1 - r2) / 2a`.
pub fn cylindrical_to_elliptic(p: &CylPoint, a: f64) -> Result<EllipticPoint> {
    if !(a > 0.0) {
        return Err(Error::DomainError(format!(
            "focal half-separation must be positive, got {a}"
        )));
    }
    let (r1, r2) = focal_distances(p, a);
    let sum = r1 + r2;
    // r1 + r2 - 2a without cancellation: each distance exceeds its axial
    // offset by rho^2 / (r + |offset|).
    let (d1, d2) = ((p.z + a).abs(), (p.z - a).abs());
    let rho2 = p.rho * p.rho;
    let excess = (d1 + d2 - 2.0 * a) + rho2 / (r1 + d1) + rho2 / (r2 + d2);
    let xi = 1.0 + (excess / (2.0 * a)).max(0.0);
    // r1 - r2 = (r1^2 - r2^2) / (r1 + r2) = 4 a z / (r1 + r2)
    let eta = if sum > 0.0 {
        (2.0 * p.z / sum).clamp(-1.0, 1.0)
    } else {
        0.0
    };
    Ok(EllipticPoint {
        xi,
        eta,
        phi: p.phi,
        a,
    })
}

/// `rho = sqrt(xi eta)`, `z = (xi - eta) / 2`.
pub fn parabolic_to_cylindrical(p: &ParabolicPoint) -> CylPoint {
    CylPoint {
        rho: (p.xi * p.eta).sqrt(),
        z: 0.5 * (p.xi - p.eta),
        phi: p.phi,
    }
}

/// Solves `xi eta = rho^2`, `xi - eta = 2 z` with `xi, eta >= 0`.
pub fn cylindrical_to_parabolic(p: &CylPoint) -> ParabolicPoint {
    let r = p.rho.hypot(p.z);
    let rho2 = p.rho * p.rho;
    let (xi, eta) = if p.z >= 0.0 {
        let xi = r + p.z;
        let eta = if xi > 0.0 { rho2 / xi } else { 0.0 };
        (xi, eta)
    } else {
        let eta = r - p.z;
        (rho2 / eta, eta)
    };
    ParabolicPoint {
        xi,
        eta,
        phi: p.phi,
    }
}
