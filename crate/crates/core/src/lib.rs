//! Classical charged-particle dynamics on the ellipsoid, hyperboloid and
//! paraboloid of revolution in dyonic background fields.
//!
//! The Hamiltonians are evaluated in elliptic and parabolic coordinates
//! ([`geometry`], [`model`]), integrated in time ([`dynamics`]) and solved
//! by Hamilton-Jacobi quadrature ([`hjq`]). Closed-form radial integrands,
//! turning points and action variables ([`action`], [`special`]) are
//! checked against the energy equation rather than trusted.

pub mod action;
mod dop853;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod hjq;
pub mod model;
pub mod quad;
pub mod special;
pub mod tolerance;

pub use error::{Error, Result};
pub use model::{
    classify_reducible, energy, gauge_split, gradients, make_model, radial_momentum_squared,
    restrict_3d, Background, Dimensionality, DyonPair, GaugeSplit, Gradients, ParabolicBackground,
    PhasePoint, ReducibilityReport, Restriction, SurfaceModel, SurfaceSpec,
};
