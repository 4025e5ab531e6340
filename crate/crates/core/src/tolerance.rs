//! Numerical tolerances shared across the crate.

/// Accuracy expected of chart transforms and their roundtrips.
pub const CHART_ROUNDTRIP: f64 = 1e-12;

/// Width of the band kept away from coordinate singularities
/// (`|eta| = 1`, `xi = 1`, `xi = 0`).
pub const GUARD_BAND: f64 = 1e-10;

/// Agreement between successive refinements at which the turning-point
/// quadratures stop.
pub const QUADRATURE: f64 = 1e-11;

/// Largest last change accepted from a turning-point quadrature whose
/// refinements settle on a rounding floor instead of meeting
/// [`QUADRATURE`].
pub const QUADRATURE_FLOOR: f64 = 1e-10;

/// Relative accuracy targeted by the Appell integral.
pub const APPELL: f64 = 1e-12;

/// Tail bound of the Appell double series.
pub const SERIES_TAIL: f64 = 1e-15;

/// Threshold below which an audited discrepancy counts as agreement.
pub const AUDIT_AGREEMENT: f64 = 1e-10;
