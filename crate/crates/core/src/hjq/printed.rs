//! Closed-form radial integrands and constants exactly as printed. They are
//! audited against the energy equation, never used as ground truth.

use crate::model::{gamma_el, gamma_hyp, gamma_par, DyonPair, ParabolicBackground};

fn sq(v: f64) -> f64 {
    v * v
}

/// Radicand of the free ellipsoid (and, with `u = xi`, free hyperboloid)
/// generating function.
pub fn free_elliptic_radicand(a: f64, e: f64, energy: f64, p_phi: f64, u: f64) -> f64 {
    let e2 = e * e;
    let c = 1.0 - e2 * u * u;
    2.0 * a * a * (1.0 - e2) * c * (1.0 - u * u) * energy - e2 * c * sq(p_phi)
}

/// General ellipsoid radicand `F(eta)`.
pub fn ellipsoid_f(a: f64, e: f64, d: &DyonPair, energy: f64, p_phi: f64, eta: f64) -> f64 {
    let e2 = e * e;
    let (s, c) = (1.0 - eta * eta, 1.0 - e2 * eta * eta);
    let gamma = gamma_el(a, e, d, p_phi);
    2.0 * a * a * (1.0 - e2) * c * s * energy - e2 * c * sq(p_phi) - gamma * (1.0 - e2) * s
        + 2.0 * (1.0 - e2) * (p_phi * d.g_plus() - a * d.q_minus()) * eta
        + 2.0 * a * d.q_minus() * (1.0 - e2) * eta.powi(3)
        - sq(d.g_minus()) * (1.0 - e2)
}

/// General hyperboloid radicand `F(xi)`.
pub fn hyperboloid_f(a: f64, e: f64, d: &DyonPair, energy: f64, p_phi: f64, xi: f64) -> f64 {
    let e2 = e * e;
    let (s, c) = (1.0 - xi * xi, 1.0 - e2 * xi * xi);
    let gamma = gamma_hyp(a, e, d, p_phi);
    2.0 * a * a * (1.0 - e2) * c * s * energy - e2 * c * sq(p_phi) - gamma * (1.0 - e2) * s
        + 2.0 * (1.0 - e2) * (-p_phi * d.g_minus() - a * d.q_plus()) * xi
        + 2.0 * a * d.q_minus() * (1.0 - e2) * xi.powi(3)
        + sq(d.g_plus()) * (1.0 - e2)
}

/// Radicand printed for the reducible configurations; the same expression
/// appears for the ellipsoid (`u = eta`) and the hyperboloid (`u = xi`).
pub fn reduced_f(a: f64, e: f64, q: f64, g: f64, energy: f64, p_phi: f64, u: f64) -> f64 {
    let e2 = e * e;
    let (s, c) = (1.0 - u * u, 1.0 - e2 * u * u);
    2.0 * a * a * e * (1.0 - e2) * c * s * energy - e.powi(3) * c * sq(p_phi)
        + 4.0 * (p_phi * e2 * g - a * q * (1.0 - e2)) * s
        - 4.0 * sq(g) * e * (1.0 - e2)
}

/// Free paraboloid radicand `(p E xi - p_phi^2)(p + 2 xi)`.
pub fn free_paraboloid_radicand(p: f64, energy: f64, p_phi: f64, xi: f64) -> f64 {
    (p * energy * xi - sq(p_phi)) * (p + 2.0 * xi)
}

/// Quartic radicand of the paraboloid Landau problem.
pub fn paraboloid_radicand(
    p: f64,
    b: &ParabolicBackground,
    energy: f64,
    p_phi: f64,
    xi: f64,
) -> f64 {
    let (g, ef, bf) = (b.g, b.electric_field, b.magnetic_field);
    let gamma = gamma_par(p, b, p_phi);
    -sq(bf) * xi.powi(4)
        + 4.0 * ef * xi.powi(3)
        + 8.0 * (-g * bf + energy + 0.5 * p_phi * bf) * xi * xi
        + 4.0 * (-gamma + p * energy + 0.5 * p * p_phi * bf) * xi
        - 4.0 * sq(p_phi + g)
}

/// `(b1, b2)` of the free ellipsoid and hyperboloid.
pub fn b_free_elliptic(a: f64, e: f64, energy: f64, p_phi: f64) -> (f64, f64) {
    let e2 = e * e;
    let b1 = (2.0 * a * a * energy * sq(1.0 - e2) - sq(p_phi) * e2 * e2)
        / (2.0 * a * a * e2 * energy * (1.0 - e2));
    let b2 = -sq(p_phi) / (2.0 * a * a * energy);
    (b1, b2)
}

/// `(b1, b2)` printed for the reducible ellipsoid and hyperboloid.
pub fn b_reduced_elliptic(a: f64, e: f64, q: f64, g: f64, energy: f64, p_phi: f64) -> (f64, f64) {
    let e2 = e * e;
    let b1 = (2.0 * energy * a * a * e * sq(1.0 - e2)
        - 4.0 * a * q * (1.0 - e2)
        - e.powi(5) * sq(p_phi)
        + 4.0 * p_phi * g * e2)
        / (2.0 * energy * a * a * (1.0 - e2) * e.powi(3));
    let b2 = -(e2 * sq(p_phi) + 4.0 * sq(g)) / (2.0 * energy * a * a * e2);
    (b1, b2)
}

pub fn b_free_paraboloid(p: f64, energy: f64, p_phi: f64) -> (f64, f64) {
    (
        p / 2.0 - sq(p_phi) / (p * energy),
        -sq(p_phi) / (2.0 * energy),
    )
}

pub fn b_reduced_paraboloid(p: f64, q: f64, g: f64, energy: f64, p_phi: f64) -> (f64, f64) {
    (
        p / 2.0 - (2.0 * q * p + sq(p_phi - g)) / (energy * p),
        -sq(p_phi + g) / (2.0 * energy),
    )
}

/// `a_± = (2 + b1 ± sqrt(b1^2 - 4 b2)) / 2`, or `None` for complex roots.
pub fn a_pm(b1: f64, b2: f64) -> Option<(f64, f64)> {
    let disc = b1 * b1 - 4.0 * b2;
    if disc < 0.0 {
        return None;
    }
    let r = disc.sqrt();
    Some(((2.0 + b1 - r) / 2.0, (2.0 + b1 + r) / 2.0))
}
