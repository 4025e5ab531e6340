//! Hamiltonians in elliptic coordinates: the two-center dyon system and its
//! restrictions to the ellipsoid (`xi = 1/e`) and hyperboloid (`eta = 1/e`).

use super::{DyonPair, ShapeGradient};

fn sq(v: f64) -> f64 {
    v * v
}

/// `1 - u^2` evaluated as `(1 - u)(1 + u)`.
fn one_minus_sq(u: f64) -> f64 {
    (1.0 - u) * (1.0 + u)
}

pub(crate) fn ellipsoid_free(a: f64, e: f64, eta: f64, p_eta: f64, p_phi: f64) -> f64 {
    let e2 = e * e;
    let s = one_minus_sq(eta);
    let c = 1.0 - e2 * eta * eta;
    e2 / (2.0 * a * a * c) * (s * sq(p_eta) + c / ((1.0 - e2) * s) * sq(p_phi))
}

pub(crate) fn gamma_el(a: f64, e: f64, d: &DyonPair, p_phi: f64) -> f64 {
    let e2 = e * e;
    (e2 * sq(d.g_plus()) - 2.0 * e * p_phi * d.g_minus()) / (1.0 - e2) + 2.0 * a * d.q_plus() / e
}

pub(crate) fn ellipsoid_landau(
    a: f64,
    e: f64,
    d: &DyonPair,
    gamma: f64,
    eta: f64,
    p_eta: f64,
    p_phi: f64,
) -> f64 {
    let e2 = e * e;
    let s = one_minus_sq(eta);
    let c = 1.0 - e2 * eta * eta;
    e2 / (2.0 * a * a * c)
        * (s * sq(p_eta)
            + c / ((1.0 - e2) * s) * sq(p_phi)
            + (sq(d.g_minus()) - 2.0 * p_phi * d.g_plus() * eta) / s
            + 2.0 * a * d.q_minus() * eta
            + gamma)
}

pub(crate) fn hyperboloid_free(a: f64, e: f64, xi: f64, p_xi: f64, p_phi: f64) -> f64 {
    let e2 = e * e;
    let s = one_minus_sq(xi);
    let c = 1.0 - e2 * xi * xi;
    e2 / (2.0 * a * a * c) * (s * sq(p_xi) + c / ((1.0 - e2) * s) * sq(p_phi))
}

pub(crate) fn gamma_hyp(a: f64, e: f64, d: &DyonPair, p_phi: f64) -> f64 {
    let e2 = e * e;
    (e2 * sq(d.g_minus()) - 2.0 * e * p_phi * d.g_plus()) / (1.0 - e2) - 2.0 * a * d.q_minus() / e
}

pub(crate) fn hyperboloid_landau(
    a: f64,
    e: f64,
    d: &DyonPair,
    gamma: f64,
    xi: f64,
    p_xi: f64,
    p_phi: f64,
) -> f64 {
    let e2 = e * e;
    let s = one_minus_sq(xi);
    let c = 1.0 - e2 * xi * xi;
    e2 / (2.0 * a * a * c)
        * (s * sq(p_xi)
            + c / (s * (1.0 - e2)) * sq(p_phi)
            + (sq(d.g_plus()) - 2.0 * p_phi * d.g_minus() * xi) / s
            - 2.0 * a * d.q_plus() * xi
            + gamma)
}

/// Shared structure of the ellipsoid and hyperboloid Hamiltonians:
///
/// `H = f(u) [ (1-u^2) p_u^2 + K(u) p_phi^2 + (G^2 - 2 p_phi G' u)/(1-u^2) + Q u + gamma ]`
///
/// with `f = e^2 / (2 a^2 (1 - e^2 u^2))` and `K = (1 - e^2 u^2)/((1-e^2)(1-u^2))`.
/// The two surfaces differ only in which charge combinations play
/// `G`, `G'` and `Q`.
#[derive(Debug, Clone)]
pub(crate) struct SurfaceKernel {
    a: f64,
    e: f64,
    dyons: Option<DyonPair>,
    big_g: f64,
    g_lin: f64,
    q_lin: f64,
    gamma: f64,
    d_gamma: f64,
    p_phi: f64,
}

impl SurfaceKernel {
    pub(crate) fn ellipsoid(a: f64, e: f64, dyons: Option<DyonPair>, p_phi: f64) -> Self {
        let d = dyons.unwrap_or_else(DyonPair::zero);
        SurfaceKernel {
            a,
            e,
            dyons,
            big_g: d.g_minus(),
            g_lin: d.g_plus(),
            q_lin: 2.0 * a * d.q_minus(),
            gamma: gamma_el(a, e, &d, p_phi),
            d_gamma: -2.0 * e * d.g_minus() / (1.0 - e * e),
            p_phi,
        }
    }

    pub(crate) fn hyperboloid(a: f64, e: f64, dyons: Option<DyonPair>, p_phi: f64) -> Self {
        let d = dyons.unwrap_or_else(DyonPair::zero);
        SurfaceKernel {
            a,
            e,
            dyons,
            big_g: d.g_plus(),
            g_lin: d.g_minus(),
            q_lin: -2.0 * a * d.q_plus(),
            gamma: gamma_hyp(a, e, &d, p_phi),
            d_gamma: -2.0 * e * d.g_plus() / (1.0 - e * e),
            p_phi,
        }
    }

    pub(crate) fn energy_ellipsoid(&self, eta: f64, p_eta: f64) -> f64 {
        match &self.dyons {
            None => ellipsoid_free(self.a, self.e, eta, p_eta, self.p_phi),
            Some(d) => ellipsoid_landau(self.a, self.e, d, self.gamma, eta, p_eta, self.p_phi),
        }
    }

    pub(crate) fn energy_hyperboloid(&self, xi: f64, p_xi: f64) -> f64 {
        match &self.dyons {
            None => hyperboloid_free(self.a, self.e, xi, p_xi, self.p_phi),
            Some(d) => hyperboloid_landau(self.a, self.e, d, self.gamma, xi, p_xi, self.p_phi),
        }
    }

    fn f(&self, u: f64) -> f64 {
        sq(self.e) / (2.0 * sq(self.a) * (1.0 - sq(self.e * u)))
    }

    fn df(&self, u: f64) -> f64 {
        self.f(u) * 2.0 * sq(self.e) * u / (1.0 - sq(self.e * u))
    }

    fn k(&self, u: f64) -> f64 {
        (1.0 - sq(self.e * u)) / ((1.0 - sq(self.e)) * one_minus_sq(u))
    }

    fn bracket(&self, u: f64) -> f64 {
        let s = one_minus_sq(u);
        self.k(u) * sq(self.p_phi)
            + (sq(self.big_g) - 2.0 * self.p_phi * self.g_lin * u) / s
            + self.q_lin * u
            + self.gamma
    }

    fn d_bracket(&self, u: f64) -> f64 {
        let s = one_minus_sq(u);
        let dk = 2.0 * u / sq(s);
        dk * sq(self.p_phi)
            + (2.0 * u * sq(self.big_g) - 2.0 * self.p_phi * self.g_lin * (1.0 + u * u)) / sq(s)
            + self.q_lin
    }

    pub(crate) fn alpha(&self, u: f64) -> f64 {
        self.f(u) * one_minus_sq(u)
    }

    pub(crate) fn d_alpha(&self, u: f64) -> f64 {
        self.df(u) * one_minus_sq(u) - 2.0 * u * self.f(u)
    }

    pub(crate) fn potential(&self, u: f64) -> f64 {
        self.f(u) * self.bracket(u)
    }

    pub(crate) fn d_potential(&self, u: f64) -> f64 {
        self.df(u) * self.bracket(u) + self.f(u) * self.d_bracket(u)
    }

    pub(crate) fn d_potential_d_p_phi(&self, u: f64) -> f64 {
        let s = one_minus_sq(u);
        self.f(u) * (2.0 * self.k(u) * self.p_phi - 2.0 * self.g_lin * u / s + self.d_gamma)
    }
}

/// Two dyons at the foci of the elliptic chart, with the separability-
/// preserving centrifugal term.
#[derive(Debug, Clone)]
pub(crate) struct TwoCenter {
    a: f64,
    d: DyonPair,
    p_phi: f64,
}

impl TwoCenter {
    pub(crate) fn new(a: f64, d: DyonPair, p_phi: f64) -> Self {
        TwoCenter { a, d, p_phi }
    }

    fn v(&self, xi: f64) -> f64 {
        let d = &self.d;
        (sq(d.g_plus()) - 2.0 * self.p_phi * d.g_minus() * xi) / (xi * xi - 1.0)
            + 2.0 * self.a * d.q_plus() * xi
    }

    fn w(&self, eta: f64) -> f64 {
        let d = &self.d;
        (sq(d.g_minus()) - 2.0 * self.p_phi * d.g_plus() * eta) / one_minus_sq(eta)
            + 2.0 * self.a * d.q_minus() * eta
    }

    fn dv(&self, xi: f64) -> f64 {
        let d = &self.d;
        let s = xi * xi - 1.0;
        (2.0 * self.p_phi * d.g_minus() * (xi * xi + 1.0) - 2.0 * xi * sq(d.g_plus())) / sq(s)
            + 2.0 * self.a * d.q_plus()
    }

    fn dw(&self, eta: f64) -> f64 {
        let d = &self.d;
        let s = one_minus_sq(eta);
        (2.0 * eta * sq(d.g_minus()) - 2.0 * self.p_phi * d.g_plus() * (1.0 + eta * eta)) / sq(s)
            + 2.0 * self.a * d.q_minus()
    }

    fn numerator(&self, xi: f64, p_xi: f64, eta: f64, p_eta: f64) -> f64 {
        let (sx, se) = (xi * xi - 1.0, one_minus_sq(eta));
        sx * sq(p_xi)
            + se * sq(p_eta)
            + (xi * xi - eta * eta) / (sx * se) * sq(self.p_phi)
            + self.v(xi)
            + self.w(eta)
    }

    pub(crate) fn energy(&self, xi: f64, p_xi: f64, eta: f64, p_eta: f64) -> f64 {
        self.numerator(xi, p_xi, eta, p_eta) / (2.0 * sq(self.a) * (xi * xi - eta * eta))
    }

    pub(crate) fn gradients(
        &self,
        xi: f64,
        p_xi: f64,
        eta: f64,
        p_eta: f64,
    ) -> (ShapeGradient, f64) {
        let a2 = sq(self.a);
        let (sx, se) = (xi * xi - 1.0, one_minus_sq(eta));
        let den = 2.0 * a2 * (xi * xi - eta * eta);
        let n = self.numerator(xi, p_xi, eta, p_eta);
        // (xi^2 - eta^2)/((xi^2-1)(1-eta^2)) = 1/(1-eta^2) + 1/(xi^2-1)
        let dc_dxi = -2.0 * xi / sq(sx);
        let dc_deta = 2.0 * eta / sq(se);
        let n_xi = 2.0 * xi * sq(p_xi) + dc_dxi * sq(self.p_phi) + self.dv(xi);
        let n_eta = -2.0 * eta * sq(p_eta) + dc_deta * sq(self.p_phi) + self.dw(eta);
        let d_xi = n_xi / den - n * 4.0 * a2 * xi / sq(den);
        let d_eta = n_eta / den + n * 4.0 * a2 * eta / sq(den);
        let d = &self.d;
        let d_p_phi = (2.0 * self.p_phi * (1.0 / se + 1.0 / sx)
            - 2.0 * d.g_minus() * xi / sx
            - 2.0 * d.g_plus() * eta / se)
            / den;
        (
            ShapeGradient::Ambient {
                d_xi,
                d_p_xi: 2.0 * sx * p_xi / den,
                d_eta,
                d_p_eta: 2.0 * se * p_eta / den,
            },
            d_p_phi,
        )
    }
}
