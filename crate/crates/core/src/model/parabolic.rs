//! Hamiltonians in parabolic coordinates: a focus dyon in parallel uniform
//! electric and magnetic fields, and its restriction to the paraboloid
//! `eta = p/2`.

use super::{ParabolicBackground, ShapeGradient};

fn sq(v: f64) -> f64 {
    v * v
}

pub(crate) fn paraboloid_free(p: f64, xi: f64, p_xi: f64, p_phi: f64) -> f64 {
    let d = p + 2.0 * xi;
    (4.0 * xi * sq(p_xi) + d / (p * xi) * sq(p_phi)) / d
}

pub(crate) fn gamma_par(p: f64, b: &ParabolicBackground, p_phi: f64) -> f64 {
    let (q, g, ef, bf) = (b.q, b.g, b.electric_field, b.magnetic_field);
    4.0 * q + 2.0 * sq(p_phi - g) / p + p / 32.0 * (bf * (p * p * bf - 48.0 * g) + 8.0 * p * ef)
}

pub(crate) fn paraboloid_landau(
    p: f64,
    b: &ParabolicBackground,
    gamma: f64,
    xi: f64,
    p_xi: f64,
    p_phi: f64,
) -> f64 {
    let (g, ef, bf) = (b.g, b.electric_field, b.magnetic_field);
    (4.0 * xi * sq(p_xi) + sq(p_phi + g) / xi + 3.0 * g * bf * xi - ef * xi * xi
        + sq(bf) * xi.powi(3) / 4.0
        + gamma)
        / (p + 2.0 * xi)
        - bf * p_phi / 2.0
}

#[derive(Debug, Clone)]
pub(crate) struct ParaboloidKernel {
    p: f64,
    background: Option<ParabolicBackground>,
    bg: ParabolicBackground,
    gamma: f64,
    p_phi: f64,
}

impl ParaboloidKernel {
    pub(crate) fn new(p: f64, background: Option<ParabolicBackground>, p_phi: f64) -> Self {
        let bg = background.unwrap_or(ParabolicBackground::new(0.0, 0.0, 0.0, 0.0));
        ParaboloidKernel {
            p,
            background,
            bg,
            gamma: gamma_par(p, &bg, p_phi),
            p_phi,
        }
    }

    pub(crate) fn energy(&self, xi: f64, p_xi: f64) -> f64 {
        match &self.background {
            None => paraboloid_free(self.p, xi, p_xi, self.p_phi),
            Some(b) => paraboloid_landau(self.p, b, self.gamma, xi, p_xi, self.p_phi),
        }
    }

    fn numerator(&self, xi: f64) -> f64 {
        let b = &self.bg;
        sq(self.p_phi + b.g) / xi + 3.0 * b.g * b.magnetic_field * xi - b.electric_field * xi * xi
            + sq(b.magnetic_field) * xi.powi(3) / 4.0
            + self.gamma
    }

    fn d_numerator(&self, xi: f64) -> f64 {
        let b = &self.bg;
        -sq(self.p_phi + b.g) / (xi * xi) + 3.0 * b.g * b.magnetic_field
            - 2.0 * b.electric_field * xi
            + 0.75 * sq(b.magnetic_field) * xi * xi
    }

    pub(crate) fn alpha(&self, xi: f64) -> f64 {
        4.0 * xi / (self.p + 2.0 * xi)
    }

    pub(crate) fn d_alpha(&self, xi: f64) -> f64 {
        4.0 * self.p / sq(self.p + 2.0 * xi)
    }

    pub(crate) fn potential(&self, xi: f64) -> f64 {
        self.numerator(xi) / (self.p + 2.0 * xi) - self.bg.magnetic_field * self.p_phi / 2.0
    }

    pub(crate) fn d_potential(&self, xi: f64) -> f64 {
        let d = self.p + 2.0 * xi;
        self.d_numerator(xi) / d - 2.0 * self.numerator(xi) / sq(d)
    }

    pub(crate) fn d_potential_d_p_phi(&self, xi: f64) -> f64 {
        let b = &self.bg;
        (2.0 * (self.p_phi + b.g) / xi + 4.0 * (self.p_phi - b.g) / self.p) / (self.p + 2.0 * xi)
            - b.magnetic_field / 2.0
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Parabolic3D {
    bg: ParabolicBackground,
    p_phi: f64,
}

impl Parabolic3D {
    pub(crate) fn new(bg: ParabolicBackground, p_phi: f64) -> Self {
        Parabolic3D { bg, p_phi }
    }

    fn v(&self, xi: f64) -> f64 {
        let b = &self.bg;
        sq(self.p_phi + b.g) / xi + 3.0 * b.g * b.magnetic_field * xi - b.electric_field * xi * xi
            + sq(b.magnetic_field) / 4.0 * xi.powi(3)
            + 2.0 * b.q
    }

    fn w(&self, eta: f64) -> f64 {
        let b = &self.bg;
        sq(self.p_phi - b.g) / eta - 3.0 * b.g * b.magnetic_field * eta
            + b.electric_field * eta * eta
            + sq(b.magnetic_field) / 4.0 * eta.powi(3)
            + 2.0 * b.q
    }

    fn dv(&self, xi: f64) -> f64 {
        let b = &self.bg;
        -sq(self.p_phi + b.g) / (xi * xi) + 3.0 * b.g * b.magnetic_field
            - 2.0 * b.electric_field * xi
            + 0.75 * sq(b.magnetic_field) * xi * xi
    }

    fn dw(&self, eta: f64) -> f64 {
        let b = &self.bg;
        -sq(self.p_phi - b.g) / (eta * eta) - 3.0 * b.g * b.magnetic_field
            + 2.0 * b.electric_field * eta
            + 0.75 * sq(b.magnetic_field) * eta * eta
    }

    fn numerator(&self, xi: f64, p_xi: f64, eta: f64, p_eta: f64) -> f64 {
        4.0 * xi * sq(p_xi) + 4.0 * eta * sq(p_eta) + self.v(xi) + self.w(eta)
    }

    pub(crate) fn energy(&self, xi: f64, p_xi: f64, eta: f64, p_eta: f64) -> f64 {
        self.numerator(xi, p_xi, eta, p_eta) / (2.0 * (xi + eta))
            - 0.5 * self.bg.magnetic_field * self.p_phi
    }

    pub(crate) fn gradients(
        &self,
        xi: f64,
        p_xi: f64,
        eta: f64,
        p_eta: f64,
    ) -> (ShapeGradient, f64) {
        let den = 2.0 * (xi + eta);
        let n = self.numerator(xi, p_xi, eta, p_eta);
        let b = &self.bg;
        let d_p_phi = (2.0 * (self.p_phi + b.g) / xi + 2.0 * (self.p_phi - b.g) / eta) / den
            - 0.5 * b.magnetic_field;
        (
            ShapeGradient::Ambient {
                d_xi: (4.0 * sq(p_xi) + self.dv(xi)) / den - 2.0 * n / sq(den),
                d_p_xi: 8.0 * xi * p_xi / den,
                d_eta: (4.0 * sq(p_eta) + self.dw(eta)) / den - 2.0 * n / sq(den),
                d_p_eta: 8.0 * eta * p_eta / den,
            },
            d_p_phi,
        )
    }
}
