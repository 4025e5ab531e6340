//! Gamma function and the two-variable Appell function `F1`.
//!
//! The canonical entry point is the Euler-type integral with upper limit
//! `a`:
//!
//! `F1 = a^(1-α-β) Γ(α+β)/(Γ(α)Γ(β)) ∫_0^a x^(α-1) (a-x)^(β-1) (1-ux)^(-ρ) (1-vx)^(-λ) dx`
//!
//! which equals the standard `F1(α; ρ, λ; α+β; u a, v a)`. The double
//! series is a secondary validator.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::{APPELL, SERIES_TAIL};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection keeps the Lanczos sum in its accurate range
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut sum = LANCZOS[0];
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (x + k as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + sum.ln()
}

/// `Γ(x)` for real `x` away from the poles.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut sum = LANCZOS[0];
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (x + k as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * sum
}

/// Parameters of the integral representation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AppellParams {
    pub alpha: f64,
    pub rho: f64,
    pub lambda: f64,
    /// `α + β`.
    pub gamma_sum: f64,
    pub u: f64,
    pub v: f64,
    /// Upper limit `a` of the integral.
    pub a_limit: f64,
}

impl AppellParams {
    /// Standard arguments `F1(α; ρ, λ; c; x, y)`, i.e. `a = 1`.
    pub fn standard(alpha: f64, rho: f64, lambda: f64, c: f64, x: f64, y: f64) -> Self {
        AppellParams {
            alpha,
            rho,
            lambda,
            gamma_sum: c,
            u: x,
            v: y,
            a_limit: 1.0,
        }
    }

    pub fn beta(&self) -> f64 {
        self.gamma_sum - self.alpha
    }

    /// The standard-series arguments `(u a, v a)`.
    pub fn arguments(&self) -> (f64, f64) {
        (self.u * self.a_limit, self.v * self.a_limit)
    }

    fn validate(&self) -> Result<()> {
        let all = [
            self.alpha,
            self.rho,
            self.lambda,
            self.gamma_sum,
            self.u,
            self.v,
            self.a_limit,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "Appell parameters must be finite".into(),
            ));
        }
        if self.a_limit <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "upper limit must be positive, got {}",
                self.a_limit
            )));
        }
        let beta = self.beta();
        if self.alpha <= 0.0 || beta <= 0.0 {
            return Err(Error::DivergentIntegral(format!(
                "needs alpha > 0 and beta > 0, got alpha = {}, beta = {beta}",
                self.alpha
            )));
        }
        let (x, y) = self.arguments();
        for (arg, exponent, name) in [(x, self.rho, "u a"), (y, self.lambda, "v a")] {
            if arg > 1.0 && !is_nonpositive_integer(exponent) {
                return Err(Error::DivergentIntegral(format!(
                    "{name} = {arg} > 1 makes the integrand complex"
                )));
            }
        }
        let mut end_exponent = beta;
        if x == 1.0 && !is_nonpositive_integer(self.rho) {
            end_exponent -= self.rho;
        }
        if y == 1.0 && !is_nonpositive_integer(self.lambda) {
            end_exponent -= self.lambda;
        }
        if end_exponent <= 0.0 {
            return Err(Error::DivergentIntegral(format!(
                "integrand behaves as (a - x)^({}) at the upper limit",
                end_exponent - 1.0
            )));
        }
        Ok(())
    }
}

fn is_nonpositive_integer(v: f64) -> bool {
    v <= 0.0 && v.fract() == 0.0
}

/// Value of the integral with the last refinement difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AppellEstimate {
    pub value: f64,
    pub error: f64,
    /// Number of halvings of the tanh-sinh step.
    pub levels: usize,
}

/// The integral as printed, to relative accuracy `1e-12` where the
/// integrand allows.
pub fn appell_f1(p: &AppellParams) -> Result<f64> {
    appell_f1_estimate(p).map(|e| e.value)
}

/// Tanh-sinh quadrature on `t = x / a`, with the endpoint factors
/// `t^α (1-t)^β` evaluated from logarithms so that the singularities never
/// appear explicitly. The step is halved until successive sums agree.
pub fn appell_f1_estimate(p: &AppellParams) -> Result<AppellEstimate> {
    p.validate()?;
    let (alpha, beta) = (p.alpha, p.beta());
    let (x, y) = p.arguments();
    let norm = (ln_gamma(p.gamma_sum) - ln_gamma(alpha) - ln_gamma(beta)).exp();

    // node at abscissa tau: returns weight * integrand
    let node = |tau: f64| -> f64 {
        let s = 0.5 * PI * tau.sinh();
        let ln_t = -(-2.0 * s).exp().ln_1p();
        let ln_1mt = -(2.0 * s).exp().ln_1p();
        let (t, one_minus_t) = (ln_t.exp(), ln_1mt.exp());
        if t == 0.0 || one_minus_t == 0.0 {
            return 0.0;
        }
        let jac = PI * tau.cosh();
        let mut ln_val = alpha * ln_t + beta * ln_1mt + jac.ln();
        let mut sign = 1.0;
        for (arg, exponent) in [(x, p.rho), (y, p.lambda)] {
            if exponent == 0.0 {
                continue;
            }
            // 1 - arg t written to stay accurate near arg = 1, t = 1
            let base = one_minus_t + t * (1.0 - arg);
            if base == 0.0 {
                return 0.0;
            }
            if base < 0.0 {
                let k = -exponent;
                if k.rem_euclid(2.0) == 1.0 {
                    sign = -sign;
                }
            }
            ln_val -= exponent * base.abs().ln();
        }
        let v = sign * ln_val.exp();
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };

    let sum_level = |h: f64, offset: usize, stride: usize| -> f64 {
        let mut total = 0.0;
        let mut j = offset;
        loop {
            let tau = j as f64 * h;
            let term = if j == 0 {
                node(0.0)
            } else {
                node(tau) + node(-tau)
            };
            total += term;
            if (tau > 1.0 && term.abs() < 1e-300) || tau > 8.0 {
                break;
            }
            j += stride;
        }
        total
    };

    let mut h = 0.5;
    let mut sum = sum_level(h, 0, 1);
    let mut prev = sum * h;
    let mut levels = 0;
    loop {
        levels += 1;
        h *= 0.5;
        // new nodes sit at odd multiples of the halved step
        sum += sum_level(h, 1, 2);
        let value = sum * h;
        let error = (value - prev).abs();
        if (error <= APPELL * value.abs() && levels >= 3) || levels >= 12 {
            if error > 1e3 * APPELL * value.abs() {
                return Err(Error::Nonconvergent(format!(
                    "Appell integral stalled at relative change {:e}",
                    error / value.abs()
                )));
            }
            return Ok(AppellEstimate {
                value: norm * value,
                error: norm * error,
                levels,
            });
        }
        prev = value;
    }
}

/// Gauss hypergeometric series `2F1(a, b; c; z)` for `|z| < 1`.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if z.abs() >= 1.0 {
        return Err(Error::Nonconvergent(format!(
            "2F1 series needs |z| < 1, got {z}"
        )));
    }
    if is_nonpositive_integer(c) {
        return Err(Error::InvalidParameter(format!(
            "2F1 undefined for c = {c}"
        )));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..1_000_000 {
        let k = k as f64;
        let ratio = (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        term *= ratio;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        let r = ratio.abs().max(z.abs());
        if r < 1.0 && (term * r).abs() / (1.0 - r) <= SERIES_TAIL * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::Nonconvergent(format!(
        "2F1({a}, {b}; {c}; {z}) did not converge"
    )))
}

/// Double series `Σ_m (α)_m (ρ)_m / ((c)_m m!) x^m 2F1(α+m, λ; c+m; y)`
/// summed until the tail bound drops below `1e-15` of the partial sum.
pub fn appell_f1_series(alpha: f64, rho: f64, lambda: f64, c: f64, x: f64, y: f64) -> Result<f64> {
    if x.abs() >= 1.0 || y.abs() >= 1.0 {
        return Err(Error::Nonconvergent(format!(
            "Appell series needs |x| < 1 and |y| < 1, got x = {x}, y = {y}"
        )));
    }
    if is_nonpositive_integer(c) {
        return Err(Error::InvalidParameter(format!(
            "Appell F1 undefined for c = {c}"
        )));
    }
    let mut coef = 1.0;
    let mut sum = hyp2f1(alpha, lambda, c, y)?;
    for m in 0..100_000 {
        let mf = m as f64;
        let ratio = (alpha + mf) * (rho + mf) / ((c + mf) * (mf + 1.0)) * x;
        coef *= ratio;
        if coef == 0.0 {
            return Ok(sum);
        }
        let inner = hyp2f1(alpha + mf + 1.0, lambda, c + mf + 1.0, y)?;
        let term = coef * inner;
        sum += term;
        let r = ratio.abs().max(x.abs());
        if r < 1.0 && (term * r).abs() / (1.0 - r) <= SERIES_TAIL * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::Nonconvergent(format!(
        "Appell series at x = {x}, y = {y} did not converge"
    )))
}
