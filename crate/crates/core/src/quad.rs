//! Gauss-Legendre rules, composite integration with panel doubling, and a
//! bracketing root finder.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Nodes and weights of an `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Roots of `P_n` by Newton's method from the Chebyshev-like guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a quadrature rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integral of `f` over `[a, b]` with a single panel.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        sum * half
    }

    /// Integral over `[a, b]` split into `panels` equal panels.
    pub fn composite<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, panels: usize, mut f: F) -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|k| {
                let lo = a + k as f64 * h;
                let hi = if k + 1 == panels { b } else { lo + h };
                self.integrate(lo, hi, &mut f)
            })
            .sum()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Shared 20-point rule.
pub fn gl20() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(20))
}

/// Result of an adaptive composite integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Difference between the last two refinements.
    pub error: f64,
    pub panels: usize,
    pub converged: bool,
}

/// Doubles the number of panels until two successive estimates agree to
/// `rel_tol` (or to `abs_floor` in absolute terms).
pub fn integrate_doubling<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_floor: f64,
    max_panels: usize,
    mut f: F,
) -> Estimate {
    let rule = gl20();
    let mut panels = 1;
    let mut prev = rule.composite(a, b, panels, &mut f);
    loop {
        panels *= 2;
        let next = rule.composite(a, b, panels, &mut f);
        let error = (next - prev).abs();
        if error <= rel_tol * next.abs() || error <= abs_floor {
            return Estimate {
                value: next,
                error,
                panels,
                converged: true,
            };
        }
        if panels >= max_panels {
            return Estimate {
                value: next,
                error,
                panels,
                converged: false,
            };
        }
        prev = next;
    }
}

/// Shared rules of order `20 * 2^k`, `k = 0..=6`.
fn ladder() -> &'static [GaussLegendre] {
    static RULES: OnceLock<Vec<GaussLegendre>> = OnceLock::new();
    RULES.get_or_init(|| (0..7).map(|k| GaussLegendre::new(20 << k)).collect())
}

/// Single-panel Gauss-Legendre of doubling order (20 up to 1280) until
/// two successive estimates agree. Nodes never crowd an endpoint the way
/// composite refinement does, which matters when the integrand is only
/// known to limited absolute accuracy there.
///
/// Without convergence the estimate with the smallest change is returned.
pub fn integrate_orders<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_floor: f64,
    mut f: F,
) -> Estimate {
    let rules = ladder();
    let mut prev = rules[0].integrate(a, b, &mut f);
    let mut best = Estimate {
        value: prev,
        error: f64::INFINITY,
        panels: rules[0].len(),
        converged: false,
    };
    for rule in &rules[1..] {
        let next = rule.integrate(a, b, &mut f);
        let error = (next - prev).abs();
        let converged = error <= rel_tol * next.abs() || error <= abs_floor;
        if converged || error < best.error {
            best = Estimate {
                value: next,
                error,
                panels: rule.len(),
                converged,
            };
        }
        if converged {
            break;
        }
        prev = next;
    }
    best
}

/// Bisection on a bracket with `f(lo)` and `f(hi)` of opposite signs (or
/// zero). Runs until the bracket stops shrinking, so the result is
/// accurate to machine precision.
pub fn bisect<F: FnMut(f64) -> f64>(mut lo: f64, mut hi: f64, mut f: F) -> f64 {
    let f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    let lo_neg = f_lo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == lo_neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
