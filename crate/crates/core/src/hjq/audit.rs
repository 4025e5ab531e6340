//! Grid audit of the printed closed forms against the energy equation.
//!
//! Each printed expression `c(u)` is paired with the oracle quantity `o(u)`
//! it claims to equal (the oracle `p_u^2` times the metric prefactor of the
//! corresponding integral). The verdict is decided from
//! `max |c - k o| / max |o|` on a fixed interior grid, first with `k = 1`
//! and then with the least-squares `k`.

use serde::Serialize;

use super::{b_constants, printed, x_form, Radial, RadicalQuadratic};
use crate::error::{Error, Result};
use crate::model::{
    classify_reducible, gauge_split, make_model, printed_paraboloid_potential, Background,
    GaugeSplit, ReducibilityReport, SurfaceModel, SurfaceSpec,
};
use crate::tolerance::AUDIT_AGREEMENT;

const AUDIT_GRID: usize = 10_000;
const SAMPLE_ROWS: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    ConsistentUpToConstantFactor,
    Inconsistent,
}

/// One grid point of a comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AuditSample {
    pub u: f64,
    pub closed: f64,
    pub oracle: f64,
}

/// Comparison of one printed expression with its oracle counterpart.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormulaCheck {
    pub formula: String,
    pub description: String,
    pub verdict: Verdict,
    /// `max |c - o| / max |o|`.
    pub max_discrepancy: f64,
    /// Least-squares `k` in `c ≈ k o`.
    pub fitted_factor: f64,
    /// `max |c - k o| / max |o|` at the fitted `k`.
    pub fitted_discrepancy: f64,
    /// Grid points where `c` and `o` have strictly opposite signs.
    pub sign_mismatches: usize,
    pub grid_points: usize,
    pub grid: (f64, f64),
    pub samples: Vec<AuditSample>,
}

/// One `(E, p_phi)` row of the turning-point audit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootRow {
    pub label: String,
    pub energy: f64,
    pub p_phi: f64,
    pub b1: f64,
    pub b2: f64,
    pub a_minus: f64,
    pub a_plus: f64,
    /// Roots of `x^2 + b1 x + b2`, ascending.
    pub x_roots: (f64, f64),
    /// The same roots expressed in `y = 1 - x`, ascending.
    pub y_roots: (f64, f64),
    pub deviation_from_x_roots: f64,
    pub deviation_from_y_roots: f64,
}

/// The closed form `a_± = (2 + b1 ± sqrt(b1^2 - 4 b2)) / 2` compared with
/// the roots of the quadratic built from the same `b` constants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootCheck {
    pub formula: String,
    pub against_x_roots: Verdict,
    pub against_y_roots: Verdict,
    /// Whether every row with `b1 = -1` matches the `x` roots.
    pub x_match_at_b1_minus_one: bool,
    /// Rows with `b1 != -1` whose `a_±` miss the `x` roots.
    pub flagged_rows: usize,
    pub rows: Vec<RootRow>,
    /// Grid points skipped for complex roots.
    pub complex_rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Skipped {
    pub formula: String,
    pub reason: String,
}

/// Every printed formula that applies to a surface model, audited at one
/// `(E, p_phi)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub model: SurfaceModel,
    pub energy: f64,
    pub p_phi: f64,
    pub reducibility: ReducibilityReport,
    pub checks: Vec<FormulaCheck>,
    pub turning_points: Option<RootCheck>,
    pub skipped: Vec<Skipped>,
}

impl AuditReport {
    pub fn check(&self, formula: &str) -> Option<&FormulaCheck> {
        self.checks.iter().find(|c| c.formula == formula)
    }
}

/// Compares `closed` with `oracle` on the audit grid of the surface.
pub fn compare_on_grid<C: Fn(f64) -> f64, O: Fn(f64) -> f64>(
    formula: &str,
    description: &str,
    surface: SurfaceSpec,
    closed: C,
    oracle: O,
) -> FormulaCheck {
    let (lo, hi) = audit_grid(surface);
    let us: Vec<f64> = (0..AUDIT_GRID)
        .map(|i| lo + (hi - lo) * i as f64 / (AUDIT_GRID - 1) as f64)
        .collect();
    let c: Vec<f64> = us.iter().map(|&u| closed(u)).collect();
    let o: Vec<f64> = us.iter().map(|&u| oracle(u)).collect();
    let scale = o.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let deviation = |k: f64| {
        let dev = c
            .iter()
            .zip(&o)
            .fold(0.0f64, |m, (ci, oi)| m.max((ci - k * oi).abs()));
        if scale > 0.0 {
            dev / scale
        } else {
            dev
        }
    };
    let max_discrepancy = deviation(1.0);
    let (num, den) = c
        .iter()
        .zip(&o)
        .fold((0.0, 0.0), |(n, d), (ci, oi)| (n + ci * oi, d + oi * oi));
    let fitted_factor = if den > 0.0 { num / den } else { 0.0 };
    let fitted_discrepancy = deviation(fitted_factor);
    let verdict = if max_discrepancy < AUDIT_AGREEMENT {
        Verdict::Consistent
    } else if fitted_discrepancy < AUDIT_AGREEMENT && fitted_factor != 0.0 {
        Verdict::ConsistentUpToConstantFactor
    } else {
        Verdict::Inconsistent
    };
    let sign_mismatches = c.iter().zip(&o).filter(|(ci, oi)| *ci * *oi < 0.0).count();
    let step = (AUDIT_GRID - 1) / (SAMPLE_ROWS - 1);
    let samples = (0..SAMPLE_ROWS)
        .map(|k| {
            let i = (k * step).min(AUDIT_GRID - 1);
            AuditSample {
                u: us[i],
                closed: c[i],
                oracle: o[i],
            }
        })
        .collect();
    FormulaCheck {
        formula: formula.to_string(),
        description: description.to_string(),
        verdict,
        max_discrepancy,
        fitted_factor,
        fitted_discrepancy,
        sign_mismatches,
        grid_points: AUDIT_GRID,
        grid: (lo, hi),
        samples,
    }
}

/// Interior sampling range of the surface coordinate.
fn audit_grid(surface: SurfaceSpec) -> (f64, f64) {
    match surface {
        SurfaceSpec::Ellipsoid { .. } => (-0.95, 0.95),
        SurfaceSpec::Hyperboloid { .. } => (1.05, 5.0),
        SurfaceSpec::Paraboloid { .. } => (0.05, 10.0),
    }
}

/// Factor relating each printed radicand to `p_u^2`.
fn radicand_prefactor(surface: SurfaceSpec, free: bool, u: f64) -> f64 {
    match surface {
        SurfaceSpec::Ellipsoid { e, .. } | SurfaceSpec::Hyperboloid { e, .. } => {
            let s = (1.0 - u) * (1.0 + u);
            e * e * (1.0 - e * e) * s * s
        }
        SurfaceSpec::Paraboloid { p } => {
            if free {
                4.0 * p * u * u
            } else {
                16.0 * u * u
            }
        }
    }
}

fn free_counterpart(m: &SurfaceModel) -> Result<SurfaceModel> {
    make_model(m.surface(), Background::Free, m.dim())
}

fn quadratic_check(
    formula: &str,
    description: &str,
    m: &SurfaceModel,
    rq: &RadicalQuadratic,
    energy: f64,
    p_phi: f64,
) -> FormulaCheck {
    let radial = Radial::new(m, energy, p_phi);
    compare_on_grid(
        formula,
        description,
        m.surface(),
        |u| rq.eval(m.x_of_u(u)),
        |u| x_form(m, &radial, energy, m.x_of_u(u), u >= 0.0),
    )
}

/// Audits every printed expression that applies to `m` at `(E, p_phi)`.
pub fn audit_formula(m: &SurfaceModel, energy: f64, p_phi: f64) -> Result<AuditReport> {
    if !m.is_surface() {
        return Err(Error::Unsupported(
            "the formula audit works on surface models".into(),
        ));
    }
    if !(energy.is_finite() && energy != 0.0 && p_phi.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "audit needs finite non-zero E and finite p_phi, got E = {energy}, p_phi = {p_phi}"
        )));
    }
    let surface = m.surface();
    let reducibility = classify_reducible(m);
    let mut checks = Vec::new();
    let mut skipped = Vec::new();

    let free = free_counterpart(m)?;
    let free_radial = Radial::new(&free, energy, p_phi);
    let radial = Radial::new(m, energy, p_phi);

    // free-particle generating functions
    let free_closed = move |u: f64| match surface {
        SurfaceSpec::Ellipsoid { a, e } | SurfaceSpec::Hyperboloid { a, e } => {
            printed::free_elliptic_radicand(a, e, energy, p_phi, u)
        }
        SurfaceSpec::Paraboloid { p } => printed::free_paraboloid_radicand(p, energy, p_phi, u),
    };
    checks.push(compare_on_grid(
        "free_radicand",
        "free-particle radicand vs prefactor * p_u^2 with the background removed",
        surface,
        free_closed,
        |u| radicand_prefactor(surface, true, u) * free_radial.p2(u),
    ));
    let free_b = b_constants(&free, energy, p_phi)?;
    checks.push(quadratic_check(
        "free_b_constants",
        "x^2 + b1 x + b2 with the free b constants vs the energy equation in x, background removed",
        &free,
        &free_b,
        energy,
        p_phi,
    ));

    // general radicands at the configured charges
    match (surface, m.background()) {
        (SurfaceSpec::Ellipsoid { a, e }, Background::Dyons(d)) => checks.push(compare_on_grid(
            "general_radicand",
            "ellipsoid F(eta) vs e^2 (1-e^2) (1-eta^2)^2 p_eta^2",
            surface,
            |u| printed::ellipsoid_f(a, e, &d, energy, p_phi, u),
            |u| radicand_prefactor(surface, false, u) * radial.p2(u),
        )),
        (SurfaceSpec::Hyperboloid { a, e }, Background::Dyons(d)) => checks.push(compare_on_grid(
            "general_radicand",
            "hyperboloid F(xi) vs e^2 (1-e^2) (1-xi^2)^2 p_xi^2",
            surface,
            |u| printed::hyperboloid_f(a, e, &d, energy, p_phi, u),
            |u| radicand_prefactor(surface, false, u) * radial.p2(u),
        )),
        (SurfaceSpec::Paraboloid { p }, Background::Uniform(b)) => checks.push(compare_on_grid(
            "general_radicand",
            "paraboloid quartic radicand vs 16 xi^2 p_xi^2",
            surface,
            |u| printed::paraboloid_radicand(p, &b, energy, p_phi, u),
            |u| radicand_prefactor(surface, false, u) * radial.p2(u),
        )),
        _ => skipped.push(Skipped {
            formula: "general_radicand".into(),
            reason: "no background field".into(),
        }),
    }

    // reduced forms
    let reduced = reducibility.reducible && m.background() != Background::Free;
    if reduced {
        let (q, g) = reducibility.effective_charges.unwrap_or((0.0, 0.0));
        match (surface, m.background()) {
            (
                SurfaceSpec::Ellipsoid { a, e } | SurfaceSpec::Hyperboloid { a, e },
                Background::Dyons(d),
            ) => {
                checks.push(compare_on_grid(
                    "reduced_radicand",
                    "reduced F vs e^2 (1-e^2) (1-u^2)^2 p_u^2",
                    surface,
                    |u| printed::reduced_f(a, e, q, g, energy, p_phi, u),
                    |u| radicand_prefactor(surface, false, u) * radial.p2(u),
                ));
                let general = |u: f64| match surface {
                    SurfaceSpec::Ellipsoid { .. } => {
                        printed::ellipsoid_f(a, e, &d, energy, p_phi, u)
                    }
                    _ => printed::hyperboloid_f(a, e, &d, energy, p_phi, u),
                };
                checks.push(compare_on_grid(
                    "reduced_vs_general_radicand",
                    "reduced F vs the general printed F at the same charges",
                    surface,
                    |u| printed::reduced_f(a, e, q, g, energy, p_phi, u),
                    general,
                ));
            }
            _ => skipped.push(Skipped {
                formula: "reduced_radicand".into(),
                reason: "the reduced paraboloid radicand is the general one with vanishing fields"
                    .into(),
            }),
        }
        let modified = b_constants(m, energy, p_phi)?;
        checks.push(quadratic_check(
            "modified_b_constants",
            "x^2 + b1 x + b2 with the reduced-case b constants vs the energy equation in x",
            m,
            &modified,
            energy,
            p_phi,
        ));
        let derived = super::b_constants_derived(m, energy, p_phi)?;
        checks.push(quadratic_check(
            "derived_b_constants",
            "x^2 + b1 x + b2 with b constants re-derived from the Hamiltonian vs the energy equation in x",
            m,
            &derived,
            energy,
            p_phi,
        ));
    } else if m.background() != Background::Free {
        skipped.push(Skipped {
            formula: "modified_b_constants".into(),
            reason: format!("not reducible: {}", reducibility.matched_condition),
        });
    }

    // scalar potential printed with the paraboloid vector potential
    if let (SurfaceSpec::Paraboloid { p }, Background::Uniform(b)) = (surface, m.background()) {
        match gauge_split(m) {
            Ok(split @ GaugeSplit::Paraboloid { .. }) => checks.push(compare_on_grid(
                "paraboloid_scalar_potential",
                "printed scalar potential vs the one that reproduces the Hamiltonian with the printed vector potential",
                surface,
                |u| printed_paraboloid_potential(p, &b, u),
                |u| split.potential(u),
            )),
            Ok(_) => skipped.push(Skipped {
                formula: "paraboloid_scalar_potential".into(),
                reason: "reducible configuration uses the reduced potentials".into(),
            }),
            Err(err) => skipped.push(Skipped {
                formula: "paraboloid_scalar_potential".into(),
                reason: err.to_string(),
            }),
        }
    }

    let turning_points = match surface {
        SurfaceSpec::Paraboloid { .. } => None,
        _ if reducibility.reducible => Some(root_check(m, energy, p_phi)?),
        _ => None,
    };

    Ok(AuditReport {
        model: *m,
        energy,
        p_phi,
        reducibility,
        checks,
        turning_points,
        skipped,
    })
}

const ROOT_FACTORS_E: [f64; 5] = [0.5, 0.75, 1.0, 1.5, 2.0];
const ROOT_FACTORS_P: [f64; 5] = [0.5, 0.75, 1.0, 1.25, 1.5];

fn root_row(label: String, energy: f64, p_phi: f64, b1: f64, b2: f64) -> Option<RootRow> {
    let (a_minus, a_plus) = printed::a_pm(b1, b2)?;
    let rq = RadicalQuadratic {
        b1,
        b2,
        x_domain: (0.0, 1.0),
        scale: 1.0,
        source: super::QuadraticSource::Printed,
    };
    let x_roots = rq.roots().ok()?;
    let y_roots = (1.0 - x_roots.1, 1.0 - x_roots.0);
    let dev = |r: (f64, f64)| (a_minus - r.0).abs().max((a_plus - r.1).abs());
    Some(RootRow {
        label,
        energy,
        p_phi,
        b1,
        b2,
        a_minus,
        a_plus,
        x_roots,
        y_roots,
        deviation_from_x_roots: dev(x_roots),
        deviation_from_y_roots: dev(y_roots),
    })
}

/// `a_±` from the printed `b` constants over a 5 x 5 grid around `(E, p_phi)`,
/// plus one row with `b1 = -1`.
fn root_check(m: &SurfaceModel, energy: f64, p_phi: f64) -> Result<RootCheck> {
    let mut rows = Vec::new();
    let mut complex_rows = 0;
    for fe in ROOT_FACTORS_E {
        for fp in ROOT_FACTORS_P {
            let (en, pp) = (fe * energy, fp * p_phi);
            let rq = b_constants(m, en, pp)?;
            match root_row(format!("E x {fe}, p_phi x {fp}"), en, pp, rq.b1, rq.b2) {
                Some(r) => rows.push(r),
                None => complex_rows += 1,
            }
        }
    }
    rows.extend(root_row(
        "b1 = -1, b2 = -1/2".into(),
        f64::NAN,
        f64::NAN,
        -1.0,
        -0.5,
    ));
    let matches = |d: f64| d < AUDIT_AGREEMENT;
    let at_minus_one = |r: &RootRow| r.b1 == -1.0;
    let flagged_rows = rows
        .iter()
        .filter(|r| !at_minus_one(r) && !matches(r.deviation_from_x_roots))
        .count();
    let verdict = |all: bool| {
        if all {
            Verdict::Consistent
        } else {
            Verdict::Inconsistent
        }
    };
    Ok(RootCheck {
        formula: "a_pm".into(),
        against_x_roots: verdict(rows.iter().all(|r| matches(r.deviation_from_x_roots))),
        against_y_roots: verdict(rows.iter().all(|r| matches(r.deviation_from_y_roots))),
        x_match_at_b1_minus_one: rows
            .iter()
            .filter(|r| at_minus_one(r))
            .all(|r| matches(r.deviation_from_x_roots)),
        flagged_rows,
        rows,
        complex_rows,
    })
}

/// Audit reports for several `(E, p_phi)` points of one model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditSuite {
    pub reports: Vec<AuditReport>,
}

pub fn audit_suite(m: &SurfaceModel, points: &[(f64, f64)]) -> Result<AuditSuite> {
    let reports = points
        .iter()
        .map(|&(e, p)| audit_formula(m, e, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(AuditSuite { reports })
}
