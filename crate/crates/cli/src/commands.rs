//! The six commands.

use quadric_landau::action::{action_band, action_i1_appell, action_i1_quadrature};
use quadric_landau::dynamics::{integrate_with, IntegratorSettings};
use quadric_landau::hjq::{
    allowed_band, audit_formula, audit_suite, bound_band, effective_minimum, orbit_curve,
    orbit_quadrature, radial_cycle, Band,
};
use quadric_landau::model::Shape;
use quadric_landau::{classify_reducible, make_model, Background, SurfaceModel, SurfaceSpec};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::compare::{ColumnDeviation, CompareReport, ParsedTable};
use crate::config::{ScenarioConfig, SweepAxis};
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Report, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Trajectory,
    HjOrbit,
    Actions,
    Audit,
    ReduceCheck,
    Sweep,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Trajectory => "trajectory",
            Command::HjOrbit => "hj-orbit",
            Command::Actions => "actions",
            Command::Audit => "audit",
            Command::ReduceCheck => "reduce-check",
            Command::Sweep => "sweep",
        }
    }
}

pub fn run(command: Command, cfg: &ScenarioConfig) -> CliResult<Report> {
    match command {
        Command::Trajectory => trajectory(cfg),
        Command::HjOrbit => hj_orbit(cfg),
        Command::Actions => actions(cfg),
        Command::Audit => audit(cfg),
        Command::ReduceCheck => reduce_check(cfg),
        Command::Sweep => sweep(cfg),
    }
}

fn trajectory(cfg: &ScenarioConfig) -> CliResult<Report> {
    let m = cfg.model()?;
    let settings = cfg.trajectory.ok_or_else(|| {
        CliError::config("`trajectory` needs a `trajectory` section with `t_end`")
    })?;
    let s0 = cfg.phase_point()?;
    let mut integrator = IntegratorSettings::new(settings.tol).with_sampling(settings.sampling);
    integrator.max_steps = settings.max_steps;
    let tr = integrate_with(&m, &s0, settings.t_end, &integrator)?;
    let mut table = if m.is_surface() {
        Table::new(&["t", "u", "p_u", "phi", "H"])
    } else {
        Table::new(&["t", "xi", "p_xi", "eta", "p_eta", "phi", "H"])
    };
    for s in &tr.samples {
        let mut row = vec![Cell::from(s.t)];
        match s.state.shape {
            Shape::Surface { u, p_u } => row.extend([u.into(), p_u.into()]),
            Shape::Ambient {
                xi,
                p_xi,
                eta,
                p_eta,
            } => row.extend([xi.into(), p_xi.into(), eta.into(), p_eta.into()]),
        }
        row.extend([s.state.phi.into(), s.energy.into()]);
        table.rows.push(row);
    }
    Ok(Report::Table(table))
}

/// Band selected by the initial condition.
fn selected_band(
    cfg: &ScenarioConfig,
    m: &SurfaceModel,
    energy: f64,
    p_phi: f64,
) -> CliResult<Band> {
    let band = match cfg.band_hint()? {
        Some(u) => allowed_band(m, energy, p_phi, u)?,
        None => bound_band(m, energy, p_phi)?,
    };
    if !band.is_bound() {
        return Err(CliError::new(
            "NoBoundMotion",
            format!(
                "the band [{}, {}] is not bounded by turning points",
                band.lo, band.hi
            ),
        ));
    }
    Ok(band)
}

fn hj_orbit(cfg: &ScenarioConfig) -> CliResult<Report> {
    let m = cfg.model()?;
    let (energy, p_phi) = cfg.energy_and_p_phi()?;
    let band = selected_band(cfg, &m, energy, p_phi)?;
    let points = cfg.hj_orbit.map(|o| o.points).unwrap_or(201);
    let mut table = Table::new(&["u", "t", "phi"]);
    for (u, t, phi) in orbit_curve(&m, energy, p_phi, &band, points)? {
        table.rows.push(vec![u.into(), t.into(), phi.into()]);
    }
    Ok(Report::Table(table))
}

fn actions(cfg: &ScenarioConfig) -> CliResult<Report> {
    let m = cfg.model()?;
    let (energy, p_phi) = cfg.energy_and_p_phi()?;
    let band = action_band(&m, energy, p_phi)?;
    let (u_min, e_min) = effective_minimum(&m, p_phi)?;
    let quadrature = action_i1_quadrature(&m, energy, p_phi)?;
    let appell = action_i1_appell(&m, energy, p_phi)?;
    Ok(Report::Json(json!({
        "model": m.to_string(),
        "energy": energy,
        "p_phi": p_phi,
        "band": band,
        "well_bottom": { "u": u_min, "energy": e_min },
        "quadrature": quadrature,
        "radial_period": quadrature.radial_period(),
        "appell": appell,
    })))
}

fn audit(cfg: &ScenarioConfig) -> CliResult<Report> {
    let m = cfg.model()?;
    let points = cfg
        .audit
        .as_ref()
        .map(|a| a.points.clone())
        .unwrap_or_default();
    let value = if points.is_empty() {
        let (energy, p_phi) = cfg.energy_and_p_phi()?;
        serde_json::to_value(audit_formula(&m, energy, p_phi)?)
    } else {
        serde_json::to_value(audit_suite(&m, &points)?)
    };
    Ok(Report::Json(value.expect("audit report serializes")))
}

fn reduce_check(cfg: &ScenarioConfig) -> CliResult<Report> {
    let m = cfg.model()?;
    let mut value = serde_json::to_value(classify_reducible(&m)).expect("report serializes");
    value["model"] = json!(m.to_string());
    Ok(Report::Json(value))
}

/// Sweepable parameters.
const PARAMS: [&str; 13] = [
    "energy",
    "p_phi",
    "a",
    "e",
    "p",
    "q1",
    "q2",
    "g1",
    "g2",
    "q",
    "g",
    "electric_field",
    "magnetic_field",
];

/// `(name, sign)` of an axis parameter.
fn parse_param(raw: &str) -> CliResult<(&str, f64)> {
    let (name, sign) = match raw.strip_prefix('-') {
        Some(n) => (n, -1.0),
        None => (raw, 1.0),
    };
    if PARAMS.contains(&name) {
        Ok((name, sign))
    } else {
        Err(CliError::config(format!(
            "unknown sweep parameter `{name}`; expected one of {PARAMS:?}"
        )))
    }
}

#[derive(Debug, Clone, Copy)]
struct Point {
    surface: SurfaceSpec,
    background: Background,
    energy: f64,
    p_phi: f64,
}

impl Point {
    fn set(&mut self, name: &str, v: f64) -> CliResult<()> {
        let mismatch = || {
            CliError::config(format!(
                "parameter `{name}` does not exist for this surface and background"
            ))
        };
        match name {
            "energy" => self.energy = v,
            "p_phi" => self.p_phi = v,
            "a" => match &mut self.surface {
                SurfaceSpec::Ellipsoid { a, .. } | SurfaceSpec::Hyperboloid { a, .. } => *a = v,
                _ => return Err(mismatch()),
            },
            "e" => match &mut self.surface {
                SurfaceSpec::Ellipsoid { e, .. } | SurfaceSpec::Hyperboloid { e, .. } => *e = v,
                _ => return Err(mismatch()),
            },
            "p" => match &mut self.surface {
                SurfaceSpec::Paraboloid { p } => *p = v,
                _ => return Err(mismatch()),
            },
            "q1" | "q2" | "g1" | "g2" => match &mut self.background {
                Background::Dyons(d) => match name {
                    "q1" => d.q1 = v,
                    "q2" => d.q2 = v,
                    "g1" => d.g1 = v,
                    _ => d.g2 = v,
                },
                _ => return Err(mismatch()),
            },
            _ => match &mut self.background {
                Background::Uniform(b) => match name {
                    "q" => b.q = v,
                    "g" => b.g = v,
                    "electric_field" => b.electric_field = v,
                    _ => b.magnetic_field = v,
                },
                _ => return Err(mismatch()),
            },
        }
        Ok(())
    }
}

/// Cartesian product of the axes, last axis fastest.
fn grid(axes: &[SweepAxis]) -> CliResult<Vec<Vec<f64>>> {
    let mut out = vec![Vec::new()];
    for axis in axes {
        let values = axis.points()?;
        out = out
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(*v);
                    p
                })
            })
            .collect();
    }
    Ok(out)
}

struct SweepRow {
    band: Option<Band>,
    period: f64,
    phi_advance: f64,
    i1: f64,
    status: String,
}

fn sweep_point(point: &Point, hint: Option<f64>) -> SweepRow {
    let mut row = SweepRow {
        band: None,
        period: f64::NAN,
        phi_advance: f64::NAN,
        i1: f64::NAN,
        status: "ok".to_string(),
    };
    let result = (|| -> quadric_landau::Result<()> {
        let m = make_model(
            point.surface,
            point.background,
            quadric_landau::Dimensionality::Surface2D,
        )?;
        let band = match hint {
            Some(u) => allowed_band(&m, point.energy, point.p_phi, u)?,
            None => bound_band(&m, point.energy, point.p_phi)?,
        };
        row.band = Some(band);
        if band.is_bound() {
            let cycle = radial_cycle(&m, point.energy, point.p_phi, 0.5 * (band.lo + band.hi))?;
            row.period = cycle.period;
            row.phi_advance = cycle.phi_advance;
        }
        if matches!(point.surface, SurfaceSpec::Ellipsoid { .. }) {
            row.i1 = action_i1_quadrature(&m, point.energy, point.p_phi)?.i1;
        }
        Ok(())
    })();
    if let Err(e) = result {
        row.status = e.kind().to_string();
    }
    row
}

fn sweep(cfg: &ScenarioConfig) -> CliResult<Report> {
    let settings = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::config("`sweep` needs a `sweep` section with `axes`"))?;
    if !cfg.model()?.is_surface() {
        return Err(CliError::new("Unsupported", "sweeps run on surface models"));
    }
    let mut names: Vec<String> = Vec::new();
    let mut setters: Vec<Vec<(String, f64)>> = Vec::new();
    for axis in &settings.axes {
        let mut set = Vec::new();
        for raw in &axis.params {
            let (name, sign) = parse_param(raw)?;
            if names.iter().any(|n| n == name) {
                return Err(CliError::config(format!(
                    "sweep parameter `{name}` appears twice"
                )));
            }
            names.push(name.to_string());
            set.push((name.to_string(), sign));
        }
        setters.push(set);
    }
    let (energy, p_phi) = match cfg.initial {
        Some(_) => cfg.energy_and_p_phi()?,
        None => (f64::NAN, f64::NAN),
    };
    let base = Point {
        surface: cfg.surface,
        background: cfg.background,
        energy,
        p_phi,
    };
    let hint = match cfg.initial {
        Some(_) => cfg.band_hint()?,
        None => None,
    };
    let mut points = Vec::new();
    for values in grid(&settings.axes)? {
        let mut p = base;
        for (set, v) in setters.iter().zip(&values) {
            for (name, sign) in set {
                p.set(name, sign * v + 0.0)?;
            }
        }
        if p.energy.is_nan() || p.p_phi.is_nan() {
            return Err(CliError::config(
                "sweep needs `energy` and `p_phi` from `initial` or from an axis",
            ));
        }
        points.push((values, p));
    }

    let rows: Vec<SweepRow> = points
        .par_iter()
        .map(|(_, p)| sweep_point(p, hint))
        .collect();

    let mut columns: Vec<&str> = Vec::new();
    for set in &setters {
        for (name, _) in set {
            columns.push(name);
        }
    }
    for extra in ["energy", "p_phi"] {
        if !columns.contains(&extra) {
            columns.push(extra);
        }
    }
    columns.extend(["u_lo", "u_hi", "period", "phi_advance", "i1", "status"]);
    let mut table = Table::new(&columns);
    for ((values, p), row) in points.iter().zip(rows) {
        let mut cells: Vec<Cell> = Vec::new();
        for (set, v) in setters.iter().zip(values) {
            for (_, sign) in set {
                cells.push((sign * v + 0.0).into());
            }
        }
        if !names.iter().any(|n| n == "energy") {
            cells.push(p.energy.into());
        }
        if !names.iter().any(|n| n == "p_phi") {
            cells.push(p.p_phi.into());
        }
        let (lo, hi) = row
            .band
            .map(|b| (b.lo, b.hi))
            .unwrap_or((f64::NAN, f64::NAN));
        cells.extend([
            lo.into(),
            hi.into(),
            row.period.into(),
            row.phi_advance.into(),
            row.i1.into(),
        ]);
        cells.push(Cell::Text(row.status));
        table.rows.push(cells);
    }
    Ok(Report::Table(table))
}

/// Checks a trajectory output against the quadrature orbit of the same
/// configuration: along the first stretch with `p_u >= 0`, the elapsed
/// time and azimuth of every sample must match `orbit_quadrature` from the
/// starting coordinate.
pub fn orbit_against_trajectory(
    cfg: &ScenarioConfig,
    traj: &ParsedTable,
    tol: f64,
    names: (&str, &str),
) -> CliResult<CompareReport> {
    let col = |name: &str| {
        traj.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| CliError::schema(format!("trajectory output lacks column `{name}`")))
    };
    let (it, iu, ip, iphi) = (col("t")?, col("u")?, col("p_u")?, col("phi")?);
    if let Some(sha) = traj.fingerprint() {
        if sha != cfg.fingerprint() {
            return Err(CliError::schema(
                "the trajectory was produced from a different configuration".to_string(),
            ));
        }
    }
    let m = cfg.model()?;
    let (energy, p_phi) = cfg.energy_and_p_phi()?;
    let num = |row: &Vec<String>, i: usize| -> CliResult<f64> {
        row[i]
            .parse::<f64>()
            .map_err(|_| CliError::schema(format!("non-numeric cell `{}`", row[i])))
    };
    let first = traj
        .rows
        .first()
        .ok_or_else(|| CliError::schema("empty trajectory".to_string()))?;
    let (t0, u0, phi0) = (num(first, it)?, num(first, iu)?, num(first, iphi)?);
    let (mut dt, mut dphi) = (0.0f64, 0.0f64);
    let (mut prev_phi, mut unwrapped) = (phi0, phi0);
    let mut rows = 0;
    for row in &traj.rows {
        let (t, u, p_u, phi) = (num(row, it)?, num(row, iu)?, num(row, ip)?, num(row, iphi)?);
        if p_u < 0.0 {
            break;
        }
        let mut step = phi - prev_phi;
        step -= std::f64::consts::TAU * (step / std::f64::consts::TAU).round();
        unwrapped += step;
        let seg = orbit_quadrature(&m, energy, p_phi, u0, u)?;
        dt = dt.max(((t - t0) - seg.time).abs());
        dphi = dphi.max(((unwrapped - phi0) - seg.delta_phi).abs());
        prev_phi = phi;
        rows += 1;
    }
    if rows < 2 {
        return Err(CliError::schema(
            "the trajectory does not start with p_u >= 0".to_string(),
        ));
    }
    let column = |name: &str, d: f64| ColumnDeviation {
        column: name.to_string(),
        max_abs: d,
        max_rel: f64::NAN,
        pass: d <= tol,
    };
    Ok(CompareReport::assemble(
        names.0.to_string(),
        names.1.to_string(),
        tol,
        rows,
        vec![column("t", dt), column("phi", dphi)],
    ))
}
