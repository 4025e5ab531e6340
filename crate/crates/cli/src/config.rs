//! Scenario configuration: one JSON document per run.

use std::path::Path;

use quadric_landau::dynamics::Sampling;
use quadric_landau::hjq::bound_band;
use quadric_landau::{
    energy, make_model, radial_momentum_squared, Background, Dimensionality, PhasePoint,
    SurfaceModel, SurfaceSpec,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

fn surface_2d() -> Dimensionality {
    Dimensionality::Surface2D
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub surface: SurfaceSpec,
    pub background: Background,
    #[serde(default = "surface_2d")]
    pub dimensionality: Dimensionality,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<Initial>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<TrajectorySettings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hj_orbit: Option<OrbitSettings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditSettings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSettings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSettings>,
}

/// Initial condition: an explicit phase point, or `(E, p_phi)` with an
/// optional starting coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Initial {
    /// Surface models: shape coordinate `u` and its momentum.
    PhasePoint {
        u: f64,
        p_u: f64,
        phi: f64,
        p_phi: f64,
    },
    /// Ambient models.
    Ambient {
        xi: f64,
        p_xi: f64,
        eta: f64,
        p_eta: f64,
        phi: f64,
        p_phi: f64,
    },
    /// Surface models. Without `u0` the motion starts at the lower turning
    /// point of the first bound band; with it, at `u0` with `p_u >= 0`.
    Energy {
        energy: f64,
        p_phi: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        u0: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phi: Option<f64>,
    },
}

fn default_tol() -> f64 {
    1e-10
}
fn default_sampling() -> Sampling {
    Sampling::Uniform(1001)
}
fn default_max_steps() -> usize {
    5_000_000
}
fn default_points() -> usize {
    201
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectorySettings {
    pub t_end: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_sampling")]
    pub sampling: Sampling,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitSettings {
    #[serde(default = "default_points")]
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditSettings {
    /// `(E, p_phi)` pairs; defaults to the initial condition.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<(f64, f64)>,
}

/// One sweep axis. Every listed parameter takes the axis value; a leading
/// `-` assigns its negative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub params: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<(f64, f64, usize)>,
}

impl SweepAxis {
    pub fn points(&self) -> CliResult<Vec<f64>> {
        match (&self.values, self.range) {
            (Some(v), None) if !v.is_empty() => Ok(v.clone()),
            (None, Some((lo, hi, n))) if n >= 2 => Ok((0..n)
                .map(|k| if k == n - 1 { hi } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 })
                .collect()),
            (None, Some((lo, _, 1))) => Ok(vec![lo]),
            _ => Err(CliError::config(format!(
                "sweep axis {:?} needs exactly one of a non-empty `values` list or a `range` [lo, hi, n]",
                self.params
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSettings {
    /// Cartesian product, last axis fastest.
    pub axes: Vec<SweepAxis>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSettings {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let cfg: ScenarioConfig =
            serde_json::from_str(text).map_err(|e| CliError::config(e.to_string()))?;
        cfg.model()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("cannot read config {}: {e}", path.display())))?;
        ScenarioConfig::from_json(&text)
    }

    pub fn model(&self) -> CliResult<SurfaceModel> {
        Ok(make_model(
            self.surface,
            self.background,
            self.dimensionality,
        )?)
    }

    /// Compact canonical JSON of the parsed configuration.
    pub fn canonical(&self) -> String {
        serde_json::to_string(self).expect("configuration serializes")
    }

    /// SHA-256 of [`ScenarioConfig::canonical`].
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    fn require_initial(&self) -> CliResult<Initial> {
        self.initial
            .ok_or_else(|| CliError::config("this command needs an `initial` condition"))
    }

    /// The starting phase point.
    pub fn phase_point(&self) -> CliResult<PhasePoint> {
        let m = self.model()?;
        match self.require_initial()? {
            Initial::PhasePoint { u, p_u, phi, p_phi } => {
                Ok(PhasePoint::surface(u, p_u, phi, p_phi))
            }
            Initial::Ambient {
                xi,
                p_xi,
                eta,
                p_eta,
                phi,
                p_phi,
            } => Ok(PhasePoint::ambient(xi, p_xi, eta, p_eta, phi, p_phi)),
            Initial::Energy {
                energy,
                p_phi,
                u0,
                phi,
            } => {
                let phi = phi.unwrap_or(0.0);
                match u0 {
                    None => {
                        let band = bound_band(&m, energy, p_phi)?;
                        Ok(PhasePoint::surface(band.lo, 0.0, phi, p_phi))
                    }
                    Some(u) => {
                        let p2 = radial_momentum_squared(&m, u, energy, p_phi)?;
                        if p2 < 0.0 {
                            return Err(CliError::new(
                                "ForbiddenRegion",
                                format!("u0 = {u} is classically forbidden at E = {energy} (p_u^2 = {p2})"),
                            ));
                        }
                        Ok(PhasePoint::surface(u, p2.sqrt(), phi, p_phi))
                    }
                }
            }
        }
    }

    /// `(E, p_phi)` of the initial condition.
    pub fn energy_and_p_phi(&self) -> CliResult<(f64, f64)> {
        match self.require_initial()? {
            Initial::Energy { energy, p_phi, .. } => Ok((energy, p_phi)),
            _ => {
                let s = self.phase_point()?;
                Ok((energy(&self.model()?, &s)?, s.p_phi))
            }
        }
    }

    /// Coordinate used to pick the band: `u0`, the phase point's `u`, or
    /// none (first bound band).
    pub fn band_hint(&self) -> CliResult<Option<f64>> {
        Ok(match self.require_initial()? {
            Initial::Energy { u0, .. } => u0,
            Initial::PhasePoint { u, .. } => Some(u),
            Initial::Ambient { .. } => None,
        })
    }
}
