//! Numerical integration of Hamilton's equations with an adaptive
//! Dormand-Prince 5(4) pair and its continuous extension.

use serde::{Deserialize, Serialize};

use crate::dop853::{A, B, D, E3, E5, STAGES, STAGES_EXTENDED};
use crate::error::{Error, Result};
use crate::model::{Evaluator, PhasePoint, ShapeGradient, SurfaceModel};
use crate::quad::bisect;

const N_MAX: usize = 5;
type Vector = [f64; N_MAX];

/// How the trajectory is reported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "n", rename_all = "snake_case")]
pub enum Sampling {
    /// Every accepted step.
    Steps,
    /// `n` equally spaced times covering `[0, t_end]`.
    Uniform(usize),
    /// `n` equally spaced samples per radial oscillation, with the period
    /// estimated from the run itself. Falls back to [`Sampling::Steps`]
    /// when fewer than two oscillations occur.
    PerOscillation(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorSettings {
    /// Relative (and absolute) local error tolerance.
    pub tol: f64,
    pub sampling: Sampling,
    pub max_steps: usize,
}

impl IntegratorSettings {
    pub fn new(tol: f64) -> Self {
        IntegratorSettings {
            tol,
            sampling: Sampling::PerOscillation(512),
            max_steps: 5_000_000,
        }
    }

    pub fn with_sampling(mut self, sampling: Sampling) -> Self {
        self.sampling = sampling;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(1e-14..=1e-3).contains(&self.tol) {
            return Err(Error::InvalidParameter(format!(
                "integrator tolerance must lie in [1e-14, 1e-3], got {}",
                self.tol
            )));
        }
        match self.sampling {
            Sampling::Uniform(n) | Sampling::PerOscillation(n) if n < 2 => Err(
                Error::InvalidParameter("sampling needs at least two points".into()),
            ),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub state: PhasePoint,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryMeta {
    pub model: String,
    pub initial: PhasePoint,
    pub settings: IntegratorSettings,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub meta: TrajectoryMeta,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConservationReport {
    /// `max |H(t) - H(0)| / |H(0)|` (absolute when `H(0) = 0`).
    pub max_energy_drift: f64,
    pub max_pphi_drift: f64,
    pub steps: usize,
}

pub fn conservation_report(tr: &Trajectory) -> ConservationReport {
    let Some(first) = tr.samples.first() else {
        return ConservationReport {
            max_energy_drift: 0.0,
            max_pphi_drift: 0.0,
            steps: tr.meta.accepted_steps,
        };
    };
    let scale = if first.energy != 0.0 {
        first.energy.abs()
    } else {
        1.0
    };
    let mut de: f64 = 0.0;
    let mut dp: f64 = 0.0;
    for s in &tr.samples {
        de = de.max((s.energy - first.energy).abs() / scale);
        dp = dp.max((s.state.p_phi - first.state.p_phi).abs());
    }
    ConservationReport {
        max_energy_drift: de,
        max_pphi_drift: dp,
        steps: tr.meta.accepted_steps,
    }
}

/// One accepted step with its seventh-order interpolant: the start state
/// followed by the seven interpolant terms.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Segment {
    pub t0: f64,
    pub h: f64,
    n: usize,
    r: [Vector; 8],
}

impl Segment {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    /// Interpolated component `i` at `theta in [0, 1]`.
    pub fn component(&self, i: usize, theta: f64) -> f64 {
        let mut y = 0.0;
        for (k, f) in self.r[1..].iter().rev().enumerate() {
            y += f[i];
            y *= if k % 2 == 0 { theta } else { 1.0 - theta };
        }
        self.r[0][i] + y
    }

    pub fn state(&self, theta: f64) -> Vector {
        let mut y = [0.0; N_MAX];
        for (i, v) in y.iter_mut().enumerate().take(self.n) {
            *v = self.component(i, theta);
        }
        y
    }

    pub fn start(&self) -> Vector {
        self.r[0]
    }

    pub fn end(&self) -> Vector {
        let mut y = self.r[0];
        for (v, d) in y.iter_mut().zip(self.r[1]) {
            *v += d;
        }
        y
    }
}

/// Hamiltonian vector field of one model at fixed `p_phi`.
pub(crate) struct Flow {
    ev: Evaluator,
    p_phi: f64,
    n: usize,
}

impl Flow {
    pub fn new(m: &SurfaceModel, p_phi: f64) -> Self {
        Flow {
            ev: m.evaluator(p_phi),
            p_phi,
            n: if m.is_surface() { 3 } else { 5 },
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn point(&self, y: &Vector) -> PhasePoint {
        PhasePoint::from_state(&y[..self.n], self.p_phi)
    }

    pub fn energy(&self, y: &Vector) -> Result<f64> {
        self.ev.energy(&self.point(y))
    }

    fn rhs(&self, y: &Vector) -> Result<Vector> {
        let g = self.ev.gradients(&self.point(y))?;
        let mut f = [0.0; N_MAX];
        match g.shape {
            ShapeGradient::Surface { d_u, d_p_u } => {
                f[0] = d_p_u;
                f[1] = -d_u;
                f[2] = g.d_p_phi;
            }
            ShapeGradient::Ambient {
                d_xi,
                d_p_xi,
                d_eta,
                d_p_eta,
            } => {
                f[0] = d_p_xi;
                f[1] = d_p_eta;
                f[2] = -d_xi;
                f[3] = -d_eta;
                f[4] = g.d_p_phi;
            }
        }
        Ok(f)
    }
}

/// Why a run stopped early.
pub(crate) enum Halt {
    Singularity { t: f64 },
    Underflow { t: f64 },
    StepLimit { t: f64 },
}

pub(crate) struct RunStats {
    pub accepted: usize,
    pub rejected: usize,
}

/// `y + h Σ_j coef_j k_j`.
fn combine(y: &Vector, h: f64, coef: &[f64], k: &[Vector]) -> Vector {
    let mut out = *y;
    for (c, kj) in coef.iter().zip(k) {
        if *c != 0.0 {
            for i in 0..N_MAX {
                out[i] += h * c * kj[i];
            }
        }
    }
    out
}

/// Integrates from `t = 0` until `t_end` or until `observe` returns
/// `false`. Each accepted step is handed to `observe`.
pub(crate) fn run<F: FnMut(&Segment) -> bool>(
    flow: &Flow,
    y0: Vector,
    t_end: f64,
    tol: f64,
    max_steps: usize,
    mut observe: F,
) -> (RunStats, Option<Halt>) {
    let n = flow.n;
    let mut stats = RunStats {
        accepted: 0,
        rejected: 0,
    };
    let mut t = 0.0;
    let mut y = y0;
    let mut k1 = match flow.rhs(&y) {
        Ok(k) => k,
        Err(_) => return (stats, Some(Halt::Singularity { t })),
    };
    let norm = |v: &Vector| (v[..n].iter().map(|x| x * x).sum::<f64>() / n as f64).sqrt();
    let (d0, d1) = (norm(&y), norm(&k1));
    let mut h = if d0 > 1e-5 && d1 > 1e-5 {
        0.01 * d0 / d1
    } else {
        1e-4
    };
    h = h.min(t_end.abs()).max(1e-10);
    let mut last_rejected = false;

    while t < t_end {
        if stats.accepted >= max_steps {
            return (stats, Some(Halt::StepLimit { t }));
        }
        let h_floor = 1e-12 * t.abs().max(1.0);
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        let stages = (|| -> Result<[Vector; STAGES_EXTENDED]> {
            let mut k = [[0.0; N_MAX]; STAGES_EXTENDED];
            k[0] = k1;
            for s in 1..STAGES {
                k[s] = flow.rhs(&combine(&y, h, &A[s][..s], &k))?;
            }
            let y1 = combine(&y, h, &B, &k);
            k[STAGES] = flow.rhs(&y1)?;
            for s in STAGES + 1..STAGES_EXTENDED {
                k[s] = flow.rhs(&combine(&y, h, &A[s][..s], &k))?;
            }
            Ok(k)
        })();
        let k = match stages {
            Ok(k) => k,
            Err(_) => {
                // a stage left the chart domain: shrink towards the guard band
                stats.rejected += 1;
                h *= 0.5;
                last_rejected = true;
                if h < h_floor {
                    return (stats, Some(Halt::Singularity { t }));
                }
                continue;
            }
        };
        let y1 = combine(&y, h, &B, &k);
        // maximum over components of the combined 5th/3rd-order estimate
        let mut err: f64 = 0.0;
        for i in 0..n {
            let sc = tol + tol * y[i].abs().max(y1[i].abs());
            let (mut d5, mut d3) = (0.0, 0.0);
            for j in 0..=STAGES {
                d5 += E5[j] * k[j][i];
                d3 += E3[j] * k[j][i];
            }
            let (e5, e3) = ((d5 / sc) * (d5 / sc), (d3 / sc) * (d3 / sc));
            if e5 > 0.0 {
                err = err.max(h.abs() * e5 / (e5 + 0.01 * e3).sqrt());
            }
        }
        if err <= 1.0 {
            let mut r = [[0.0; N_MAX]; 8];
            let k_end = k[STAGES];
            for i in 0..n {
                let dy = y1[i] - y[i];
                r[0][i] = y[i];
                r[1][i] = dy;
                r[2][i] = h * k1[i] - dy;
                r[3][i] = 2.0 * dy - h * (k_end[i] + k1[i]);
                for (row, d) in D.iter().enumerate() {
                    r[4 + row][i] = h * (0..STAGES_EXTENDED).map(|j| d[j] * k[j][i]).sum::<f64>();
                }
            }
            let seg = Segment { t0: t, h, n, r };
            stats.accepted += 1;
            t = if last { t_end } else { t + h };
            y = y1;
            k1 = k_end;
            if !observe(&seg) {
                return (stats, None);
            }
            let mut fac = 0.9 * err.max(1e-10).powf(-0.125);
            fac = fac.clamp(0.2, 5.0);
            if last_rejected {
                fac = fac.min(1.0);
            }
            h *= fac;
            last_rejected = false;
        } else {
            stats.rejected += 1;
            h *= (0.9 * err.powf(-0.125)).max(0.2);
            last_rejected = true;
            if h < h_floor {
                return (stats, Some(Halt::Underflow { t }));
            }
        }
    }
    (stats, None)
}

fn initial_vector(s0: &PhasePoint) -> Vector {
    let mut y = [0.0; N_MAX];
    for (v, x) in y.iter_mut().zip(s0.to_state()) {
        *v = x;
    }
    y
}

/// Times where component `i` crosses zero in the given direction
/// (`falling`: from positive to non-positive), located on the interpolant.
pub(crate) fn crossing(seg: &Segment, i: usize, falling: bool) -> Option<f64> {
    let (a, b) = (seg.start()[i], seg.end()[i]);
    let hit = if falling {
        a > 0.0 && b <= 0.0
    } else {
        a < 0.0 && b >= 0.0
    };
    if !hit {
        return None;
    }
    let theta = bisect(0.0, 1.0, |th| seg.component(i, th));
    Some(theta)
}

fn sample_at(flow: &Flow, t: f64, y: &Vector) -> Sample {
    Sample {
        t,
        state: flow.point(y),
        energy: flow.energy(y).unwrap_or(f64::NAN),
    }
}

/// Adaptive solution of `du/dt = dH/dp_u`, `dp_u/dt = -dH/du`,
/// `dphi/dt = dH/dp_phi` with `p_phi` held fixed.
pub fn integrate(m: &SurfaceModel, s0: &PhasePoint, t_end: f64, tol: f64) -> Result<Trajectory> {
    integrate_with(m, s0, t_end, &IntegratorSettings::new(tol))
}

pub fn integrate_with(
    m: &SurfaceModel,
    s0: &PhasePoint,
    t_end: f64,
    settings: &IntegratorSettings,
) -> Result<Trajectory> {
    settings.validate()?;
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    let flow = Flow::new(m, s0.p_phi);
    flow.energy(&initial_vector(s0))?;
    let y0 = initial_vector(s0);

    let mut segments: Vec<Segment> = Vec::new();
    let (stats, halt) = run(&flow, y0, t_end, settings.tol, settings.max_steps, |seg| {
        segments.push(*seg);
        true
    });

    let samples = resample(
        &flow,
        y0,
        &segments,
        t_end,
        settings.sampling,
        halt.is_some(),
    );
    let trajectory = Trajectory {
        samples,
        meta: TrajectoryMeta {
            model: m.to_string(),
            initial: *s0,
            settings: *settings,
            accepted_steps: stats.accepted,
            rejected_steps: stats.rejected,
        },
    };
    match halt {
        None => Ok(trajectory),
        Some(Halt::Singularity { t }) => Err(Error::SingularityReached {
            t,
            partial: Box::new(trajectory),
        }),
        Some(Halt::Underflow { t }) | Some(Halt::StepLimit { t }) => {
            Err(Error::StepSizeUnderflow { t })
        }
    }
}

fn resample(
    flow: &Flow,
    y0: Vector,
    segments: &[Segment],
    t_end: f64,
    sampling: Sampling,
    halted: bool,
) -> Vec<Sample> {
    let steps = || {
        let mut out = vec![sample_at(flow, 0.0, &y0)];
        out.extend(segments.iter().map(|s| sample_at(flow, s.t1(), &s.end())));
        out
    };
    let t_last = segments.last().map_or(0.0, |s| s.t1());
    let dt = match sampling {
        Sampling::Steps => return steps(),
        Sampling::Uniform(n) => t_end / (n - 1) as f64,
        Sampling::PerOscillation(n) => {
            if flow.dim() != 3 {
                return steps();
            }
            let maxima: Vec<f64> = segments
                .iter()
                .filter_map(|s| crossing(s, 1, true).map(|th| s.t0 + th * s.h))
                .collect();
            if maxima.len() < 3 {
                return steps();
            }
            let period = (maxima[maxima.len() - 1] - maxima[0]) / (maxima.len() - 1) as f64;
            period / n as f64
        }
    };
    let mut out = Vec::new();
    let mut k = 0usize;
    let mut j = 0usize;
    loop {
        let t = j as f64 * dt;
        let t = if (t - t_end).abs() <= 1e-9 * dt {
            t_end
        } else {
            t
        };
        if t > t_last || (halted && t >= t_last) {
            break;
        }
        while k + 1 < segments.len() && segments[k].t1() < t {
            k += 1;
        }
        let y = match segments.get(k) {
            Some(seg) if t > seg.t0 => seg.state(((t - seg.t0) / seg.h).clamp(0.0, 1.0)),
            Some(seg) => seg.start(),
            None => y0,
        };
        out.push(sample_at(flow, t, &y));
        if t >= t_end {
            break;
        }
        j += 1;
    }
    if out.last().map(|s| s.t) != Some(t_last) && !segments.is_empty() && !halted {
        let last = segments.last().unwrap();
        if out.last().is_none_or(|s| s.t < t_last) {
            out.push(sample_at(flow, t_last, &last.end()));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodOptions {
    pub tol: f64,
    /// Number of full oscillations averaged over.
    pub oscillations: usize,
    /// Steps allowed between two turning points before the motion is
    /// declared unbound.
    pub horizon_steps: usize,
}

impl Default for PeriodOptions {
    fn default() -> Self {
        PeriodOptions {
            tol: 1e-12,
            oscillations: 10,
            horizon_steps: 200_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialPeriod {
    pub period: f64,
    pub oscillations: usize,
    /// Mean advance of `phi` per radial period.
    pub phi_advance: f64,
    /// Mean observed turning values `(u_min, u_max)`.
    pub u_turning: (f64, f64),
    /// The same turning values mapped to `x` and sorted.
    pub x_turning: (f64, f64),
    pub max_energy_drift: f64,
}

/// Time between successive maxima of `u`, averaged over several
/// oscillations, with the observed turning values.
pub fn measure_radial_period(m: &SurfaceModel, s0: &PhasePoint) -> Result<RadialPeriod> {
    measure_radial_period_with(m, s0, &PeriodOptions::default())
}

pub fn measure_radial_period_with(
    m: &SurfaceModel,
    s0: &PhasePoint,
    opts: &PeriodOptions,
) -> Result<RadialPeriod> {
    if !m.is_surface() {
        return Err(Error::Unsupported(
            "radial periods are measured on surface models".into(),
        ));
    }
    if opts.oscillations == 0 {
        return Err(Error::InvalidParameter(
            "need at least one oscillation".into(),
        ));
    }
    let (u0, _) = s0
        .surface_coords()
        .expect("surface model has surface points");
    let flow = Flow::new(m, s0.p_phi);
    let e0 = flow.energy(&initial_vector(s0))?;
    let band = crate::hjq::allowed_band(m, e0, s0.p_phi, u0)?;
    if band.hi.is_infinite() {
        return Err(Error::UnboundMotion(format!(
            "p_u^2 stays non-negative for all u >= {} at E = {e0}",
            band.lo
        )));
    }

    let mut maxima: Vec<(f64, f64, f64)> = Vec::new();
    let mut minima: Vec<f64> = Vec::new();
    let mut since_turn = 0usize;
    let mut unbound = false;
    let mut drift: f64 = 0.0;
    let scale = if e0 != 0.0 { e0.abs() } else { 1.0 };
    let (stats, halt) = run(
        &flow,
        initial_vector(s0),
        f64::INFINITY,
        opts.tol,
        usize::MAX,
        |seg| {
            since_turn += 1;
            if let Ok(e) = flow.energy(&seg.end()) {
                drift = drift.max((e - e0).abs() / scale);
            }
            if let Some(th) = crossing(seg, 1, true) {
                let y = seg.state(th);
                maxima.push((seg.t0 + th * seg.h, y[0], y[2]));
                since_turn = 0;
            }
            if let Some(th) = crossing(seg, 1, false) {
                minima.push(seg.component(0, th));
                since_turn = 0;
            }
            if since_turn > opts.horizon_steps {
                unbound = true;
                return false;
            }
            maxima.len() <= opts.oscillations
        },
    );
    let _ = stats;
    if unbound {
        return Err(Error::UnboundMotion(
            "no radial turning point within the step horizon".into(),
        ));
    }
    match halt {
        Some(Halt::Singularity { t }) => {
            return Err(Error::SingularityReached {
                t,
                partial: Box::new(Trajectory {
                    samples: vec![sample_at(&flow, 0.0, &initial_vector(s0))],
                    meta: TrajectoryMeta {
                        model: m.to_string(),
                        initial: *s0,
                        settings: IntegratorSettings::new(opts.tol),
                        accepted_steps: 0,
                        rejected_steps: 0,
                    },
                }),
            })
        }
        Some(Halt::Underflow { t }) | Some(Halt::StepLimit { t }) => {
            return Err(Error::StepSizeUnderflow { t })
        }
        None => {}
    }
    let n = opts.oscillations;
    let (t_first, _, phi_first) = maxima[0];
    let (t_last, _, phi_last) = maxima[n];
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let u_max = mean(&maxima.iter().map(|m| m.1).collect::<Vec<_>>());
    let u_min = if minima.is_empty() {
        f64::NAN
    } else {
        mean(&minima)
    };
    let (xa, xb) = (m.x_of_u(u_min), m.x_of_u(u_max));
    Ok(RadialPeriod {
        period: (t_last - t_first) / n as f64,
        oscillations: n,
        phi_advance: (phi_last - phi_first) / n as f64,
        u_turning: (u_min, u_max),
        x_turning: (xa.min(xb), xa.max(xb)),
        max_energy_drift: drift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{make_model, Background, Dimensionality, DyonPair, SurfaceSpec};

    fn ellipsoid(d: DyonPair) -> SurfaceModel {
        make_model(
            SurfaceSpec::Ellipsoid { a: 1.0, e: 0.6 },
            Background::Dyons(d),
            Dimensionality::Surface2D,
        )
        .unwrap()
    }

    #[test]
    fn dense_output_matches_step_endpoints() {
        let m = ellipsoid(DyonPair::new(0.3, 0.3, 0.5, -0.5));
        let flow = Flow::new(&m, 0.4);
        let y0 = initial_vector(&PhasePoint::surface(0.2, 0.3, 0.0, 0.4));
        let (_, halt) = run(&flow, y0, 3.0, 1e-10, 10_000, |seg| {
            let (end, start) = (seg.state(1.0), seg.state(0.0));
            for (i, (e, s)) in seg.end().iter().zip(seg.start().iter()).enumerate().take(3) {
                assert!((end[i] - e).abs() < 1e-14);
                assert_eq!(start[i], *s);
            }
            true
        });
        assert!(halt.is_none());
    }

    #[test]
    fn harmonic_check_on_interpolant() {
        // the interpolant tracks the solution between steps
        let m = ellipsoid(DyonPair::new(0.0, 0.0, 0.2, -0.2));
        let s0 = PhasePoint::surface(0.1, 0.2, 0.0, 0.5);
        let coarse = integrate_with(
            &m,
            &s0,
            5.0,
            &IntegratorSettings::new(1e-11).with_sampling(Sampling::Uniform(101)),
        )
        .unwrap();
        let fine = integrate_with(
            &m,
            &s0,
            5.0,
            &IntegratorSettings::new(1e-13).with_sampling(Sampling::Uniform(101)),
        )
        .unwrap();
        assert_eq!(coarse.samples.len(), 101);
        for (a, b) in coarse.samples.iter().zip(&fine.samples) {
            assert_eq!(a.t, b.t);
            let (ua, _) = a.state.surface_coords().unwrap();
            let (ub, _) = b.state.surface_coords().unwrap();
            assert!((ua - ub).abs() < 1e-8);
        }
    }

    #[test]
    fn p_phi_is_never_stepped() {
        let m = ellipsoid(DyonPair::new(0.1, 0.1, 0.3, -0.3));
        let tr = integrate(&m, &PhasePoint::surface(0.0, 0.5, 0.0, 0.7), 20.0, 1e-10).unwrap();
        let rep = conservation_report(&tr);
        assert_eq!(rep.max_pphi_drift, 0.0);
        assert!(rep.max_energy_drift < 1e-8);
    }

    #[test]
    fn single_sample_report_is_zero() {
        let m = ellipsoid(DyonPair::zero());
        let s0 = PhasePoint::surface(0.0, 0.5, 0.0, 0.7);
        let tr = Trajectory {
            samples: vec![Sample {
                t: 0.0,
                state: s0,
                energy: crate::model::energy(&m, &s0).unwrap(),
            }],
            meta: TrajectoryMeta {
                model: m.to_string(),
                initial: s0,
                settings: IntegratorSettings::new(1e-10),
                accepted_steps: 0,
                rejected_steps: 0,
            },
        };
        let rep = conservation_report(&tr);
        assert_eq!((rep.max_energy_drift, rep.max_pphi_drift), (0.0, 0.0));
    }

    #[test]
    fn tolerance_range_is_enforced() {
        let m = ellipsoid(DyonPair::zero());
        let s0 = PhasePoint::surface(0.0, 0.5, 0.0, 0.7);
        assert_eq!(
            integrate(&m, &s0, 1.0, 1e-2).unwrap_err().kind(),
            "InvalidParameter"
        );
        assert_eq!(
            integrate(&m, &s0, 1.0, 1e-15).unwrap_err().kind(),
            "InvalidParameter"
        );
    }
}
