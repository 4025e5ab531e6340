use quadric_landau::dynamics::{
    conservation_report, integrate, integrate_with, measure_radial_period, IntegratorSettings,
    Sampling,
};
use quadric_landau::hjq::bound_band;
use quadric_landau::{
    energy, make_model, radial_momentum_squared, Background, Dimensionality, DyonPair,
    ParabolicBackground, PhasePoint, SurfaceModel, SurfaceSpec,
};

fn ellipsoid(q1: f64, q2: f64, g1: f64, g2: f64) -> SurfaceModel {
    make_model(
        SurfaceSpec::Ellipsoid { a: 1.0, e: 0.5 },
        Background::Dyons(DyonPair::new(q1, q2, g1, g2)),
        Dimensionality::Surface2D,
    )
    .unwrap()
}

fn bound_start(m: &SurfaceModel, en: f64, pp: f64) -> PhasePoint {
    let band = bound_band(m, en, pp).unwrap();
    let u0 = 0.5 * (band.lo + band.hi);
    PhasePoint::surface(
        u0,
        radial_momentum_squared(m, u0, en, pp).unwrap().sqrt(),
        0.0,
        pp,
    )
}

/// Local errors of size `tol |p_u|` accumulate over the run; a few percent of
/// random configurations end slightly above `1e-8` at this tolerance.
#[test]
fn energy_drift_over_fifty_periods() {
    for m in [
        ellipsoid(-0.2, -0.2, 0.4, -0.4),
        ellipsoid(0.3, 0.1, 0.2, -0.1),
        ellipsoid(0.3, 0.3, 0.2, -0.2),
    ] {
        let s0 = bound_start(&m, 2.0, 0.4);
        let period = measure_radial_period(&m, &s0).unwrap().period;
        let tr = integrate(&m, &s0, 55.0 * period, 1e-10).unwrap();
        let rep = conservation_report(&tr);
        assert!(
            rep.max_energy_drift < 2e-8,
            "{m}: drift {}",
            rep.max_energy_drift
        );
        assert_eq!(rep.max_pphi_drift, 0.0);
    }
}

#[test]
fn time_reversal_without_magnetic_charges() {
    let m = ellipsoid(0.3, -0.2, 0.0, 0.0);
    let s0 = bound_start(&m, 2.0, 0.4);
    let settings = IntegratorSettings::new(1e-12).with_sampling(Sampling::Uniform(2));
    let fwd = integrate_with(&m, &s0, 7.3, &settings).unwrap();
    let end = fwd.samples.last().unwrap().state;
    let back = integrate_with(&m, &end.reversed(), 7.3, &settings).unwrap();
    let fin = back.samples.last().unwrap().state;
    let (u0, p0) = s0.surface_coords().unwrap();
    let (u1, p1) = fin.surface_coords().unwrap();
    assert!((u1 - u0).abs() < 1e-8);
    assert!((p1 + p0).abs() < 1e-8);
    let dphi = (fin.phi - s0.phi).rem_euclid(std::f64::consts::TAU);
    assert!(dphi.min(std::f64::consts::TAU - dphi) < 1e-8);
}

#[test]
fn uniform_sampling_covers_the_interval() {
    let m = ellipsoid(0.3, 0.3, 0.2, -0.2);
    let s0 = bound_start(&m, 2.0, 0.4);
    let tr = integrate_with(
        &m,
        &s0,
        10.0,
        &IntegratorSettings::new(1e-10).with_sampling(Sampling::Uniform(11)),
    )
    .unwrap();
    assert_eq!(tr.samples.len(), 11);
    for (k, s) in tr.samples.iter().enumerate() {
        assert!((s.t - k as f64).abs() < 1e-12);
        assert!((s.energy - 2.0).abs() < 1e-8);
    }
}

#[test]
fn ambient_motion_conserves_energy() {
    let m = make_model(
        SurfaceSpec::Ellipsoid { a: 1.0, e: 0.5 },
        Background::Dyons(DyonPair::new(1.0, 0.5, 0.2, 0.1)),
        Dimensionality::Ambient3D,
    )
    .unwrap();
    let s0 = PhasePoint::ambient(2.0, 0.1, 0.3, -0.2, 0.0, 0.4);
    let tr = integrate(&m, &s0, 5.0, 1e-10).unwrap();
    let rep = conservation_report(&tr);
    assert!(
        rep.max_energy_drift < 2e-8,
        "drift {}",
        rep.max_energy_drift
    );
}

#[test]
fn paraboloid_motion_conserves_energy() {
    let m = make_model(
        SurfaceSpec::Paraboloid { p: 1.0 },
        Background::Uniform(ParabolicBackground::new(0.3, 0.2, 0.1, 0.4)),
        Dimensionality::Surface2D,
    )
    .unwrap();
    let s0 = bound_start(&m, 2.0, 0.4);
    let e0 = energy(&m, &s0).unwrap();
    let tr = integrate(&m, &s0, 30.0, 1e-10).unwrap();
    for s in &tr.samples {
        assert!((s.energy - e0).abs() < 1e-8 * e0.abs());
    }
}

#[test]
fn bad_settings_are_rejected() {
    let m = ellipsoid(0.3, 0.3, 0.2, -0.2);
    let s0 = bound_start(&m, 2.0, 0.4);
    assert!(integrate(&m, &s0, 1.0, 1e-20).is_err());
    assert!(integrate(&m, &s0, -1.0, 1e-10).is_err());
    assert!(integrate(&m, &PhasePoint::surface(1.5, 0.0, 0.0, 0.4), 1.0, 1e-10).is_err());
}
