use quadric_landau::dynamics::{measure_radial_period, measure_radial_period_with, PeriodOptions};
use quadric_landau::hjq::{
    allowed_bands, b_constants_derived, b_constants_fitted, bound_band, effective_minimum,
    orbit_quadrature, radial_cycle, turning_points_oracle, QuadraticSource,
};
use quadric_landau::{
    make_model, radial_momentum_squared, Background, Dimensionality, DyonPair, ParabolicBackground,
    PhasePoint, SurfaceModel, SurfaceSpec,
};

fn surface(spec: SurfaceSpec, bg: Background) -> SurfaceModel {
    make_model(spec, bg, Dimensionality::Surface2D).unwrap()
}

fn reducible_ellipsoid(a: f64, e: f64, q: f64, g: f64) -> SurfaceModel {
    surface(
        SurfaceSpec::Ellipsoid { a, e },
        Background::Dyons(DyonPair::new(q, q, g, -g)),
    )
}

/// Phase point in the middle of the first bound band.
fn start(m: &SurfaceModel, energy: f64, p_phi: f64) -> PhasePoint {
    let band = bound_band(m, energy, p_phi).unwrap();
    let u0 = 0.3 * band.lo + 0.7 * band.hi;
    let p2 = radial_momentum_squared(m, u0, energy, p_phi).unwrap();
    PhasePoint::surface(u0, p2.sqrt(), 0.0, p_phi)
}

#[test]
fn quadrature_period_and_advance_match_integration() {
    let configs = [
        (reducible_ellipsoid(1.0, 0.5, 0.3, 0.2), 2.0, 0.4),
        (reducible_ellipsoid(1.3, 0.6, -0.4, 0.5), 3.0, -0.7),
        (reducible_ellipsoid(0.8, 0.3, 0.0, 0.0), 1.0, 0.5),
        (reducible_ellipsoid(2.0, 0.8, 0.5, -0.3), 1.5, 1.2),
    ];
    for (m, en, pp) in configs {
        let s0 = start(&m, en, pp);
        let (u0, _) = s0.surface_coords().unwrap();
        let quad = radial_cycle(&m, en, pp, u0).unwrap();
        let ode = measure_radial_period(&m, &s0).unwrap();
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
        assert!(
            rel(quad.period, ode.period) < 1e-6,
            "{m}: {} vs {}",
            quad.period,
            ode.period
        );
        assert!(
            rel(quad.phi_advance, ode.phi_advance) < 1e-6,
            "{m}: {} vs {}",
            quad.phi_advance,
            ode.phi_advance
        );
    }
}

#[test]
fn general_ellipsoid_quadrature_matches_integration() {
    let m = surface(
        SurfaceSpec::Ellipsoid { a: 1.0, e: 0.5 },
        Background::Dyons(DyonPair::new(0.3, 0.1, 0.2, -0.5)),
    );
    let s0 = start(&m, 2.0, 0.4);
    let quad = radial_cycle(&m, 2.0, 0.4, s0.surface_coords().unwrap().0).unwrap();
    let ode = measure_radial_period(&m, &s0).unwrap();
    assert!((quad.period - ode.period).abs() < 1e-6 * ode.period);
    assert!((quad.phi_advance - ode.phi_advance).abs() < 1e-6 * ode.phi_advance.abs());
}

#[test]
fn paraboloid_quadrature_matches_integration() {
    let m = surface(
        SurfaceSpec::Paraboloid { p: 1.0 },
        Background::Uniform(ParabolicBackground::new(0.3, 0.2, 0.1, 0.4)),
    );
    let s0 = start(&m, 2.0, 0.4);
    let quad = radial_cycle(&m, 2.0, 0.4, s0.surface_coords().unwrap().0).unwrap();
    let ode = measure_radial_period(&m, &s0).unwrap();
    assert!((quad.period - ode.period).abs() < 1e-6 * ode.period);
    assert!((quad.phi_advance - ode.phi_advance).abs() < 1e-6 * ode.phi_advance.abs());
}

#[test]
fn oracle_turning_points_match_integration() {
    for (m, en, pp) in [
        (reducible_ellipsoid(1.0, 0.5, 0.3, 0.2), 2.0, 0.4),
        (reducible_ellipsoid(1.0, 0.7, 0.1, -0.2), 0.9, 0.3),
    ] {
        let tp = turning_points_oracle(&m, en, pp).unwrap();
        let opts = PeriodOptions {
            oscillations: 3,
            ..PeriodOptions::default()
        };
        let ode = measure_radial_period_with(&m, &start(&m, en, pp), &opts).unwrap();
        let (lo, hi) = tp.u_band.unwrap();
        assert!(
            (ode.u_turning.0 - lo).abs() < 1e-8,
            "{} vs {lo}",
            ode.u_turning.0
        );
        assert!(
            (ode.u_turning.1 - hi).abs() < 1e-8,
            "{} vs {hi}",
            ode.u_turning.1
        );
        assert!((ode.x_turning.0 - tp.a_minus).abs() < 1e-8);
    }
}

#[test]
fn oracle_a_minus_lies_in_the_unit_interval() {
    for q in [-0.4, 0.0, 0.3] {
        for g in [-0.3, 0.0, 0.25] {
            let m = reducible_ellipsoid(1.0, 0.6, q, g);
            for en in [1.0, 2.0, 4.0] {
                for pp in [0.2, 0.6, -0.5] {
                    let Ok(tp) = turning_points_oracle(&m, en, pp) else {
                        continue;
                    };
                    // in y = 1 - x, the inner root is the closed-form a_-
                    let y_minus = 1.0 - tp.a_minus;
                    assert!(y_minus > 0.0 && y_minus < 1.0);
                    let rq = b_constants_derived(&m, en, pp).unwrap();
                    let (x_lo, _) = rq.roots().unwrap();
                    assert!(1.0 - x_lo > 1.0, "a_+ must exceed 1");
                }
            }
        }
    }
}

#[test]
fn free_form_reduction_on_every_surface() {
    let models = [
        reducible_ellipsoid(1.0, 0.5, 0.3, 0.2),
        surface(
            SurfaceSpec::Hyperboloid { a: 1.0, e: 2.0 },
            Background::Dyons(DyonPair::new(0.3, -0.3, 0.2, 0.2)),
        ),
        surface(
            SurfaceSpec::Paraboloid { p: 1.5 },
            Background::Uniform(ParabolicBackground::new(-0.3, 0.4, 0.0, 0.0)),
        ),
    ];
    for m in models {
        for en in [0.8, 1.5, 3.0] {
            for pp in [-0.6, 0.2, 0.9] {
                let d = b_constants_derived(&m, en, pp).unwrap();
                assert_eq!(d.source, QuadraticSource::Derived);
                let f = b_constants_fitted(&m, en, pp).unwrap();
                assert!(f.residual < 1e-12, "{m}: residual {}", f.residual);
                let (lo, hi) = d.x_domain;
                for band in allowed_bands(&m, en, pp).unwrap() {
                    for x in band.x_roots(&m) {
                        assert!(x >= lo && x <= hi);
                        assert!(
                            d.eval(x).abs() < 1e-10 * (1.0 + x * x),
                            "{m}: Q({x}) = {}",
                            d.eval(x)
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn period_tends_to_the_harmonic_limit() {
    let m = reducible_ellipsoid(1.0, 0.5, 0.3, 0.2);
    let pp = 0.4;
    let (u_star, e_min) = effective_minimum(&m, pp).unwrap();
    let ev = m.evaluator(pp);
    let h = 1e-4;
    let v = |u: f64| ev.effective_potential(u).unwrap();
    let curvature = (v(u_star + h) - 2.0 * v(u_star) + v(u_star - h)) / (h * h);
    let alpha = ev.kinetic_coefficient(u_star).unwrap();
    let harmonic = 2.0 * std::f64::consts::PI / (2.0 * alpha * curvature).sqrt();
    let mut last = f64::INFINITY;
    for k in 1..4 {
        let de = 10f64.powi(-2 * k) * e_min.abs().max(1.0);
        let cyc = radial_cycle(&m, e_min + de, pp, u_star).unwrap();
        let dev = (cyc.period - harmonic).abs() / harmonic;
        assert!(dev < last, "deviation grew: {dev}");
        last = dev;
    }
    assert!(last < 1e-5, "limit not approached: {last}");
}

#[test]
fn reversed_interval_gives_the_same_magnitudes() {
    let m = reducible_ellipsoid(1.0, 0.5, 0.3, 0.2);
    let band = bound_band(&m, 2.0, 0.4).unwrap();
    let a = orbit_quadrature(&m, 2.0, 0.4, band.lo, 0.2).unwrap();
    let b = orbit_quadrature(&m, 2.0, 0.4, 0.2, band.lo).unwrap();
    assert_eq!(a, b);
}

#[test]
fn free_substitution_identity() {
    // the x = 1 - eta^2 integrand with the printed free constants reproduces
    // the oracle p_eta^2 at matched points
    let m = surface(SurfaceSpec::Ellipsoid { a: 1.2, e: 0.45 }, Background::Free);
    let (en, pp) = (1.7, 0.55);
    let rq = quadric_landau::hjq::b_constants(&m, en, pp).unwrap();
    for k in 1..40 {
        let eta = -0.975 + 1.95 * k as f64 / 40.0;
        let oracle = radial_momentum_squared(&m, eta, en, pp).unwrap();
        let from_b = rq.momentum_squared(&m, en, eta);
        assert!(
            (oracle - from_b).abs() < 1e-12 * oracle.abs().max(1.0),
            "{eta}: {oracle} vs {from_b}"
        );
    }
}
