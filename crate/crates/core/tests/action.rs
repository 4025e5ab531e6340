use quadric_landau::action::{
    action_i1_appell, action_i1_quadrature, action_i2, ActionMethod, ArgumentReading, TurningInput,
};
use quadric_landau::dynamics::measure_radial_period;
use quadric_landau::hjq::{bound_band, effective_minimum};
use quadric_landau::{
    make_model, radial_momentum_squared, Background, Dimensionality, DyonPair, Error,
    ParabolicBackground, PhasePoint, SurfaceModel, SurfaceSpec,
};

fn reducible(a: f64, e: f64, q: f64, g: f64) -> SurfaceModel {
    make_model(
        SurfaceSpec::Ellipsoid { a, e },
        Background::Dyons(DyonPair::new(q, q, g, -g)),
        Dimensionality::Surface2D,
    )
    .unwrap()
}

fn i1(m: &SurfaceModel, en: f64, pp: f64) -> f64 {
    action_i1_quadrature(m, en, pp).unwrap().i1
}

#[test]
fn i1_increases_with_energy() {
    let m = reducible(1.0, 0.5, 0.3, 0.2);
    let (_, e_min) = effective_minimum(&m, 0.4).unwrap();
    let mut last = 0.0;
    for k in 1..=12 {
        let v = i1(&m, e_min + 0.25 * k as f64, 0.4);
        assert!(v > last);
        last = v;
    }
}

#[test]
fn i1_vanishes_at_the_well_bottom() {
    let m = reducible(1.0, 0.5, 0.3, 0.2);
    let (_, e_min) = effective_minimum(&m, 0.4).unwrap();
    let r = action_i1_quadrature(&m, e_min, 0.4).unwrap();
    assert_eq!(r.i1, 0.0);
    assert!(r.radial_frequency > 0.0);
    let tiny = i1(&m, e_min + 1e-6, 0.4);
    assert!(tiny > 0.0 && tiny < 1e-5);
}

#[test]
fn action_frequency_relation() {
    for (m, en, pp) in [
        (reducible(1.0, 0.5, 0.3, 0.2), 2.0, 0.4),
        (reducible(1.4, 0.7, -0.3, 0.1), 1.2, -0.6),
        (reducible(0.9, 0.3, 0.0, 0.0), 3.0, 0.8),
    ] {
        let r = action_i1_quadrature(&m, en, pp).unwrap();
        let band = bound_band(&m, en, pp).unwrap();
        let u0 = 0.5 * (band.lo + band.hi);
        let p_u = radial_momentum_squared(&m, u0, en, pp).unwrap().sqrt();
        let measured = measure_radial_period(&m, &PhasePoint::surface(u0, p_u, 0.0, pp))
            .unwrap()
            .period;
        assert!(
            (r.radial_period() - measured).abs() < 1e-4 * measured,
            "{m}: {} vs {measured}",
            r.radial_period()
        );
    }
}

#[test]
fn appell_closed_form_on_a_grid() {
    let mut cases = 0;
    for (q, g) in [
        (0.0, 0.0),
        (0.3, 0.2),
        (-0.25, 0.15),
        (0.4, -0.3),
        (0.1, 0.35),
    ] {
        let m = reducible(1.0, 0.5, q, g);
        for (en, pp) in [(1.5, 0.3), (2.5, -0.5), (4.0, 0.9), (2.0, 0.1)] {
            let cmp = action_i1_appell(&m, en, pp).unwrap();
            cases += 1;
            let products = cmp
                .readings
                .iter()
                .find(|r| {
                    r.turning == TurningInput::Oracle && r.reading == ArgumentReading::Products
                })
                .unwrap();
            assert!(
                products.matches,
                "q = {q}, g = {g}, E = {en}, p_phi = {pp}: {:?}",
                products.relative_deviation
            );
            let literal = cmp
                .readings
                .iter()
                .find(|r| {
                    r.turning == TurningInput::Oracle && r.reading == ArgumentReading::Literal
                })
                .unwrap();
            assert!(!literal.matches);
            let appell = cmp.appell.unwrap();
            assert_eq!(appell.method, ActionMethod::Appell);
            assert!((appell.i1 - cmp.quadrature.i1).abs() < 1e-6 * cmp.quadrature.i1);
            if q == 0.0 && g == 0.0 {
                let closed = cmp
                    .readings
                    .iter()
                    .find(|r| {
                        r.turning == TurningInput::ClosedForm
                            && r.reading == ArgumentReading::Products
                    })
                    .unwrap();
                assert!(closed.matches);
            }
        }
    }
    assert_eq!(cases, 20);
}

#[test]
fn i1_scales_with_the_dimensional_parameters() {
    let (a, e, q, g, en, pp) = (1.0, 0.5, 0.3, 0.2, 2.0, 0.4);
    let base = i1(&reducible(a, e, q, g), en, pp);
    for lambda in [0.5, 2.0, 3.0] {
        // lengths and charges together at fixed energy: p_eta and I1 scale by lambda
        let scaled = i1(
            &reducible(lambda * a, e, lambda * q, lambda * g),
            en,
            lambda * pp,
        );
        assert!((scaled - lambda * base).abs() < 1e-9 * lambda * base);
        // a -> lambda a, E -> E / lambda^2, q -> q / lambda leaves I1 unchanged
        let same = i1(
            &reducible(lambda * a, e, q / lambda, g),
            en / (lambda * lambda),
            pp,
        );
        assert!((same - base).abs() < 1e-9 * base);
    }
}

#[test]
fn unbounded_surfaces_have_no_actions() {
    let hyp = make_model(
        SurfaceSpec::Hyperboloid { a: 1.0, e: 2.0 },
        Background::Dyons(DyonPair::new(0.3, -0.3, 0.2, 0.2)),
        Dimensionality::Surface2D,
    )
    .unwrap();
    let par = make_model(
        SurfaceSpec::Paraboloid { p: 1.0 },
        Background::Uniform(ParabolicBackground::new(0.3, 0.2, 0.0, 0.0)),
        Dimensionality::Surface2D,
    )
    .unwrap();
    for m in [hyp, par] {
        assert!(matches!(
            action_i1_quadrature(&m, 2.0, 0.4),
            Err(Error::NoBoundMotion(_))
        ));
        assert!(matches!(
            action_i1_appell(&m, 2.0, 0.4),
            Err(Error::NoBoundMotion(_))
        ));
    }
}

#[test]
fn i2_is_the_azimuthal_momentum() {
    assert_eq!(action_i2(0.0), 0.0);
    assert_eq!(action_i2(0.7), 0.7);
    assert_eq!(action_i2(-1.3), -1.3);
}
