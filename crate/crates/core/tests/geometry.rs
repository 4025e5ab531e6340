use proptest::prelude::*;
use quadric_landau::geometry::{
    cylindrical_to_elliptic, cylindrical_to_parabolic, elliptic_to_cylindrical,
    parabolic_to_cylindrical, CylPoint, EllipticPoint, ParabolicPoint,
};

proptest! {
    #[test]
    fn elliptic_roundtrip(xi in 1.0f64..20.0, eta in -1.0f64..=1.0, phi in -10.0f64..10.0, a in 0.1f64..5.0) {
        let p = EllipticPoint::new(xi, eta, phi, a).unwrap();
        let back = cylindrical_to_elliptic(&elliptic_to_cylindrical(&p), a).unwrap();
        prop_assert!((back.xi - xi).abs() <= 1e-12 * xi);
        prop_assert!((back.eta - eta).abs() <= 1e-12);
        prop_assert_eq!(back.phi, p.phi);
    }

    #[test]
    fn cylindrical_roundtrip_through_elliptic(rho in 0.0f64..10.0, z in -10.0f64..10.0, a in 0.1f64..5.0) {
        let c = CylPoint::new(rho, z, 1.0).unwrap();
        let back = elliptic_to_cylindrical(&cylindrical_to_elliptic(&c, a).unwrap());
        let scale = rho.hypot(z).max(a);
        prop_assert!((back.rho - rho).abs() <= 1e-12 * scale);
        prop_assert!((back.z - z).abs() <= 1e-12 * scale);
    }

    #[test]
    fn parabolic_roundtrip(xi in 0.0f64..50.0, eta in 0.0f64..50.0, phi in 0.0f64..6.0) {
        let p = ParabolicPoint::new(xi, eta, phi).unwrap();
        let back = cylindrical_to_parabolic(&parabolic_to_cylindrical(&p));
        let scale = xi.max(eta).max(1.0);
        prop_assert!((back.xi - xi).abs() <= 1e-12 * scale);
        prop_assert!((back.eta - eta).abs() <= 1e-12 * scale);
    }

    #[test]
    fn ellipsoid_points_satisfy_the_quadric(eta in -1.0f64..=1.0, e in 0.05f64..0.95, a in 0.2f64..3.0) {
        let c = elliptic_to_cylindrical(&EllipticPoint::new(1.0 / e, eta, 0.0, a).unwrap());
        let (sa, sb) = (a * a * (1.0 / (e * e) - 1.0), a * a / (e * e));
        prop_assert!((c.rho * c.rho / sa + c.z * c.z / sb - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hyperboloid_points_satisfy_the_quadric(xi in 1.0f64..10.0, e in 1.05f64..5.0, a in 0.2f64..3.0) {
        let c = elliptic_to_cylindrical(&EllipticPoint::new(xi, 1.0 / e, 0.0, a).unwrap());
        let (sa, sb) = (a * a * (1.0 - 1.0 / (e * e)), a * a / (e * e));
        let lhs = c.z * c.z / sb - c.rho * c.rho / sa;
        prop_assert!((lhs - 1.0).abs() < 1e-12 * (1.0 + c.z * c.z / sb));
    }

    #[test]
    fn paraboloid_points_satisfy_the_quadric(xi in 0.0f64..20.0, p in 0.1f64..5.0) {
        let c = parabolic_to_cylindrical(&ParabolicPoint::new(xi, 0.5 * p, 0.0).unwrap());
        prop_assert!((c.rho * c.rho - p * c.z - 0.25 * p * p).abs() < 1e-12 * (1.0 + c.rho * c.rho));
    }
}

#[test]
fn foci_and_axis_map_to_chart_edges() {
    let a = 1.5;
    let focus = cylindrical_to_elliptic(&CylPoint::new(0.0, a, 0.0).unwrap(), a).unwrap();
    assert_eq!((focus.xi, focus.eta), (1.0, 1.0));
    let centre = cylindrical_to_elliptic(&CylPoint::new(0.0, 0.0, 0.0).unwrap(), a).unwrap();
    assert_eq!((centre.xi, centre.eta), (1.0, 0.0));
    let origin = cylindrical_to_parabolic(&CylPoint::new(0.0, 0.0, 0.0).unwrap());
    assert_eq!((origin.xi, origin.eta), (0.0, 0.0));
}

#[test]
fn invalid_points_are_rejected() {
    assert!(EllipticPoint::new(0.5, 0.0, 0.0, 1.0).is_err());
    assert!(EllipticPoint::new(2.0, 1.5, 0.0, 1.0).is_err());
    assert!(EllipticPoint::new(2.0, 0.0, 0.0, -1.0).is_err());
    assert!(ParabolicPoint::new(-1.0, 0.0, 0.0).is_err());
    assert!(CylPoint::new(-0.1, 0.0, 0.0).is_err());
    assert!(CylPoint::new(1.0, f64::NAN, 0.0).is_err());
}
