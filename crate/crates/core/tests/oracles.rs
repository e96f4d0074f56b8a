use lawson_core::constants::slab_volume;
use lawson_core::montecarlo::{cone_area_mc, slab_volume_mc, DEFAULT_SEED};
use lawson_core::profile::RadialProfile;
use lawson_core::quadrature::GaussRule;
use lawson_core::spectrum::quadratic_form;
use lawson_core::variation::{
    axisym_perimeter, axisym_volume, normal_graph, window_cone_radius, AxisymRegion, ProfileCurve, QuadSpec,
};
use lawson_core::ConeParams;

fn chart(cone: &ConeParams, r: f64, s: f64) -> [f64; 2] {
    let (t, n) = (cone.tangent(), cone.normal());
    [r * t[0] + s * n[0], r * t[1] + s * n[1]]
}

#[test]
fn cone_area_matches_monte_carlo() {
    let cone = ConeParams::new(3, 5).unwrap();
    let rw = window_cone_radius(&cone, 1.0);
    let exact = axisym_perimeter(&ProfileCurve::cone_line(cone, 2.0 * rw), 1.0, QuadSpec::default()).unwrap();
    let mc = cone_area_mc(&cone, 1.0, 0.005, 2_000_000, DEFAULT_SEED).unwrap();
    assert!(mc.within(exact, 3.0), "{exact} vs {mc:?}");
}

#[test]
fn slab_volume_matches_monte_carlo_in_dimension_nine() {
    let cone = ConeParams::new(2, 7).unwrap();
    let exact = slab_volume(&cone, 1.0, 0.1);
    let mc = slab_volume_mc(&cone, 1.0, 0.1, 4_000_000, DEFAULT_SEED).unwrap();
    assert!(mc.within(exact, 3.0), "{exact} vs {mc:?}");
}

/// The region between the graph and the cone line as an explicit polygon.
fn graph_polygon(cone: &ConeParams, phi: &RadialProfile, t: f64, n: usize) -> Vec<[f64; 2]> {
    let (a, b) = phi.support();
    let mut pts: Vec<[f64; 2]> = (0..=n)
        .map(|i| {
            let r = a + (b - a) * i as f64 / n as f64;
            chart(cone, r, t * phi.value(r))
        })
        .collect();
    pts.push(chart(cone, b, 0.0));
    pts.push(chart(cone, a, 0.0));
    pts
}

#[test]
fn between_graph_volume_matches_polygon() {
    for cone in ConeParams::all_certified() {
        let rw = window_cone_radius(&cone, 1.0);
        let phi = RadialProfile::sine_squared(0.3 * rw, 0.8 * rw).unwrap();
        for t in [0.02, -0.04] {
            let quad = axisym_volume(&AxisymRegion::BetweenGraph { phi: phi.clone(), t }, &cone, QuadSpec::default()).unwrap();
            let poly = axisym_volume(&AxisymRegion::Polygon(graph_polygon(&cone, &phi, t, 4000)), &cone, QuadSpec::default()).unwrap();
            assert!((quad - poly).abs() < 1e-6 * quad, "{cone} t={t}: {quad} vs {poly}");
        }
    }
}

#[test]
fn graph_perimeter_matches_polyline() {
    for cone in ConeParams::all_certified() {
        let rw = window_cone_radius(&cone, 1.0);
        let phi = RadialProfile::poly_bump(0.3 * rw, 0.8 * rw).unwrap();
        let t = 0.05;
        let graph = normal_graph(&phi, t, cone, 1.0).unwrap();
        let smooth = axisym_perimeter(&graph, 1.0, QuadSpec::default()).unwrap();
        let (a, b) = phi.support();
        let n = 4000;
        let mut pts = vec![[0.0, 0.0]];
        pts.extend((0..=n).map(|i| {
            let r = a + (b - a) * i as f64 / n as f64;
            chart(&cone, r, t * phi.value(r))
        }));
        pts.push(chart(&cone, 2.0 * rw, 0.0));
        let line = ProfileCurve::polyline(cone, pts).unwrap();
        let poly = axisym_perimeter(&line, 1.0, QuadSpec::default()).unwrap();
        assert!((smooth - poly).abs() < 1e-6 * smooth, "{cone}: {smooth} vs {poly}");
    }
}

#[test]
fn quadratic_form_against_dense_quadrature() {
    let cone = ConeParams::new(3, 5).unwrap();
    let phi = RadialProfile::sine(0.5, 1.0).unwrap();
    let (q, n) = quadratic_form(&phi, &cone, &GaussRule::new(4), 64).unwrap();
    let (qd, nd) = quadratic_form(&phi, &cone, &GaussRule::new(4), 640).unwrap();
    assert!((q - qd).abs() < 1e-10 * qd.abs());
    assert!((n - nd).abs() < 1e-10 * nd);
    assert!(q / n >= cone.hardy_floor() / 1.0);
    assert_eq!(quadratic_form(&RadialProfile::sine_series(0.5, 1.0, vec![0.0]).unwrap(), &cone, &GaussRule::new(4), 8).unwrap(), (0.0, 0.0));
}
