mod common;

use capax::geometry::{unit_ball_volume, Manifold};
use common::{builtins, manifolds, q, rel};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sphere_area_is_monotone(m in manifolds(2..=5), a in 1e-3f64..10.0, b in 1e-3f64..10.0) {
        let (t1, t2) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(m.sphere_area(t1).unwrap() <= m.sphere_area(t2).unwrap());
    }

    #[test]
    fn dominates_the_flat_model(m in manifolds(2..=5), t in 1e-3f64..8.0) {
        let n = m.n();
        let nu = unit_ball_volume(m.dim().get() as i64).unwrap();
        let w = m.profile().warp_eval(t).unwrap();
        prop_assert!(w.phi >= t * (1.0 - 1e-15));
        prop_assert!(m.sphere_area(t).unwrap() >= n * nu * t.powf(n - 1.0) * (1.0 - 1e-14));
        prop_assert!(m.ball_volume(t, &q()).unwrap() >= nu * t.powf(n) * (1.0 - 1e-12));
    }

    #[test]
    fn inverse_volume_round_trip(m in manifolds(2..=4), x in -3.0f64..1.0) {
        let r = 10f64.powf(x);
        let v = m.ball_volume(r, &q()).unwrap();
        let back = m.inverse_volume(v, &q()).unwrap();
        prop_assert!(rel(back, r) <= 10.0 * q().rel_tol, "{r} -> {back}");
    }
}

#[test]
fn small_balls_look_flat() {
    for n in 2..=5 {
        let nu = unit_ball_volume(n as i64).unwrap();
        for m in builtins(n) {
            let r = 1e-4;
            let ratio = m.ball_volume(r, &q()).unwrap() / (nu * r.powi(n as i32));
            assert!((1.0 - 1e-14..=1.0 + 1e-6).contains(&ratio), "n={n}: {ratio}");
        }
    }
}

#[test]
fn round_trip_up_to_the_horizon() {
    let m = Manifold::euclidean(3).unwrap();
    let mut r = 1e-3;
    while r <= m.t_max() {
        let back = m.inverse_volume(m.ball_volume(r, &q()).unwrap(), &q()).unwrap();
        assert!(rel(back, r) <= 10.0 * q().rel_tol, "{r} -> {back}");
        r *= 3.0;
    }
}

#[test]
fn example_values() {
    use std::f64::consts::PI;
    let e3 = Manifold::euclidean(3).unwrap();
    assert!(rel(e3.sphere_area(2.0).unwrap(), 16.0 * PI) < 1e-14);
    assert!(rel(e3.ball_volume(1.0, &q()).unwrap(), 4.0 * PI / 3.0) < 1e-12);
    let e2 = Manifold::euclidean(2).unwrap();
    assert!(rel(e2.inverse_volume(PI, &q()).unwrap(), 1.0) < 1e-10);
    assert!(rel(e3.inverse_volume(PI / 6.0, &q()).unwrap(), 0.5) < 1e-10);
}
