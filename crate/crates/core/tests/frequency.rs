mod common;

use capax::capacity::Exponent;
use capax::frequency::{frequency_report, mazya_constant, rayleigh_oracle, RayleighSettings, DEFAULT_PROXY_ORDER};
use capax::geometry::Manifold;
use common::{builtins, q, rel};
use std::f64::consts::PI;

fn settings() -> RayleighSettings {
    RayleighSettings {
        intervals: 512,
        seed: 11,
        ..RayleighSettings::default()
    }
}

#[test]
fn oracle_reproduces_bessel_zeros() {
    let e3 = Manifold::euclidean(3).unwrap();
    let l = rayleigh_oracle(&e3, 2.0, 1.0, &RayleighSettings::default()).unwrap();
    assert!(rel(l.lambda, PI * PI) < 1e-3, "{l:?}");
    let e2 = Manifold::euclidean(2).unwrap();
    let l = rayleigh_oracle(&e2, 2.0, 1.0, &RayleighSettings::default()).unwrap();
    assert!(rel(l.lambda, 5.783_185_962_946_784) < 1e-3, "{l:?}");
}

#[test]
fn isoperimetric_constant_at_p_one() {
    for n in [2u32, 3, 4] {
        let m = Manifold::euclidean(n).unwrap();
        for big_r in [0.5, 1.0, 2.0] {
            let g = mazya_constant(&m, Exponent::One, big_r, &q()).unwrap();
            assert!(rel(g.gamma, n as f64 / big_r) < 1e-9);
        }
    }
}

#[test]
fn maz_ya_sandwich_and_lower_bound() {
    for n in [2u32, 3] {
        for m in builtins(n) {
            for p in [1.0, 1.5, 2.0, 4.0, 8.0] {
                let p = if p == 1.0 { Exponent::One } else { Exponent::Finite(p) };
                let rep = frequency_report(&m, p, 1.0, &q(), &settings(), DEFAULT_PROXY_ORDER).unwrap();
                assert!(rep.sandwich_ok && rep.bound_ok, "{rep:?}");
            }
        }
    }
}

#[test]
fn normalised_frequency_increases_with_p() {
    let m = Manifold::hyperbolic(2).unwrap();
    let values: Vec<f64> = [1.5, 2.0, 3.0, 4.0, 6.0, 8.0]
        .iter()
        .map(|&p| p * rayleigh_oracle(&m, p, 1.0, &settings()).unwrap().lambda.powf(1.0 / p))
        .collect();
    for w in values.windows(2) {
        assert!(w[1] > w[0], "{values:?}");
    }
}

#[test]
fn infinity_proxy_decreases_toward_the_inverse_radius() {
    for n in [2u32, 3] {
        let m = Manifold::euclidean(n).unwrap();
        let mut last = f64::INFINITY;
        for order in [10.0, 25.0, 50.0, 100.0, 200.0] {
            let g = mazya_constant(&m, Exponent::Finite(order), 1.0, &q()).unwrap();
            let proxy = (g.ln_gamma / order).exp();
            assert!(proxy >= 1.0 && proxy < last, "order {order}: {proxy}");
            last = proxy;
        }
        // the approach is slow: the gap at order 200 is still above 5%
        assert!(last - 1.0 > 0.05 && last - 1.0 < 0.1, "{last}");
        let rep = frequency_report(&m, Exponent::Infinity, 1.0, &q(), &settings(), DEFAULT_PROXY_ORDER).unwrap();
        assert!(rep.sandwich_ok && rep.bound_ok);
    }
}

#[test]
fn sub_one_exponents_are_rejected() {
    let m = Manifold::euclidean(3).unwrap();
    let err = frequency_report(&m, Exponent::new(0.5).unwrap(), 1.0, &q(), &settings(), DEFAULT_PROXY_ORDER).unwrap_err();
    assert!(err.to_string().contains("frequency requires p"));
}
