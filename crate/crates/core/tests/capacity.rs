mod common;

use capax::capacity::{ball_capacity, capacitary_potential, Condenser, Exponent, PotentialForm, Regime};
use capax::geometry::Manifold;
use capax::oracle::{discrete_energy, geometric_nodes, DiscreteProfile};
use common::{builtins, manifolds, q, rel};
use proptest::prelude::*;

fn cap(m: &Manifold, p: Exponent, r: f64, big_r: f64) -> f64 {
    ball_capacity(m, p, Condenser::new(r, big_r).unwrap(), &q()).unwrap().value
}

#[test]
fn finite_regime_near_one_matches_p_one() {
    for n in 2..=4 {
        let m = Manifold::euclidean(n).unwrap();
        let c = Condenser::new(0.5, 1.5).unwrap();
        let near = ball_capacity(&m, Exponent::new(1.0 + 1e-6).unwrap(), c, &q()).unwrap();
        let one = ball_capacity(&m, Exponent::One, c, &q()).unwrap();
        assert!(rel(near.value, one.value) < 1e-3);
        assert_eq!(one.value, m.sphere_area(0.5).unwrap());
    }
}

#[test]
fn regimes() {
    let m = Manifold::euclidean(3).unwrap();
    let c = Condenser::new(0.5, 1.0).unwrap();
    let sub = ball_capacity(&m, Exponent::new(0.5).unwrap(), c, &q()).unwrap();
    assert_eq!((sub.value, sub.regime), (0.0, Regime::SubOne));
    let inf = ball_capacity(&m, Exponent::Infinity, c, &q()).unwrap();
    assert!(rel(inf.value, 2.0) < 1e-15);
    assert!(Condenser::new(1.0, 0.5).is_err());
}

#[test]
fn euclidean_scaling() {
    for n in 2..=4 {
        let m = Manifold::euclidean(n).unwrap();
        for p in [1.5, 2.0, 3.0] {
            let base = cap(&m, Exponent::Finite(p), 0.3, 1.2);
            for lambda in [0.5, 2.0] {
                let scaled = cap(&m, Exponent::Finite(p), 0.3 * lambda, 1.2 * lambda);
                assert!(rel(scaled, lambda.powf(n as f64 - p) * base) < 1e-8, "n={n} p={p}");
            }
        }
    }
}

#[test]
fn p_to_infinity_limit() {
    for n in 2..=4 {
        for m in builtins(n) {
            let c = ball_capacity(&m, Exponent::Finite(200.0), Condenser::new(0.5, 1.0).unwrap(), &q()).unwrap();
            let root = (c.ln_value / 200.0).exp();
            assert!(rel(root, 2.0) <= 0.02, "{root}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn increasing_in_r_decreasing_in_big_r(
        m in manifolds(2..=5),
        p in prop_oneof![Just(1.0), 1.2f64..8.0],
        r1 in 0.05f64..1.0,
        dr in 0.01f64..0.5,
        gap in 0.6f64..2.0,
        dbig in 0.05f64..1.0,
    ) {
        let p = Exponent::new(p).unwrap();
        let (r2, big_r) = (r1 + dr, r1 + dr + gap);
        let base = cap(&m, p, r1, big_r);
        prop_assert!(cap(&m, p, r2, big_r) > base);
        if p != Exponent::One {
            prop_assert!(cap(&m, p, r1, big_r + dbig) < base);
        }
    }

    #[test]
    fn energy_of_the_potential(
        m in manifolds(2..=4),
        p in 1.3f64..6.0,
        r in 0.1f64..1.0,
        gap in 0.2f64..1.5,
    ) {
        let big_r = r + gap;
        let c = Condenser::new(r, big_r).unwrap();
        let exp = Exponent::Finite(p);
        let nodes = geometric_nodes(r, big_r, 4096);
        let values = nodes
            .iter()
            .map(|&t| capacitary_potential(&m, exp, PotentialForm::Bounded(c), t, &q()))
            .collect::<capax::Result<Vec<_>>>()
            .unwrap();
        let energy = discrete_energy(&m, p, &DiscreteProfile { nodes, values }).unwrap();
        prop_assert!(rel(energy, cap(&m, exp, r, big_r)) < 1e-3);
    }
}
