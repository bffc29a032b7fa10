mod common;

use capax::capacity::{ball_capacity, Condenser, Exponent};
use capax::geometry::Manifold;
use capax::oracle::{discrete_condenser_energy, discrete_condenser_energy_from, euclidean_closed_form, Start};
use common::{builtins, q, rel};

const RADII: [(f64, f64); 2] = [(0.25, 1.0), (0.5, 2.0)];

#[test]
fn closed_forms_on_the_euclidean_matrix() {
    for n in 2..=4 {
        let m = Manifold::euclidean(n).unwrap();
        for p in [1.0, 1.5, 2.0, 3.0, 7.0, f64::INFINITY] {
            let p = Exponent::new(p).unwrap();
            for (r, big_r) in RADII {
                let quad = ball_capacity(&m, p, Condenser::new(r, big_r).unwrap(), &q()).unwrap();
                let closed = euclidean_closed_form(m.dim(), p, r, big_r).unwrap();
                assert!(rel(quad.value, closed) < 1e-9, "n={n} p={p} ({r},{big_r})");
            }
        }
    }
}

#[test]
fn discrete_energy_bounds_from_above_and_refines() {
    for n in [2, 3] {
        for m in builtins(n) {
            for p in [1.5, 3.0] {
                let c = Condenser::new(0.25, 1.0).unwrap();
                let exact = ball_capacity(&m, Exponent::Finite(p), c, &q()).unwrap().value;
                let mut previous = f64::INFINITY;
                for intervals in [256, 1024, 4096] {
                    let d = discrete_condenser_energy(&m, p, c, intervals).unwrap();
                    assert!(d.energy >= exact - 1e-12);
                    let gap = d.energy - exact;
                    assert!(gap < previous);
                    previous = gap;
                }
            }
        }
    }
}

#[test]
fn random_initialisations_agree() {
    let m = Manifold::hyperbolic(4).unwrap();
    let c = Condenser::new(0.5, 2.0).unwrap();
    for p in [1.5, 2.0, 3.0, 7.0] {
        let energies: Vec<f64> = (0..3)
            .map(|seed| discrete_condenser_energy_from(&m, p, c, 512, Start::Random(seed)).unwrap().energy)
            .collect();
        for e in &energies {
            assert!(rel(*e, energies[0]) < 1e-10, "p={p}: {energies:?}");
        }
    }
}

#[test]
fn four_pi_example() {
    let m = Manifold::euclidean(3).unwrap();
    let d = discrete_condenser_energy(&m, 2.0, Condenser::new(0.5, 1.0).unwrap(), 4096).unwrap();
    assert!(rel(d.energy, 4.0 * std::f64::consts::PI) < 1e-3);
}
