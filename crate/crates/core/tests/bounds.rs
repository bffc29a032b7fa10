mod common;

use capax::bounds::{
    check_theorem21, f_tilde_zero_closed_form, f_zero_closed_form, f_zero_extrapolated,
    global_isocapacitary_check, monotone_functionals, vanishing_sweep, Functional, DEFAULT_TOL,
};
use capax::capacity::{beta_n, Condenser, Exponent};
use capax::error::Error;
use capax::geometry::{Dimension, Manifold};
use capax::verify::theorem21_configs;
use common::{builtins, manifolds, q, rel};
use proptest::prelude::*;

fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| lo * (hi / lo).powf(i as f64 / (points - 1) as f64))
        .collect()
}

#[test]
fn seeded_random_configurations_pass() {
    for seed in [0, 7] {
        for c in theorem21_configs(seed, 500) {
            let m = c.manifold().unwrap();
            let report = check_theorem21(&m, c.p, c.weight, Condenser::new(c.r, c.big_r).unwrap(), &q(), DEFAULT_TOL).unwrap();
            assert!(report.pass, "{c:?}: {report:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn alpha_bounds_hold(
        m in manifolds(2..=5),
        s in 0.0f64..1.0,
        w in 0.0f64..1.0,
        big_r in 0.05f64..5.0,
        x in 0.01f64..0.99,
    ) {
        let n = m.n();
        let p = 1.0 + s * (n - 1.0);
        let p = if p < 1.01 { Exponent::One } else { Exponent::Finite(p.min(n - 0.01)) };
        let critical = 1.0 - p.value() / n;
        let alpha = critical + w * (2.0 - critical);
        let report = check_theorem21(&m, p, Some(alpha), Condenser::new(x * big_r, big_r).unwrap(), &q(), DEFAULT_TOL).unwrap();
        prop_assert!(report.pass, "{report:?}");
    }

    #[test]
    fn large_p_bounds_hold(m in manifolds(2..=5), dp in 0.01f64..8.0, inf in any::<bool>(), big_r in 0.05f64..5.0, x in 0.0f64..0.99) {
        let p = if inf { Exponent::Infinity } else { Exponent::Finite(m.n() + dp) };
        let report = check_theorem21(&m, p, None, Condenser::new(x * big_r, big_r).unwrap(), &q(), DEFAULT_TOL).unwrap();
        prop_assert!(report.pass, "{report:?}");
    }
}

#[test]
fn weights_below_the_critical_value_are_rejected() {
    let m = Manifold::euclidean(3).unwrap();
    let c = Condenser::new(0.5, 1.0).unwrap();
    let err = check_theorem21(&m, Exponent::Finite(2.0), Some(0.0), c, &q(), DEFAULT_TOL).unwrap_err();
    assert!(matches!(err, Error::HypothesisViolation(_)));
    let big_beta = 1.1 * beta_n(&m);
    let err = check_theorem21(&m, Exponent::Finite(3.0), Some(big_beta), c, &q(), DEFAULT_TOL).unwrap_err();
    assert!(matches!(err, Error::HypothesisViolation(_)));
}

#[test]
fn sharpness_of_the_critical_weight() {
    for m in builtins(3) {
        for p in [1.5, 2.0] {
            let rep = check_theorem21(&m, Exponent::Finite(p), None, Condenser::new(1e-3, 1.0).unwrap(), &q(), DEFAULT_TOL).unwrap();
            let ratio = rep.reduced_lhs.unwrap() / rep.rhs;
            assert!((1.0..=1.01).contains(&ratio), "p={p}: {ratio}");
        }
    }
}

#[test]
fn exponential_case_is_sharp() {
    let e3 = Manifold::euclidean(3).unwrap();
    for r in [0.01, 0.2, 0.5, 0.9, 0.999] {
        let rep = check_theorem21(&e3, Exponent::Finite(3.0), None, Condenser::new(r, 1.0).unwrap(), &q(), DEFAULT_TOL).unwrap();
        assert!(rel(rep.lhs, 1.0) < 1e-8);
    }
    for n in [2, 3, 4] {
        let m = Manifold::hyperbolic(n).unwrap();
        let rep = check_theorem21(&m, Exponent::Finite(n as f64), None, Condenser::new(0.999, 1.0).unwrap(), &q(), DEFAULT_TOL).unwrap();
        assert!(rep.pass && rel(rep.lhs, rep.rhs) < 0.01, "{rep:?}");
    }
}

#[test]
fn point_condensers_of_small_balls_are_sharp() {
    for m in builtins(3) {
        for p in [Exponent::Finite(4.0), Exponent::Finite(6.0), Exponent::Infinity] {
            let rep = check_theorem21(&m, p, None, Condenser::new(0.0, 1e-2).unwrap(), &q(), DEFAULT_TOL).unwrap();
            assert!(rep.pass && rel(rep.lhs, rep.rhs) < 0.01, "{rep:?}");
        }
    }
}

#[test]
fn proof_functionals_are_monotone() {
    for n in 2..=4u32 {
        let nf = n as f64;
        for m in builtins(n).into_iter().chain([Manifold::new(
            capax::geometry::WarpProfile::odd_series(vec![0.5]).unwrap(),
            Dimension::new(n).unwrap(),
        )]) {
            let grid = log_grid(1e-3, 0.99, 100);
            for p in [1.0 + 0.3 * (nf - 1.0), 1.0 + 0.8 * (nf - 1.0)] {
                let s = monotone_functionals(&m, Exponent::Finite(p), 1.0 - p / nf, Functional::F, 1.0, &grid, &q()).unwrap();
                for x in &s {
                    assert!(x.f_prime.unwrap() <= 1e-10 * x.f_prime_scale.unwrap(), "{x:?}");
                    assert!(x.h >= -1e-12);
                }
            }
            let s = monotone_functionals(&m, Exponent::Finite(nf), 0.0, Functional::FBar, 1.0, &grid, &q()).unwrap();
            for w in s.windows(2) {
                assert!(w[1].f_bar.unwrap() >= w[0].f_bar.unwrap() * (1.0 - 1e-10));
            }
            let outer = log_grid(1e-2, 3.0, 100);
            let s = monotone_functionals(&m, Exponent::Finite(nf + 1.5), 0.0, Functional::FTilde, 1.0, &outer, &q()).unwrap();
            for w in s.windows(2) {
                assert!(w[1].f_tilde.unwrap() <= w[0].f_tilde.unwrap() * (1.0 + 1e-10));
            }
        }
    }
}

#[test]
fn euclidean_functionals_are_constant() {
    let e2 = Manifold::euclidean(2).unwrap();
    let grid = log_grid(1e-3, 0.99, 100);
    for s in monotone_functionals(&e2, Exponent::Finite(2.0), 0.0, Functional::FBar, 1.0, &grid, &q()).unwrap() {
        assert!(rel(s.f_bar.unwrap(), 0.5) < 1e-9);
    }
    let outer = log_grid(1e-2, 5.0, 100);
    let target = 2f64.powf(1.25);
    assert!(rel(f_tilde_zero_closed_form(e2.dim(), 3.0), target) < 1e-15);
    for s in monotone_functionals(&e2, Exponent::Finite(3.0), 0.0, Functional::FTilde, 1.0, &outer, &q()).unwrap() {
        assert!(rel(s.f_tilde.unwrap(), target) < 1e-9);
    }
}

#[test]
fn f_at_zero_is_the_back_solved_constant() {
    for n in [3u32, 4] {
        for m in builtins(n) {
            for p in [1.5, 2.0] {
                let extrapolated = f_zero_extrapolated(&m, Exponent::Finite(p), 1.0, &q()).unwrap();
                let closed = f_zero_closed_form(m.dim(), p);
                assert!(rel(extrapolated, closed) < 1e-4, "n={n} p={p}: {extrapolated} vs {closed}");
            }
        }
    }
}

#[test]
fn vanishing_sweeps_decrease() {
    let e3 = Manifold::euclidean(3).unwrap();
    let grid = log_grid(1e-1, 1e-4, 13);
    for p in [Exponent::Finite(2.0), Exponent::Infinity] {
        let s = vanishing_sweep(&e3, p, Some(0.0), 1.0, &grid, &q()).unwrap();
        for w in s[s.len() - 5..].windows(2) {
            assert!(w[1].ratio < w[0].ratio);
        }
        assert!(s[s.len() - 1].ratio / s[0].ratio < 1e-3, "p={p}");
    }
    // beta = 1.1 beta_3 gives r^{0.3} / nu_3, which decays by (10^-3)^{0.3} over the grid
    let s = vanishing_sweep(&e3, Exponent::Finite(3.0), Some(1.1 * beta_n(&e3)), 1.0, &grid, &q()).unwrap();
    for w in s.windows(2) {
        assert!(w[1].ratio < w[0].ratio);
    }
    let decay = s[s.len() - 1].ratio / s[0].ratio;
    assert!(rel(decay, 1e-3f64.powf(0.3)) < 1e-6, "{decay}");
}

#[test]
fn vanishing_examples() {
    let e3 = Manifold::euclidean(3).unwrap();
    let s = vanishing_sweep(&e3, Exponent::Finite(2.0), Some(0.0), 1.0, &[0.1, 0.01, 0.001], &q()).unwrap();
    let pi4 = 4.0 * std::f64::consts::PI;
    for x in s {
        assert!(rel(x.ratio, pi4 / (1.0 / x.r - 1.0)) < 1e-9);
    }
}

#[test]
fn global_inequalities() {
    let far = |n| {
        Manifold::new(
            capax::geometry::WarpProfile::euclidean().with_t_max(2e4).unwrap(),
            Dimension::new(n).unwrap(),
        )
    };
    let iso = global_isocapacitary_check(&far(3), Exponent::One, 0.5, 1e4, &q(), DEFAULT_TOL).unwrap();
    assert!(rel(iso.lhs, iso.rhs) < 1e-9);
    let cn = global_isocapacitary_check(&far(3), Exponent::Finite(3.0), 0.5, 1e4, &q(), DEFAULT_TOL).unwrap();
    assert!(rel(cn.lhs, 1.0) < 1e-9);
    let h3 = Manifold::hyperbolic(3).unwrap();
    for p in [Exponent::One, Exponent::Finite(2.0), Exponent::Finite(4.0), Exponent::Infinity] {
        let rep = global_isocapacitary_check(&h3, p, 0.1, 20.0, &q(), DEFAULT_TOL).unwrap();
        assert!(rep.margin > 0.0, "p={p}: {rep:?}");
    }
}
