mod common;

use capax::capacity::Exponent;
use capax::geometry::Manifold;
use capax::imbedding::{distribution_volume, imbedding_report, make_extremal, weak_norm, RadialKind};
use common::{manifolds, q, rel};
use proptest::prelude::*;

const TOL: f64 = 1e-6;

fn equality(n: u32, p: Exponent, kind: RadialKind, omega: Option<f64>, within: f64) {
    let m = Manifold::euclidean(n).unwrap();
    let u = make_extremal(kind.clone(), &m, &q()).unwrap();
    let rep = imbedding_report(&u, &m, p, omega, &q(), TOL).unwrap();
    assert!(rep.pass, "{kind:?}: {rep:?}");
    assert!(rel(rep.lhs, rep.rhs) < within, "{kind:?}: {} vs {}", rep.lhs, rep.rhs);
}

#[test]
fn extremals_attain_equality() {
    for (n, p) in [(3u32, 2.0), (4, 2.0), (5, 3.0)] {
        equality(n, Exponent::Finite(p), RadialKind::EuclideanPower { p, r: 1.0 }, None, 1e-6);
    }
    equality(2, Exponent::Finite(2.0), RadialKind::EuclideanLog { r: 0.5, big_r: 1.0 }, Some(1.0), 1e-4);
    equality(3, Exponent::Finite(5.0), RadialKind::EuclideanOuterPower { p: 5.0, big_r: 1.0 }, Some(1.0), 1e-8);
    equality(3, Exponent::Infinity, RadialKind::LinearTent { big_r: 1.0 }, Some(1.0), 1e-8);
}

#[test]
fn thin_ramps_approach_the_isoperimetric_constant() {
    let m = Manifold::euclidean(3).unwrap();
    let mut last = f64::INFINITY;
    for r in [1e-1, 1e-2, 1e-3] {
        let u = make_extremal(RadialKind::Ramp { r }, &m, &q()).unwrap();
        let rep = imbedding_report(&u, &m, Exponent::One, None, &q(), TOL).unwrap();
        assert!(rep.pass);
        let gap = rel(rep.lhs, rep.rhs);
        assert!(gap < last);
        last = gap;
    }
    assert!(last < 0.01, "{last}");
}

#[test]
fn bounded_regimes_need_a_domain() {
    let m = Manifold::euclidean(3).unwrap();
    let u = make_extremal(RadialKind::LinearTent { big_r: 1.0 }, &m, &q()).unwrap();
    assert!(imbedding_report(&u, &m, Exponent::Infinity, None, &q(), TOL).is_err());
    assert!(imbedding_report(&u, &m, Exponent::Infinity, Some(0.5), &q(), TOL).is_err());
}

fn samples() -> impl Strategy<Value = Vec<[f64; 2]>> {
    (0.3f64..3.0, prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 0..6)).prop_map(|(support, knots)| {
        let mut ts: Vec<f64> = knots.iter().map(|k| k.0 * support).filter(|&t| t > 1e-6).collect();
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        let mut vs: Vec<f64> = knots.iter().map(|k| k.1).collect();
        vs.sort_by(|a, b| b.total_cmp(a));
        let mut out = vec![[0.0, 1.0]];
        out.extend(ts.into_iter().zip(vs).map(|(t, v)| [t, v]));
        out.push([support, 0.0]);
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weak_norm_is_homogeneous(m in manifolds(2..=4), s in samples(), a in 0.1f64..10.0, qe in 0.5f64..6.0) {
        let u = make_extremal(RadialKind::CustomSamples { samples: s }, &m, &q()).unwrap();
        let base = weak_norm(&u, &m, qe, &q()).unwrap().value;
        let scaled = weak_norm(&u.scaled(a).unwrap(), &m, qe, &q()).unwrap().value;
        prop_assert!(rel(scaled, a * base) < 1e-10, "{scaled} vs {}", a * base);
    }

    #[test]
    fn distribution_is_nonincreasing(m in manifolds(2..=4), s in samples(), x in 0.0f64..1.0, y in 0.0f64..1.0) {
        let u = make_extremal(RadialKind::CustomSamples { samples: s }, &m, &q()).unwrap();
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        let a = distribution_volume(&u, &m, lo, &q()).unwrap();
        let b = distribution_volume(&u, &m, hi, &q()).unwrap();
        prop_assert!(a >= b);
        prop_assert_eq!(distribution_volume(&u, &m, 1.5, &q()).unwrap(), 0.0);
    }

    #[test]
    fn piecewise_linear_functions_satisfy_every_regime(
        m in manifolds(2..=4),
        s in samples(),
        case in 0usize..4,
        w in 0.0f64..1.0,
        stretch in 1.0f64..2.0,
    ) {
        let n = m.n();
        let p = match case {
            0 if w < 0.2 => Exponent::One,
            0 => Exponent::Finite(1.1 + w * (n - 1.2)),
            1 => Exponent::Finite(n),
            2 => Exponent::Finite(n + 0.5 + 3.5 * w),
            _ => Exponent::Infinity,
        };
        let support = s.last().unwrap()[0];
        let u = make_extremal(RadialKind::CustomSamples { samples: s }, &m, &q()).unwrap();
        let rep = imbedding_report(&u, &m, p, Some(support * stretch), &q(), TOL).unwrap();
        prop_assert!(rep.pass, "{rep:?}");
    }
}
