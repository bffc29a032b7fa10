#![allow(dead_code)]

use capax::geometry::{Dimension, Manifold, WarpProfile};
use capax::quadrature::QuadratureSettings;
use proptest::prelude::*;

pub fn q() -> QuadratureSettings {
    QuadratureSettings::default()
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Euclidean, hyperbolic, or an odd series with `c3` in `(0, 1)`.
pub fn profiles() -> impl Strategy<Value = WarpProfile> {
    prop_oneof![
        Just(WarpProfile::euclidean()),
        Just(WarpProfile::hyperbolic()),
        (0.0f64..1.0).prop_map(|c3| WarpProfile::odd_series(vec![c3]).unwrap()),
    ]
}

pub fn manifolds(dims: std::ops::RangeInclusive<u32>) -> impl Strategy<Value = Manifold> {
    (profiles(), dims).prop_map(|(p, n)| Manifold::new(p, Dimension::new(n).unwrap()))
}

pub fn builtins(n: u32) -> [Manifold; 2] {
    [Manifold::euclidean(n).unwrap(), Manifold::hyperbolic(n).unwrap()]
}
