#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use proptest::prelude::*;
use rand::Rng;
use stable_image_core::algebra::{Monomial, UniPoly};
use stable_image_core::parser::parse_map_str;
use stable_image_core::setdyn::{CofiniteSelfMap, Node};
use stable_image_core::{MultiPoly, PolyMap, Rational, Ring};

pub const EXAMPLE: &str = "f(x,y) = (x - 2*(x*y+1) - y*(x*y+1)^2, -1 - y*(x*y+1))";

pub fn example_map() -> PolyMap {
    parse_map_str(EXAMPLE).unwrap()
}

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("data").join(name)
}

pub fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn poly_from(ring: &Ring, terms: &[(u32, u32, i64, i64)]) -> MultiPoly {
    MultiPoly::from_terms(ring, terms.iter().map(|&(i, j, n, d)| (Monomial::new(vec![i, j]), q(n, d))))
}

/// Random polynomial in `(x, y)` of total degree at most `max_deg`.
pub fn random_poly<R: Rng>(rng: &mut R, max_deg: u32, max_terms: usize, coef: i64) -> MultiPoly {
    let n = rng.random_range(0..=max_terms);
    let terms: Vec<(u32, u32, i64, i64)> = (0..n)
        .map(|_| {
            let i = rng.random_range(0..=max_deg);
            let j = rng.random_range(0..=max_deg - i);
            (i, j, rng.random_range(-coef..=coef), rng.random_range(1..=3))
        })
        .collect();
    poly_from(&Ring::xy(), &terms)
}

pub fn random_univariate<R: Rng>(rng: &mut R, max_deg: usize, coef: i64) -> UniPoly {
    let d = rng.random_range(0..=max_deg);
    UniPoly::new((0..=d).map(|_| q(rng.random_range(-coef..=coef), rng.random_range(1..=4))).collect())
}

pub fn arb_rational(bound: i64) -> impl Strategy<Value = Rational> {
    (-bound..=bound, 1..=bound).prop_map(|(n, d)| q(n, d))
}

pub fn arb_poly(max_deg: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    let term = (0..=max_deg, 0..=max_deg, -9i64..=9, 1i64..=4).prop_filter_map("degree", move |(i, j, n, d)| {
        (i + j <= max_deg).then_some((i, j, n, d))
    });
    proptest::collection::vec(term, 0..=max_terms).prop_map(|t| poly_from(&Ring::xy(), &t))
}

/// Maps with integer coefficients, both components nonconstant.
pub fn arb_map(max_deg: u32) -> impl Strategy<Value = PolyMap> {
    let int_term = (0..=max_deg, 0..=max_deg, -4i64..=4).prop_filter_map("degree", move |(i, j, c)| {
        (i + j <= max_deg).then_some((i, j, c, 1))
    });
    let comp = proptest::collection::vec(int_term, 1..=4)
        .prop_map(|t| poly_from(&Ring::xy(), &t))
        .prop_filter("nonconstant", |p| !p.is_constant());
    (comp.clone(), comp).prop_map(|(p, q)| PolyMap::new(p, q).unwrap())
}

/// Every node of the spec with ray positions below `n_max`.
pub fn truncated_nodes(spec: &CofiniteSelfMap, n_max: u64) -> Vec<Node> {
    let mut v: Vec<Node> = spec.core_labels().iter().map(|l| Node::core(l)).collect();
    for i in 0..spec.ray_count() {
        v.extend((0..n_max).map(|n| Node::ray(i, n)));
    }
    v
}

/// Preimages found by scanning the truncated node set.
pub fn brute_preimages(spec: &CofiniteSelfMap, target: &Node, n_max: u64) -> BTreeSet<Node> {
    truncated_nodes(spec, n_max).into_iter().filter(|n| &spec.apply(n).unwrap() == target).collect()
}

/// A window large enough that truncation effects stay clear of the checks.
pub fn safe_n_max(spec: &CofiniteSelfMap, k_max: u64) -> u64 {
    spec.max_override_coordinate().unwrap_or(0) + 2 * k_max + 8
}
