use num_traits::{One, Signed};

use crate::algebra::rational::format_rational;
use crate::algebra::{Monomial, MultiPoly, Point, PolyMap};
use crate::setdyn::CofiniteSelfMap;

fn monomial_text(m: &Monomial, vars: &[String]) -> String {
    m.exponents()
        .iter()
        .zip(vars)
        .filter(|(&e, _)| e > 0)
        .map(|(&e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

/// Canonical text: terms in descending graded-lex order, explicit `*`.
pub fn print_poly(p: &MultiPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let vars = p.ring().vars();
    let mut out = String::new();
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let abs = c.abs();
        if m.is_one() {
            out.push_str(&format_rational(&abs));
        } else {
            if !abs.is_one() {
                out.push_str(&format_rational(&abs));
                out.push('*');
            }
            out.push_str(&monomial_text(m, vars));
        }
    }
    out
}

pub fn print_map(f: &PolyMap) -> String {
    format!("f(x,y) = ({}, {})", print_poly(f.p()), print_poly(f.q()))
}

pub fn print_point(pt: &Point) -> String {
    pt.to_string()
}

/// Canonical spec text: `rays:`, `core:`, then one `map:` line per override.
pub fn print_dyn_spec(spec: &CofiniteSelfMap) -> String {
    let mut out = format!("rays: {}\n", spec.ray_count());
    let labels: Vec<&str> = spec.core_labels().iter().map(String::as_str).collect();
    if !labels.is_empty() {
        out.push_str(&format!("core: {}\n", labels.join(" ")));
    }
    for (src, dst) in spec.overrides() {
        out.push_str(&format!("map: {src} -> {dst}\n"));
    }
    out
}
