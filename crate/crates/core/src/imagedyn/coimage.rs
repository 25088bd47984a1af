//! Rational coimage search.
//!
//! With `y -> y + λx` chosen as in the fiber solver, the sheared `p - a`,
//! `q - b` have constant leading coefficients in `x` for every `(a, b)`, so
//! `S(y; a, b) = Res_x` specializes correctly at every target. Writing
//! `S = Σ c_j(a, b) y^j`, a target is omitted exactly when
//! `c_1 = ... = c_D = 0` and `c_0 ≠ 0`. The rational points of
//! `V(c_1, ..., c_D)` are found by eliminating `a`.

use std::collections::BTreeSet;

use crate::algebra::rational::rationals_up_to_height;
use crate::algebra::{resultant, to_univariate, AlgebraError, MultiPoly, Point, PolyMap, Rational, Ring, UniPoly};
use crate::fibers::{choose_shears, in_image, FiberConfig};

use super::{classify, ImageError, MapKind};

const X: usize = 0;
const Y: usize = 1;
const A: usize = 2;
const B: usize = 3;
/// Height bound for the `x`-values scanned on the critical curve `J = 0`.
const CRITICAL_SCAN_HEIGHT: u32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoimageSearch {
    /// Candidates in point order.
    pub candidates: Vec<Point>,
    /// Candidates certified outside the image.
    pub coimage: Vec<Point>,
    /// Every rational point of the omitted locus was found.
    pub exhausted: bool,
    pub notes: Vec<String>,
}

fn lift(p: &MultiPoly, ring: &Ring) -> MultiPoly {
    p.embed(ring).expect("xy embeds into xyab")
}

/// Rational points of the common zero set of `cs` in the `(a, b)` plane.
/// Returns the points and whether the search was exhaustive.
fn rational_zeros(cs: &[MultiPoly], cfg: &FiberConfig, notes: &mut Vec<String>) -> Result<(Vec<Point>, bool), AlgebraError> {
    if cs.iter().any(|c| c.is_constant()) {
        return Ok((Vec::new(), true));
    }
    let mut g = UniPoly::zero();
    for c in cs.iter().filter(|c| c.degree_in(A) == 0) {
        g = g.gcd(&to_univariate(c, B));
    }
    let with_a: Vec<&MultiPoly> = cs.iter().filter(|c| c.degree_in(A) > 0).collect();
    for (i, ci) in with_a.iter().enumerate() {
        for cj in &with_a[i + 1..] {
            let r = resultant(ci, cj, "a", cfg.degree_cap)?;
            g = g.gcd(&to_univariate(&r, B));
        }
    }
    if g.is_zero() {
        notes.push("omitted locus has a curve component; search truncated".into());
        return Ok((Vec::new(), false));
    }
    let bs = g.rational_roots(cfg.root_candidate_cap);
    let mut complete = bs.complete;
    if !complete {
        notes.push("rational root search on the b-eliminant was truncated".into());
    }
    let mut out = Vec::new();
    for b in &bs.roots {
        let h = cs.iter().fold(UniPoly::zero(), |h, c| h.gcd(&to_univariate(&c.specialize(B, b), A)));
        if h.is_zero() {
            notes.push(format!("omitted locus contains the line b = {b}; search truncated"));
            complete = false;
            continue;
        }
        let r#as = h.rational_roots(cfg.root_candidate_cap);
        complete &= r#as.complete;
        out.extend(r#as.roots.into_iter().map(|a| Point::new(a, b.clone())));
    }
    Ok((out, complete))
}

/// Images of rational points on `J = 0` whose `x` has small height.
fn critical_images(f: &PolyMap, jac: &MultiPoly, cfg: &FiberConfig) -> Vec<Point> {
    let mut out = Vec::new();
    for x0 in rationals_up_to_height(CRITICAL_SCAN_HEIGHT) {
        let u = to_univariate(&jac.specialize(X, &x0), Y);
        if u.is_zero() {
            continue;
        }
        for y0 in u.rational_roots(cfg.root_candidate_cap).roots {
            out.push(f.apply(&Point::new(x0.clone(), y0)));
        }
    }
    out
}

/// Candidate coimage points, each certified or refuted by exact fiber solving.
pub fn coimage_candidates(f: &PolyMap, cfg: &FiberConfig) -> Result<CoimageSearch, ImageError> {
    let cls = classify(f);
    if cls.kind == MapKind::DegenerateJacobian {
        return Err(ImageError::DegenerateJacobian);
    }
    let ring = Ring::new(&["x", "y", "a", "b"]);
    let tops = [f.p().top_homogeneous(), f.q().top_homogeneous()];
    let lambda = choose_shears(&tops, cfg, 1)[0];
    let x = MultiPoly::var(&ring, "x").expect("x");
    let y = MultiPoly::var(&ring, "y").expect("y");
    let a = MultiPoly::var(&ring, "a").expect("a");
    let b = MultiPoly::var(&ring, "b").expect("b");
    let lam = MultiPoly::constant(&ring, Rational::from_integer(lambda.into()));
    let binding = [x.clone(), &y + &(&lam * &x), a.clone(), b.clone()];
    let p = lift(f.p(), &ring).substitute(&binding)? - a;
    let q = lift(f.q(), &ring).substitute(&binding)? - b;
    let s = resultant(&p, &q, "x", cfg.degree_cap)?;

    let mut notes = Vec::new();
    let coeffs = s.coefficients_in(Y);
    let higher: Vec<MultiPoly> = coeffs.iter().skip(1).filter(|c| !c.is_zero()).cloned().collect();
    let (mut found, exhausted) = if higher.is_empty() {
        notes.push("eliminant has no y-dependence; the map is not dominant".into());
        (Vec::new(), false)
    } else {
        rational_zeros(&higher, cfg, &mut notes)?
    };
    found.extend(critical_images(f, &cls.jacobian, cfg));
    let candidates: Vec<Point> = found.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    let mut coimage = Vec::new();
    for c in &candidates {
        if !in_image(f, c, cfg)? {
            coimage.push(c.clone());
        }
    }
    Ok(CoimageSearch { candidates, coimage, exhausted, notes })
}
