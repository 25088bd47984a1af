//! Iterated images of a polynomial self-map of the plane.

mod coimage;
mod stabilize;

pub use coimage::{coimage_candidates, CoimageSearch};
pub use stabilize::{stabilization_report, Level, StabilizationIndex, StabilizationReport};

use thiserror::Error;

use crate::algebra::rational::rationals_up_to_height;
use crate::algebra::{AlgebraError, MultiPoly, Point, PolyMap};
use crate::fibers::{solve_fiber, FiberConfig, FiberError};

pub const DEFAULT_K_MAX: usize = 8;
/// Height bound of the automatic witness grid.
pub const AUTO_PROBE_HEIGHT: u32 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImageError {
    #[error(transparent)]
    Fiber(#[from] FiberError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("Jacobian vanishes identically")]
    DegenerateJacobian,
    #[error("iterate count must be positive")]
    ZeroIterate,
}

impl ImageError {
    pub fn is_cap(&self) -> bool {
        match self {
            ImageError::Fiber(e) => e.is_cap(),
            ImageError::Algebra(e) => matches!(e, AlgebraError::DegreeCap { .. }),
            _ => false,
        }
    }
}

/// `f^k`, composing one factor at a time. Refuses to start a composition whose
/// degree bound `deg(f^j) * deg(f)` exceeds `degree_cap`.
pub fn iterate_map(f: &PolyMap, k: usize, degree_cap: u32) -> Result<PolyMap, ImageError> {
    if k == 0 {
        return Err(ImageError::ZeroIterate);
    }
    let mut g = f.clone();
    for _ in 1..k {
        let bound = g.degree() as u64 * f.degree() as u64;
        if bound > degree_cap as u64 {
            return Err(AlgebraError::DegreeCap { degree: bound, cap: degree_cap }.into());
        }
        g = f.compose(&g);
    }
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    /// Nonzero constant Jacobian.
    JacobianPair,
    NonConstantJacobian,
    /// Jacobian identically zero.
    DegenerateJacobian,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapClassification {
    pub jacobian: MultiPoly,
    pub kind: MapKind,
}

pub fn classify(f: &PolyMap) -> MapClassification {
    let jacobian = f.jacobian_det();
    let kind = if jacobian.is_zero() {
        MapKind::DegenerateJacobian
    } else if jacobian.is_constant() {
        MapKind::JacobianPair
    } else {
        MapKind::NonConstantJacobian
    };
    MapClassification { jacobian, kind }
}

/// Two distinct rational points with the same image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectivityWitness {
    pub first: Point,
    pub second: Point,
    pub common_image: Point,
}

impl InjectivityWitness {
    pub fn verify(&self, f: &PolyMap) -> bool {
        self.first != self.second && f.apply(&self.first) == self.common_image && f.apply(&self.second) == self.common_image
    }
}

/// Outcome of a witness search. `witness == None` only means no rational
/// collision among the probed targets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessSearch {
    pub witness: Option<InjectivityWitness>,
    pub probed: usize,
}

/// All points with both coordinates of height at most `max_height`, in point order.
pub fn probe_grid(max_height: u32) -> Vec<Point> {
    let rs = rationals_up_to_height(max_height);
    let mut pts: Vec<Point> = rs.iter().flat_map(|a| rs.iter().map(move |b| Point::new(a.clone(), b.clone()))).collect();
    pts.sort();
    pts
}

/// Probes targets in order and stops at the first fiber holding two rational solutions.
pub fn injectivity_witness_search(f: &PolyMap, targets: &[Point], cfg: &FiberConfig) -> Result<WitnessSearch, ImageError> {
    for (i, t) in targets.iter().enumerate() {
        let r = solve_fiber(f, t, cfg)?;
        if let [first, second, ..] = r.rational_solutions.as_slice() {
            let w = InjectivityWitness { first: first.clone(), second: second.clone(), common_image: t.clone() };
            debug_assert!(w.verify(f));
            return Ok(WitnessSearch { witness: Some(w), probed: i + 1 });
        }
    }
    Ok(WitnessSearch { witness: None, probed: targets.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{rat, ratio};
    use crate::parser::parse_map_str;

    pub(super) const EXAMPLE: &str = "f(x,y) = (x - 2*(x*y+1) - y*(x*y+1)^2, -1 - y*(x*y+1))";

    fn pt(a: i64, b: i64) -> Point {
        Point::new(rat(a), rat(b))
    }

    #[test]
    fn iterate_examples() {
        let swap = parse_map_str("f(x,y) = (y, x)").unwrap();
        assert_eq!(iterate_map(&swap, 2, 64).unwrap(), PolyMap::identity());
        let tri = parse_map_str("f(x,y) = (x, y + x^2)").unwrap();
        assert_eq!(iterate_map(&tri, 2, 64).unwrap(), parse_map_str("f(x,y) = (x, y + 2*x^2)").unwrap());
        let f = parse_map_str(EXAMPLE).unwrap();
        let f2 = iterate_map(&f, 2, 64).unwrap();
        assert_eq!((f2.p().total_degree(), f2.q().total_degree()), (19, 11));
        assert_eq!(f2.apply(&pt(3, 0)), f.apply(&f.apply(&pt(3, 0))));
        assert!(iterate_map(&f, 3, 64).unwrap_err().is_cap());
        assert_eq!(iterate_map(&f, 0, 64), Err(ImageError::ZeroIterate));
    }

    #[test]
    fn classify_examples() {
        let tri = classify(&parse_map_str("f(x,y) = (x, y + x^2)").unwrap());
        assert_eq!(tri.kind, MapKind::JacobianPair);
        assert_eq!(tri.jacobian.constant_value(), Some(rat(1)));
        let ex = classify(&parse_map_str(EXAMPLE).unwrap());
        assert_eq!(ex.kind, MapKind::NonConstantJacobian);
        let sq = classify(&parse_map_str("f(x,y) = (x^2, x*y)").unwrap());
        assert_eq!(sq.kind, MapKind::NonConstantJacobian);
        assert_eq!(sq.jacobian.to_string(), "2*x^2");
        let deg = classify(&parse_map_str("f(x,y) = (x + y, (x + y)^2)").unwrap());
        assert_eq!(deg.kind, MapKind::DegenerateJacobian);
    }

    #[test]
    fn witness_examples() {
        let cfg = FiberConfig::default();
        let f = parse_map_str(EXAMPLE).unwrap();
        let s = injectivity_witness_search(&f, &[pt(0, 0), pt(1, -1)], &cfg).unwrap();
        let w = s.witness.unwrap();
        assert!(w.verify(&f));
        assert_eq!((w.first, w.second, w.common_image), (pt(1, -1), pt(3, 0), pt(1, -1)));
        let tri = parse_map_str("f(x,y) = (x, y + x^2)").unwrap();
        let s = injectivity_witness_search(&tri, &probe_grid(1), &cfg).unwrap();
        assert_eq!(s.witness, None);
        assert_eq!(s.probed, 9);
        let sq = parse_map_str("f(x,y) = (x^2, y)").unwrap();
        let w = injectivity_witness_search(&sq, &[pt(4, 0)], &cfg).unwrap().witness.unwrap();
        assert_eq!((w.first, w.second), (pt(-2, 0), pt(2, 0)));
    }

    #[test]
    fn grid_order() {
        let g = probe_grid(2);
        assert_eq!(g.len(), 49);
        assert_eq!(g[0], pt(-1, -1));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(g.contains(&Point::new(ratio(-1, 2), rat(2))));
    }
}
