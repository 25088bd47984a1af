use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;

use super::poly::{MultiPoly, Ring};
use super::rational::{format_rational, height, Rational};
use super::AlgebraError;

/// A point of the rational plane.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn coords(&self) -> [Rational; 2] {
        [self.x.clone(), self.y.clone()]
    }

    pub fn height(&self) -> BigInt {
        height(&self.x).max(height(&self.y))
    }
}

/// Points sort by height, then lexicographically by coordinates.
impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.height()
            .cmp(&other.height())
            .then_with(|| self.x.cmp(&other.x))
            .then_with(|| self.y.cmp(&other.y))
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", format_rational(&self.x), format_rational(&self.y))
    }
}

/// Polynomial self-map of the plane, both components over the ring `(x, y)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolyMap {
    p: MultiPoly,
    q: MultiPoly,
}

impl PolyMap {
    pub fn new(p: MultiPoly, q: MultiPoly) -> Result<Self, AlgebraError> {
        let xy = Ring::xy();
        for c in [&p, &q] {
            if c.ring() != &xy {
                return Err(AlgebraError::RingMismatch {
                    left: xy.vars().to_vec(),
                    right: c.ring().vars().to_vec(),
                });
            }
        }
        Ok(PolyMap { p, q })
    }

    pub fn identity() -> Self {
        let r = Ring::xy();
        PolyMap {
            p: MultiPoly::var(&r, "x").unwrap(),
            q: MultiPoly::var(&r, "y").unwrap(),
        }
    }

    pub fn p(&self) -> &MultiPoly {
        &self.p
    }

    pub fn q(&self) -> &MultiPoly {
        &self.q
    }

    pub fn components(&self) -> [&MultiPoly; 2] {
        [&self.p, &self.q]
    }

    /// Maximum total degree of the two components.
    pub fn degree(&self) -> u32 {
        self.p.total_degree().max(self.q.total_degree())
    }

    pub fn apply(&self, pt: &Point) -> Point {
        let c = pt.coords();
        Point {
            x: self.p.evaluate(&c).expect("plane map has arity 2"),
            y: self.q.evaluate(&c).expect("plane map has arity 2"),
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PolyMap) -> PolyMap {
        let b = [inner.p.clone(), inner.q.clone()];
        PolyMap {
            p: self.p.substitute(&b).expect("same ring"),
            q: self.q.substitute(&b).expect("same ring"),
        }
    }

    /// Jacobian determinant `p_x q_y - p_y q_x`.
    pub fn jacobian_det(&self) -> MultiPoly {
        let px = self.p.derivative_at(0);
        let py = self.p.derivative_at(1);
        let qx = self.q.derivative_at(0);
        let qy = self.q.derivative_at(1);
        &(&px * &qy) - &(&py * &qx)
    }
}
