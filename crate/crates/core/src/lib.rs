//! Exact tools for iterated images of polynomial self-maps of the plane and
//! for the set dynamics of self-maps with finite coimage.
//!
//! * [`algebra`]: rationals, sparse polynomials, resultants, Jacobians.
//! * [`parser`]: text formats for polynomials, maps, points and dynamics specs.
//! * [`fibers`]: exact fiber solving by resultant elimination.
//! * [`imagedyn`]: iteration, classification, coimage search, stabilization.
//! * [`setdyn`]: the eventually-shift class of infinite self-maps.
//! * [`cli`]: the `stable-image` command line.

pub mod algebra;
pub mod cli;
pub mod fibers;
pub mod imagedyn;
pub mod parser;
pub mod setdyn;

pub use algebra::{MultiPoly, Point, PolyMap, Rational, Ring};
