//! Fibers `f^{-1}(a, b)` of a plane polynomial map with rational data.
//!
//! The shifted components `p - a`, `q - b` are first sheared by `y -> y + λx`
//! with an integer `λ` chosen so the top-degree forms do not vanish at `(1, λ)`.
//! Then both sheared polynomials have a nonzero constant leading coefficient in
//! `x`, so `R(y) = Res_x` vanishes exactly at the `y`-values of the affine
//! solutions, with no solutions lost at infinity:
//!
//! * `R ≡ 0` iff the two share a nonconstant factor (infinite fiber),
//! * `R` a nonzero constant iff the fiber is empty,
//! * otherwise the fiber is finite and `deg squarefree(R)` counts the distinct
//!   solutions whenever the shear separates them. Two shears that agree on the
//!   largest observed count certify it.
//!
//! Emptiness and infiniteness are therefore exact; only the count needs the
//! second shear.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{
    resultant, to_univariate, AlgebraError, MultiPoly, Point, PolyMap, Rational, UniPoly, DEFAULT_DEGREE_CAP,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiberError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("degenerate constant map")]
    DegenerateMap,
}

impl FiberError {
    pub fn is_cap(&self) -> bool {
        matches!(self, FiberError::Algebra(AlgebraError::DegreeCap { .. }))
    }
}

/// Knobs for the fiber solver.
#[derive(Clone, Debug)]
pub struct FiberConfig {
    pub degree_cap: u32,
    /// Seed of the shear generator.
    pub seed: u64,
    /// Random shear draws before falling back to a deterministic scan.
    pub shear_attempts: u32,
    /// Bound on rational-root candidates per univariate search.
    pub root_candidate_cap: u64,
}

impl Default for FiberConfig {
    fn default() -> Self {
        FiberConfig { degree_cap: DEFAULT_DEGREE_CAP, seed: 0, shear_attempts: 8, root_candidate_cap: 1_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiberStatus {
    Empty,
    Finite,
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberResult {
    pub status: FiberStatus,
    /// Distinct complex solutions: `Some(0)` when empty, `None` when infinite.
    /// For finite fibers this is a lower bound, exact when `certified`.
    pub distinct_count: Option<usize>,
    pub certified: bool,
    /// Rational solutions in [`Point`] order; each satisfies `f(s) = target` exactly.
    pub rational_solutions: Vec<Point>,
    /// False when a rational-root search was truncated.
    pub rational_complete: bool,
    /// Shear parameters used, in order.
    pub shears: Vec<i64>,
}

impl FiberResult {
    fn exact(status: FiberStatus, shears: Vec<i64>) -> Self {
        FiberResult {
            status,
            distinct_count: if status == FiberStatus::Empty { Some(0) } else { None },
            certified: true,
            rational_solutions: Vec::new(),
            rational_complete: status == FiberStatus::Empty,
            shears,
        }
    }

    /// Best known lower bound on the number of complex solutions.
    pub fn lower_bound(&self) -> usize {
        self.distinct_count.unwrap_or(usize::MAX).max(self.rational_solutions.len())
    }
}

fn shear(p: &MultiPoly, lambda: i64) -> MultiPoly {
    let ring = p.ring();
    let x = MultiPoly::var(ring, "x").expect("plane ring");
    let y = MultiPoly::var(ring, "y").expect("plane ring");
    let lam = MultiPoly::constant(ring, Rational::from_integer(lambda.into()));
    p.substitute(&[x.clone(), &y + &(&lam * &x)]).expect("plane ring")
}

/// Whether `y -> y + λx` makes every polynomial with these top forms monic-like in `x`.
fn shear_is_valid(tops: &[MultiPoly], lambda: i64) -> bool {
    let pt = [Rational::from_integer(1.into()), Rational::from_integer(lambda.into())];
    tops.iter().all(|h| !h.evaluate(&pt).expect("plane ring").is_zero())
}

/// Up to `want` distinct admissible shears: seeded draws first, then a scan
/// of `1, -1, 2, -2, ...`, which always terminates since each top form has
/// finitely many roots.
pub(crate) fn choose_shears(tops: &[MultiPoly], cfg: &FiberConfig, want: usize) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out: Vec<i64> = Vec::new();
    for _ in 0..cfg.shear_attempts {
        let l = rng.random_range(-24i64..=24);
        if !out.contains(&l) && shear_is_valid(tops, l) {
            out.push(l);
            if out.len() == want {
                return out;
            }
        }
    }
    let mut k = 1i64;
    while out.len() < want {
        for l in [k, -k] {
            if out.len() < want && !out.contains(&l) && shear_is_valid(tops, l) {
                out.push(l);
            }
        }
        k += 1;
    }
    out
}

struct Sheared {
    lambda: i64,
    p: MultiPoly,
    q: MultiPoly,
    eliminant: UniPoly,
}

fn eliminate(p0: &MultiPoly, q0: &MultiPoly, lambda: i64, cap: u32) -> Result<Sheared, FiberError> {
    let p = shear(p0, lambda);
    let q = shear(q0, lambda);
    let r = resultant(&p, &q, "x", cap)?;
    Ok(Sheared { lambda, eliminant: to_univariate(&r, 1), p, q })
}

/// Rational solutions lying over the rational roots of the eliminant. Also
/// reports whether every such root lifts to exactly one `x`.
fn rational_points(s: &Sheared, sqfree: &UniPoly, cfg: &FiberConfig) -> (Vec<Point>, bool, bool) {
    let search = sqfree.rational_roots(cfg.root_candidate_cap);
    let mut complete = search.complete;
    let mut injective = true;
    let mut out = Vec::new();
    let lam = Rational::from_integer(s.lambda.into());
    for t in &search.roots {
        let px = to_univariate(&s.p.specialize(1, t), 0);
        let qx = to_univariate(&s.q.specialize(1, t), 0);
        let g = px.gcd(&qx);
        if g.degree().unwrap_or(0) != 1 {
            injective = false;
        }
        let xs = g.rational_roots(cfg.root_candidate_cap);
        complete &= xs.complete;
        for x in xs.roots {
            let y = t + &lam * &x;
            out.push(Point::new(x, y));
        }
    }
    (out, complete, injective)
}

/// Solves `f(x, y) = target` over the complex numbers.
pub fn solve_fiber(f: &PolyMap, target: &Point, cfg: &FiberConfig) -> Result<FiberResult, FiberError> {
    for c in f.components() {
        let d = c.total_degree();
        if d > cfg.degree_cap {
            return Err(AlgebraError::DegreeCap { degree: d as u64, cap: cfg.degree_cap }.into());
        }
    }
    if f.p().is_constant() && f.q().is_constant() {
        return Err(FiberError::DegenerateMap);
    }
    let ring = f.p().ring();
    let p0 = f.p() - &MultiPoly::constant(ring, target.x.clone());
    let q0 = f.q() - &MultiPoly::constant(ring, target.y.clone());
    for (a, b) in [(&p0, &q0), (&q0, &p0)] {
        if a.is_constant() {
            let status = if !a.is_zero() {
                FiberStatus::Empty
            } else {
                // a vanishes identically: the fiber is the curve b = 0 (or everything)
                FiberStatus::Infinite
            };
            let _ = b;
            return Ok(FiberResult::exact(status, Vec::new()));
        }
    }

    let tops = [p0.top_homogeneous(), q0.top_homogeneous()];
    let lambdas = choose_shears(&tops, cfg, cfg.shear_attempts.max(2) as usize);
    let first = eliminate(&p0, &q0, lambdas[0], cfg.degree_cap)?;
    if first.eliminant.is_zero() {
        return Ok(FiberResult::exact(FiberStatus::Infinite, vec![first.lambda]));
    }
    if first.eliminant.degree() == Some(0) {
        return Ok(FiberResult::exact(FiberStatus::Empty, vec![first.lambda]));
    }

    let sqfree = first.eliminant.squarefree_part();
    let first_count = sqfree.degree().unwrap();
    let (mut sols, complete, injective) = rational_points(&first, &sqfree, cfg);
    sols.retain(|s| &f.apply(s) == target);
    sols.sort();
    sols.dedup();

    // A count from a shear that merged two rational solutions is only a lower bound.
    let mut counts: Vec<(usize, bool)> = vec![(first_count, injective)];
    let mut used = vec![first.lambda];
    let mut certified = false;
    for &l in &lambdas[1..] {
        let s = eliminate(&p0, &q0, l, cfg.degree_cap)?;
        used.push(l);
        counts.push((s.eliminant.squarefree_part().degree().unwrap_or(0), true));
        let best = counts.iter().map(|c| c.0).max().unwrap();
        let agreeing = counts.iter().filter(|c| c.0 == best && c.1).count();
        if agreeing >= 2 {
            certified = true;
            break;
        }
    }
    let best = counts.iter().map(|c| c.0).max().unwrap();
    Ok(FiberResult {
        status: FiberStatus::Finite,
        distinct_count: Some(best.max(sols.len())),
        certified: certified && best >= sols.len(),
        rational_solutions: sols,
        rational_complete: complete,
        shears: used,
    })
}

/// Membership of `target` in `f(C^2)`. Exact.
pub fn in_image(f: &PolyMap, target: &Point, cfg: &FiberConfig) -> Result<bool, FiberError> {
    Ok(solve_fiber(f, target, cfg)?.status != FiberStatus::Empty)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Yes,
    No,
    Indeterminate,
}

/// Pointwise membership in `A(f, n)`, the points with at most `n` preimages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AMembership {
    pub point: Point,
    pub n: usize,
    pub member: Membership,
}

pub fn a_membership(f: &PolyMap, target: &Point, n: usize, cfg: &FiberConfig) -> Result<AMembership, FiberError> {
    let r = solve_fiber(f, target, cfg)?;
    let member = match r.status {
        FiberStatus::Empty => Membership::Yes,
        FiberStatus::Infinite => Membership::No,
        FiberStatus::Finite if r.lower_bound() > n => Membership::No,
        FiberStatus::Finite if r.certified => Membership::Yes,
        FiberStatus::Finite => Membership::Indeterminate,
    };
    Ok(AMembership { point: target.clone(), n, member })
}
