use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::rational::Rational;
use super::AlgebraError;

/// Ordered list of variable names shared by every polynomial of a ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ring(Arc<[String]>);

impl Ring {
    pub fn new<S: AsRef<str>>(vars: &[S]) -> Self {
        Ring(vars.iter().map(|v| v.as_ref().to_string()).collect())
    }

    /// The plane ring `(x, y)`.
    pub fn xy() -> Self {
        Ring::new(&["x", "y"])
    }

    pub fn vars(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, var: &str) -> Option<usize> {
        self.0.iter().position(|v| v == var)
    }
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.0.join(","))
    }
}

/// Exponent vector, one entry per ring variable.
///
/// Ordered graded-lexicographically with earlier ring variables more
/// significant, so with ring `(x, y)` we have `y < x < y^2 < x*y`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn var(nvars: usize, idx: usize, exp: u32) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = exp;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with exact rational coefficients.
///
/// Terms are kept in a map keyed by monomial, so two polynomials over the
/// same ring are structurally equal exactly when their difference is zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    ring: Ring,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(ring: &Ring) -> Self {
        MultiPoly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn constant(ring: &Ring, c: Rational) -> Self {
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ring.len()), c);
        }
        p
    }

    pub fn var(ring: &Ring, name: &str) -> Result<Self, AlgebraError> {
        let idx = ring
            .index_of(name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        Ok(Self::monomial(ring, Monomial::var(ring.len(), idx, 1), Rational::one()))
    }

    pub fn monomial(ring: &Ring, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.0.len(), ring.len(), "monomial arity does not match ring");
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I>(ring: &Ring, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial, `None` otherwise.
    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.terms.values().next().cloned().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }

    /// Total degree; the zero polynomial reports 0.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms.keys().map(|m| m.0[idx]).max().unwrap_or(0)
    }

    /// Indices of variables that occur with positive exponent.
    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.ring.len())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Homogeneous component of top total degree.
    pub fn top_homogeneous(&self) -> MultiPoly {
        let d = self.total_degree();
        MultiPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_ring(&self, other: &MultiPoly) -> Result<(), AlgebraError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch {
                left: self.ring.vars().to_vec(),
                right: other.ring.vars().to_vec(),
            })
        }
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        self.check_ring(other)?;
        let mut out = MultiPoly::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = MultiPoly::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `pow` that refuses results whose total degree would exceed `cap`.
    pub fn pow_capped(&self, e: u32, cap: u32) -> Result<MultiPoly, AlgebraError> {
        let d = self.total_degree() as u64 * e as u64;
        if d > cap as u64 {
            return Err(AlgebraError::DegreeCap { degree: d, cap });
        }
        Ok(self.pow(e))
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, AlgebraError> {
        if point.len() != self.ring.len() {
            return Err(AlgebraError::Arity { expected: self.ring.len(), got: point.len() });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(v.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitutes `value` for variable `idx`; the result stays in the same ring.
    pub fn specialize(&self, idx: usize, value: &Rational) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[idx];
            let mut m2 = m.clone();
            m2.0[idx] = 0;
            let c2 = if e == 0 { c.clone() } else { c * num_traits::pow(value.clone(), e as usize) };
            out.add_term(m2, c2);
        }
        out
    }

    /// Replaces every variable by the polynomial bound to it. All bindings must
    /// share one ring, which becomes the ring of the result.
    pub fn substitute(&self, bindings: &[MultiPoly]) -> Result<MultiPoly, AlgebraError> {
        if bindings.len() != self.ring.len() {
            return Err(AlgebraError::Arity { expected: self.ring.len(), got: bindings.len() });
        }
        let target = match bindings.first() {
            Some(b) => b.ring.clone(),
            None => return Ok(self.clone()),
        };
        for b in bindings {
            if b.ring != target {
                return Err(AlgebraError::RingMismatch {
                    left: target.vars().to_vec(),
                    right: b.ring.vars().to_vec(),
                });
            }
        }
        // cache of powers per variable
        let mut powers: Vec<Vec<MultiPoly>> = bindings.iter().map(|b| vec![MultiPoly::one(&target), b.clone()]).collect();
        let mut out = MultiPoly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &bindings[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    pub fn partial_derivative(&self, var: &str) -> Result<MultiPoly, AlgebraError> {
        let idx = self
            .ring
            .index_of(var)
            .ok_or_else(|| AlgebraError::UnknownVariable(var.to_string()))?;
        Ok(self.derivative_at(idx))
    }

    pub(crate) fn derivative_at(&self, idx: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[idx] = e - 1;
            out.add_term(m2, c * Rational::from_integer(e.into()));
        }
        out
    }

    /// Coefficients with respect to variable `idx`, lowest power first.
    /// Each coefficient lives in the same ring and is free of that variable.
    pub fn coefficients_in(&self, idx: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(idx) as usize;
        let mut out = vec![MultiPoly::zero(&self.ring); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            let e = m.0[idx] as usize;
            let mut m2 = m.clone();
            m2.0[idx] = 0;
            out[e].add_term(m2, c.clone());
        }
        out
    }

    /// Moves the polynomial into `ring`, mapping variables by name.
    pub fn embed(&self, ring: &Ring) -> Result<MultiPoly, AlgebraError> {
        let map: Vec<Option<usize>> = self.ring.vars().iter().map(|v| ring.index_of(v)).collect();
        let mut out = MultiPoly::zero(ring);
        for (m, c) in &self.terms {
            let mut e = vec![0; ring.len()];
            for (i, &ex) in m.0.iter().enumerate() {
                if ex == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => e[j] = ex,
                    None => return Err(AlgebraError::UnknownVariable(self.ring.vars()[i].clone())),
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        if d.is_zero() || self.ring != d.ring {
            return None;
        }
        let (lm, lc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(&self.ring);
        while let Some((m, c)) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&m) {
                return None;
            }
            let qm = m.div(&lm);
            let qc = c / &lc;
            for (dm, dc) in &d.terms {
                rem.add_term(dm.mul(&qm), -(dc * &qc));
            }
            quot.add_term(qm, qc);
        }
        Some(quot)
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::parser::print_poly(self))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::parser::print_poly(self))
    }
}

// Operator forms panic on ring mismatch; the `try_*` methods report it.
impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("ring mismatch in polynomial addition")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("ring mismatch in polynomial subtraction")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("ring mismatch in polynomial multiplication")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}
