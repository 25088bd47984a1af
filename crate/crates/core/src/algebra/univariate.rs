//! Dense univariate polynomials over the rationals.
//!
//! Used for eliminants and fiber back-substitution: gcd via the subresultant
//! remainder sequence over the integers, squarefree parts, and rational-root
//! enumeration.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::Rational;

/// Coefficients lowest power first; no trailing zeros, so the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Rational]) -> Self {
        let mut p = UniPoly::constant(Rational::one());
        for r in roots {
            p = p.mul(&UniPoly::new(vec![-r.clone(), Rational::one()]));
        }
        p
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Rational::zero();
        UniPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn scale(&self, c: &Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            Some(lc) => self.scale(&lc.recip()),
            None => UniPoly::zero(),
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let c = rem.last().unwrap() / &lc;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * dc;
                }
                quot[k] = c;
            }
            rem.pop();
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    /// Monic gcd. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let a = IntPoly::primitive_from(self);
        let b = IntPoly::primitive_from(other);
        subresultant_gcd(a, b).to_rational().monic()
    }

    /// `p / gcd(p, p')`, monic. Zero stays zero.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Distinct rational roots, ascending, via the rational root theorem.
    ///
    /// `candidate_cap` bounds the number of `p/q` candidates tested; when the
    /// bound is hit, or an extreme coefficient cannot be factored, the result
    /// is flagged incomplete.
    pub fn rational_roots(&self, candidate_cap: u64) -> RootSearch {
        let mut roots = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return RootSearch { roots, complete: true };
        }
        let mut ip = IntPoly::primitive_from(&self.squarefree_part());
        if ip.coeffs[0].is_zero() {
            roots.push(Rational::zero());
            ip.coeffs.remove(0);
        }
        if ip.coeffs.len() == 2 {
            roots.push(Rational::new(-ip.coeffs[0].clone(), ip.coeffs[1].clone()));
            roots.sort();
            return RootSearch { roots, complete: true };
        }
        if ip.coeffs.len() < 2 {
            roots.sort();
            return RootSearch { roots, complete: true };
        }
        let (Some(num_divs), Some(den_divs)) =
            (divisors(&ip.coeffs[0]), divisors(ip.coeffs.last().unwrap()))
        else {
            roots.sort();
            return RootSearch { roots, complete: false };
        };
        let total = 2 * num_divs.len() as u64 * den_divs.len() as u64;
        let complete = total <= candidate_cap;
        let mut tested = 0u64;
        let rp = ip.to_rational();
        'outer: for p in &num_divs {
            for q in &den_divs {
                if !p.gcd(q).is_one() {
                    continue;
                }
                for s in [p.clone(), -p.clone()] {
                    tested += 1;
                    if tested > candidate_cap {
                        break 'outer;
                    }
                    let r = Rational::new(s, q.clone());
                    if rp.eval(&r).is_zero() {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort();
        roots.dedup();
        RootSearch { roots, complete }
    }
}

/// Result of a rational-root search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSearch {
    pub roots: Vec<Rational>,
    /// Every rational root was found.
    pub complete: bool,
}

#[derive(Clone, Debug)]
struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    /// Clears denominators and removes content; leading coefficient positive.
    fn primitive_from(p: &UniPoly) -> IntPoly {
        let l = p
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let coeffs: Vec<BigInt> = p.coeffs.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
        IntPoly { coeffs }.primitive()
    }

    fn primitive(mut self) -> IntPoly {
        let g = self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if !g.is_zero() && !g.is_one() {
            for c in &mut self.coeffs {
                *c /= &g;
            }
        }
        if self.coeffs.last().is_some_and(Signed::is_negative) {
            for c in &mut self.coeffs {
                *c = -c.clone();
            }
        }
        self
    }

    fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn lc(&self) -> &BigInt {
        self.coeffs.last().unwrap()
    }

    fn trim(mut self) -> IntPoly {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a mod b`.
    fn prem(&self, b: &IntPoly) -> IntPoly {
        let db = b.degree();
        let lb = b.lc().clone();
        let mut r = self.clone();
        let mut e = self.degree() + 1 - db;
        while !r.is_zero() && r.degree() >= db {
            let shift = r.degree() - db;
            let lr = r.lc().clone();
            let mut next: Vec<BigInt> = r.coeffs.iter().map(|c| c * &lb).collect();
            for (i, bc) in b.coeffs.iter().enumerate() {
                next[shift + i] -= &lr * bc;
            }
            r = IntPoly { coeffs: next }.trim();
            e -= 1;
        }
        let f = num_traits::pow(lb, e);
        IntPoly { coeffs: r.coeffs.iter().map(|c| c * &f).collect() }
    }

    fn to_rational(&self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect())
    }
}

fn subresultant_gcd(a: IntPoly, b: IntPoly) -> IntPoly {
    let (mut a, mut b) = if a.degree() >= b.degree() { (a, b) } else { (b, a) };
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = a.degree() - b.degree();
        let r = a.prem(&b);
        if r.is_zero() {
            return b.primitive();
        }
        if r.degree() == 0 {
            return IntPoly { coeffs: vec![BigInt::one()] };
        }
        let divisor = &g * num_traits::pow(h.clone(), delta);
        a = b;
        b = IntPoly { coeffs: r.coeffs.iter().map(|c| c / &divisor).collect() };
        g = a.lc().clone();
        // h <- g^delta / h^(delta - 1)
        h = if delta == 0 {
            h
        } else {
            num_traits::pow(g.clone(), delta) / num_traits::pow(h.clone(), delta - 1)
        };
    }
}

const TRIAL_LIMIT: u32 = 1_000_000;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        (0..=n).filter(|&i| sieve[i]).map(|i| i as u32).collect()
    })
}

/// Positive divisors of `n != 0`, or `None` when trial division up to
/// `TRIAL_LIMIT` leaves a cofactor that might be composite.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let mut n = n.abs();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    for &p in small_primes() {
        let pb = BigInt::from(p);
        if &pb * &pb > n {
            break;
        }
        // cheap path once the cofactor fits in a machine word
        if let Some(small) = n.to_u64() {
            if small % p as u64 != 0 {
                continue;
            }
        } else if !(&n % &pb).is_zero() {
            continue;
        }
        let mut e = 0;
        while (&n % &pb).is_zero() {
            n /= &pb;
            e += 1;
        }
        factors.push((pb, e));
    }
    if !n.is_one() {
        let lim = BigInt::from(TRIAL_LIMIT);
        if n > &lim * &lim {
            return None;
        }
        factors.push((n, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    Some(divs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{rat, ratio};

    fn up(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&v| rat(v)).collect())
    }

    #[test]
    fn gcd_examples() {
        // gcd(x^2 - 1, x - 1) = x - 1
        assert_eq!(up(&[-1, 0, 1]).gcd(&up(&[-1, 1])), up(&[-1, 1]));
        // gcd(x^2 + 1, x + 2) = 1
        assert_eq!(up(&[1, 0, 1]).gcd(&up(&[2, 1])), up(&[1]));
        // gcd(p, 0) = monic(p)
        assert_eq!(up(&[2, 4]).gcd(&UniPoly::zero()), UniPoly::new(vec![ratio(1, 2), rat(1)]));
    }

    #[test]
    fn gcd_of_high_degree_products() {
        let common = UniPoly::from_roots(&[rat(3), ratio(-1, 2), rat(7)]);
        let a = common.mul(&up(&[5, 0, 1, 2]));
        let b = common.mul(&up(&[-4, 3, 0, 0, 1]));
        assert_eq!(a.gcd(&b), common);
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(up(&[1, -2, 1]).squarefree_part(), up(&[-1, 1]));
        assert_eq!(up(&[1, 0, 1]).squarefree_part(), up(&[1, 0, 1]));
        // x^3 - x^2 -> x^2 - x
        assert_eq!(up(&[0, 0, -1, 1]).squarefree_part(), up(&[0, -1, 1]));
    }

    #[test]
    fn rational_root_search() {
        let p = UniPoly::from_roots(&[ratio(2, 3), rat(-5), rat(0), ratio(-7, 4)]).scale(&rat(6));
        let found = p.rational_roots(1_000_000);
        assert!(found.complete);
        assert_eq!(found.roots, vec![rat(-5), ratio(-7, 4), rat(0), ratio(2, 3)]);
        assert!(up(&[-2, 0, 1]).rational_roots(1_000_000).roots.is_empty());
        let capped = UniPoly::from_roots(&[rat(360), rat(1)]).mul(&up(&[-2, 0, 0, 1])).rational_roots(4);
        assert!(!capped.complete);
    }

    #[test]
    fn divisor_lists() {
        let d = divisors(&BigInt::from(-12)).unwrap();
        let want: Vec<BigInt> = [1, 2, 3, 4, 6, 12].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(d, want);
        let big_prime = BigInt::from(1_000_000_007u64);
        assert_eq!(divisors(&big_prime).unwrap().len(), 2);
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = up(&[3, -1, 4, 1, 5]);
        let b = UniPoly::new(vec![ratio(1, 2), rat(0), rat(3)]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }
}
