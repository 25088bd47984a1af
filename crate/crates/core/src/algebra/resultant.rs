use num_traits::{One, Zero};

use super::poly::{Monomial, MultiPoly, Ring};
use super::rational::Rational;
use super::univariate::UniPoly;
use super::AlgebraError;

/// Determinant by fraction-free (Bareiss) elimination. Every division is exact.
pub fn determinant(mut m: Vec<Vec<MultiPoly>>, ring: &Ring) -> MultiPoly {
    let n = m.len();
    if n == 0 {
        return MultiPoly::one(ring);
    }
    let mut sign = false;
    let mut prev = MultiPoly::one(ring);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = !sign;
                }
                None => return MultiPoly::zero(ring),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss step must divide exactly");
            }
            m[i][k] = MultiPoly::zero(ring);
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Sylvester matrix of `a` and `b` in variable `idx`: `deg b` rows of `a`
/// coefficients, then `deg a` rows of `b` coefficients, highest power first.
pub fn sylvester_matrix(a: &MultiPoly, b: &MultiPoly, idx: usize) -> Vec<Vec<MultiPoly>> {
    let ca = a.coefficients_in(idx);
    let cb = b.coefficients_in(idx);
    let (m, n) = (ca.len() - 1, cb.len() - 1);
    let size = m + n;
    let zero = MultiPoly::zero(a.ring());
    let mut rows = Vec::with_capacity(size);
    for r in 0..n {
        let mut row = vec![zero.clone(); size];
        for (j, c) in ca.iter().rev().enumerate() {
            row[r + j] = c.clone();
        }
        rows.push(row);
    }
    for r in 0..m {
        let mut row = vec![zero.clone(); size];
        for (j, c) in cb.iter().rev().enumerate() {
            row[r + j] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Resultant of `a` and `b` with respect to `var`, as the Sylvester determinant
/// with the rows of `a` first. The result lies in the same ring and is free of `var`.
pub fn resultant(a: &MultiPoly, b: &MultiPoly, var: &str, degree_cap: u32) -> Result<MultiPoly, AlgebraError> {
    if a.ring() != b.ring() {
        return Err(AlgebraError::RingMismatch {
            left: a.ring().vars().to_vec(),
            right: b.ring().vars().to_vec(),
        });
    }
    let idx = a
        .ring()
        .index_of(var)
        .ok_or_else(|| AlgebraError::UnknownVariable(var.to_string()))?;
    for p in [a, b] {
        let d = p.total_degree();
        if d > degree_cap {
            return Err(AlgebraError::DegreeCap { degree: d as u64, cap: degree_cap });
        }
    }
    let (m, n) = (a.degree_in(idx), b.degree_in(idx));
    if m == 0 && n == 0 {
        return Err(AlgebraError::VariableAbsent(var.to_string()));
    }
    if a.is_zero() || b.is_zero() {
        return Ok(MultiPoly::zero(a.ring()));
    }
    if m == 0 {
        return Ok(a.pow(n));
    }
    if n == 0 {
        return Ok(b.pow(m));
    }
    Ok(determinant(sylvester_matrix(a, b, idx), a.ring()))
}

/// The single variable a polynomial depends on, `None` for constants.
fn sole_variable(p: &MultiPoly) -> Result<Option<usize>, AlgebraError> {
    let used = p.used_vars();
    match used.len() {
        0 => Ok(None),
        1 => Ok(Some(used[0])),
        _ => Err(AlgebraError::NotUnivariate(p.to_string())),
    }
}

pub fn to_univariate(p: &MultiPoly, idx: usize) -> UniPoly {
    let mut coeffs = vec![Rational::zero(); p.degree_in(idx) as usize + 1];
    for (m, c) in p.terms() {
        coeffs[m.exponents()[idx] as usize] += c;
    }
    UniPoly::new(coeffs)
}

pub fn from_univariate(u: &UniPoly, ring: &Ring, idx: usize) -> MultiPoly {
    MultiPoly::from_terms(
        ring,
        u.coeffs()
            .iter()
            .enumerate()
            .map(|(e, c)| (Monomial::var(ring.len(), idx, e as u32), c.clone())),
    )
}

/// Monic gcd of two polynomials that involve at most one common variable.
pub fn gcd_univariate(a: &MultiPoly, b: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
    if a.ring() != b.ring() {
        return Err(AlgebraError::RingMismatch {
            left: a.ring().vars().to_vec(),
            right: b.ring().vars().to_vec(),
        });
    }
    let va = sole_variable(a)?;
    let vb = sole_variable(b)?;
    let idx = match (va, vb) {
        (Some(i), Some(j)) if i != j => {
            return Err(AlgebraError::NotUnivariate(format!("{a} and {b} use different variables")))
        }
        (Some(i), _) | (None, Some(i)) => i,
        (None, None) => 0,
    };
    if a.ring().is_empty() {
        let g = match (a.constant_value(), b.constant_value()) {
            (Some(x), _) if !x.is_zero() => Rational::one(),
            (_, Some(y)) if !y.is_zero() => Rational::one(),
            _ => Rational::zero(),
        };
        return Ok(MultiPoly::constant(a.ring(), g));
    }
    let g = to_univariate(a, idx).gcd(&to_univariate(b, idx));
    Ok(from_univariate(&g, a.ring(), idx))
}

/// `p / gcd(p, p')`, monic, for a nonzero univariate `p`.
pub fn squarefree_part(p: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroInput);
    }
    match sole_variable(p)? {
        None => Ok(MultiPoly::one(p.ring())),
        Some(idx) => Ok(from_univariate(&to_univariate(p, idx).squarefree_part(), p.ring(), idx)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::parser::parse_poly_str;

    fn p(s: &str) -> MultiPoly {
        parse_poly_str(s, &Ring::xy()).unwrap()
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(resultant(&p("x^2 - y"), &p("x - 1"), "x", 64).unwrap(), p("1 - y"));
        let common = p("x - y");
        let a = &common * &p("x^2 + 3");
        let b = &common * &p("2*x - y^2");
        assert!(resultant(&a, &b, "x", 64).unwrap().is_zero());
        // Res_x(x - c, x - d) = c - d under the a-rows-first convention
        assert_eq!(resultant(&p("x - 3"), &p("x - 5"), "x", 64).unwrap(), p("-2"));
    }

    #[test]
    fn resultant_errors() {
        let r = Ring::new(&["x", "y", "z"]);
        let a = MultiPoly::var(&r, "y").unwrap();
        assert!(matches!(resultant(&a, &a, "x", 64), Err(AlgebraError::VariableAbsent(_))));
        assert!(matches!(resultant(&a, &a, "w", 64), Err(AlgebraError::UnknownVariable(_))));
        let big = p("x").pow(70);
        assert!(matches!(resultant(&big, &p("x"), "x", 64), Err(AlgebraError::DegreeCap { .. })));
    }

    #[test]
    fn resultant_constant_side() {
        // Res_x(c, b) = c^deg b
        assert_eq!(resultant(&p("3"), &p("x^2 + 1"), "x", 64).unwrap(), p("9"));
    }

    #[test]
    fn gcd_and_squarefree_wrappers() {
        assert_eq!(gcd_univariate(&p("x^2 - 1"), &p("x - 1")).unwrap(), p("x - 1"));
        assert_eq!(gcd_univariate(&p("x^2 + 1"), &p("x + 2")).unwrap(), p("1"));
        assert_eq!(gcd_univariate(&p("2*y^2 + 2*y"), &p("0")).unwrap(), p("y^2 + y"));
        assert!(matches!(gcd_univariate(&p("x*y"), &p("x")), Err(AlgebraError::NotUnivariate(_))));
        assert!(matches!(gcd_univariate(&p("x"), &p("y")), Err(AlgebraError::NotUnivariate(_))));
        assert_eq!(squarefree_part(&p("x^3 - x^2")).unwrap(), p("x^2 - x"));
        assert_eq!(squarefree_part(&p("(y - 1)^2")).unwrap(), p("y - 1"));
        assert!(matches!(squarefree_part(&p("0")), Err(AlgebraError::ZeroInput)));
        assert_eq!(squarefree_part(&p("5")).unwrap(), MultiPoly::constant(&Ring::xy(), rat(1)));
    }

    #[test]
    fn determinant_small() {
        let r = Ring::xy();
        let c = |v: i64| MultiPoly::constant(&r, rat(v));
        let m = vec![vec![c(0), c(2), c(1)], vec![c(1), c(1), c(0)], vec![c(3), c(0), c(4)]];
        // 0*(4) - 2*(4 - 0) + 1*(0 - 3) = -11
        assert_eq!(determinant(m, &r), c(-11));
    }
}
