use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar. Always stored in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Height of `p/q` in lowest terms: `max(|p|, q)`.
pub fn height(r: &Rational) -> BigInt {
    let n = r.numer().abs();
    let d = r.denom().clone();
    if n > d {
        n
    } else {
        d
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `n` or `n/d` with optional leading sign.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// All rationals of height at most `max_height`, ordered by height then value.
pub fn rationals_up_to_height(max_height: u32) -> Vec<Rational> {
    let mut out = vec![Rational::zero()];
    for h in 1..=max_height as i64 {
        let mut level = Vec::new();
        for other in 1..=h {
            // exactly one of numerator / denominator attains the height
            for (n, d) in [(h, other), (other, h)] {
                if num_integer::gcd(n, d) == 1 {
                    level.push(ratio(n, d));
                    level.push(ratio(-n, d));
                }
            }
        }
        level.sort();
        level.dedup();
        out.extend(level);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-2/4"), Some(ratio(-1, 2)));
        assert_eq!(parse_rational(" 7 "), Some(rat(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(format_rational(&ratio(6, -4)), "-3/2");
        assert_eq!(format_rational(&rat(0)), "0");
    }

    #[test]
    fn height_grid() {
        let g = rationals_up_to_height(2);
        // 0, ±1, ±2, ±1/2
        assert_eq!(g.len(), 7);
        assert!(g.iter().all(|r| height(r) <= BigInt::from(2)));
        assert_eq!(height(&ratio(-3, 7)), BigInt::from(7));
    }
}
