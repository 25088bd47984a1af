//! Text formats: polynomials, plane maps, rational points and dynamics specs,
//! plus the canonical printer whose output parses back to the same value.
//!
//! Polynomial grammar (whitespace and `#` comments ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT)*
//! atom   := INT ('/' INT)? | IDENT | '(' expr ')'
//! ```
//!
//! Multiplication is always explicit, so `2x` is rejected.

mod dynspec;
mod lexer;
mod print;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::algebra::{MultiPoly, Point, PolyMap, Rational, Ring};
use lexer::{tokenize, Spanned, Tok};

pub use dynspec::parse_dyn_spec;
pub use print::{print_dyn_spec, print_map, print_point, print_poly};

/// Largest total degree a literal power may produce while parsing.
pub const PARSE_DEGREE_LIMIT: u32 = 4096;

/// Input text with a tag saying where it came from (a path or `<inline>`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceText {
    pub text: String,
    pub origin: String,
}

impl SourceText {
    pub fn new(text: impl Into<String>, origin: impl Into<String>) -> Self {
        SourceText { text: text.into(), origin: origin.into() }
    }

    pub fn inline(text: impl Into<String>) -> Self {
        Self::new(text, "<inline>")
    }

    pub(crate) fn error(&self, line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { origin: self.origin.clone(), line, column, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("negative exponent")]
    NegativeExponent,
    #[error("expected {expected} components, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("invalid dynamics spec: {0}")]
    Spec(String),
}

/// A positioned parse failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub origin: String,
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}: {}", self.origin, self.line, self.column, self.kind)
    }
}

pub(crate) struct Parser<'a> {
    src: &'a SourceText,
    toks: Vec<Spanned>,
    pos: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &'a SourceText) -> Result<Self, ParseError> {
        Self::for_fragment(src, &src.text, 1)
    }

    pub(crate) fn for_fragment(src: &'a SourceText, text: &str, first_line: usize) -> Result<Self, ParseError> {
        Ok(Parser { src, toks: tokenize(src, text, first_line)?, pos: 0 })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub(crate) fn here(&self) -> (usize, usize) {
        let s = &self.toks[self.pos];
        (s.line, s.column)
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn fail<T>(&self, kind: ParseErrorKind) -> Result<T, ParseError> {
        let (l, c) = self.here();
        Err(self.src.error(l, c, kind))
    }

    pub(crate) fn unexpected<T>(&self, wanted: &str) -> Result<T, ParseError> {
        self.fail(ParseErrorKind::Syntax(format!("expected {wanted}, found {}", self.peek().describe())))
    }

    pub(crate) fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&tok.describe())
        }
    }

    pub(crate) fn expect_end(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            self.unexpected("end of input")
        }
    }

    pub(crate) fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.unexpected("an identifier"),
        }
    }

    pub(crate) fn integer(&mut self) -> Result<BigInt, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => self.unexpected("an integer"),
        }
    }

    /// `['-'] INT ['/' INT]`
    pub(crate) fn signed_rational(&mut self) -> Result<Rational, ParseError> {
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let r = self.rational_literal()?;
        Ok(if neg { -r } else { r })
    }

    fn rational_literal(&mut self) -> Result<Rational, ParseError> {
        let n = self.integer()?;
        if *self.peek() != Tok::Slash {
            return Ok(Rational::from_integer(n));
        }
        self.bump();
        let d = match self.peek() {
            Tok::Int(d) => d.clone(),
            _ => return self.unexpected("an integer denominator"),
        };
        if d.is_zero() {
            return self.fail(ParseErrorKind::Syntax("zero denominator".into()));
        }
        self.bump();
        Ok(Rational::new(n, d))
    }

    pub(crate) fn expr(&mut self, ring: &Ring) -> Result<MultiPoly, ParseError> {
        let mut acc = self.term(ring)?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term(ring)?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term(ring)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self, ring: &Ring) -> Result<MultiPoly, ParseError> {
        let mut acc = self.unary(ring)?;
        while *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.unary(ring)?;
            acc = &acc * &rhs;
            if acc.total_degree() > PARSE_DEGREE_LIMIT {
                return self.fail(ParseErrorKind::Syntax(format!("degree exceeds {PARSE_DEGREE_LIMIT}")));
            }
        }
        Ok(acc)
    }

    fn unary(&mut self, ring: &Ring) -> Result<MultiPoly, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.unary(ring)?);
        }
        self.power(ring)
    }

    fn power(&mut self, ring: &Ring) -> Result<MultiPoly, ParseError> {
        let mut base = self.atom(ring)?;
        while *self.peek() == Tok::Caret {
            self.bump();
            if *self.peek() == Tok::Minus {
                return self.fail(ParseErrorKind::NegativeExponent);
            }
            let e = self.integer()?;
            let e = match e.to_u32() {
                Some(e) => e,
                None => return self.fail(ParseErrorKind::Syntax("exponent too large".into())),
            };
            base = match base.pow_capped(e, PARSE_DEGREE_LIMIT) {
                Ok(p) => p,
                Err(_) => return self.fail(ParseErrorKind::Syntax(format!("degree exceeds {PARSE_DEGREE_LIMIT}"))),
            };
        }
        Ok(base)
    }

    fn atom(&mut self, ring: &Ring) -> Result<MultiPoly, ParseError> {
        match self.peek().clone() {
            Tok::Int(_) => {
                let r = self.rational_literal()?;
                Ok(MultiPoly::constant(ring, r))
            }
            Tok::Ident(name) => match MultiPoly::var(ring, &name) {
                Ok(v) => {
                    self.bump();
                    Ok(v)
                }
                Err(_) => self.fail(ParseErrorKind::UnknownVariable(name)),
            },
            Tok::LParen => {
                self.bump();
                let e = self.expr(ring)?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => self.unexpected("a number, variable or `(`"),
        }
    }

    /// `'(' expr (',' expr)* ')'`, returning the components and the position of `(`.
    fn tuple(&mut self, ring: &Ring) -> Result<(Vec<MultiPoly>, (usize, usize)), ParseError> {
        let at = self.here();
        self.expect(Tok::LParen)?;
        let mut items = vec![self.expr(ring)?];
        while *self.peek() == Tok::Comma {
            self.bump();
            items.push(self.expr(ring)?);
        }
        self.expect(Tok::RParen)?;
        Ok((items, at))
    }

    fn map_definition(&mut self) -> Result<PolyMap, ParseError> {
        let ring = Ring::xy();
        self.ident()?;
        self.expect(Tok::LParen)?;
        for (i, want) in ["x", "y"].iter().enumerate() {
            if i > 0 {
                self.expect(Tok::Comma)?;
            }
            match self.peek() {
                Tok::Ident(s) if s == want => {
                    self.bump();
                }
                _ => return self.unexpected(&format!("argument `{want}`")),
            }
        }
        self.expect(Tok::RParen)?;
        self.expect(Tok::Eq)?;
        let (mut comps, (l, c)) = self.tuple(&ring)?;
        if comps.len() != 2 {
            return Err(self.src.error(l, c, ParseErrorKind::Arity { expected: 2, found: comps.len() }));
        }
        let q = comps.pop().unwrap();
        let p = comps.pop().unwrap();
        Ok(PolyMap::new(p, q).expect("components parsed over (x,y)"))
    }

    fn point(&mut self) -> Result<Point, ParseError> {
        let paren = *self.peek() == Tok::LParen;
        if paren {
            self.bump();
        }
        let x = self.signed_rational()?;
        self.expect(Tok::Comma)?;
        let y = self.signed_rational()?;
        if paren {
            self.expect(Tok::RParen)?;
        }
        Ok(Point::new(x, y))
    }
}

/// Parses a polynomial over `ring`.
pub fn parse_poly(src: &SourceText, ring: &Ring) -> Result<MultiPoly, ParseError> {
    let mut p = Parser::new(src)?;
    if *p.peek() == Tok::End {
        return p.unexpected("a polynomial");
    }
    let e = p.expr(ring)?;
    p.expect_end()?;
    Ok(e)
}

pub fn parse_poly_str(text: &str, ring: &Ring) -> Result<MultiPoly, ParseError> {
    parse_poly(&SourceText::inline(text), ring)
}

/// Parses one map definition `f(x,y) = (<poly>, <poly>)`; comments and blank lines are ignored.
pub fn parse_map(src: &SourceText) -> Result<PolyMap, ParseError> {
    let mut p = Parser::new(src)?;
    let m = p.map_definition()?;
    p.expect_end()?;
    Ok(m)
}

pub fn parse_map_str(text: &str) -> Result<PolyMap, ParseError> {
    parse_map(&SourceText::inline(text))
}

/// Parses `a,b` or `(a,b)` with rational components such as `-2,1/2`.
pub fn parse_point(src: &SourceText) -> Result<Point, ParseError> {
    let mut p = Parser::new(src)?;
    let pt = p.point()?;
    p.expect_end()?;
    Ok(pt)
}

pub fn parse_point_str(text: &str) -> Result<Point, ParseError> {
    parse_point(&SourceText::inline(text))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{rat, ratio};

    fn xy() -> Ring {
        Ring::xy()
    }

    #[test]
    fn example_first_component() {
        let p = parse_poly_str("x - 2*(x*y+1) - y*(x*y+1)^2", &xy()).unwrap();
        let expanded = parse_poly_str("-x^2*y^3 - 2*x*y^2 - 2*x*y + x - y - 2", &xy()).unwrap();
        assert_eq!(p, expanded);
    }

    #[test]
    fn zero_and_errors() {
        assert!(parse_poly_str("0", &xy()).unwrap().is_zero());
        let e = parse_poly_str("(x^2", &xy()).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        assert_eq!((e.line, e.column), (1, 5));
        let e = parse_poly_str("x + z", &xy()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownVariable("z".into()));
        assert_eq!(e.column, 5);
        assert_eq!(parse_poly_str("x^-1", &xy()).unwrap_err().kind, ParseErrorKind::NegativeExponent);
        assert!(parse_poly_str("2x", &xy()).is_err());
        assert!(parse_poly_str("x/2", &xy()).is_err());
        assert!(parse_poly_str("1/0", &xy()).is_err());
        assert!(parse_poly_str("", &xy()).is_err());
    }

    #[test]
    fn precedence() {
        // unary minus binds looser than ^
        let a = parse_poly_str("-x^2", &xy()).unwrap();
        assert_eq!(a.evaluate(&[rat(3), rat(0)]).unwrap(), rat(-9));
        let b = parse_poly_str("1/2*x - 3/4 + y^2*2", &xy()).unwrap();
        assert_eq!(b.evaluate(&[rat(1), rat(1)]).unwrap(), ratio(7, 4));
        let c = parse_poly_str("(x+1)^2^2", &xy()).unwrap();
        assert_eq!(c.total_degree(), 4);
    }

    #[test]
    fn maps() {
        let m = parse_map_str("f(x,y) = (x - 2*(x*y+1) - y*(x*y+1)^2, -1 - y*(x*y+1))").unwrap();
        assert_eq!(m.apply(&Point::new(rat(3), rat(0))), Point::new(rat(1), rat(-1)));
        let tri = parse_map_str("f(x,y) = (x, y + x^2)").unwrap();
        assert_eq!(tri.q(), &parse_poly_str("y + x^2", &xy()).unwrap());
        let e = parse_map_str("f(x,y) = (x)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Arity { expected: 2, found: 1 });
        let src = SourceText::new("# example\n\nf(x,y) = (x,\n  y + x^2) # trailing\n", "auto.map");
        assert_eq!(parse_map(&src).unwrap(), tri);
        let e = parse_map(&SourceText::new("f(x,y) = (x, y)\nf(x,y) = (y, x)\n", "two.map")).unwrap_err();
        assert_eq!((e.origin.as_str(), e.line), ("two.map", 2));
    }

    #[test]
    fn points() {
        assert_eq!(parse_point_str("-2,1/2").unwrap(), Point::new(rat(-2), ratio(1, 2)));
        assert_eq!(parse_point_str("(0, 0)").unwrap(), Point::new(rat(0), rat(0)));
        assert!(parse_point_str("1").is_err());
        assert!(parse_point_str("1,2,3").is_err());
    }

    #[test]
    fn printing() {
        assert_eq!(print_poly(&MultiPoly::zero(&xy())), "0");
        let u = parse_poly_str("(x*y+1)^2", &xy()).unwrap();
        assert_eq!(print_poly(&u), "x^2*y^2 + 2*x*y + 1");
        let m = parse_map_str("f(x,y) = (x - 2*(x*y+1) - y*(x*y+1)^2, -1 - y*(x*y+1))").unwrap();
        let line = print_map(&m);
        assert!(!line.contains('\n'));
        assert_eq!(parse_map_str(&line).unwrap(), m);
        let r = parse_poly_str("-1/2*x^3 + 7/3", &xy()).unwrap();
        assert_eq!(print_poly(&r), "-1/2*x^3 + 7/3");
        assert_eq!(print_point(&Point::new(ratio(-3, 2), rat(4))), "(-3/2,4)");
    }
}
