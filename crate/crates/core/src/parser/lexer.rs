use num_bigint::BigInt;

use super::{ParseError, ParseErrorKind, SourceText};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Eq,
    Colon,
    Arrow,
    End,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

/// Tokenizes `text`, which starts at `first_line` of the source. `#` comments
/// run to end of line.
pub(crate) fn tokenize(src: &SourceText, text: &str, first_line: usize) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line = first_line;
    let mut col = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l0, c0) = (line, col);
        let simple = match c {
            '+' => Some(Tok::Plus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Eq),
            ':' => Some(Tok::Colon),
            _ => None,
        };
        if let Some(tok) = simple {
            chars.next();
            col += 1;
            out.push(Spanned { tok, line: l0, column: c0 });
            continue;
        }
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
            }
            '-' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'>') {
                    chars.next();
                    col += 1;
                    out.push(Spanned { tok: Tok::Arrow, line: l0, column: c0 });
                } else {
                    out.push(Spanned { tok: Tok::Minus, line: l0, column: c0 });
                }
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    s.push(d);
                    chars.next();
                    col += 1;
                }
                out.push(Spanned { tok: Tok::Int(s.parse().expect("digits")), line: l0, column: c0 });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_alphanumeric() || **d == '_') {
                    s.push(d);
                    chars.next();
                    col += 1;
                }
                out.push(Spanned { tok: Tok::Ident(s), line: l0, column: c0 });
            }
            other => {
                return Err(src.error(l0, c0, ParseErrorKind::Syntax(format!("unexpected character `{other}`"))));
            }
        }
    }
    out.push(Spanned { tok: Tok::End, line, column: col });
    Ok(out)
}
