//! Dynamics spec format, one definition per line:
//!
//! ```text
//! rays: 2
//! core: a b
//! map: core:a -> ray:0:0
//! map: ray:1:0 -> ray:0:1
//! ```

use num_traits::ToPrimitive;

use super::lexer::Tok;
use super::{ParseError, ParseErrorKind, Parser, SourceText};
use crate::setdyn::{CofiniteSelfMap, Node};

fn node(p: &mut Parser<'_>) -> Result<Node, ParseError> {
    let kind = p.ident()?;
    p.expect(Tok::Colon)?;
    match kind.as_str() {
        "core" => Ok(Node::Core(p.ident()?)),
        "ray" => {
            let i = p.integer()?;
            p.expect(Tok::Colon)?;
            let n = p.integer()?;
            match (i.to_u32(), n.to_u64()) {
                (Some(i), Some(n)) => Ok(Node::ray(i, n)),
                _ => p.fail(ParseErrorKind::Syntax("ray coordinate out of range".into())),
            }
        }
        _ => p.fail(ParseErrorKind::Syntax(format!("unknown node kind `{kind}`"))),
    }
}

pub fn parse_dyn_spec(src: &SourceText) -> Result<CofiniteSelfMap, ParseError> {
    let mut rays: Option<u32> = None;
    let mut core: Vec<(String, usize, usize)> = Vec::new();
    let mut maps: Vec<(Node, Node, usize, usize)> = Vec::new();
    let mut last_line = 1;
    for (i, line) in src.text.lines().enumerate() {
        let ln = i + 1;
        last_line = ln;
        let mut p = Parser::for_fragment(src, line, ln)?;
        if *p.peek() == Tok::End {
            continue;
        }
        let (l, c) = p.here();
        let key = p.ident()?;
        p.expect(Tok::Colon)?;
        match key.as_str() {
            "rays" => {
                if rays.is_some() {
                    return Err(src.error(l, c, ParseErrorKind::Spec("`rays` given twice".into())));
                }
                match p.integer()?.to_u32() {
                    Some(r) => rays = Some(r),
                    None => return p.fail(ParseErrorKind::Spec("ray count out of range".into())),
                }
            }
            "core" => {
                while *p.peek() != Tok::End {
                    let (l, c) = p.here();
                    core.push((p.ident()?, l, c));
                }
            }
            "map" => {
                let (l, c) = p.here();
                let s = node(&mut p)?;
                p.expect(Tok::Arrow)?;
                let t = node(&mut p)?;
                maps.push((s, t, l, c));
            }
            other => {
                return Err(src.error(l, c, ParseErrorKind::Spec(format!("unknown definition `{other}`"))));
            }
        }
        p.expect_end()?;
    }
    let rays = rays.unwrap_or(0);
    let mut labels = std::collections::BTreeSet::new();
    for (label, l, c) in &core {
        if !labels.insert(label.clone()) {
            return Err(src.error(*l, *c, ParseErrorKind::Spec(format!("duplicate core label `{label}`"))));
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    for (s, t, l, c) in &maps {
        for n in [s, t] {
            let ok = match n {
                Node::Core(label) => labels.contains(label),
                Node::Ray { index, .. } => *index < rays,
            };
            if !ok {
                return Err(src.error(*l, *c, ParseErrorKind::Spec(format!("unknown node {n}"))));
            }
        }
        if !seen.insert(s.clone()) {
            return Err(src.error(*l, *c, ParseErrorKind::Spec(format!("{s} is mapped twice"))));
        }
    }
    CofiniteSelfMap::new(labels, rays, maps.into_iter().map(|(s, t, _, _)| (s, t)))
        .map_err(|e| src.error(last_line, 1, ParseErrorKind::Spec(e.to_string())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::print_dyn_spec;

    #[test]
    fn merge_spec() {
        let src = SourceText::new("# two rays merging\nrays: 2\nmap: ray:1:0 -> ray:0:1\n", "merge.spec");
        let s = parse_dyn_spec(&src).unwrap();
        assert_eq!(s.ray_count(), 2);
        assert_eq!(s.apply(&Node::ray(1, 0)).unwrap(), Node::ray(0, 1));
        let again = parse_dyn_spec(&SourceText::inline(print_dyn_spec(&s))).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn core_spec() {
        let s = parse_dyn_spec(&SourceText::inline("core: c1 c2\nmap: core:c1 -> core:c2\nmap: core:c2 -> core:c2")).unwrap();
        assert_eq!(s.core_labels().len(), 2);
    }

    #[test]
    fn positioned_errors() {
        let e = parse_dyn_spec(&SourceText::inline("rays: 1\nmap: ray:1:0 -> ray:0:0")).unwrap_err();
        assert_eq!((e.line, e.column), (2, 6));
        let e = parse_dyn_spec(&SourceText::inline("rays: 1\nmap: ray:0:0 ray:0:1")).unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_dyn_spec(&SourceText::inline("core: a\n")).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Spec(_)));
        let e = parse_dyn_spec(&SourceText::inline("edges: 3")).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Spec(_)));
    }
}
