//! Plain-text structure files.
//!
//! ```text
//! structure {
//!   kind grid
//!   signature { H/2 V/2 label_a/1* }
//!   domain { 1,1 1,2 2,1 2,2 }
//!   relations {
//!     H { (1,1 2,1) (1,2 2,2) }
//!     V { (1,1 1,2) (2,1 2,2) }
//!   }
//! }
//! ```
//!
//! A trailing `*` on a signature entry flags a label predicate. Printing
//! is canonical (signature order for relations, domain order for tuples),
//! and `parse(print(s)) == s` exactly.

use super::{RelDecl, Signature, Structure, StructureError, StructureKind};
use std::fmt::Write as _;

pub fn print_structure(s: &Structure) -> String {
    let mut out = String::new();
    out.push_str("structure {\n");
    let _ = writeln!(out, "  kind {}", s.kind().tag());
    out.push_str("  signature {");
    for d in s.signature().rels() {
        let _ = write!(
            out,
            " {}/{}{}",
            d.name,
            d.arity,
            if d.is_label { "*" } else { "" }
        );
    }
    out.push_str(" }\n");
    out.push_str("  domain {");
    for e in s.elements() {
        let _ = write!(out, " {}", e);
    }
    out.push_str(" }\n");
    out.push_str("  relations {\n");
    for (i, d) in s.signature().rels().iter().enumerate() {
        let _ = write!(out, "    {} {{", d.name);
        for t in s.tuples(i) {
            out.push_str(" (");
            for (k, &e) in t.iter().enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                out.push_str(s.element_name(e));
            }
            out.push(')');
        }
        out.push_str(" }\n");
    }
    out.push_str("  }\n}\n");
    out
}

struct Tokens {
    toks: Vec<(usize, String)>,
    pos: usize,
}

impl Tokens {
    fn new(text: &str) -> Self {
        let mut toks = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let mut cur = String::new();
            for c in line.chars() {
                match c {
                    '{' | '}' | '(' | ')' => {
                        if !cur.is_empty() {
                            toks.push((ln + 1, std::mem::take(&mut cur)));
                        }
                        toks.push((ln + 1, c.to_string()));
                    }
                    c if c.is_whitespace() => {
                        if !cur.is_empty() {
                            toks.push((ln + 1, std::mem::take(&mut cur)));
                        }
                    }
                    c => cur.push(c),
                }
            }
            if !cur.is_empty() {
                toks.push((ln + 1, cur));
            }
        }
        Tokens { toks, pos: 0 }
    }

    fn line(&self) -> usize {
        self.toks
            .get(self.pos.min(self.toks.len().saturating_sub(1)))
            .map(|(l, _)| *l)
            .unwrap_or(0)
    }

    fn err(&self, msg: impl Into<String>) -> StructureError {
        StructureError::Parse {
            line: self.line(),
            msg: msg.into(),
        }
    }

    fn next(&mut self) -> Result<&str, StructureError> {
        let t = self
            .toks
            .get(self.pos)
            .ok_or_else(|| StructureError::Parse {
                line: 0,
                msg: "unexpected end of input".into(),
            })?;
        self.pos += 1;
        Ok(&t.1)
    }

    fn expect(&mut self, tok: &str) -> Result<(), StructureError> {
        let line = self.line();
        let got = self.next()?;
        if got != tok {
            let got = got.to_string();
            return Err(StructureError::Parse {
                line,
                msg: format!("expected `{}`, got `{}`", tok, got),
            });
        }
        Ok(())
    }

    fn peek(&self) -> Option<&str> {
        self.toks.get(self.pos).map(|(_, t)| t.as_str())
    }
}

pub fn parse_structure(text: &str) -> Result<Structure, StructureError> {
    let mut t = Tokens::new(text);
    t.expect("structure")?;
    t.expect("{")?;
    t.expect("kind")?;
    let kind_line = t.line();
    let kind_tok = t.next()?.to_string();
    let kind = StructureKind::from_tag(&kind_tok).ok_or_else(|| StructureError::Parse {
        line: kind_line,
        msg: format!("unknown kind `{}`", kind_tok),
    })?;

    t.expect("signature")?;
    t.expect("{")?;
    let mut decls = Vec::new();
    while t.peek() != Some("}") {
        let entry = t.next()?.to_string();
        let (name, rest) = entry
            .split_once('/')
            .ok_or_else(|| t.err(format!("signature entry `{}` must be name/arity", entry)))?;
        let (arity_str, is_label) = match rest.strip_suffix('*') {
            Some(a) => (a, true),
            None => (rest, false),
        };
        let arity: usize = arity_str
            .parse()
            .map_err(|_| t.err(format!("bad arity in `{}`", entry)))?;
        decls.push(RelDecl {
            name: name.to_string(),
            arity,
            is_label,
        });
    }
    t.expect("}")?;
    let sig = Signature::new(decls)?;

    t.expect("domain")?;
    t.expect("{")?;
    let mut domain = Vec::new();
    while t.peek() != Some("}") {
        domain.push(t.next()?.to_string());
    }
    t.expect("}")?;

    t.expect("relations")?;
    t.expect("{")?;
    let mut contents = Vec::new();
    while t.peek() != Some("}") {
        let rel = t.next()?.to_string();
        t.expect("{")?;
        let mut tuples = Vec::new();
        while t.peek() == Some("(") {
            t.expect("(")?;
            let mut tup = Vec::new();
            while t.peek() != Some(")") {
                tup.push(t.next()?.to_string());
            }
            t.expect(")")?;
            tuples.push(tup);
        }
        t.expect("}")?;
        contents.push((rel, tuples));
    }
    t.expect("}")?;
    t.expect("}")?;
    if t.peek().is_some() {
        return Err(t.err("trailing input after structure"));
    }
    Structure::new(sig, kind, domain, contents)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{make_grid, make_grid_graph, Tree};

    #[test]
    fn roundtrip_grid() {
        let g = make_grid(3).unwrap();
        let text = print_structure(&g);
        let back = parse_structure(&text).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn roundtrip_tree_and_graph() {
        let t = Tree::new(
            vec!["a".into(), "b".into()],
            vec![0, 1, 0],
            vec![(Some(1), Some(2)), (None, None), (None, None)],
        )
        .unwrap()
        .to_structure();
        assert_eq!(parse_structure(&print_structure(&t)).unwrap(), t);

        let g = make_grid_graph(3).unwrap().into_structure();
        assert_eq!(parse_structure(&print_structure(&g)).unwrap(), g);
    }

    #[test]
    fn kind_validation_on_parse() {
        // An H-tuple that belongs to V must be rejected for kind grid.
        let g = make_grid(2).unwrap();
        let text = print_structure(&g);
        let bad = text.replace("H { (1,1 2,1) (1,2 2,2) }", "H { (1,1 1,2) (1,2 2,2) }");
        assert!(parse_structure(&bad).is_err());
    }

    #[test]
    fn parse_error_position() {
        let err = parse_structure("structure {\n  kind nope\n}").unwrap_err();
        match err {
            StructureError::Parse { line, .. } => assert_eq!(line, 2),
            e => panic!("unexpected error {e:?}"),
        }
    }
}
