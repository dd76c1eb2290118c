//! Fully parenthesized prefix syntax for formulas.
//!
//! ```text
//! form := atom | (not f) | (and f f) | (or f f) | (implies f f)
//!       | (exists var f) | (forall var f) | (existsS Var f) | (forallS Var f)
//!       | (mod Var a p)
//! atom := (R var ...) | (= var var) | (in var Var)
//! ```
//!
//! Lowercase identifiers are first-order variables, capitalized ones are
//! monadic. `print_formula` followed by `parse_formula` is the identity.

use super::{is_set_var, Dialect, Formula, LogicError};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error(transparent)]
    Logic(#[from] LogicError),
}

struct Lexer<'a> {
    text: &'a [u8],
    pos: usize,
}

#[derive(Debug, PartialEq)]
enum Tok {
    Open,
    Close,
    Word(String),
    End,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            text: text.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn next(&mut self) -> Tok {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.text.len() {
            return Tok::End;
        }
        match self.text[self.pos] {
            b'(' => {
                self.pos += 1;
                Tok::Open
            }
            b')' => {
                self.pos += 1;
                Tok::Close
            }
            _ => {
                let start = self.pos;
                while self.pos < self.text.len()
                    && !self.text[self.pos].is_ascii_whitespace()
                    && self.text[self.pos] != b'('
                    && self.text[self.pos] != b')'
                {
                    self.pos += 1;
                }
                Tok::Word(String::from_utf8_lossy(&self.text[start..self.pos]).into_owned())
            }
        }
    }

    fn expect_word(&mut self) -> Result<String, ParseError> {
        match self.next() {
            Tok::Word(w) => Ok(w),
            t => Err(self.err(format!("expected identifier, got {:?}", t))),
        }
    }

    fn expect_close(&mut self) -> Result<(), ParseError> {
        match self.next() {
            Tok::Close => Ok(()),
            t => Err(self.err(format!("expected `)`, got {:?}", t))),
        }
    }
}

fn parse_form(lx: &mut Lexer) -> Result<Formula, ParseError> {
    match lx.next() {
        Tok::Open => {}
        t => return Err(lx.err(format!("expected `(`, got {:?}", t))),
    }
    let head = lx.expect_word()?;
    let f = match head.as_str() {
        "not" => Formula::Not(Box::new(parse_form(lx)?)),
        "and" => Formula::And(Box::new(parse_form(lx)?), Box::new(parse_form(lx)?)),
        "or" => Formula::Or(Box::new(parse_form(lx)?), Box::new(parse_form(lx)?)),
        "implies" => Formula::Implies(Box::new(parse_form(lx)?), Box::new(parse_form(lx)?)),
        "exists" | "forall" => {
            let v = lx.expect_word()?;
            if is_set_var(&v) {
                return Err(lx.err(format!("`{head}` binds a first-order variable, got `{v}`")));
            }
            let body = Box::new(parse_form(lx)?);
            if head == "exists" {
                Formula::Exists(v, body)
            } else {
                Formula::Forall(v, body)
            }
        }
        "existsS" | "forallS" => {
            let v = lx.expect_word()?;
            if !is_set_var(&v) {
                return Err(lx.err(format!("`{head}` binds a monadic variable, got `{v}`")));
            }
            let body = Box::new(parse_form(lx)?);
            if head == "existsS" {
                Formula::ExistsSet(v, body)
            } else {
                Formula::ForallSet(v, body)
            }
        }
        "mod" => {
            let v = lx.expect_word()?;
            let a: u32 = lx
                .expect_word()?
                .parse()
                .map_err(|_| lx.err("modular atom: bad residue"))?;
            let p: u32 = lx
                .expect_word()?
                .parse()
                .map_err(|_| lx.err("modular atom: bad modulus"))?;
            Formula::Mod(v, a, p)
        }
        "=" => Formula::Eq(lx.expect_word()?, lx.expect_word()?),
        "in" => Formula::In(lx.expect_word()?, lx.expect_word()?),
        rel_name => {
            let mut args = Vec::new();
            loop {
                let save = lx.pos;
                match lx.next() {
                    Tok::Word(w) => args.push(w),
                    Tok::Close => {
                        lx.pos = save;
                        break;
                    }
                    t => return Err(lx.err(format!("expected argument or `)`, got {:?}", t))),
                }
            }
            if args.is_empty() {
                return Err(lx.err(format!("relation atom `{rel_name}` needs arguments")));
            }
            return {
                lx.expect_close()?;
                Ok(Formula::Rel(rel_name.to_string(), args))
            };
        }
    };
    lx.expect_close()?;
    Ok(f)
}

/// Parse a formula and validate it against the dialect gate. All free
/// variables stay free; binding discipline (no shadowing, sort casing) is
/// enforced.
pub fn parse_formula(text: &str, dialect: Dialect) -> Result<Formula, ParseError> {
    let mut lx = Lexer::new(text);
    let f = parse_form(&mut lx)?;
    match lx.next() {
        Tok::End => {}
        t => return Err(lx.err(format!("trailing input: {:?}", t))),
    }
    f.validate(dialect)?;
    Ok(f)
}

pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_form(f, &mut out);
    out
}

fn write_form(f: &Formula, out: &mut String) {
    match f {
        Formula::Rel(r, args) => {
            let _ = write!(out, "({}", r);
            for a in args {
                let _ = write!(out, " {}", a);
            }
            out.push(')');
        }
        Formula::Eq(a, b) => {
            let _ = write!(out, "(= {} {})", a, b);
        }
        Formula::In(x, set) => {
            let _ = write!(out, "(in {} {})", x, set);
        }
        Formula::Mod(set, a, p) => {
            let _ = write!(out, "(mod {} {} {})", set, a, p);
        }
        Formula::Not(g) => {
            out.push_str("(not ");
            write_form(g, out);
            out.push(')');
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            let head = match f {
                Formula::And(..) => "and",
                Formula::Or(..) => "or",
                _ => "implies",
            };
            let _ = write!(out, "({} ", head);
            write_form(a, out);
            out.push(' ');
            write_form(b, out);
            out.push(')');
        }
        Formula::Exists(v, g)
        | Formula::Forall(v, g)
        | Formula::ExistsSet(v, g)
        | Formula::ForallSet(v, g) => {
            let head = match f {
                Formula::Exists(..) => "exists",
                Formula::Forall(..) => "forall",
                Formula::ExistsSet(..) => "existsS",
                _ => "forallS",
            };
            let _ = write!(out, "({} {} ", head, v);
            write_form(g, out);
            out.push(')');
        }
    }
}

impl std::fmt::Display for Formula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&print_formula(self))
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;

    #[test]
    fn parse_examples() {
        let f = parse_formula("(exists x (label_a x))", Dialect::Mso).unwrap();
        assert_eq!(f, exists("x", rel("label_a", &["x"])));

        let g = parse_formula("(and (in x X) (= x y))", Dialect::Mso).unwrap();
        assert_eq!(g, and(member("x", "X"), eq("x", "y")));
    }

    #[test]
    fn dialect_gate_at_parse() {
        assert!(parse_formula("(mod X 0 2)", Dialect::Mso).is_err());
        assert!(parse_formula("(mod X 0 2)", Dialect::C2Mso).is_ok());
        assert!(parse_formula("(mod X 0 3)", Dialect::C2Mso).is_err());
        assert!(parse_formula("(mod X 0 3)", Dialect::Cmso).is_ok());
        assert!(parse_formula("(mod X 0 1)", Dialect::Cmso).is_err());
    }

    #[test]
    fn print_then_parse_is_identity() {
        let fs = [
            exists(
                "x",
                forall_set("X", implies(member("x", "X"), modular("X", 1, 3))),
            ),
            and(rel("E", &["x", "y"]), not(eq("x", "y"))),
            or(tautology(), rel("H", &["u", "v"])),
        ];
        for f in fs {
            let text = print_formula(&f);
            let back = parse_formula(&text, Dialect::Cmso).unwrap();
            assert_eq!(back, f);
        }
    }

    #[test]
    fn error_positions() {
        let err = parse_formula("(and (= x y)", Dialect::Mso).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }));
        let err = parse_formula("(exists X (= x x))", Dialect::Mso).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }));
    }
}
