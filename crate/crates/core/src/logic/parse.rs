//! Text syntax for modal formulas.
//!
//! ```text
//! f ::= T | F | ident | ~ident | f & f | f "|" f | <>f | []f | (f)
//! ```
//!
//! Unary operators bind tightest, then `&`, then `|`; both binary operators
//! associate to the left. The printer adds exactly the parentheses needed for
//! `parse_ml(&print_ml(f)) == f`.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use core::fmt;

use super::ml::MlFormula;

/// A syntax error at a byte offset of the input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at offset {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

pub fn parse_ml(text: &str) -> Result<MlFormula, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let f = p.disjunction()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

pub fn print_ml(f: &MlFormula) -> String {
    f.to_string()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError {
            pos: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn disjunction(&mut self) -> Result<MlFormula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.eat("|") {
            let rhs = self.conjunction()?;
            lhs = MlFormula::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<MlFormula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat("&") {
            let rhs = self.unary()?;
            lhs = MlFormula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<MlFormula, ParseError> {
        if self.eat("<>") {
            return Ok(MlFormula::Diamond(Box::new(self.unary()?)));
        }
        if self.eat("[]") {
            return Ok(MlFormula::Box(Box::new(self.unary()?)));
        }
        if self.eat("~") {
            self.skip_ws();
            let at = self.pos;
            return match self.ident() {
                Some(name) if name == "T" || name == "F" => Err(ParseError {
                    pos: at,
                    message: "negation applies to propositions only".into(),
                }),
                Some(name) => Ok(MlFormula::NegProp(name)),
                None => Err(self.error("expected a proposition after `~`")),
            };
        }
        if self.eat("(") {
            let f = self.disjunction()?;
            if !self.eat(")") {
                return Err(self.error("expected `)`"));
            }
            return Ok(f);
        }
        self.skip_ws();
        match self.ident() {
            Some(name) if name == "T" => Ok(MlFormula::Top),
            Some(name) if name == "F" => Ok(MlFormula::Bot),
            Some(name) => Ok(MlFormula::Prop(name)),
            None if self.pos == self.src.len() => Err(self.error("unexpected end of input")),
            None => Err(self.error("expected a formula")),
        }
    }

    fn ident(&mut self) -> Option<String> {
        let start = self.pos;
        let first = *self.src.get(self.pos)?;
        if !(first.is_ascii_alphabetic() || first == b'_') {
            return None;
        }
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        Some(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Or,
    And,
    Unary,
}

fn write_at(f: &mut fmt::Formatter<'_>, phi: &MlFormula, ctx: Prec) -> fmt::Result {
    let own = match phi {
        MlFormula::Or(..) => Prec::Or,
        MlFormula::And(..) => Prec::And,
        _ => Prec::Unary,
    };
    let parens = own < ctx;
    if parens {
        f.write_str("(")?;
    }
    match phi {
        MlFormula::Top => f.write_str("T")?,
        MlFormula::Bot => f.write_str("F")?,
        MlFormula::Prop(p) => f.write_str(p)?,
        MlFormula::NegProp(p) => write!(f, "~{p}")?,
        MlFormula::Or(l, r) => {
            write_at(f, l, Prec::Or)?;
            f.write_str(" | ")?;
            write_at(f, r, Prec::And)?;
        }
        MlFormula::And(l, r) => {
            write_at(f, l, Prec::And)?;
            f.write_str(" & ")?;
            write_at(f, r, Prec::Unary)?;
        }
        MlFormula::Diamond(g) => {
            f.write_str("<>")?;
            write_at(f, g, Prec::Unary)?;
        }
        MlFormula::Box(g) => {
            f.write_str("[]")?;
            write_at(f, g, Prec::Unary)?;
        }
    }
    if parens {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for MlFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(f, self, Prec::Or)
    }
}

impl core::str::FromStr for MlFormula {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ml(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use MlFormula as F;

    #[test]
    fn parses_examples() {
        assert_eq!(parse_ml("[]F").unwrap(), F::boxed(F::Bot));
        assert_eq!(
            parse_ml("<> (p & ~q)").unwrap(),
            F::diamond(F::and(F::prop("p"), F::neg_prop("q")))
        );
        assert_eq!(
            parse_ml("[][]F | []<>T").unwrap(),
            F::or(F::boxed(F::boxed(F::Bot)), F::boxed(F::diamond(F::Top)))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse_ml("p | q & r").unwrap(),
            F::or(F::prop("p"), F::and(F::prop("q"), F::prop("r")))
        );
        assert_eq!(
            parse_ml("p & q & r").unwrap(),
            F::and(F::and(F::prop("p"), F::prop("q")), F::prop("r"))
        );
        assert_eq!(
            parse_ml("<>p & q").unwrap(),
            F::and(F::diamond(F::prop("p")), F::prop("q"))
        );
    }

    #[test]
    fn prints_minimal_parentheses() {
        let f = F::and(F::prop("p"), F::and(F::prop("q"), F::prop("r")));
        assert_eq!(print_ml(&f), "p & (q & r)");
        let g = F::diamond(F::or(F::Top, F::neg_prop("p")));
        assert_eq!(print_ml(&g), "<>(T | ~p)");
        assert_eq!(print_ml(&F::or(F::or(F::Top, F::Bot), F::Top)), "T | F | T");
    }

    #[test]
    fn reports_error_positions() {
        let e = parse_ml("p & ").unwrap_err();
        assert_eq!(e.pos, 4);
        let e = parse_ml("(p | q").unwrap_err();
        assert_eq!(e.pos, 6);
        let e = parse_ml("p q").unwrap_err();
        assert_eq!(e.pos, 2);
        assert!(parse_ml("~T").is_err());
        assert!(parse_ml("").is_err());
        assert!(parse_ml("<>").is_err());
    }
}
