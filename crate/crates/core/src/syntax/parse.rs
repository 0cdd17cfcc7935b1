//! Recursive-descent parser for the ASCII formula grammar.
//!
//! Precedence, tightest first: `~ [] <>`, `&`, `|`, `->`, `<->`.
//! `&` and `|` associate to the left, `->` and `<->` to the right.
//! The Unicode connectives `¬ □ ◇ ∧ ∨ → ↔ ⊤ ⊥` are accepted as aliases.

use std::fmt;

use thiserror::Error;

use super::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: found {found}, expected one of {}", .expected.join(", "))]
pub struct ParseError {
    /// Character offset into the input.
    pub position: usize,
    pub found: String,
    pub expected: Vec<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    Box,
    Diamond,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::True => f.write_str("`true`"),
            Tok::False => f.write_str("`false`"),
            Tok::Not => f.write_str("`~`"),
            Tok::Box => f.write_str("`[]`"),
            Tok::Diamond => f.write_str("`<>`"),
            Tok::And => f.write_str("`&`"),
            Tok::Or => f.write_str("`|`"),
            Tok::Implies => f.write_str("`->`"),
            Tok::Iff => f.write_str("`<->`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

const OPERAND: &[&str] = &["atom", "true", "false", "~", "[]", "<>", "("];
const OPERATOR: &[&str] = &["&", "|", "->", "<->", ")", "end of input"];

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            'a'..='z' => {
                while i < chars.len()
                    && (chars[i].is_ascii_lowercase()
                        || chars[i].is_ascii_digit()
                        || chars[i] == '_')
                {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                out.push((
                    start,
                    match word.as_str() {
                        "true" => Tok::True,
                        "false" => Tok::False,
                        _ => Tok::Ident(word),
                    },
                ));
                continue;
            }
            '~' | '¬' => Tok::Not,
            '□' => Tok::Box,
            '◇' => Tok::Diamond,
            '&' | '∧' => Tok::And,
            '|' | '∨' => Tok::Or,
            '→' => Tok::Implies,
            '↔' => Tok::Iff,
            '⊤' => Tok::True,
            '⊥' => Tok::False,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' if chars.get(i + 1) == Some(&']') => {
                i += 1;
                Tok::Box
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Implies
            }
            '<' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Diamond
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                i += 2;
                Tok::Iff
            }
            other => {
                return Err(ParseError {
                    position: start,
                    found: format!("`{other}`"),
                    expected: OPERAND.iter().chain(OPERATOR).copied().collect(),
                })
            }
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((chars.len(), Tok::Eof));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        let (position, tok) = &self.toks[self.pos];
        ParseError {
            position: *position,
            found: tok.to_string(),
            expected: expected.to_vec(),
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.implication()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.iff()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Box => {
                self.bump();
                Ok(Formula::boxed(self.unary()?))
            }
            Tok::Diamond => {
                self.bump();
                Ok(Formula::diamond(self.unary()?))
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Atom(name))
            }
            Tok::True => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.iff()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(&["&", "|", "->", "<->", ")"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error(OPERAND)),
        }
    }
}

/// Parse a formula written in the grammar described in the module docs.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.iff()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(OPERATOR));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        Formula::atom(s)
    }

    #[test]
    fn box_binds_tighter_than_implication() {
        assert_eq!(
            parse("[]p -> p").unwrap(),
            Formula::implies(Formula::boxed(p("p")), p("p"))
        );
    }

    #[test]
    fn stacked_modalities() {
        assert_eq!(
            parse("<>[]p -> []<>p").unwrap(),
            Formula::implies(
                Formula::diamond(Formula::boxed(p("p"))),
                Formula::boxed(Formula::diamond(p("p")))
            )
        );
    }

    #[test]
    fn and_binds_tighter_than_or() {
        assert_eq!(
            parse("p & q | r").unwrap(),
            Formula::or(Formula::and(p("p"), p("q")), p("r"))
        );
    }

    #[test]
    fn implication_is_right_associative() {
        assert_eq!(
            parse("p -> q -> r").unwrap(),
            Formula::implies(p("p"), Formula::implies(p("q"), p("r")))
        );
    }

    #[test]
    fn unicode_aliases() {
        assert_eq!(parse("□p → ◇p").unwrap(), parse("[]p -> <>p").unwrap());
        assert_eq!(
            parse("¬⊥ ∧ ⊤ ∨ q ↔ r").unwrap(),
            parse("~false & true | q <-> r").unwrap()
        );
    }

    #[test]
    fn identifiers_allow_digits_and_underscores() {
        assert_eq!(parse("p0 & x_1").unwrap(), Formula::and(p("p0"), p("x_1")));
    }

    #[test]
    fn error_reports_position_and_expected() {
        let e = parse("p & ").unwrap_err();
        assert_eq!(e.position, 4);
        assert!(e.expected.contains(&"atom"));
        let e = parse("(p | q").unwrap_err();
        assert_eq!(e.position, 6);
        assert!(e.expected.contains(&")"));
        let e = parse("p q").unwrap_err();
        assert_eq!(e.position, 2);
        assert!(e.found.contains('q'));
        assert!(parse("P").is_err());
        assert!(parse("").is_err());
    }
}
