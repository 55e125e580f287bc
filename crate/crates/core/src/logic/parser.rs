//! Concrete formula syntax.
//!
//! ```text
//! formula := imp ("<->" imp)*
//! imp     := or ("->" imp)?
//! or      := and ("||" and)*
//! and     := unary ("&&" unary)*
//! unary   := "!" unary | "<" id ">" unary | "[" id "]" unary
//!          | "(" formula ")" | "tt" | "ff" | id
//! ```

use super::{AutomatonTable, Formula};
use crate::error::{Error, Result};
use crate::word::PushdownAlphabet;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    LAngle,
    RAngle,
    LBracket,
    RBracket,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let rest = &text[i..];
        let (tok, len) = if rest.starts_with("<->") {
            (Token::Iff, 3)
        } else if rest.starts_with("->") {
            (Token::Implies, 2)
        } else if rest.starts_with("&&") {
            (Token::And, 2)
        } else if rest.starts_with("||") {
            (Token::Or, 2)
        } else {
            match c {
                b'!' => (Token::Not, 1),
                b'<' => (Token::LAngle, 1),
                b'>' => (Token::RAngle, 1),
                b'[' => (Token::LBracket, 1),
                b']' => (Token::RBracket, 1),
                b'(' => (Token::LParen, 1),
                b')' => (Token::RParen, 1),
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let len = rest
                        .bytes()
                        .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
                        .count();
                    (Token::Ident(rest[..len].to_string()), len)
                }
                _ => {
                    return Err(Error::Syntax {
                        pos: i,
                        msg: format!("unexpected character `{}`", rest.chars().next().unwrap()),
                    })
                }
            }
        };
        out.push((i, tok));
        i += len;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    alphabet: &'a PushdownAlphabet,
    known_guard: &'a dyn Fn(&str) -> bool,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, t: &Token) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Token, what: &str) -> Result<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut f = self.implication()?;
        while self.eat(&Token::Iff) {
            let g = self.implication()?;
            f = Formula::iff(f, g);
        }
        Ok(f)
    }

    fn implication(&mut self) -> Result<Formula> {
        let f = self.disjunction()?;
        if self.eat(&Token::Implies) {
            let g = self.implication()?;
            return Ok(Formula::implies(f, g));
        }
        Ok(f)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut f = self.conjunction()?;
        while self.eat(&Token::Or) {
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.eat(&Token::And) {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn guard_name(&mut self, close: Token, what: &str) -> Result<String> {
        let at = self.offset();
        let name = match self.peek() {
            Some(Token::Ident(name)) => name.clone(),
            _ => return self.error("expected automaton name"),
        };
        self.pos += 1;
        self.expect(close, what)?;
        if !(self.known_guard)(&name) {
            let _ = at;
            return Err(Error::UnknownAutomaton(name));
        }
        Ok(name)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().cloned() {
            Some(Token::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Token::LAngle) => {
                self.pos += 1;
                let g = self.guard_name(Token::RAngle, "`>`")?;
                Ok(Formula::Diamond(g, Box::new(self.unary()?)))
            }
            Some(Token::LBracket) => {
                self.pos += 1;
                let g = self.guard_name(Token::RBracket, "`]`")?;
                Ok(Formula::Box(g, Box::new(self.unary()?)))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(f)
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "tt" => Ok(Formula::tt(self.alphabet)),
                    "ff" => Ok(Formula::ff(self.alphabet)),
                    p if self.alphabet.propositions().contains(p) => Ok(Formula::atom(p)),
                    p => Err(Error::UnknownProposition(p.to_string())),
                }
            }
            Some(_) => self.error("expected a formula"),
            None => self.error("unexpected end of input"),
        }
    }
}

/// Parses a formula whose guards are resolved by `known_guard`.
pub fn parse_formula_with(
    text: &str,
    alphabet: &PushdownAlphabet,
    known_guard: &dyn Fn(&str) -> bool,
) -> Result<Formula> {
    let mut parser = Parser {
        tokens: lex(text)?,
        pos: 0,
        end: text.len(),
        alphabet,
        known_guard,
    };
    let f = parser.formula()?;
    if parser.pos != parser.tokens.len() {
        return parser.error("trailing input");
    }
    Ok(f)
}

pub fn parse_formula(text: &str, table: &AutomatonTable) -> Result<Formula> {
    let f = parse_formula_with(text, table.alphabet(), &|g| table.contains(g))?;
    table.check(&f)?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    #[test]
    fn example_one_formula() {
        let table = examples::example1_table();
        let f = parse_formula("[Ac](p -> <Ar> p)", &table).unwrap();
        let p = Formula::atom("p");
        let expected = Formula::boxed(
            "Ac",
            Formula::or(Formula::not(p.clone()), Formula::diamond("Ar", p)),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn tt_and_ff_use_designated_proposition() {
        let table = examples::example1_table();
        let p = table
            .alphabet()
            .designated_proposition()
            .unwrap()
            .to_string();
        let tt = parse_formula("tt", &table).unwrap();
        assert_eq!(
            tt,
            Formula::or(Formula::atom(&p), Formula::not(Formula::atom(&p)))
        );
        assert_eq!(
            parse_formula("ff", &table).unwrap(),
            Formula::ff(table.alphabet())
        );
    }

    #[test]
    fn unknown_automaton() {
        let table = examples::example1_table();
        assert!(matches!(
            parse_formula("<Missing>p", &table),
            Err(Error::UnknownAutomaton(name)) if name == "Missing"
        ));
    }

    #[test]
    fn precedence_and_associativity() {
        let table = examples::example1_table();
        let f = parse_formula("!p && q || p -> q -> p", &table).unwrap();
        let (p, q) = (Formula::atom("p"), Formula::atom("q"));
        let lhs = Formula::or(Formula::and(Formula::not(p.clone()), q.clone()), p.clone());
        let expected = Formula::implies(lhs, Formula::implies(q, p));
        assert_eq!(f, expected);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let table = examples::example1_table();
        match parse_formula("p && (q", &table) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("unexpected {other:?}"),
        }
        match parse_formula("p $ q", &table) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_formula("zz", &table),
            Err(Error::UnknownProposition(_))
        ));
    }

    #[test]
    fn printer_output_reparses() {
        let table = examples::example1_table();
        for text in [
            "[Ac](p -> <Ar> p)",
            "!(p && <Ac>!q) || [Ar](q || p) && p",
            "p <-> q",
        ] {
            let f = parse_formula(text, &table).unwrap();
            assert_eq!(parse_formula(&f.to_string(), &table).unwrap(), f);
        }
    }
}
