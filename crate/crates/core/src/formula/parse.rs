//! Recursive-descent parser for the formula grammar.
//!
//! ```text
//! formula   := quant | iff
//! quant     := ("all" | "ex") VAR [":" "V"] "." formula
//! iff       := imp { "<->" imp }          (left-assoc)
//! imp       := disj { "->" disj }         (right-assoc)
//! disj      := conj { ("|" | "or") conj }
//! conj      := neg  { ("&" | "and") neg }
//! neg       := ("~" | "not") neg | atom
//! atom      := VAR ("in" | "=") VAR | "(" formula ")"
//! ```

use thiserror::Error;

use super::ast::{Formula, Quantifier, Relation, Var};

pub const KEYWORDS: [&str; 7] = ["all", "ex", "in", "not", "and", "or", "V"];

/// Positions are byte offsets into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {position}: expected {expected}, found {found}")]
    Syntax {
        position: usize,
        expected: String,
        found: String,
    },
    #[error("reserved word `{word}` used as a variable at {position}")]
    ReservedWord { position: usize, word: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Keyword(&'static str),
    LParen,
    RParen,
    Colon,
    Dot,
    Amp,
    Bar,
    Tilde,
    Eq,
    Arrow,
    DoubleArrow,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Keyword(k) => format!("`{k}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DoubleArrow => "`<->`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b':' => Tok::Colon,
            b'.' => Tok::Dot,
            b'&' => Tok::Amp,
            b'|' => Tok::Bar,
            b'~' => Tok::Tilde,
            b'=' => Tok::Eq,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'<' if bytes[i + 1..].starts_with(b"->") => {
                i += 2;
                Tok::DoubleArrow
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                let word = &text[start..=i];
                match KEYWORDS.iter().find(|k| **k == word) {
                    Some(k) => Tok::Keyword(k),
                    None => Tok::Ident(word.to_owned()),
                }
            }
            _ => {
                let found = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    position: start,
                    expected: "a token".into(),
                    found: format!("`{found}`"),
                });
            }
        };
        toks.push((tok, start));
        i += 1;
    }
    toks.push((Tok::End, text.len()));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError::Syntax {
            position: self.offset(),
            expected: expected.into(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn var(&mut self) -> Result<Var, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Var::new(name))
            }
            Tok::Keyword(k) => Err(ParseError::ReservedWord {
                position: self.offset(),
                word: k.into(),
            }),
            _ => Err(self.error("a variable")),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let kind = match self.peek() {
            Tok::Keyword("all") => Quantifier::All,
            Tok::Keyword("ex") => Quantifier::Ex,
            _ => return self.iff(),
        };
        self.bump();
        let var = self.var()?;
        let bounded = if *self.peek() == Tok::Colon {
            self.bump();
            self.expect(Tok::Keyword("V"), "`V`")?;
            true
        } else {
            false
        };
        self.expect(Tok::Dot, "`.`")?;
        let body = self.formula()?;
        Ok(Formula::quant(kind, var, bounded, body))
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::DoubleArrow {
            self.bump();
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disj()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conj()?;
        while matches!(self.peek(), Tok::Bar | Tok::Keyword("or")) {
            self.bump();
            let rhs = self.conj()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.neg()?;
        while matches!(self.peek(), Tok::Amp | Tok::Keyword("and")) {
            self.bump();
            let rhs = self.neg()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn neg(&mut self) -> Result<Formula, ParseError> {
        if matches!(self.peek(), Tok::Tilde | Tok::Keyword("not")) {
            self.bump();
            return Ok(Formula::not(self.neg()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Keyword("all" | "ex") => Err(self.error("a variable or `(` (parenthesize nested quantifiers)")),
            Tok::Ident(_) | Tok::Keyword(_) => {
                let left = self.var()?;
                let rel = match self.peek() {
                    Tok::Keyword("in") => Relation::Member,
                    Tok::Eq => Relation::Equal,
                    _ => return Err(self.error("`in` or `=`")),
                };
                self.bump();
                let right = self.var()?;
                Ok(Formula::atom(rel, left, right))
            }
            _ => Err(self.error("a variable or `(`")),
        }
    }
}

/// Parses a formula; the whole input must be consumed.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(p.error("end of input"));
    }
    Ok(f)
}
