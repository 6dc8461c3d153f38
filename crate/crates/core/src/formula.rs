//! The propositional language: atoms, the constants `true`/`false`, and the
//! connectives `~`, `&`, `|`.
//!
//! Concrete syntax binds `~` tighter than `&`, and `&` tighter than `|`.
//! Binary connectives associate to the left. The printer emits the fewest
//! parentheses that still parse back to the identical tree.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Formula {
    Atom(String),
    Const(bool),
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn truth() -> Formula {
        Formula::Const(true)
    }

    pub fn falsity() -> Formula {
        Formula::Const(false)
    }

    pub fn negate(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn or(self, rhs: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn and(self, rhs: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    /// Atom names in order of first occurrence.
    pub fn atoms(&self) -> Vec<&str> {
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a str>) {
            match f {
                Formula::Atom(a) => {
                    if !out.contains(&a.as_str()) {
                        out.push(a);
                    }
                }
                Formula::Const(_) => {}
                Formula::Not(x) => walk(x, out),
                Formula::Or(l, r) | Formula::And(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Const(_) => 1,
            Formula::Not(x) => 1 + x.size(),
            Formula::Or(l, r) | Formula::And(l, r) => 1 + l.size() + r.size(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, x: &Formula, parens: bool) -> fmt::Result {
            if parens {
                write!(f, "({x})")
            } else {
                write!(f, "{x}")
            }
        }
        match self {
            Formula::Atom(a) => f.write_str(a),
            Formula::Const(true) => f.write_str("true"),
            Formula::Const(false) => f.write_str("false"),
            Formula::Not(x) => {
                f.write_str("~")?;
                child(f, x, x.precedence() < 3)
            }
            Formula::Or(l, r) | Formula::And(l, r) => {
                let p = self.precedence();
                child(f, l, l.precedence() < p)?;
                f.write_str(if p == 1 { " | " } else { " & " })?;
                child(f, r, r.precedence() <= p)
            }
        }
    }
}

/// `{α ∨ β : α ∈ gamma, β ∈ delta}`, duplicates removed, in product order.
pub fn disjoin_sets(gamma: &[Formula], delta: &[Formula]) -> Vec<Formula> {
    let mut out: Vec<Formula> = Vec::with_capacity(gamma.len() * delta.len());
    for a in gamma {
        for b in delta {
            let d = a.clone().or(b.clone());
            if !out.contains(&d) {
                out.push(d);
            }
        }
    }
    out
}

/// Ordered list of distinct atom names. The order fixes the enumeration
/// order of valuations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize)]
pub struct AtomSet(Vec<String>);

impl AtomSet {
    pub fn new<I, S>(names: I) -> Result<AtomSet>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out: Vec<String> = Vec::new();
        for name in names {
            let name = name.into();
            if !is_identifier(&name) || name == "true" || name == "false" {
                return Err(Error::InvalidAtomName(name));
            }
            if out.contains(&name) {
                return Err(Error::DuplicateAtom(name));
            }
            out.push(name);
        }
        Ok(AtomSet(out))
    }

    /// Parses a comma-separated list such as `r,q,p`. Blank input gives the
    /// empty atom set.
    pub fn parse_list(text: &str) -> Result<AtomSet> {
        AtomSet::new(
            text.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_owned),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|a| a == name)
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    LParen,
    RParen,
}

fn describe(tok: &Token) -> String {
    match tok {
        Token::Ident(s) => format!("identifier `{s}`"),
        Token::True => "`true`".into(),
        Token::False => "`false`".into(),
        Token::Not => "`~`".into(),
        Token::And => "`&`".into(),
        Token::Or => "`|`".into(),
        Token::LParen => "`(`".into(),
        Token::RParen => "`)`".into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '~' => out.push((column, Token::Not)),
            '&' => out.push((column, Token::And)),
            '|' => out.push((column, Token::Or)),
            '(' => out.push((column, Token::LParen)),
            ')' => out.push((column, Token::RParen)),
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let tok = match word.as_str() {
                    "true" => Token::True,
                    "false" => Token::False,
                    _ => Token::Ident(word),
                };
                out.push((column, tok));
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    column,
                    message: format!("unknown token `{other}`"),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end_column: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(c, _)| *c)
            .unwrap_or(self.end_column)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            column: self.column(),
            message: message.into(),
        })
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            let rhs = self.conjunction()?;
            lhs = lhs.or(rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = lhs.and(rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        let Some(tok) = self.peek().cloned() else {
            return self.error("unexpected end of input");
        };
        match tok {
            Token::Not => {
                self.pos += 1;
                Ok(self.unary()?.negate())
            }
            Token::Ident(name) => {
                self.pos += 1;
                Ok(Formula::Atom(name))
            }
            Token::True => {
                self.pos += 1;
                Ok(Formula::truth())
            }
            Token::False => {
                self.pos += 1;
                Ok(Formula::falsity())
            }
            Token::LParen => {
                self.pos += 1;
                let inner = self.disjunction()?;
                if self.peek() != Some(&Token::RParen) {
                    return self.error("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            other => self.error(format!("unexpected {}", describe(&other))),
        }
    }
}

pub fn parse(text: &str) -> Result<Formula> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end_column: text.chars().count() + 1,
    };
    let f = parser.disjunction()?;
    if let Some(tok) = parser.peek() {
        let msg = format!("unexpected {} after complete formula", describe(tok));
        return parser.error(msg);
    }
    Ok(f)
}

/// Parses a comma-separated formula list. Blank input is the empty list.
pub fn parse_list(text: &str) -> Result<Vec<Formula>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|part| parse(part.trim())).collect()
}

/// Parses formula-file contents: one formula per line, `#` starts a comment,
/// blank lines are skipped. Error columns are reported against the line.
pub fn parse_file(text: &str) -> Result<Vec<Formula>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        out.push(parse(body).map_err(|e| match e {
            Error::Syntax { column, message } => Error::Syntax {
                column,
                message: format!("line {}: {message}", lineno + 1),
            },
            other => other,
        })?);
    }
    Ok(out)
}
