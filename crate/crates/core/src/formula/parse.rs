//! Recursive-descent parser shared by formulas and patterns.

use super::pattern::{Hole, Pattern};
use super::{Formula, Prop};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{kind} at line {line}, column {col}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unknown operator token `{0}`")]
    UnknownToken(String),
    #[error("unexpected {found}, expected {expected}")]
    Unexpected { found: String, expected: &'static str },
    #[error("unexpected end of input, expected {0}")]
    UnexpectedEnd(&'static str),
    #[error("hole depth must be a non-negative integer, got {0}")]
    NegativeHoleDepth(String),
    #[error("placeholders and holes are only allowed in patterns")]
    PatternSyntaxInFormula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    Question,
    Minus,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Num(s) => format!("number `{s}`"),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Question => "`?`".into(),
            Tok::Minus => "`-`".into(),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let take = |n: usize, tok: Tok, out: &mut Vec<Spanned>| {
            out.push(Spanned { tok, line: l0, col: c0 });
            n
        };
        let adv = if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let s: String = chars[start..j].iter().collect();
            take(j - i, Tok::Ident(s), &mut out)
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let s: String = chars[i..j].iter().collect();
            take(j - i, Tok::Num(s), &mut out)
        } else {
            let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
            if rest.starts_with("<->") {
                take(3, Tok::Iff, &mut out)
            } else if rest.starts_with("->") {
                take(2, Tok::Implies, &mut out)
            } else {
                match c {
                    '!' => take(1, Tok::Not, &mut out),
                    '&' => take(1, Tok::And, &mut out),
                    '|' => take(1, Tok::Or, &mut out),
                    '(' => take(1, Tok::LParen, &mut out),
                    ')' => take(1, Tok::RParen, &mut out),
                    '?' => take(1, Tok::Question, &mut out),
                    '-' => take(1, Tok::Minus, &mut out),
                    _ => {
                        let mut j = i;
                        while j < chars.len()
                            && !chars[j].is_whitespace()
                            && !chars[j].is_ascii_alphanumeric()
                            && !"()".contains(chars[j])
                        {
                            j += 1;
                        }
                        let s: String = chars[i..j.max(i + 1)].iter().collect();
                        return Err(ParseError {
                            kind: ParseErrorKind::UnknownToken(s),
                            line: l0,
                            col: c0,
                        });
                    }
                }
            }
        };
        i += adv;
        col += adv;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    pattern: bool,
    next_hole: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|s| (s.line, s.col)).unwrap_or(self.end)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        let (line, col) = self.here();
        ParseError { kind, line, col }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            Some(t) => self.err(ParseErrorKind::Unexpected { found: t.describe(), expected }),
            None => self.err(ParseErrorKind::UnexpectedEnd(expected)),
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == name)
    }

    fn iff(&mut self) -> Result<Pattern, ParseError> {
        let mut lhs = self.implies()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.implies()?;
            lhs = Pattern::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Pattern, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.implies()?;
            return Ok(Pattern::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Pattern, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and()?;
            lhs = Pattern::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Pattern, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(&Tok::And) {
                let rhs = self.unary()?;
                lhs = Pattern::And(Box::new(lhs), Box::new(rhs));
            } else if self.is_ident("U") {
                self.pos += 1;
                let rhs = self.unary()?;
                lhs = Pattern::U(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Pattern, ParseError> {
        if self.eat(&Tok::Not) {
            return Ok(Pattern::negate_shallow(self.unary()?));
        }
        for (kw, ctor) in [
            ("G", Pattern::G as fn(Box<Pattern>) -> Pattern),
            ("F", Pattern::F),
            ("X", Pattern::X),
        ] {
            if self.is_ident(kw) {
                self.pos += 1;
                return Ok(ctor(Box::new(self.unary()?)));
            }
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Pattern, ParseError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.unexpected("`)`"));
                }
                Ok(inner)
            }
            Some(Tok::Question) => {
                if !self.pattern {
                    return Err(self.err(ParseErrorKind::PatternSyntaxInFormula));
                }
                self.pos += 1;
                match self.peek().cloned() {
                    Some(Tok::Ident(name)) if !is_keyword(&name) => {
                        self.pos += 1;
                        Ok(Pattern::Var(Prop::new(&name)))
                    }
                    _ => Err(self.unexpected("placeholder name")),
                }
            }
            Some(Tok::Ident(name)) if self.pattern && name == "phi" => {
                self.pos += 1;
                if !self.eat(&Tok::LParen) {
                    return Err(self.unexpected("`(` after phi"));
                }
                let depth = match self.peek().cloned() {
                    Some(Tok::Num(n)) => {
                        self.pos += 1;
                        n.parse::<usize>()
                            .map_err(|_| self.err(ParseErrorKind::NegativeHoleDepth(n)))?
                    }
                    Some(Tok::Minus) => {
                        let e = self.err(ParseErrorKind::NegativeHoleDepth(format!(
                            "-{}",
                            match self.toks.get(self.pos + 1).map(|s| &s.tok) {
                                Some(Tok::Num(n)) => n.as_str(),
                                _ => "",
                            }
                        )));
                        return Err(e);
                    }
                    _ => return Err(self.unexpected("hole depth")),
                };
                if !self.eat(&Tok::RParen) {
                    return Err(self.unexpected("`)`"));
                }
                let id = self.next_hole;
                self.next_hole += 1;
                Ok(Pattern::Hole(Hole { id, depth, negated: false }))
            }
            Some(Tok::Ident(name)) if name == "true" => {
                self.pos += 1;
                Ok(Pattern::True)
            }
            Some(Tok::Ident(name)) if !is_keyword(&name) => {
                self.pos += 1;
                Ok(Pattern::Atom(Prop::new(&name)))
            }
            _ => Err(self.unexpected("proposition or `(`")),
        }
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "G" | "F" | "X" | "U" | "true")
}

fn parse(text: &str, pattern: bool) -> Result<Pattern, ParseError> {
    let toks = lex(text)?;
    let line = text.lines().count().max(1);
    let col = text.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1);
    let mut p = Parser { toks, pos: 0, pattern, next_hole: 0, end: (line, col) };
    let out = p.iff()?;
    if p.pos != p.toks.len() {
        return Err(p.unexpected("end of input"));
    }
    Ok(out)
}

/// Parses a formula. `->` and `<->` are desugared; negation is kept where
/// written (use [`Formula::to_nnf`] to normalize).
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let pat = parse(text, false)?;
    Ok(pat.to_formula().expect("formula grammar has no placeholders"))
}

/// Parses a pattern. Placeholders are written `?name`, holes `phi(d)`.
/// Holes are numbered left to right from 0.
pub fn parse_pattern(text: &str) -> Result<Pattern, ParseError> {
    parse(text, true)
}
