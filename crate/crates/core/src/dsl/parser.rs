//! Tokenizer and recursive-descent parser for composition expressions.

use std::fmt;

use super::{Expr, ExprKind, NamedGame, Petal, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Str(String),
    Nat(u64),
    Punct(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Str(s) => write!(f, "string {s:?}"),
            Tok::Nat(n) => write!(f, "`{n}`"),
            Tok::Punct(c) => write!(f, "`{c}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

/// Syntax error with a 1-based position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: ", self.line, self.column)?;
        match self.expected.as_slice() {
            [] => write!(f, "{}", self.found),
            [one] => write!(f, "expected {one}, found {}", self.found),
            many => write!(f, "expected one of {}, found {}", many.join(", "), self.found),
        }
    }
}

impl std::error::Error for ParseError {}

/// 1-based line and column of a byte offset.
pub fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

const EXPR_START: &[&str] = &[
    "`clique`",
    "`k5minus`",
    "`windmill`",
    "`game26666`",
    "`trefoil`",
    "`planar14`",
    "`product`",
    "`cone`",
    "`lower`",
];

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn error(&self, at: usize, found: String) -> ParseError {
        let (line, column) = line_col(self.src, at);
        ParseError {
            line,
            column,
            expected: Vec::new(),
            found,
        }
    }

    fn skip_trivia(&mut self) {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() {
            match bytes[self.pos] {
                b' ' | b'\t' | b'\r' | b'\n' => self.pos += 1,
                b'#' => {
                    while self.pos < bytes.len() && bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn next(&mut self) -> Result<(Tok, Span), ParseError> {
        self.skip_trivia();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return Ok((Tok::Eof, Span::new(start, start)));
        };
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let len = rest
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                .unwrap_or(rest.len());
            self.pos += len;
            Tok::Ident(rest[..len].to_string())
        } else if c.is_ascii_digit() {
            let len = rest.find(|ch: char| !ch.is_ascii_digit()).unwrap_or(rest.len());
            self.pos += len;
            let n = rest[..len]
                .parse::<u64>()
                .ok()
                .filter(|&n| n <= u64::from(u32::MAX))
                .ok_or_else(|| self.error(start, format!("number `{}` too large", &rest[..len])))?;
            Tok::Nat(n)
        } else if c == '"' {
            let mut value = String::new();
            let mut chars = rest.char_indices().skip(1);
            loop {
                match chars.next() {
                    None => return Err(self.error(start, "unterminated string".into())),
                    Some((i, '"')) => {
                        self.pos += i + 1;
                        break;
                    }
                    Some((i, '\\')) => match chars.next() {
                        Some((_, e @ ('"' | '\\'))) => value.push(e),
                        _ => return Err(self.error(start + i, "invalid escape in string".into())),
                    },
                    Some((_, ch)) => value.push(ch),
                }
            }
            Tok::Str(value)
        } else if "[](),;@/=".contains(c) {
            self.pos += 1;
            Tok::Punct(c)
        } else {
            return Err(self.error(start, format!("unexpected character {c:?}")));
        };
        Ok((tok, Span::new(start, self.pos)))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    span: Span,
    prev_end: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer { src, pos: 0 };
        let (tok, span) = lexer.next()?;
        Ok(Parser {
            lexer,
            tok,
            span,
            prev_end: 0,
        })
    }

    fn bump(&mut self) -> Result<(Tok, Span), ParseError> {
        let (tok, span) = self.lexer.next()?;
        let prev_tok = std::mem::replace(&mut self.tok, tok);
        let prev_span = std::mem::replace(&mut self.span, span);
        self.prev_end = prev_span.end;
        Ok((prev_tok, prev_span))
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let (line, column) = line_col(self.lexer.src, self.span.start);
        ParseError {
            line,
            column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.tok.to_string(),
        }
    }

    fn punct(&mut self, c: char) -> Result<Span, ParseError> {
        if self.tok == Tok::Punct(c) {
            Ok(self.bump()?.1)
        } else {
            Err(self.unexpected(&[&format!("`{c}`")]))
        }
    }

    fn eat(&mut self, c: char) -> Result<bool, ParseError> {
        if self.tok == Tok::Punct(c) {
            self.bump()?;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    fn nat(&mut self, what: &str) -> Result<u32, ParseError> {
        match self.tok {
            Tok::Nat(n) => {
                self.bump()?;
                Ok(n as u32)
            }
            _ => Err(self.unexpected(&[what])),
        }
    }

    fn hatness(&mut self) -> Result<u32, ParseError> {
        let at = self.span.start;
        let h = self.nat("hatness")?;
        if h == 0 {
            let (line, column) = line_col(self.lexer.src, at);
            return Err(ParseError {
                line,
                column,
                expected: vec!["hatness of at least 1".into()],
                found: "`0`".into(),
            });
        }
        Ok(h)
    }

    fn name(&mut self) -> Result<String, ParseError> {
        match &self.tok {
            Tok::Ident(_) | Tok::Str(_) => match self.bump()?.0 {
                Tok::Ident(s) | Tok::Str(s) => Ok(s),
                _ => unreachable!(),
            },
            _ => Err(self.unexpected(&["vertex name"])),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let Tok::Ident(word) = &self.tok else {
            return Err(self.unexpected(EXPR_START));
        };
        if !EXPR_START.contains(&format!("`{word}`").as_str()) {
            return Err(self.unexpected(EXPR_START));
        }
        let word = word.clone();
        let (_, head) = self.bump()?;
        let kind = match word.as_str() {
            "clique" => {
                self.punct('[')?;
                let mut hs = vec![self.hatness()?];
                while self.eat(',')? {
                    hs.push(self.hatness()?);
                }
                if self.tok != Tok::Punct(']') {
                    return Err(self.unexpected(&["`,`", "`]`"]));
                }
                self.bump()?;
                ExprKind::Clique(hs)
            }
            "windmill" => {
                self.punct('(')?;
                let k = self.nat("k")?;
                self.punct(',')?;
                let n = self.nat("n")?;
                self.punct(')')?;
                ExprKind::Windmill(k, n)
            }
            "product" => {
                self.punct('(')?;
                let left = self.expr()?;
                self.punct('@')?;
                let left_vertex = self.name()?;
                self.punct(',')?;
                let right = self.expr()?;
                self.punct('@')?;
                let right_vertex = self.name()?;
                self.punct(')')?;
                ExprKind::Product {
                    left: Box::new(left),
                    left_vertex,
                    right: Box::new(right),
                    right_vertex,
                }
            }
            "cone" => {
                self.punct('(')?;
                let base = self.expr()?;
                self.punct(';')?;
                let mut petals = vec![self.petal()?];
                while self.eat(',')? {
                    petals.push(self.petal()?);
                }
                if self.tok != Tok::Punct(')') {
                    return Err(self.unexpected(&["`,`", "`)`"]));
                }
                self.bump()?;
                ExprKind::Cone {
                    base: Box::new(base),
                    petals,
                }
            }
            "lower" => {
                self.punct('(')?;
                let inner = self.expr()?;
                self.punct(';')?;
                let mut overrides = vec![self.assign()?];
                while self.eat(',')? {
                    overrides.push(self.assign()?);
                }
                if self.tok != Tok::Punct(')') {
                    return Err(self.unexpected(&["`,`", "`)`"]));
                }
                self.bump()?;
                ExprKind::Lower {
                    inner: Box::new(inner),
                    overrides,
                }
            }
            "k5minus" => ExprKind::K5Minus,
            "game26666" => ExprKind::Named(NamedGame::Game26666),
            "trefoil" => ExprKind::Named(NamedGame::Trefoil),
            "planar14" => ExprKind::Named(NamedGame::Planar14),
            _ => unreachable!("checked against EXPR_START"),
        };
        Ok(Expr {
            kind,
            span: Span::new(head.start, self.prev_end),
        })
    }

    fn petal(&mut self) -> Result<Petal, ParseError> {
        let expr = self.expr()?;
        self.punct('@')?;
        let o = self.name()?;
        self.punct('/')?;
        let a = self.name()?;
        Ok(Petal { expr, o, a })
    }

    fn assign(&mut self) -> Result<(String, u32), ParseError> {
        let name = self.name()?;
        self.punct('=')?;
        Ok((name, self.hatness()?))
    }
}

/// Parses one expression; trailing input is an error.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    if p.tok != Tok::Eof {
        return Err(p.unexpected(&["end of input"]));
    }
    Ok(e)
}
