//! Element expressions: `e F`, `det F`, `T(a)[b]`, `*`, `/`, `^k`, parentheses.
//! `F` is a signature literal `(p,m)` or a declared form id.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    One,
    E(String),
    Det(String),
    Tate(i64, i64),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

impl Expr {
    /// Form literals in order of appearance.
    pub fn forms(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::One | Expr::Tate(..) => {}
            Expr::E(f) | Expr::Det(f) => out.push(f),
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect(out);
                b.collect(out);
            }
            Expr::Pow(a, _) => a.collect(out),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column + 1, self.message)
    }
}

impl std::error::Error for ParseError {}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError { column: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = Expr::Mul(Box::new(acc), Box::new(self.power()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    acc = Expr::Div(Box::new(acc), Box::new(self.power()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.atom()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            base = Expr::Pow(Box::new(base), self.int()?);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'1') if !self.src.get(self.pos + 1).is_some_and(|c| c.is_ascii_alphanumeric()) => {
                self.pos += 1;
                Ok(Expr::One)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let word = self.ident();
                match word.as_str() {
                    "e" => Ok(Expr::E(self.form()?)),
                    "det" => Ok(Expr::Det(self.form()?)),
                    "T" => {
                        self.expect(b'(')?;
                        let x = self.int()?;
                        self.expect(b')')?;
                        self.expect(b'[')?;
                        let y = self.int()?;
                        self.expect(b']')?;
                        Ok(Expr::Tate(x, y))
                    }
                    _ => {
                        self.pos = start;
                        Err(self.err(format!("unknown operator `{word}`")))
                    }
                }
            }
            Some(_) => Err(self.err("expected `e`, `det`, `T`, `1` or `(`")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_' || *c == b'-' || *c == b'.')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn form(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let p = self.int()?;
                self.expect(b',')?;
                let m = self.int()?;
                self.expect(b')')?;
                Ok(format!("({p},{m})"))
            }
            Some(c) if c.is_ascii_alphanumeric() || c == b'_' => Ok(self.ident()),
            _ => Err(self.err("expected a form literal")),
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| ParseError { column: start, message: "expected an integer".into() })
    }
}
