//! Presentation files.
//!
//! One directive per line, `#` starts a comment:
//!
//! ```text
//! window weight 6 degree 6
//! generator x degree 1
//! generator h degree 3 weight 2
//! diff h = [x,x]
//! cell sy degree 3 attach [x,x]
//! word c = a b a^-1 b^-1
//! order x > y > z
//! ```
//!
//! Lie expressions are sums of optionally scaled terms, where a term is a
//! name, a bracket `[u,v]` or an iterated bracket `ad^n(x)(u)`.

use std::fmt;
use std::str::FromStr;

use lietop_core::qlinalg::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

fn err<T>(pos: Pos, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        message: message.into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Name(String, Pos),
    Bracket(Box<Expr>, Box<Expr>),
    Ad(u32, String, Pos, Box<Expr>),
    Sum(Vec<(Rational, Expr)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorDecl {
    pub name: String,
    pub degree: u32,
    pub weight: Option<u32>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffDecl {
    pub name: String,
    pub expr: Expr,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellDecl {
    pub name: String,
    pub degree: u32,
    pub weight: Option<u32>,
    pub expr: Expr,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordDecl {
    pub name: String,
    pub letters: Vec<(String, i32, Pos)>,
    pub pos: Pos,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PresentationFile {
    pub generators: Vec<GeneratorDecl>,
    pub diffs: Vec<DiffDecl>,
    pub cells: Vec<CellDecl>,
    pub words: Vec<WordDecl>,
    pub window: Option<(u32, u32, Pos)>,
    pub order: Option<(Vec<(String, Pos)>, Pos)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(u32),
    Sym(char),
}

struct Lexer {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '.'
}

fn lex(line: &str, lineno: usize) -> Result<Lexer, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos {
            line: lineno,
            col: i + 1,
        };
        if c == '#' {
            break;
        } else if c.is_whitespace() {
            i += 1;
        } else if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), pos));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            match s.parse() {
                Ok(n) => toks.push((Tok::Nat(n), pos)),
                Err(_) => return err(pos, format!("number {s} is too large")),
            }
        } else if "[](),+-=>^/*".contains(c) {
            toks.push((Tok::Sym(c), pos));
            i += 1;
        } else {
            return err(pos, format!("unexpected character '{c}'"));
        }
    }
    Ok(Lexer {
        toks,
        at: 0,
        end: Pos {
            line: lineno,
            col: chars.len() + 1,
        },
    })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.0)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map_or(self.end, |t| t.1)
    }

    fn next(&mut self) -> Option<(Tok, Pos)> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn describe(&self) -> String {
        match self.peek() {
            None => "end of line".into(),
            Some(Tok::Ident(s)) => format!("'{s}'"),
            Some(Tok::Nat(n)) => format!("'{n}'"),
            Some(Tok::Sym(c)) => format!("'{c}'"),
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            Ok(())
        } else {
            err(self.pos(), format!("expected '{c}', found {}", self.describe()))
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.at += 1;
                Ok(())
            }
            _ => err(self.pos(), format!("expected '{kw}', found {}", self.describe())),
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => match self.next() {
                Some((Tok::Ident(s), p)) => Ok((s, p)),
                _ => unreachable!(),
            },
            _ => err(self.pos(), format!("expected a name, found {}", self.describe())),
        }
    }

    fn nat(&mut self) -> Result<u32, ParseError> {
        match self.peek() {
            Some(&Tok::Nat(n)) => {
                self.at += 1;
                Ok(n)
            }
            _ => err(self.pos(), format!("expected a number, found {}", self.describe())),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.at < self.toks.len() {
            err(self.pos(), format!("unexpected {}", self.describe()))
        } else {
            Ok(())
        }
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Sym(c))
    }

    fn coefficient(&mut self) -> Result<Option<Rational>, ParseError> {
        let Some(&Tok::Nat(n)) = self.peek() else {
            return Ok(None);
        };
        self.at += 1;
        let mut c = Rational::from_int(n as i64);
        if self.at_sym('/') {
            self.at += 1;
            let pos = self.pos();
            let d = self.nat()?;
            if d == 0 {
                return err(pos, "zero denominator");
            }
            c = &c / &Rational::from_int(d as i64);
        }
        if self.at_sym('*') {
            self.at += 1;
        }
        Ok(Some(c))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let mut sign = Rational::one();
            if self.at_sym('+') || self.at_sym('-') {
                if self.at_sym('-') {
                    sign = -sign;
                }
                self.at += 1;
            } else if !first {
                break;
            }
            let c = self.coefficient()?.unwrap_or_else(Rational::one);
            // A bare `0` is the zero element.
            if first && c.is_zero() && sign.is_one() && matches!(self.peek(), None | Some(Tok::Sym(',' | ']' | ')'))) {
                return Ok(Expr::Sum(Vec::new()));
            }
            first = false;
            let t = self.term()?;
            terms.push((&sign * &c, t));
        }
        if terms.len() == 1 && terms[0].0.is_one() {
            return Ok(terms.pop().unwrap().1);
        }
        Ok(Expr::Sum(terms))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Tok::Sym('[')) => {
                self.at += 1;
                let a = self.expr()?;
                self.expect_sym(',')?;
                let b = self.expr()?;
                self.expect_sym(']')?;
                Ok(Expr::Bracket(Box::new(a), Box::new(b)))
            }
            Some(Tok::Ident(s)) if s == "ad" && self.toks.get(self.at + 1).map(|t| &t.0) == Some(&Tok::Sym('^')) => {
                self.at += 2;
                let n = self.nat()?;
                self.expect_sym('(')?;
                let (x, p) = self.ident()?;
                self.expect_sym(')')?;
                self.expect_sym('(')?;
                let body = self.expr()?;
                self.expect_sym(')')?;
                Ok(Expr::Ad(n, x, p, Box::new(body)))
            }
            Some(Tok::Ident(_)) => {
                let (s, p) = self.ident()?;
                Ok(Expr::Name(s, p))
            }
            _ => err(self.pos(), format!("expected a term, found {}", self.describe())),
        }
    }

    fn group_word(&mut self) -> Result<Vec<(String, i32, Pos)>, ParseError> {
        let mut out = Vec::new();
        while self.peek().is_some() {
            let (name, p) = self.ident()?;
            let mut e = 1;
            if self.at_sym('^') {
                self.at += 1;
                self.expect_sym('-')?;
                let pos = self.pos();
                if self.nat()? != 1 {
                    return err(pos, "only the exponent -1 is allowed");
                }
                e = -1;
            }
            out.push((name, e, p));
        }
        if out.is_empty() {
            return err(self.pos(), "empty group word");
        }
        Ok(out)
    }

    fn optional_weight(&mut self) -> Result<Option<u32>, ParseError> {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == "weight") {
            self.at += 1;
            let pos = self.pos();
            let w = self.nat()?;
            if w == 0 {
                return err(pos, "weight must be positive");
            }
            return Ok(Some(w));
        }
        Ok(None)
    }
}

/// Parses a standalone Lie expression.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut lx = lex(text, 1)?;
    let e = lx.expr()?;
    lx.finish()?;
    Ok(e)
}

/// Parses a standalone group word such as `a b a^-1 b^-1`.
pub fn parse_group_word(text: &str) -> Result<Vec<(String, i32, Pos)>, ParseError> {
    let mut lx = lex(text, 1)?;
    lx.group_word()
}

pub fn parse(text: &str) -> Result<PresentationFile, ParseError> {
    let mut file = PresentationFile::default();
    for (i, line) in text.lines().enumerate() {
        let mut lx = lex(line, i + 1)?;
        let Some((Tok::Ident(kw), pos)) = lx.next() else {
            if lx.toks.is_empty() {
                continue;
            }
            return err(lx.toks[0].1, "expected a directive");
        };
        match kw.as_str() {
            "generator" => {
                let (name, _) = lx.ident()?;
                lx.keyword("degree")?;
                let degree = lx.nat()?;
                let weight = lx.optional_weight()?;
                file.generators.push(GeneratorDecl {
                    name,
                    degree,
                    weight,
                    pos,
                });
            }
            "diff" => {
                let (name, _) = lx.ident()?;
                lx.expect_sym('=')?;
                let expr = lx.expr()?;
                file.diffs.push(DiffDecl { name, expr, pos });
            }
            "cell" => {
                let (name, _) = lx.ident()?;
                lx.keyword("degree")?;
                let degree = lx.nat()?;
                let weight = lx.optional_weight()?;
                lx.keyword("attach")?;
                let expr = lx.expr()?;
                file.cells.push(CellDecl {
                    name,
                    degree,
                    weight,
                    expr,
                    pos,
                });
            }
            "word" => {
                let (name, _) = lx.ident()?;
                lx.expect_sym('=')?;
                let letters = lx.group_word()?;
                file.words.push(WordDecl { name, letters, pos });
            }
            "window" => {
                if file.window.is_some() {
                    return err(pos, "duplicate window directive");
                }
                lx.keyword("weight")?;
                let w = lx.nat()?;
                lx.keyword("degree")?;
                let d = lx.nat()?;
                file.window = Some((w, d, pos));
            }
            "order" => {
                if file.order.is_some() {
                    return err(pos, "duplicate order directive");
                }
                let mut names = vec![lx.ident()?];
                while lx.at_sym('>') {
                    lx.at += 1;
                    names.push(lx.ident()?);
                }
                file.order = Some((names, pos));
            }
            other => return err(pos, format!("unknown directive '{other}'")),
        }
        lx.finish()?;
    }
    Ok(file)
}

impl FromStr for PresentationFile {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
