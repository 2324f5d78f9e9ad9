//! Deterministic s-expression serialization of expressions (two-way).
//!
//! Grammar:
//!   expr  := "0" | "(+ term ...)"
//!   term  := "(* coeff factor ...)"
//!   coeff := rational | "(cplx re im)"
//!   factor:= atom | "(^ atom int)"
//!   atom  := "x" | "y" | "hbar" | "i" | IDENT
//!          | "(f IDENT x|y ORDER)" | "(f2 IDENT DX DY)"
//!
//! On parse, arbitrary sums/products/powers/negations are accepted and
//! normalized; the printer always emits the canonical flat form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::str::FromStr;

use super::atom::{Atom, Coord};
use super::Expr;
use crate::error::{Error, Result};

fn rational_token(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn atom_token(a: &Atom) -> String {
    match a {
        Atom::X => "x".into(),
        Atom::Y => "y".into(),
        Atom::Hbar => "hbar".into(),
        Atom::Const(s) => s.as_str().into(),
        Atom::Fun(fa) => match fa.dep {
            super::atom::Dep::X => format!("(f {} x {})", fa.name, fa.dx),
            super::atom::Dep::Y => format!("(f {} y {})", fa.name, fa.dy),
            super::atom::Dep::XY => format!("(f2 {} {} {})", fa.name, fa.dx, fa.dy),
        },
    }
}

pub fn print(e: &Expr) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<String> = Vec::new();
    for (m, c) in e.terms() {
        // A mixed Gaussian coefficient splits into a real and an imaginary term.
        let mut parts: Vec<(BigRational, bool)> = Vec::new();
        if !c.re.is_zero() {
            parts.push((c.re.clone(), false));
        }
        if !c.im.is_zero() {
            parts.push((c.im.clone(), true));
        }
        for (q, imag) in parts {
            let mut toks = vec!["*".to_string(), rational_token(&q)];
            if imag {
                toks.push("i".to_string());
            }
            for &(a, e) in m.factors() {
                if e == 1 {
                    toks.push(atom_token(&a));
                } else {
                    toks.push(format!("(^ {} {})", atom_token(&a), e));
                }
            }
            terms.push(format!("({})", toks.join(" ")));
        }
    }
    format!("(+ {})", terms.join(" "))
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Word(String),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut word = String::new();
    for ch in s.chars() {
        match ch {
            '(' | ')' => {
                if !word.is_empty() {
                    out.push(Tok::Word(std::mem::take(&mut word)));
                }
                out.push(if ch == '(' { Tok::Open } else { Tok::Close });
            }
            c if c.is_whitespace() => {
                if !word.is_empty() {
                    out.push(Tok::Word(std::mem::take(&mut word)));
                }
            }
            c => word.push(c),
        }
    }
    if !word.is_empty() {
        out.push(Tok::Word(word));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Result<&Tok> {
        let t = self
            .toks
            .get(self.pos)
            .ok_or_else(|| Error::Parse("unexpected end of input".into()))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect_close(&mut self) -> Result<()> {
        match self.next()? {
            Tok::Close => Ok(()),
            t => Err(Error::Parse(format!("expected ')', got {:?}", t))),
        }
    }

    fn word(&mut self) -> Result<String> {
        match self.next()? {
            Tok::Word(w) => Ok(w.clone()),
            t => Err(Error::Parse(format!("expected word, got {:?}", t))),
        }
    }

    fn parse_expr(&mut self) -> Result<Expr> {
        match self.next()?.clone() {
            Tok::Word(w) => Self::leaf(&w),
            Tok::Open => {
                let head = self.word()?;
                let e = match head.as_str() {
                    "+" => {
                        let mut acc = Expr::zero();
                        while self.peek() != Some(&Tok::Close) {
                            acc = &acc + &self.parse_expr()?;
                        }
                        acc
                    }
                    "*" => {
                        let mut acc = Expr::one();
                        while self.peek() != Some(&Tok::Close) {
                            acc = &acc * &self.parse_expr()?;
                        }
                        acc
                    }
                    "-" => {
                        let first = self.parse_expr()?;
                        if self.peek() == Some(&Tok::Close) {
                            -&first
                        } else {
                            let mut acc = first;
                            while self.peek() != Some(&Tok::Close) {
                                acc = &acc - &self.parse_expr()?;
                            }
                            acc
                        }
                    }
                    "^" => {
                        let base = self.parse_expr()?;
                        let k: i32 = self
                            .word()?
                            .parse()
                            .map_err(|_| Error::Parse("bad exponent".into()))?;
                        base.pow(k)?
                    }
                    "f" => {
                        let name = self.word()?;
                        let coord = match self.word()?.as_str() {
                            "x" => Coord::X,
                            "y" => Coord::Y,
                            c => return Err(Error::Parse(format!("bad coordinate {c}"))),
                        };
                        let k: u16 = self
                            .word()?
                            .parse()
                            .map_err(|_| Error::Parse("bad order".into()))?;
                        Expr::fun_on(&name, coord, k)
                    }
                    "f2" => {
                        let name = self.word()?;
                        let dx: u16 = self
                            .word()?
                            .parse()
                            .map_err(|_| Error::Parse("bad order".into()))?;
                        let dy: u16 = self
                            .word()?
                            .parse()
                            .map_err(|_| Error::Parse("bad order".into()))?;
                        Expr::fun_xy(&name, dx, dy)
                    }
                    h => return Err(Error::Parse(format!("unknown head {h}"))),
                };
                self.expect_close()?;
                Ok(e)
            }
            t => Err(Error::Parse(format!("unexpected token {:?}", t))),
        }
    }

    fn leaf(w: &str) -> Result<Expr> {
        match w {
            "x" => return Ok(Expr::x()),
            "y" => return Ok(Expr::y()),
            "hbar" => return Ok(Expr::hbar()),
            "i" => return Ok(Expr::imag_unit()),
            "0" => return Ok(Expr::zero()),
            _ => {}
        }
        let numeric = w
            .chars()
            .next()
            .map(|c| c.is_ascii_digit() || c == '-')
            .unwrap_or(false);
        if numeric {
            let (num, den) = match w.split_once('/') {
                Some((p, q)) => (p, q),
                None => (w, "1"),
            };
            let p = BigInt::from_str(num).map_err(|_| Error::Parse(format!("bad number {w}")))?;
            let q = BigInt::from_str(den).map_err(|_| Error::Parse(format!("bad number {w}")))?;
            if q.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            return Ok(Expr::from_rational(BigRational::new(p, q)));
        }
        if !w.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::Parse(format!("bad identifier {w}")));
        }
        Ok(Expr::constant(w))
    }
}

pub fn parse(s: &str) -> Result<Expr> {
    let toks = tokenize(s)?;
    let mut p = Parser { toks: &toks, pos: 0 };
    let e = p.parse_expr()?;
    if p.pos != toks.len() {
        return Err(Error::Parse("trailing input".into()));
    }
    Ok(e)
}

/// Round-trip helper used by tests.
pub fn reparse(e: &Expr) -> Result<Expr> {
    parse(&print(e))
}
