//! Text grammar for polynomials:
//!
//! ```text
//! poly  ::= ['+'|'-'] term (('+'|'-') term)*
//! term  ::= coeff | coeff '*' mono | mono
//! mono  ::= VAR ['^' INT] ('*' VAR ['^' INT])*
//! coeff ::= INT | INT '/' INT
//! ```
//!
//! Whitespace is ignored.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{MultiPoly, PolyError};
use crate::arith::Rational;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => n.to_string(),
        Tok::Ident(s) => s.clone(),
        Tok::Plus => "+".into(),
        Tok::Minus => "-".into(),
        Tok::Star => "*".into(),
        Tok::Slash => "/".into(),
        Tok::Caret => "^".into(),
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            _ => None,
        };
        if let Some(t) = single {
            out.push((pos, t));
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|x| x.1).collect();
            out.push((pos, Tok::Int(s.parse().expect("digits"))));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((pos, Tok::Ident(chars[start..i].iter().map(|x| x.1).collect())));
        } else {
            return Err(PolyError::Parse { position: pos, token: c.to_string() });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    vars: &'a Arc<[String]>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn error_here(&self) -> PolyError {
        match self.toks.get(self.pos) {
            Some((p, t)) => PolyError::Parse { position: *p, token: describe(t) },
            None => PolyError::Parse { position: self.end, token: "<end of input>".into() },
        }
    }

    fn int(&mut self) -> Result<BigInt, PolyError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.error_here()),
        }
    }

    fn coeff(&mut self) -> Result<Rational, PolyError> {
        let num = self.int()?;
        if self.peek() == Some(&Tok::Slash) {
            self.pos += 1;
            let at = self.pos;
            let den = self.int()?;
            if den.is_zero() {
                self.pos = at;
                return Err(self.error_here());
            }
            return Ok(Rational::new(num, den));
        }
        Ok(Rational::from_integer(num))
    }

    fn factor(&mut self, exps: &mut [u32]) -> Result<(), PolyError> {
        let (p, name) = match self.toks.get(self.pos) {
            Some((p, Tok::Ident(s))) => (*p, s.clone()),
            _ => return Err(self.error_here()),
        };
        self.pos += 1;
        let idx = self
            .vars
            .iter()
            .position(|v| *v == name)
            .ok_or(PolyError::UnknownVariable { name: name.clone(), position: p })?;
        let mut k = 1u32;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let at = self.pos;
            let n = self.int()?;
            k = u32::try_from(n).map_err(|_| {
                self.pos = at;
                self.error_here()
            })?;
        }
        exps[idx] += k;
        Ok(())
    }

    fn mono(&mut self, exps: &mut [u32]) -> Result<(), PolyError> {
        self.factor(exps)?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            self.factor(exps)?;
        }
        Ok(())
    }

    fn term(&mut self) -> Result<(Vec<u32>, Rational), PolyError> {
        let mut exps = vec![0u32; self.vars.len()];
        match self.peek() {
            Some(Tok::Int(_)) => {
                let c = self.coeff()?;
                if self.peek() == Some(&Tok::Star) {
                    self.pos += 1;
                    self.mono(&mut exps)?;
                }
                Ok((exps, c))
            }
            Some(Tok::Ident(_)) => {
                self.mono(&mut exps)?;
                Ok((exps, Rational::from_integer(1.into())))
            }
            _ => Err(self.error_here()),
        }
    }

    fn poly(&mut self) -> Result<MultiPoly, PolyError> {
        let mut out = Vec::new();
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        loop {
            let (e, c) = self.term()?;
            out.push((e, if negate { -c } else { c }));
            match self.peek() {
                None => break,
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                Some(_) => return Err(self.error_here()),
            }
            self.pos += 1;
        }
        Ok(MultiPoly::from_terms(self.vars.clone(), out))
    }
}

/// Parses a polynomial over the given variable list.
pub fn parse_poly(src: &str, vars: &Arc<[String]>) -> Result<MultiPoly, PolyError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end: src.len(), vars };
    p.poly()
}
