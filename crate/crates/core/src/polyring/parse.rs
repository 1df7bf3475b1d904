//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := [+|-] term ((+|-) term)*
//! term   := factor ((* | / | <juxtaposition>) factor)*
//! factor := atom [^ [+|-] int]
//! atom   := int | ident | ( expr )
//! ```
//!
//! Identifiers are split greedily into known variable names, so `x1u1`
//! reads as `x1*u1`. Division is only by a single term: a nonzero
//! constant, or a monomial in `u` when the mode is Laurent.

use num_bigint::BigInt;
use num_traits::One;

use super::{ExponentVec, LaurentPoly, Mode, ParamCoeff, Rational, VarNames};
use crate::error::{Error, Result};

/// Parse with the default names `u1..un`, `x1..xr`.
pub fn parse_poly(text: &str, n: usize, r: usize, mode: Mode) -> Result<LaurentPoly> {
    parse_poly_with(text, &VarNames::default_for(n, r), mode)
}

pub fn parse_poly_with(text: &str, names: &VarNames, mode: Mode) -> Result<LaurentPoly> {
    let mut p = Parser {
        src: text,
        pos: 0,
        names,
        mode,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(Error::Syntax {
            pos: 0,
            msg: "empty expression".into(),
        });
    }
    let v = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

/// Parse an expression in the parameters `x1..xr` only.
pub fn parse_param(text: &str, r: usize) -> Result<ParamCoeff> {
    let p = parse_poly(text, 0, r, Mode::Polynomial)?;
    Ok(p.coeff(&ExponentVec::zero(0))
        .cloned()
        .unwrap_or_else(|| ParamCoeff::zero(r)))
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    names: &'a VarNames,
    mode: Mode,
}

impl Parser<'_> {
    fn n(&self) -> usize {
        self.names.u.len()
    }

    fn r(&self) -> usize {
        self.names.x.len()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn constant(&self, c: Rational) -> LaurentPoly {
        LaurentPoly::constant(self.n(), self.r(), self.mode, c)
    }

    fn expr(&mut self) -> Result<LaurentPoly> {
        self.skip_ws();
        let mut neg = false;
        match self.peek() {
            Some('+') => self.pos += 1,
            Some('-') => {
                self.pos += 1;
                neg = true;
            }
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if neg { -&first } else { first };
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some('-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some('/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let f = self.factor()?;
                    let inv = self.invert(&f, at)?;
                    acc = &acc * &inv;
                }
                Some(c) if c == '(' || c.is_ascii_alphanumeric() || c == '_' => {
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    /// Inverse of a single term: nonzero constant, or (Laurent) a monomial.
    fn invert(&self, f: &LaurentPoly, at: usize) -> Result<LaurentPoly> {
        let bad = |msg: &str| Error::Syntax {
            pos: at,
            msg: msg.into(),
        };
        if f.len() != 1 {
            return Err(bad(if f.is_zero() {
                "division by zero"
            } else {
                "division by a sum"
            }));
        }
        let (e, c) = f.terms().next().unwrap();
        let c = c
            .as_constant()
            .ok_or_else(|| bad("division by a parameter"))?;
        if !e.0.iter().all(|&k| k == 0) && self.mode == Mode::Polynomial {
            return Err(Error::NegativeExponent { pos: at });
        }
        let inv_e = ExponentVec(e.0.iter().map(|k| -k).collect());
        Ok(LaurentPoly::monomial(
            self.n(),
            self.r(),
            self.mode,
            inv_e,
            ParamCoeff::constant(self.r(), c.recip()),
        ))
    }

    fn factor(&mut self) -> Result<LaurentPoly> {
        let start = self.pos;
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let exp_pos = self.pos;
        let mut neg = false;
        match self.peek() {
            Some('-') => {
                neg = true;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            _ => {}
        }
        self.skip_ws();
        let k = self.integer()?;
        let k: u32 = k.try_into().map_err(|_| Error::Syntax {
            pos: exp_pos,
            msg: "exponent too large".into(),
        })?;
        if k > 10_000 {
            return Err(Error::Syntax {
                pos: exp_pos,
                msg: "exponent too large".into(),
            });
        }
        let powered = base.pow(k);
        if !neg {
            return Ok(powered);
        }
        let is_monomial = powered.len() == 1 && powered.terms().next().unwrap().1.is_constant();
        if self.mode == Mode::Laurent && !is_monomial && base.len() > 1 {
            return Err(Error::Syntax {
                pos: start,
                msg: "negative power of a sum".into(),
            });
        }
        if self.mode == Mode::Polynomial || !is_monomial {
            return Err(Error::NegativeExponent { pos: exp_pos });
        }
        self.invert(&powered, start)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        Ok(self.src[start..self.pos].parse().expect("digits"))
    }

    fn atom(&mut self) -> Result<LaurentPoly> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let k = self.integer()?;
                Ok(self.constant(Rational::from_integer(k)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => self.identifier(),
            Some(c) => Err(self.err(&format!("unexpected character `{c}`"))),
        }
    }

    /// A maximal run of identifier characters, split greedily into known
    /// variable names.
    fn identifier(&mut self) -> Result<LaurentPoly> {
        let start = self.pos;
        let mut end = start;
        for c in self.src[start..].chars() {
            if c.is_ascii_alphanumeric() || c == '_' {
                end += 1;
            } else {
                break;
            }
        }
        let word = &self.src[start..end];
        let mut exps = vec![0i32; self.n()];
        let mut xexps = vec![0u32; self.r()];
        let mut i = 0;
        while i < word.len() {
            let rest = &word[i..];
            let mut best: Option<(usize, bool, usize)> = None;
            for (k, name) in self.names.u.iter().enumerate() {
                if rest.starts_with(name.as_str()) && best.is_none_or(|b| name.len() > b.0) {
                    best = Some((name.len(), true, k));
                }
            }
            for (k, name) in self.names.x.iter().enumerate() {
                if rest.starts_with(name.as_str()) && best.is_none_or(|b| name.len() > b.0) {
                    best = Some((name.len(), false, k));
                }
            }
            match best {
                Some((len, is_u, k)) => {
                    if is_u {
                        exps[k] += 1;
                    } else {
                        xexps[k] += 1;
                    }
                    i += len;
                }
                None => {
                    return Err(Error::UnknownVariable {
                        pos: start + i,
                        name: rest.to_string(),
                    });
                }
            }
        }
        self.pos = end;
        Ok(LaurentPoly::monomial(
            self.n(),
            self.r(),
            self.mode,
            ExponentVec(exps),
            ParamCoeff::term(self.r(), xexps, Rational::one()),
        ))
    }
}
