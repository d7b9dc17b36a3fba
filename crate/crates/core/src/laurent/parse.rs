//! Text form of Laurent polynomials: sums of `c*t1^e1*...*tm^em` terms.
//!
//! Variables are `t1` .. `t9` (a bare `t` means `t1`); exponents may be
//! negative, written `t1^-2` or `t1^(-2)`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use super::LaurentPoly;
use crate::error::{Error, Result};

impl FromStr for LaurentPoly {
    type Err = Error;

    /// Parses with as many variables as the highest index that occurs
    /// (at least one).
    fn from_str(s: &str) -> Result<Self> {
        let terms = parse_terms(s)?;
        let n = terms.iter().flat_map(|(e, _)| e.iter().map(|(v, _)| v + 1)).max().unwrap_or(1);
        build(n, terms)
    }
}

impl LaurentPoly {
    /// Parses in a ring with exactly `num_vars` variables.
    pub fn parse_with_vars(s: &str, num_vars: usize) -> Result<Self> {
        let terms = parse_terms(s)?;
        if let Some(v) = terms.iter().flat_map(|(e, _)| e.iter().map(|(v, _)| *v)).find(|&v| v >= num_vars) {
            return Err(Error::Parse(format!("variable t{} in a {num_vars}-variable ring", v + 1)));
        }
        build(num_vars, terms)
    }
}

type RawTerm = (Vec<(usize, i64)>, BigInt);

fn build(n: usize, terms: Vec<RawTerm>) -> Result<LaurentPoly> {
    let mut p = LaurentPoly::zero(n);
    for (vars, c) in terms {
        let mut e = vec![0; n];
        for (v, k) in vars {
            e[v] += k;
        }
        p.add_term(e, c);
    }
    Ok(p)
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(txt.parse().unwrap())
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at byte {} of `{}`", self.pos, String::from_utf8_lossy(self.s)))
    }
}

fn parse_terms(s: &str) -> Result<Vec<RawTerm>> {
    let mut lx = Lexer { s: s.as_bytes(), pos: 0 };
    let mut out = Vec::new();
    let mut first = true;
    loop {
        let mut sign = BigInt::one();
        match lx.peek() {
            None if first => return Err(lx.error("empty polynomial")),
            None => break,
            Some(b'+') => {
                lx.bump();
            }
            Some(b'-') => {
                lx.bump();
                sign = -sign;
            }
            Some(_) if first => {}
            Some(_) => return Err(lx.error("expected `+` or `-`")),
        }
        first = false;
        let (vars, c) = parse_term(&mut lx)?;
        out.push((vars, sign * c));
    }
    Ok(out)
}

fn parse_term(lx: &mut Lexer) -> Result<RawTerm> {
    let mut coeff = BigInt::one();
    let mut vars = Vec::new();
    loop {
        match lx.peek() {
            Some(c) if c.is_ascii_digit() => coeff *= lx.digits()?,
            Some(b't') | Some(b'X') | Some(b'x') => {
                lx.bump();
                let idx = match lx.s.get(lx.pos) {
                    Some(d) if d.is_ascii_digit() => {
                        let v = lx.digits()?;
                        let v: usize = v.to_string().parse().map_err(|_| lx.error("bad variable index"))?;
                        if v == 0 {
                            return Err(lx.error("variables are numbered from t1"));
                        }
                        v - 1
                    }
                    _ => 0,
                };
                let mut k = 1i64;
                if lx.peek() == Some(b'^') {
                    lx.bump();
                    let paren = lx.peek() == Some(b'(');
                    if paren {
                        lx.bump();
                    }
                    let neg = match lx.peek() {
                        Some(b'-') => {
                            lx.bump();
                            true
                        }
                        Some(b'+') => {
                            lx.bump();
                            false
                        }
                        _ => false,
                    };
                    let e = lx.digits()?;
                    k = e.to_string().parse().map_err(|_| lx.error("exponent out of range"))?;
                    if neg {
                        k = -k;
                    }
                    if paren && lx.bump() != Some(b')') {
                        return Err(lx.error("expected `)`"));
                    }
                }
                vars.push((idx, k));
            }
            _ => return Err(lx.error("expected a coefficient or a variable")),
        }
        if lx.peek() == Some(b'*') {
            lx.bump();
        } else {
            break;
        }
    }
    Ok((vars, coeff))
}
