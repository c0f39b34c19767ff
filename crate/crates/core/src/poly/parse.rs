//! Hand-written parser for the polynomial text grammar:
//! terms separated by `+`/`-`, `term = [rational][*]factor(*factor)*`,
//! `factor = x<k>[^<e>]`, `rational = integer | a/b`.

use super::{ExponentVector, Polynomial};
use crate::error::{Error, Result};
use crate::rational::Q;
use num_bigint::BigInt;
use num_traits::{One, Zero};

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn rational(&mut self) -> Result<Q> {
        let num = self.digits()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let at = self.pos;
            let den = self.digits()?;
            if den.is_zero() {
                return Err(Error::Parse { pos: at, msg: "zero denominator".into() });
            }
            Ok(Q::new(num, den))
        } else {
            Ok(Q::from_integer(num))
        }
    }

    fn factor(&mut self, exps: &mut [u32]) -> Result<()> {
        let at = self.pos;
        self.pos += 1; // 'x'
        let k = self.digits()?;
        let nvars = exps.len();
        let idx = usize::try_from(&k).ok().filter(|&i| i >= 1 && i <= nvars);
        let Some(idx) = idx else {
            let index = usize::try_from(&k).unwrap_or(usize::MAX);
            let _ = at;
            return Err(Error::VariableOutOfRange { index, nvars });
        };
        let mut e = 1u32;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let d = self.digits()?;
            e = u32::try_from(&d).map_err(|_| Error::Parse { pos: self.pos, msg: "exponent too large".into() })?;
        }
        exps[idx - 1] += e;
        Ok(())
    }

    fn term(&mut self, nvars: usize) -> Result<(ExponentVector, Q)> {
        let mut coeff = Q::one();
        let mut exps = vec![0u32; nvars];
        let mut seen_any = false;
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                coeff = self.rational()?;
                seen_any = true;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    if self.peek() != Some(b'x') {
                        return self.err("expected variable after '*'");
                    }
                }
            }
            _ => {}
        }
        while self.peek() == Some(b'x') {
            self.factor(&mut exps)?;
            seen_any = true;
            if self.peek() == Some(b'*') {
                self.pos += 1;
                if self.peek() != Some(b'x') {
                    return self.err("expected variable after '*'");
                }
            }
        }
        if !seen_any {
            return self.err("expected a term");
        }
        Ok((ExponentVector(exps), coeff))
    }
}

/// Parse polynomial text in `nvars` variables `x1..xn`.
pub fn parse_polynomial(text: &str, nvars: usize) -> Result<Polynomial> {
    if nvars == 0 {
        return Err(Error::Precondition("nvars must be positive".into()));
    }
    let mut lx = Lexer { src: text.as_bytes(), pos: 0 };
    let mut poly = Polynomial::zero(nvars);
    let mut sign = match lx.peek() {
        Some(b'-') => {
            lx.pos += 1;
            -Q::one()
        }
        Some(b'+') => {
            lx.pos += 1;
            Q::one()
        }
        None => return lx.err("empty input"),
        _ => Q::one(),
    };
    loop {
        let (e, c) = lx.term(nvars)?;
        poly.add_term(e, sign * c);
        match lx.peek() {
            None => break,
            Some(b'+') => sign = Q::one(),
            Some(b'-') => sign = -Q::one(),
            Some(c) => return lx.err(format!("unexpected character '{}'", c as char)),
        }
        lx.pos += 1;
    }
    Ok(poly)
}
