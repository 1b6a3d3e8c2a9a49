//! Recursive-descent parser for rational polynomials.
//!
//! ```text
//! poly  := term (('+'|'-') term)*
//! term  := coeff? (var ('^' uint)?)+ | coeff
//! coeff := int ('/' uint)?
//! var   := 'x' uint            (1-based)
//! ```
//! Whitespace is ignored between tokens; juxtaposition is multiplication. A
//! leading sign is accepted on the first term.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Monomial, QPoly};
use crate::error::ParseError;
use crate::rational::Rational;
use crate::ring::Rationals;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let found = match self.src.get(self.pos) {
            Some(&c) => (c as char).to_string(),
            None => "end of input".to_string(),
        };
        ParseError {
            offset: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        }
    }

    fn uint(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
    }

    fn small_uint(&mut self, what: &str) -> Result<usize, ParseError> {
        let at = self.pos;
        match self.uint() {
            Some(v) => v.try_into().map_err(|_| {
                self.pos = at;
                self.error(&[what])
            }),
            None => Err(self.error(&[what])),
        }
    }

    fn coeff(&mut self) -> Result<Rational, ParseError> {
        let num = self.uint().ok_or_else(|| self.error(&["integer"]))?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let den = self.uint().ok_or_else(|| self.error(&["unsigned integer"]))?;
            if den.is_zero() {
                self.pos = at;
                return Err(self.error(&["nonzero denominator"]));
            }
            return Ok(Rational::new(num, den));
        }
        Ok(Rational::from_integer(num))
    }

    fn factor(&mut self, exps: &mut [u32]) -> Result<(), ParseError> {
        // caller guarantees the current byte is 'x'
        self.pos += 1;
        let at = self.pos;
        let idx = self.small_uint("variable index")?;
        if idx == 0 || idx > self.nvars {
            self.pos = at;
            return Err(self.error(&[&format!("variable index in 1..={}", self.nvars)]));
        }
        let mut e: u32 = 1;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            e = self.small_uint("exponent")? as u32;
        }
        exps[idx - 1] += e;
        Ok(())
    }

    fn term(&mut self) -> Result<(Monomial, Rational), ParseError> {
        let mut c = Rational::one();
        let mut exps = vec![0u32; self.nvars];
        let mut saw_any = false;
        match self.peek() {
            Some(b) if b.is_ascii_digit() => {
                c = self.coeff()?;
                saw_any = true;
            }
            Some(b'x') => {}
            _ => return Err(self.error(&["coefficient", "variable"])),
        }
        while self.peek() == Some(b'x') {
            self.factor(&mut exps)?;
            saw_any = true;
        }
        debug_assert!(saw_any);
        Ok((Monomial::new(exps), c))
    }

    fn poly(&mut self) -> Result<QPoly, ParseError> {
        let mut out = QPoly::zero(Rationals, self.nvars);
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            let (m, c) = self.term()?;
            out.add_term(m, if negate { -c } else { c });
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                Some(_) => return Err(self.error(&["'+'", "'-'", "variable", "end of input"])),
            }
            self.pos += 1;
        }
    }
}

pub(super) fn parse_polynomial(text: &str, nvars: usize) -> Result<QPoly, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        nvars,
    };
    p.poly()
}

/// Highest variable index occurring in `text` (0 if none).
pub(super) fn max_variable(text: &str) -> Result<usize, ParseError> {
    let bytes = text.as_bytes();
    let mut best = 0;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'x' {
            let start = i + 1;
            let mut j = start;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            let idx: usize = text[start..j].parse().map_err(|_| ParseError {
                offset: start,
                expected: vec!["variable index".into()],
                found: text.get(start..start + 1).unwrap_or("end of input").to_string(),
            })?;
            best = best.max(idx);
            i = j;
        } else {
            i += 1;
        }
    }
    Ok(best)
}
