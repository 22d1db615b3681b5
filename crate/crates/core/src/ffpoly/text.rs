//! Canonical text form and a small expression parser.
//!
//! Terms print in descending degrevlex order regardless of the ring's active
//! order, so the same polynomial always has the same text.

use std::fmt;
use std::sync::Arc;

use super::{Monomial, MonomialOrder, PolyError, PolyRing, Polynomial, PrimeField};

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, names: &[String]) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(&names[i])?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<&(Monomial, u32)> = self.terms().iter().collect();
        terms.sort_by(|a, b| MonomialOrder::DegRevLex.cmp(&b.0, &a.0));
        let names = self.ring().var_names();
        for (k, (m, c)) in terms.into_iter().enumerate() {
            if k > 0 {
                f.write_str("+")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else {
                if *c != 1 {
                    write!(f, "{c}*")?;
                }
                write_monomial(f, m, names)?;
            }
        }
        Ok(())
    }
}

impl Polynomial {
    /// Parses `+ - * ^`, parentheses, integer literals and the ring's variable names.
    pub fn parse(ring: &Arc<PolyRing>, text: &str) -> Result<Polynomial, PolyError> {
        let mut p = Parser {
            ring,
            src: text.as_bytes(),
            pos: 0,
        };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(out)
    }
}

struct Parser<'a> {
    ring: &'a Arc<PolyRing>,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> PolyError {
        PolyError::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e = u32::try_from(e).map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64, PolyError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| self.error("integer out of range"))
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(self.power()?.neg())
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                let p = self.ring.field().modulus() as u64;
                Ok(Polynomial::constant(self.ring, (v % p) as i64))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.ring.var_index(name) {
                    Some(i) => Ok(Polynomial::var(self.ring, i)),
                    None => {
                        self.pos = start;
                        Err(self.error(&format!("unknown variable `{name}`")))
                    }
                }
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

/// `ring p=<p> vars=<a,b,...> order=<name>`
pub fn format_ring_header(ring: &PolyRing) -> String {
    format!(
        "ring p={} vars={} order={}",
        ring.field().modulus(),
        ring.var_names().join(","),
        ring.order()
    )
}

pub fn parse_ring_header(line: &str) -> Result<Arc<PolyRing>, PolyError> {
    let mut words = line.split_whitespace();
    if words.next() != Some("ring") {
        return Err(PolyError::Parse("ring header must start with `ring`".into()));
    }
    let (mut p, mut vars, mut order) = (None, None, None);
    for w in words {
        let (key, value) = w
            .split_once('=')
            .ok_or_else(|| PolyError::Parse(format!("malformed header field `{w}`")))?;
        match key {
            "p" => {
                let v: u32 = value
                    .parse()
                    .map_err(|_| PolyError::Parse(format!("bad prime `{value}`")))?;
                p = Some(PrimeField::new(v)?);
            }
            "vars" => vars = Some(value.split(',').map(str::to_owned).collect::<Vec<_>>()),
            "order" => order = Some(value.parse::<MonomialOrder>()?),
            _ => return Err(PolyError::Parse(format!("unknown header field `{key}`"))),
        }
    }
    let p = p.ok_or_else(|| PolyError::Parse("header lacks p=".into()))?;
    let vars = vars.ok_or_else(|| PolyError::Parse("header lacks vars=".into()))?;
    PolyRing::new(p, vars, order.unwrap_or(MonomialOrder::DegRevLex))
}
