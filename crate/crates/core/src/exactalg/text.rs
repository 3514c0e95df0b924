//! Canonical polynomial text and an infix expression reader.
//!
//! Canonical form: terms in descending term order, each term printed as
//! `c*v1^e1*v2^e2` with unit coefficients and unit exponents elided and
//! rationals as `num/den`. Signs join terms as ` + ` / ` - `. The zero
//! polynomial prints as `0`.
//!
//! A polynomial file is a `vars: v1 v2 ...;` header followed by one
//! polynomial per line.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::domain::{Domain, Rationals};
use super::monomial::Monomial;
use super::poly::{PolyRing, Polynomial, RatPoly};
use super::AlgError;

pub fn format_poly<D: Domain>(p: &Polynomial<D>) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let vars = p.ring().vars();
    let d = p.domain();
    let mut out = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        let neg = d.is_negative(c);
        let abs = if neg { d.neg(c) } else { c.clone() };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = format_monomial(m, vars);
        if mono.is_empty() {
            out.push_str(&d.fmt_elem(&abs));
        } else {
            if !d.is_one(&abs) {
                out.push_str(&d.fmt_elem(&abs));
                out.push('*');
            }
            out.push_str(&mono);
        }
    }
    out
}

pub fn format_monomial(m: &Monomial, vars: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(vars[i].clone()),
            _ => parts.push(format!("{}^{}", vars[i], e)),
        }
    }
    parts.join("*")
}

impl<D: Domain> Polynomial<D> {
    /// Read an infix expression (`+ - * ^`, parentheses, integer and
    /// `num/den` literals) over the ring's variables.
    pub fn parse(ring: &Arc<PolyRing>, domain: D, text: &str) -> Result<Self, AlgError> {
        let q = parse_expr(ring, text)?;
        q.map_domain(&domain)
            .ok_or_else(|| AlgError::Parse(format!("`{text}` has coefficients outside {}", domain.kind())))
    }
}

/// Parse an infix expression to a rational polynomial.
pub fn parse_expr(ring: &Arc<PolyRing>, text: &str) -> Result<RatPoly, AlgError> {
    let mut p = ExprParser { ring, src: text.as_bytes(), pos: 0 };
    let out = p.expr()?;
    p.ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

struct ExprParser<'a> {
    ring: &'a Arc<PolyRing>,
    src: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> AlgError {
        AlgError::Parse(format!("{msg} at offset {}", self.pos))
    }

    fn expr(&mut self) -> Result<RatPoly, AlgError> {
        let mut acc = RatPoly::zero(self.ring, Rationals);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatPoly, AlgError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = &acc * &f;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let f = self.power()?;
                    if !f.is_unit_constant() {
                        return Err(self.err("division only by nonzero constants"));
                    }
                    let inv = f.lead_coeff().unwrap().recip();
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<RatPoly, AlgError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected exponent"));
            }
            let e: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatPoly, AlgError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap();
                Ok(RatPoly::constant(self.ring, Rationals, BigRational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let i = self.ring.var_index(name).ok_or_else(|| AlgError::UnknownVariable(name.to_string()))?;
                Ok(RatPoly::var(self.ring, Rationals, i))
            }
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }
}

/// Render a polynomial file: header plus one polynomial per line.
pub fn write_poly_file<D: Domain>(vars: &[String], polys: &[Polynomial<D>]) -> String {
    let mut s = format!("vars: {};\n", vars.join(" "));
    for p in polys {
        s.push_str(&format_poly(p));
        s.push('\n');
    }
    s
}

/// Read a polynomial file. Blank lines and `#` comments are skipped.
pub fn read_poly_file(text: &str, order: super::MonomialOrder) -> Result<(Arc<PolyRing>, Vec<RatPoly>), AlgError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| AlgError::Parse("missing `vars:` header".into()))?;
    let ring = parse_vars_header(header, order)?;
    let polys = lines.map(|l| parse_expr(&ring, l)).collect::<Result<Vec<_>, _>>()?;
    Ok((ring, polys))
}

pub fn parse_vars_header(line: &str, order: super::MonomialOrder) -> Result<Arc<PolyRing>, AlgError> {
    let body = line
        .trim()
        .strip_prefix("vars:")
        .and_then(|s| s.trim_end().strip_suffix(';'))
        .ok_or_else(|| AlgError::Parse(format!("expected `vars: ...;`, got `{line}`")))?;
    let vars: Vec<&str> = body.split_whitespace().collect();
    for (i, v) in vars.iter().enumerate() {
        let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok || vars[..i].contains(v) {
            return Err(AlgError::Parse(format!("bad variable `{v}`")));
        }
    }
    Ok(PolyRing::new(vars, order))
}

/// Rational literal `n` or `n/d` (optionally signed).
pub fn parse_rational(s: &str) -> Result<BigRational, AlgError> {
    let s = s.trim();
    let bad = || AlgError::Parse(format!("bad rational `{s}`"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::super::domain::{Integers, PrimeField};
    use super::super::MonomialOrder;
    use super::*;

    #[test]
    fn canonical_formatting() {
        let r = PolyRing::new(["x", "y"], MonomialOrder::Grevlex);
        let p = parse_expr(&r, "3 - x*y/2 + x^2").unwrap();
        assert_eq!(format_poly(&p), "x^2 - 1/2*x*y + 3");
        assert_eq!(format_poly(&parse_expr(&r, "-x").unwrap()), "-x");
        assert_eq!(format_poly(&parse_expr(&r, "x - x").unwrap()), "0");
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(Polynomial::parse(&r, f3, "x - y").unwrap().to_string(), "x + 2*y");
    }

    #[test]
    fn nested_expressions() {
        let r = PolyRing::new(["p", "q", "r", "s"], MonomialOrder::Grevlex);
        let a = parse_expr(&r, "(p^2+q*r)^2+q*r*(p+s)*(p+s)-1").unwrap();
        let b = parse_expr(&r, "p^4 + 2*p^2*q*r + q^2*r^2 + q*r*p^2 + 2*p*q*r*s + q*r*s^2 - 1").unwrap();
        assert_eq!(a, b);
        assert!(parse_expr(&r, "p + t").is_err());
        assert!(parse_expr(&r, "p*(q").is_err());
        assert!(parse_expr(&r, "p/q").is_err());
    }

    #[test]
    fn integer_parse_rejects_fractions() {
        let r = PolyRing::new(["x"], MonomialOrder::Grevlex);
        assert!(Polynomial::parse(&r, Integers, "x/2").is_err());
    }

    #[test]
    fn poly_file_round_trip() {
        let r = PolyRing::new(["a", "b"], MonomialOrder::Grevlex);
        let ps = vec![parse_expr(&r, "a*b - 1").unwrap(), parse_expr(&r, "2/3*a^2 + b").unwrap()];
        let text = write_poly_file(r.vars(), &ps);
        assert_eq!(text, "vars: a b;\na*b - 1\n2/3*a^2 + b\n");
        let (r2, back) = read_poly_file(&text, MonomialOrder::Grevlex).unwrap();
        assert_eq!(r2.vars(), r.vars());
        assert_eq!(back, ps);
        assert_eq!(write_poly_file(r2.vars(), &back), text);
    }
}
