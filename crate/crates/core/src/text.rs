//! Reader for the polynomial text grammar.
//!
//! Accepts sums of products of integers, fractions, parenthesised
//! subexpressions, powers `^n` and identifiers. What an identifier means
//! (`T3`, `U0`, the generator `x`) is decided by the caller.

use num_bigint::BigInt;

use crate::fields::{BaseField, ExtElement, Field, SimpleExtension};
use crate::poly::MultiPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Int(s[start..i].parse().unwrap())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(s[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ParseError { pos: i, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

/// Parses polynomial expressions into [`MultiPoly`] values over `F`.
pub struct PolyReader<'a, F: Field> {
    field: &'a F,
    nvars: usize,
    integer: &'a dyn Fn(&BigInt) -> F::Elem,
    resolve: &'a dyn Fn(&str) -> Option<MultiPoly<F::Elem>>,
}

impl<'a, F: Field> PolyReader<'a, F> {
    pub fn new(
        field: &'a F,
        nvars: usize,
        integer: &'a dyn Fn(&BigInt) -> F::Elem,
        resolve: &'a dyn Fn(&str) -> Option<MultiPoly<F::Elem>>,
    ) -> Self {
        PolyReader { field, nvars, integer, resolve }
    }

    pub fn parse(&self, s: &str) -> Result<MultiPoly<F::Elem>, ParseError> {
        let toks = tokenize(s)?;
        let mut p = Parser { r: self, toks: &toks, i: 0, end: s.len() };
        let v = p.expr()?;
        if p.i != toks.len() {
            return Err(ParseError { pos: toks[p.i].0, msg: "trailing input".into() });
        }
        Ok(v)
    }
}

struct Parser<'r, 'a, F: Field> {
    r: &'r PolyReader<'a, F>,
    toks: &'r [(usize, Tok)],
    i: usize,
    end: usize,
}

impl<F: Field> Parser<'_, '_, F> {
    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.0)
    }

    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.i) {
            Some((_, Tok::Op(c))) => Some(*c),
            _ => None,
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos(), msg: msg.to_string() })
    }

    fn expr(&mut self) -> Result<MultiPoly<F::Elem>, ParseError> {
        let f = self.r.field;
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.i += 1;
            let t = self.term()?;
            acc = if op == '+' { acc.add(f, &t) } else { acc.sub(f, &t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly<F::Elem>, ParseError> {
        let f = self.r.field;
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.i += 1;
            let at = self.pos();
            let t = self.unary()?;
            if op == '*' {
                acc = acc.mul(f, &t);
            } else {
                let c = match t.terms() {
                    [(m, c)] if m.degree() == 0 => c.clone(),
                    _ => return Err(ParseError { pos: at, msg: "division by a non-constant".into() }),
                };
                let inv = f.inv(&c).ok_or(ParseError { pos: at, msg: "division by zero".into() })?;
                acc = acc.scale(f, &inv);
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly<F::Elem>, ParseError> {
        match self.peek_op() {
            Some('-') => {
                self.i += 1;
                Ok(self.unary()?.neg(self.r.field))
            }
            Some('+') => {
                self.i += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly<F::Elem>, ParseError> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.i += 1;
            match self.toks.get(self.i) {
                Some((_, Tok::Int(n))) => {
                    let e: u32 = n.try_into().map_err(|_| ParseError { pos: self.pos(), msg: "exponent too large".into() })?;
                    self.i += 1;
                    return Ok(base.pow(self.r.field, e));
                }
                _ => return self.err("expected an integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly<F::Elem>, ParseError> {
        let f = self.r.field;
        match self.toks.get(self.i).cloned() {
            Some((_, Tok::Int(n))) => {
                self.i += 1;
                Ok(MultiPoly::constant(f, self.r.nvars, (self.r.integer)(&n)))
            }
            Some((pos, Tok::Ident(name))) => {
                self.i += 1;
                (self.r.resolve)(&name).ok_or(ParseError { pos, msg: format!("unknown identifier '{name}'") })
            }
            Some((_, Tok::Op('('))) => {
                self.i += 1;
                let v = self.expr()?;
                if self.peek_op() != Some(')') {
                    return self.err("expected ')'");
                }
                self.i += 1;
                Ok(v)
            }
            _ => self.err("expected a number, identifier or '('"),
        }
    }
}

/// Identifier resolver for indexed variables `<prefix>0 .. <prefix>(n-1)`.
pub fn indexed_var<F: Field>(f: &F, name: &str, prefix: char, nvars: usize) -> Option<MultiPoly<F::Elem>> {
    let rest = name.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let i: usize = rest.parse().ok()?;
    (i < nvars).then(|| MultiPoly::var(f, nvars, i))
}

/// Parses a univariate polynomial in `x` over a base field, coefficients lowest first.
pub fn parse_univariate<B: BaseField>(base: &B, s: &str) -> Result<Vec<B::Elem>, ParseError> {
    let integer = |n: &BigInt| base.from_ratio(n, &BigInt::from(1)).expect("unit denominator");
    let resolve = |name: &str| (name == "x").then(|| MultiPoly::var(base, 1, 0));
    let p = PolyReader::new(base, 1, &integer, &resolve).parse(s)?;
    let deg = p.total_degree().unwrap_or(0) as usize;
    let mut out = vec![base.zero(); deg + 1];
    for (m, c) in p.terms() {
        out[m.exps()[0] as usize] = c.clone();
    }
    Ok(out)
}

/// Parses a polynomial in `<prefix>0..` with coefficients in `k[x]/(m)`.
pub fn parse_ext_poly<B: BaseField>(
    ext: &SimpleExtension<B>,
    s: &str,
    prefix: char,
    nvars: usize,
) -> Result<MultiPoly<ExtElement<B::Elem>>, ParseError> {
    let base = ext.base();
    let integer = |n: &BigInt| ext.embed(&base.from_ratio(n, &BigInt::from(1)).expect("unit denominator"));
    let resolve = |name: &str| {
        if name == "x" {
            Some(MultiPoly::constant(ext, nvars, ext.generator()))
        } else {
            indexed_var(ext, name, prefix, nvars)
        }
    };
    PolyReader::new(ext, nvars, &integer, &resolve).parse(s)
}

/// Parses an element of `k[x]/(m)` such as `3 + 2*x` or `-1/2`.
pub fn parse_ext_element<B: BaseField>(ext: &SimpleExtension<B>, s: &str) -> Result<ExtElement<B::Elem>, ParseError> {
    let p = parse_ext_poly(ext, s, 'T', 0)?;
    Ok(p.terms().first().map_or_else(|| ext.zero(), |(_, c)| c.clone()))
}

/// Parses a polynomial in `<prefix>0..` over a base field.
pub fn parse_base_poly<B: BaseField>(base: &B, s: &str, prefix: char, nvars: usize) -> Result<MultiPoly<B::Elem>, ParseError> {
    let integer = |n: &BigInt| base.from_ratio(n, &BigInt::from(1)).expect("unit denominator");
    let resolve = |name: &str| indexed_var(base, name, prefix, nvars);
    PolyReader::new(base, nvars, &integer, &resolve).parse(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{PrimeField, Rationals};

    #[test]
    fn roundtrip_over_gaussian_rationals() {
        let q = Rationals;
        let m = parse_univariate(&q, "x^2 + 1").unwrap();
        assert_eq!(m, vec![q.one(), q.zero(), q.one()]);
        let k = SimpleExtension::new(q, m).unwrap();
        let s = "(1/2 - 3*x)*T0^2*T1 - 2*T1^3 + (x)*T0";
        let p = parse_ext_poly(&k, s, 'T', 2).unwrap();
        let shown = p.format(&k, 'T');
        assert_eq!(shown, "(1/2 - 3*x)*T0^2*T1 - 2*T1^3 + (x)*T0");
        assert_eq!(parse_ext_poly(&k, &shown, 'T', 2).unwrap(), p);
        // x^2 reduces to -1
        assert_eq!(parse_ext_element(&k, "x^2").unwrap(), k.from_i64(-1));
    }

    #[test]
    fn prime_field_fractions_and_errors() {
        let f = PrimeField::new(5).unwrap();
        let p = parse_base_poly(&f, "T0/2 + U1", 'T', 2);
        assert!(p.is_err());
        let p = parse_base_poly(&f, "T0/2 - T1^2", 'T', 2).unwrap();
        assert_eq!(p.format(&f, 'T'), "4*T1^2 + 3*T0");
        assert!(parse_base_poly(&f, "T0/T1", 'T', 2).is_err());
        assert!(parse_base_poly(&f, "T0/5", 'T', 2).is_err());
        assert!(parse_base_poly(&f, "T2", 'T', 2).is_err());
        assert!(parse_base_poly(&f, "(T0", 'T', 2).is_err());
    }
}
