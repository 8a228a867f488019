use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::domain::{Coeff, CoefficientDomain};
use super::monomial::{Monomial, MonomialOrder};
use crate::error::{Error, Result};

/// A polynomial as a map from monomials to nonzero coefficients. Arithmetic
/// needs the coefficient domain and therefore goes through [`PolyRing`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Coeff>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn constant_term(&self) -> Option<&Coeff> {
        self.terms.iter().find(|(m, _)| m.is_one()).map(|(_, c)| c)
    }

    fn insert_add(&mut self, dom: &CoefficientDomain, m: Monomial, c: Coeff) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                let c = dom.norm(c);
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = dom.norm(o.get() + c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }
}

/// `coefficients[variables]` with a term order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyRing {
    pub domain: CoefficientDomain,
    pub variables: Vec<String>,
    pub order: MonomialOrder,
}

impl PolyRing {
    pub fn new(domain: CoefficientDomain, variables: Vec<String>, order: MonomialOrder) -> Result<Self> {
        domain.validate()?;
        for (i, v) in variables.iter().enumerate() {
            if !is_identifier(v) {
                return Err(Error::Invalid(format!("`{v}` is not a valid variable name")));
            }
            if variables[..i].contains(v) {
                return Err(Error::Invalid(format!("duplicate variable `{v}`")));
            }
        }
        if let MonomialOrder::Elimination { block } = order {
            if block > variables.len() {
                return Err(Error::Invalid("elimination block larger than variable count".into()));
            }
        }
        Ok(PolyRing { domain, variables, order })
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn constant(&self, c: impl Into<Coeff>) -> Poly {
        let mut p = Poly::zero();
        p.insert_add(&self.domain, Monomial::one(self.nvars()), c.into());
        p
    }

    pub fn int(&self, c: i64) -> Poly {
        self.constant(Coeff::from_integer(BigInt::from(c)))
    }

    pub fn one(&self) -> Poly {
        self.int(1)
    }

    pub fn var(&self, i: usize) -> Poly {
        self.monomial(Monomial::var(self.nvars(), i, 1), Coeff::one())
    }

    pub fn monomial(&self, m: Monomial, c: Coeff) -> Poly {
        let mut p = Poly::zero();
        p.insert_add(&self.domain, m, c);
        p
    }

    pub fn is_one(&self, p: &Poly) -> bool {
        p.terms.len() == 1 && p.constant_term().is_some_and(|c| c.is_one())
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let mut r = a.clone();
        for (m, c) in &b.terms {
            r.insert_add(&self.domain, m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        let mut r = a.clone();
        for (m, c) in &b.terms {
            r.insert_add(&self.domain, m.clone(), -c.clone());
        }
        r
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in &a.terms {
            r.insert_add(&self.domain, m.clone(), -c.clone());
        }
        r
    }

    pub fn scale(&self, a: &Poly, c: &Coeff) -> Poly {
        let mut r = Poly::zero();
        for (m, x) in &a.terms {
            r.insert_add(&self.domain, m.clone(), x * c);
        }
        r
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                r.insert_add(&self.domain, ma.mul(mb), ca * cb);
            }
        }
        r
    }

    pub fn mul_monomial(&self, a: &Poly, m: &Monomial) -> Poly {
        let terms = a.terms.iter().map(|(x, c)| (x.mul(m), c.clone())).collect();
        Poly { terms }
    }

    pub fn pow(&self, a: &Poly, e: u32) -> Poly {
        let mut result = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    pub fn product<'a>(&self, factors: impl IntoIterator<Item = &'a Poly>) -> Poly {
        factors.into_iter().fold(self.one(), |acc, f| self.mul(&acc, f))
    }

    /// Terms sorted by decreasing term order.
    pub fn sorted_terms<'a>(&self, p: &'a Poly) -> Vec<(&'a Monomial, &'a Coeff)> {
        let mut v: Vec<_> = p.terms.iter().collect();
        v.sort_by(|a, b| self.order.cmp(b.0, a.0));
        v
    }

    pub fn leading_monomial<'a>(&self, p: &'a Poly) -> Option<&'a Monomial> {
        p.terms.keys().max_by(|a, b| self.order.cmp(a, b))
    }

    pub fn cmp_monomials(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.cmp(a, b)
    }

    /// Substitute `images[i]` for variable `i`; the images live in `target`.
    pub fn substitute(&self, p: &Poly, images: &[Poly], target: &PolyRing) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in &p.terms {
            let mut t = target.constant(c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = target.mul(&t, &target.pow(&images[i], e));
                }
            }
            r = target.add(&r, &t);
        }
        r
    }

    /// View a polynomial in a ring obtained by appending variables.
    pub fn embed_into(&self, p: &Poly, target: &PolyRing) -> Poly {
        let n = target.nvars();
        let mut r = Poly::zero();
        for (m, c) in &p.terms {
            r.insert_add(&target.domain, m.extend(n), c.clone());
        }
        r
    }

    pub fn parse(&self, s: &str) -> Result<Poly> {
        Parser { ring: self, src: s.as_bytes(), pos: 0 }.parse_all()
    }

    /// Canonical text form: terms by decreasing term order, `c*x^e*y` style.
    pub fn format(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.sorted_terms(p).into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.format_monomial(m);
            if mono.is_empty() {
                let _ = write!(out, "{abs}");
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                let _ = write!(out, "{abs}*{mono}");
            }
        }
        out
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.variables[i].clone()),
                _ => parts.push(format!("{}^{}", self.variables[i], e)),
            }
        }
        parts.join("*")
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Recursive-descent parser for `+ - * ^ ( )`, integers, `a/b` rationals and
/// variable names.
struct Parser<'a> {
    ring: &'a PolyRing,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "{msg} at offset {} in `{}`",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
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

    fn parse_all(mut self) -> Result<Poly> {
        if self.peek().is_none() {
            return Err(self.err("empty polynomial"));
        }
        let p = self.expr()?;
        if self.peek().is_some() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<Poly> {
        let r = self.ring;
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let t = self.term()?;
                r.neg(&t)
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
                    let t = self.term()?;
                    acc = r.add(&acc, &t);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = r.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.power()?;
            acc = self.ring.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = e
                .try_into()
                .map_err(|_| self.err("exponent out of range"))?;
            return Ok(self.ring.pow(&base, e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        s.parse::<BigInt>().map_err(|_| self.err("bad integer"))
    }

    fn atom(&mut self) -> Result<Poly> {
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
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut value = Coeff::from_integer(num);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(self.err("division by zero"));
                    }
                    value = Coeff::new(value.to_integer(), den);
                }
                let value = self.ring.domain.normalize(&value).map_err(|e| self.err(&e.to_string()))?;
                Ok(self.ring.constant(value))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let i = self
                    .ring
                    .var_index(name)
                    .ok_or_else(|| self.err(&format!("unknown variable `{name}`")))?;
                Ok(self.ring.var(i))
            }
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }
}
