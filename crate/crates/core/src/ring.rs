//! Exact coefficient rings.
//!
//! [`Rational`] is an arbitrary-precision fraction; [`Poly`] is a multivariate
//! polynomial with rational coefficients over named symbols. Both, together with
//! the floating types, implement [`Ring`], the bound used by the generic series
//! and character code.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Builds `n/d` as an exact rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Embedding of the rationals into a coefficient ring.
pub trait FromRational {
    fn from_rational(q: &Rational) -> Self;
}

impl FromRational for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

impl FromRational for f64 {
    fn from_rational(q: &Rational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
}

impl FromRational for f32 {
    fn from_rational(q: &Rational) -> Self {
        q.to_f32().unwrap_or(f32::NAN)
    }
}

/// A commutative ring with a distinguished copy of the rationals.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + FromRational
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
        + FromRational
{
}

/// Generalized binomial coefficient `a choose k` for rational `a`.
pub fn binomial(a: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    for j in 0..k {
        acc = acc * (a - int(j as i64)) / int(j as i64 + 1);
    }
    acc
}

/// A power product of symbols, kept sorted by symbol name with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial(vec![(name.to_string(), 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.0
    }

    pub fn exponent(&self, name: &str) -> u32 {
        self.0.iter().find(|(s, _)| s == name).map_or(0, |(_, e)| *e)
    }

    /// The monomial with `name` removed.
    pub fn without(&self, name: &str) -> Self {
        Monomial(self.0.iter().filter(|(s, _)| s != name).cloned().collect())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut merged: BTreeMap<&str, u32> = BTreeMap::new();
        for (s, e) in self.0.iter().chain(other.0.iter()) {
            *merged.entry(s.as_str()).or_insert(0) += e;
        }
        Monomial(merged.into_iter().map(|(s, e)| (s.to_string(), e)).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(s, e)| if *e == 1 { s.clone() } else { format!("{s}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Multivariate polynomial with exact rational coefficients.
///
/// No zero coefficient is ever stored, so structural equality is ring equality.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn constant(q: Rational) -> Self {
        let mut p = Poly::default();
        p.add_term(Monomial::one(), q);
        p
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(int(n))
    }

    pub fn symbol(name: &str) -> Self {
        let mut p = Poly::default();
        p.add_term(Monomial::var(name), Rational::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> Self {
        let mut p = Poly::default();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The value if the polynomial is constant.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn symbols(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(s, _)| s.clone()))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, v)| (m.clone(), v * c)))
    }

    /// Reads the polynomial as a univariate polynomial in `name` with polynomial coefficients.
    pub fn coefficients_in(&self, name: &str) -> Vec<Poly> {
        let mut out: Vec<Poly> = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exponent(name) as usize;
            if out.len() <= e {
                out.resize(e + 1, Poly::default());
            }
            out[e].add_term(m.without(name), c.clone());
        }
        out
    }

    /// Replaces every occurrence of the symbol `name` by `value`.
    pub fn substitute(&self, name: &str, value: &Poly) -> Poly {
        let coeffs = self.coefficients_in(name);
        let mut acc = Poly::default();
        let mut power = Poly::one();
        for (k, c) in coeffs.iter().enumerate() {
            if k > 0 {
                power = &power * value;
            }
            if !c.is_empty() {
                acc = &acc + &(c * &power);
            }
        }
        acc
    }

    /// Evaluates with every symbol bound in `env`.
    pub fn evaluate(&self, env: &BTreeMap<String, Rational>) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (s, e) in &m.0 {
                let v = env
                    .get(s)
                    .ok_or_else(|| Error::InvalidArgument(format!("unbound symbol {s}")))?;
                for _ in 0..*e {
                    t *= v;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn parse(src: &str) -> Result<Poly> {
        let mut p = Parser::new(src)?;
        let out = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!("trailing input in {src:?}")));
        }
        Ok(out)
    }

    fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

fn fmt_term(c: &Rational, m: &Monomial) -> String {
    if m.is_one() {
        return c.to_string();
    }
    if c.is_one() {
        m.to_string()
    } else if (-c).is_one() {
        format!("-{m}")
    } else {
        format!("{c}*{m}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let t = fmt_term(c, m);
            if i == 0 {
                write!(f, "{t}")?;
            } else if let Some(rest) = t.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {t}")?;
            }
        }
        Ok(())
    }
}

impl FromRational for Poly {
    fn from_rational(q: &Rational) -> Self {
        Poly::constant(q.clone())
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::constant(Rational::one())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                *acc.entry(m1.mul(m2)).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Poly { terms: acc }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        let chars: Vec<char> = src.chars().collect();
        let mut tokens = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() || c == '.' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                tokens.push(Tok::Num(parse_decimal(&text)?));
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                tokens.push(Tok::Ident(chars[start..i].iter().collect()));
            } else if c == '*' && chars.get(i + 1) == Some(&'*') {
                tokens.push(Tok::Op('^'));
                i += 2;
            } else if "+-*/^()".contains(c) {
                tokens.push(Tok::Op(c));
                i += 1;
            } else {
                return Err(Error::Parse(format!("unexpected character {c:?}")));
            }
        }
        Ok(Parser { tokens, pos: 0 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().cloned() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = &acc * &rhs;
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    let q = rhs
                        .as_rational()
                        .filter(|q| !q.is_zero())
                        .ok_or_else(|| Error::Parse("division by a non-constant or zero".into()))?;
                    acc = acc.scale(&q.recip());
                }
                // Juxtaposition such as `2z` or `3(x+1)` means multiplication.
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')) => {
                    let rhs = self.unary()?;
                    acc = &acc * &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let e = match self.tokens.get(self.pos) {
                Some(Tok::Num(q)) if q.is_integer() && !q.is_negative() => q
                    .to_integer()
                    .to_u32()
                    .ok_or_else(|| Error::Parse("exponent too large".into()))?,
                _ => return Err(Error::Parse("exponent must be a non-negative integer".into())),
            };
            self.pos += 1;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.tokens.get(self.pos).cloned() {
            Some(Tok::Num(q)) => {
                self.pos += 1;
                Ok(Poly::constant(q))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Poly::symbol(&s))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.tokens.get(self.pos) != Some(&Tok::Op(')')) {
                    return Err(Error::Parse("missing ')'".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses `12`, `0.25`, or `3/4` style literals exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n = parse_decimal(n.trim())?;
        let d = parse_decimal(d.trim())?;
        if d.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        return Ok(n / d);
    }
    parse_decimal(text)
}

fn parse_decimal(text: &str) -> Result<Rational> {
    let (sign, body) = match text.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, text),
    };
    let bad = || Error::Parse(format!("bad number {text:?}"));
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let n: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let d = num_traits::pow(BigInt::from(10), frac.len());
    Ok(Rational::new(n * sign, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render_round_trip() {
        let p = Poly::parse("3/2*f1^2 - f2 + 1").unwrap();
        assert_eq!(p.to_string(), "1 - f2 + 3/2*f1^2");
        assert_eq!(Poly::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn juxtaposition_and_decimals() {
        assert_eq!(Poly::parse("2z").unwrap(), Poly::parse("2*z").unwrap());
        assert_eq!(Poly::parse("0.25").unwrap(), Poly::constant(rat(1, 4)));
        assert_eq!(Poly::parse("(x+1)^2").unwrap().to_string(), "1 + 2*x + x^2");
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = Poly::parse("x - x").unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn substitution() {
        let p = Poly::parse("m^2 + 2*m").unwrap();
        let q = p.substitute("m", &Poly::parse("a+1").unwrap());
        assert_eq!(q, Poly::parse("a^2 + 4*a + 3").unwrap());
    }

    #[test]
    fn binomial_half_integer() {
        assert_eq!(binomial(&rat(-3, 2), 2), rat(15, 8));
        assert_eq!(binomial(&rat(1, 2), 1), rat(1, 2));
    }
}
