//! Dense univariate polynomials over `F_q`: the ring `A = F_q[t]`.

use std::cmp::Ordering;

use crate::algebra::field::{Fq, FieldDescriptor};
use crate::algebra::gf::FieldElem;
use crate::error::{Error, Result};

/// Degree of a polynomial; the zero polynomial has degree `NegInfinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

/// Coefficients in ascending degree with no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<FieldElem>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(FieldElem::ONE)
    }

    pub fn constant(c: FieldElem) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    pub fn monomial(c: FieldElem, n: usize) -> Poly {
        let mut coeffs = vec![FieldElem::ZERO; n + 1];
        coeffs[n] = c;
        Poly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<FieldElem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn leading(&self) -> FieldElem {
        self.coeffs.last().copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == FieldElem::ONE
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }
}

/// Canonical order: by degree, then coefficient codes from the leading
/// coefficient down, constant term last.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arithmetic context for [`Poly`] over a fixed `F_q`. The variable name
/// only matters for text rendering and parsing.
#[derive(Clone, Debug)]
pub struct PolyRing {
    field: Fq,
    var: char,
}

impl PolyRing {
    pub fn new(field: Fq) -> PolyRing {
        PolyRing { field, var: 't' }
    }

    pub fn with_var(mut self, var: char) -> PolyRing {
        self.var = var;
        self
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn var(&self) -> char {
        self.var
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// The variable itself.
    pub fn gen(&self) -> Poly {
        Poly::monomial(FieldElem::ONE, 1)
    }

    pub fn from_ints(&self, coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&c| self.field.from_int(c)).collect())
    }

    pub fn add(&self, f: &Poly, g: &Poly) -> Poly {
        let n = f.coeffs.len().max(g.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.field.add(f.coeff(i), g.coeff(i))).collect())
    }

    pub fn sub(&self, f: &Poly, g: &Poly) -> Poly {
        let n = f.coeffs.len().max(g.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.field.sub(f.coeff(i), g.coeff(i))).collect())
    }

    pub fn neg(&self, f: &Poly) -> Poly {
        Poly::from_coeffs(f.coeffs.iter().map(|&c| self.field.neg(c)).collect())
    }

    pub fn scale(&self, c: FieldElem, f: &Poly) -> Poly {
        Poly::from_coeffs(f.coeffs.iter().map(|&x| self.field.mul(c, x)).collect())
    }

    pub fn mul(&self, f: &Poly, g: &Poly) -> Poly {
        if f.is_zero() || g.is_zero() {
            return Poly::zero();
        }
        let fq = &self.field;
        let mut out = vec![FieldElem::ZERO; f.coeffs.len() + g.coeffs.len() - 1];
        for (i, &a) in f.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in g.coeffs.iter().enumerate() {
                out[i + j] = fq.add(out[i + j], fq.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn pow(&self, f: &Poly, mut e: u64) -> Poly {
        let mut base = f.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Euclidean division: `f = quot * g + rem` with `deg rem < deg g`.
    pub fn divrem(&self, f: &Poly, g: &Poly) -> Result<(Poly, Poly)> {
        let Some(dg) = g.degree().finite() else {
            return Err(Error::DivisionByZero);
        };
        let fq = &self.field;
        let lead_inv = fq.inv(g.leading()).expect("nonzero leading coefficient");
        let mut rem = f.coeffs.clone();
        if rem.len() <= dg {
            return Ok((Poly::zero(), f.clone()));
        }
        let mut quot = vec![FieldElem::ZERO; rem.len() - dg];
        for k in (dg..rem.len()).rev() {
            let c = fq.mul(rem[k], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[k - dg] = c;
            for (i, &gi) in g.coeffs.iter().enumerate() {
                rem[k - dg + i] = fq.sub(rem[k - dg + i], fq.mul(c, gi));
            }
        }
        rem.truncate(dg);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    pub fn rem(&self, f: &Poly, g: &Poly) -> Result<Poly> {
        Ok(self.divrem(f, g)?.1)
    }

    pub fn monic(&self, f: &Poly) -> Poly {
        match self.field.inv(f.leading()) {
            Some(inv) => self.scale(inv, f),
            None => Poly::zero(),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, f: &Poly, g: &Poly) -> Poly {
        let (mut a, mut b) = (f.clone(), g.clone());
        while !b.is_zero() {
            let r = self.rem(&a, &b).expect("b is nonzero");
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    pub fn eval(&self, f: &Poly, x: FieldElem) -> FieldElem {
        f.coeffs
            .iter()
            .rev()
            .fold(FieldElem::ZERO, |acc, &c| self.field.add(self.field.mul(acc, x), c))
    }

    pub fn derivative(&self, f: &Poly) -> Poly {
        Poly::from_coeffs(
            f.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| self.field.mul(self.field.from_int(i as i64), c))
                .collect(),
        )
    }

    /// `f^e mod m`.
    pub fn pow_mod(&self, f: &Poly, mut e: u64, m: &Poly) -> Result<Poly> {
        let mut base = self.rem(f, m)?;
        let mut acc = self.rem(&Poly::one(), m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.rem(&self.mul(&acc, &base), m)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.rem(&self.mul(&base, &base), m)?;
            }
        }
        Ok(acc)
    }

    /// Irreducibility by the distinct-degree criterion: `f` of degree `n`
    /// is irreducible iff `t^(q^n) = t mod f` and `gcd(t^(q^(n/l)) - t, f) = 1`
    /// for every prime `l | n`.
    pub fn is_irreducible(&self, f: &Poly) -> Result<bool> {
        let n = match f.degree() {
            Degree::Finite(n) if n >= 1 => n,
            _ => return Err(Error::ConstantPolynomial(self.render(f))),
        };
        if n == 1 {
            return Ok(true);
        }
        let f = self.monic(f);
        let t = self.gen();
        let q = self.q() as u64;
        let mut frob = vec![self.rem(&t, &f)?];
        for i in 1..=n {
            let next = self.pow_mod(&frob[i - 1], q, &f)?;
            frob.push(next);
        }
        if frob[n] != frob[0] {
            return Ok(false);
        }
        for l in prime_divisors(n) {
            let h = self.sub(&frob[n / l], &t);
            if self.gcd(&h, &f) != Poly::one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All monic irreducibles of the given degree, in canonical order.
    pub fn monic_irreducibles(&self, degree: usize) -> Result<Vec<Poly>> {
        if degree == 0 {
            return Err(Error::OutOfRange { n: 0, range: "degree >= 1".into() });
        }
        let q = self.q() as u64;
        let count = q
            .checked_pow(degree as u32)
            .filter(|&c| c <= 1 << 24)
            .ok_or_else(|| Error::Unsupported(format!("enumerating q^{degree} polynomials is out of range")))?;
        let mut out = Vec::new();
        for code in 0..count {
            let mut coeffs = Vec::with_capacity(degree + 1);
            let mut c = code;
            for _ in 0..degree {
                coeffs.push(FieldElem::from_code((c % q) as u32));
                c /= q;
            }
            coeffs.push(FieldElem::ONE);
            let f = Poly::from_coeffs(coeffs);
            if self.is_irreducible(&f)? {
                out.push(f);
            }
        }
        Ok(out)
    }

    /// Renders `f` in the canonical text format, e.g. `t^3 - t + 1` or
    /// `t^3 + a^2*t^2 + a*t + a`.
    pub fn render(&self, f: &Poly) -> String {
        if f.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (e, &c) in f.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (negative, coef) = coefficient_text(&self.field, c);
            let mono = match e {
                0 => String::new(),
                1 => self.var.to_string(),
                _ => format!("{}^{e}", self.var),
            };
            let body = match (coef.as_deref(), e) {
                (None, 0) => "1".to_string(),
                (None, _) => mono,
                (Some(c), 0) => c.to_string(),
                (Some(c), _) => format!("{c}*{mono}"),
            };
            match (out.is_empty(), negative) {
                (true, false) => {}
                (true, true) => out.push('-'),
                (false, false) => out.push_str(" + "),
                (false, true) => out.push_str(" - "),
            }
            out.push_str(&body);
        }
        out
    }

    /// Parses the text format. Accepts `α` for `a`, implicit multiplication
    /// and parentheses.
    pub fn parse(&self, input: &str) -> Result<Poly> {
        let mut parser = Parser { ring: self, input, chars: input.chars().collect(), pos: 0 };
        let f = parser.expr()?;
        parser.skip_ws();
        if parser.pos != parser.chars.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(f)
    }
}

/// Sign and text of a coefficient; `None` text means the unit `1`.
fn coefficient_text(field: &FieldDescriptor, c: FieldElem) -> (bool, Option<String>) {
    let p = field.p();
    if field.r() == 1 {
        let v = c.code();
        let (neg, mag) = if p > 2 && v > p / 2 { (true, p - v) } else { (false, v) };
        return (neg, (mag != 1).then(|| mag.to_string()));
    }
    if let Some(k) = field.log_a(c) {
        return (
            false,
            match k {
                0 => None,
                1 => Some("a".to_string()),
                _ => Some(format!("a^{k}")),
            },
        );
    }
    let terms: Vec<String> = field
        .digits(c)
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &d)| d != 0)
        .map(|(i, &d)| {
            let mono = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            match (d, i) {
                (_, 0) => d.to_string(),
                (1, _) => mono,
                _ => format!("{d}*{mono}"),
            }
        })
        .collect();
    if terms.len() == 1 {
        (false, (terms[0] != "1").then(|| terms[0].clone()))
    } else {
        (false, Some(format!("({})", terms.join(" + "))))
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

struct Parser<'a> {
    ring: &'a PolyRing,
    input: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, reason: &str) -> Error {
        Error::Parse { input: self.input.to_string(), reason: format!("{reason} at position {}", self.pos) }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                let t = self.term()?;
                self.ring.neg(&t)
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if op == '+' { self.ring.add(&acc, &t) } else { self.ring.sub(&acc, &t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                }
                Some(c) if c.is_ascii_digit() || c.is_alphabetic() || c == '(' => {}
                _ => return Ok(acc),
            }
            let f = self.factor()?;
            acc = self.ring.mul(&acc, &f);
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.number()?;
            return Ok(self.ring.pow(&base, e));
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.error("number too large"))
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                let p = self.ring.field().p() as u64;
                Ok(Poly::constant(FieldElem::from_code((n % p) as u32)))
            }
            Some(c) if c == self.ring.var() => {
                self.pos += 1;
                Ok(self.ring.gen())
            }
            Some('a' | 'α') => {
                if self.ring.field().r() == 1 {
                    return Err(self.error("the generator 'a' only exists for non-prime q"));
                }
                self.pos += 1;
                Ok(Poly::constant(self.ring.field().gen_a()))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FieldDescriptor;

    fn ring(q: u64) -> PolyRing {
        PolyRing::new(FieldDescriptor::with_order(q).unwrap())
    }

    #[test]
    fn schoolbook_product_over_f2() {
        let r = ring(2);
        let f = r.parse("t^2 + t").unwrap();
        let g = r.parse("t + 1").unwrap();
        // (t^2 + t)(t + 1) = t^3 + 2t^2 + t = t^3 + t
        assert_eq!(r.render(&r.mul(&f, &g)), "t^3 + t");
    }

    #[test]
    fn gcd_and_derivative() {
        let r = ring(2);
        let f = r.parse("t^2 + t").unwrap();
        assert_eq!(r.gcd(&f, &r.gen()), r.gen());
        assert_eq!(r.derivative(&r.parse("t^4 + t + 1").unwrap()), Poly::one());
        assert_eq!(r.gcd(&Poly::zero(), &Poly::zero()), Poly::zero());
    }

    #[test]
    fn divrem_by_zero() {
        let r = ring(3);
        assert_eq!(r.divrem(&Poly::one(), &Poly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn irreducibility_examples() {
        let r = ring(2);
        assert!(r.is_irreducible(&r.parse("t^2 + t + 1").unwrap()).unwrap());
        assert!(!r.is_irreducible(&r.parse("t^2 + 1").unwrap()).unwrap());
        assert!(r.is_irreducible(&r.parse("t^4 + t + 1").unwrap()).unwrap());
        // (t^2 + t + 1)^2 passes the first test of the criterion only through the gcd.
        assert!(!r.is_irreducible(&r.parse("t^4 + t^2 + 1").unwrap()).unwrap());
        assert!(matches!(r.is_irreducible(&Poly::one()), Err(Error::ConstantPolynomial(_))));
    }

    #[test]
    fn small_irreducible_lists() {
        let r = ring(2);
        let render = |v: Vec<Poly>| v.iter().map(|f| r.render(f)).collect::<Vec<_>>();
        assert_eq!(render(r.monic_irreducibles(1).unwrap()), ["t", "t + 1"]);
        assert_eq!(render(r.monic_irreducibles(2).unwrap()), ["t^2 + t + 1"]);
        let r3 = ring(3);
        let cubics: Vec<String> = r3.monic_irreducibles(3).unwrap().iter().map(|f| r3.render(f)).collect();
        assert_eq!(cubics.len(), 8);
        assert!(cubics.contains(&"t^3 - t + 1".to_string()));
        assert!(cubics.contains(&"t^3 - t - 1".to_string()));
    }

    #[test]
    fn text_format_over_f4() {
        let r = ring(4);
        let f = r.parse("t^3 + α^2 t^2 + α t + α").unwrap();
        assert_eq!(r.render(&f), "t^3 + a^2*t^2 + a*t + a");
        assert_eq!(r.parse("t^3 + a^2*t^2 + a*t + a").unwrap(), f);
        // a^2 = a + 1 in F_4
        assert_eq!(r.parse("(a + 1)*t").unwrap(), r.parse("a^2*t").unwrap());
    }

    #[test]
    fn text_format_signs_over_f5() {
        let r = ring(5);
        let f = r.from_ints(&[3, 4, 2, 1]);
        assert_eq!(r.render(&f), "t^3 + 2*t^2 - t - 2");
        assert_eq!(r.parse(&r.render(&f)).unwrap(), f);
        assert_eq!(r.render(&r.from_ints(&[0, 0, -1])), "-t^2");
        assert_eq!(r.render(&Poly::zero()), "0");
    }

    #[test]
    fn non_primitive_generator_renders_as_sum() {
        // a = x has order 4 in F_3[x]/(x^2 + 1).
        let f9 = FieldDescriptor::new(3, 2, Some(&[1, 0, 1])).unwrap();
        let r = PolyRing::new(f9);
        let f = r.parse("t + a + 2").unwrap();
        assert_eq!(r.render(&f), "t + (a + 2)");
        assert_eq!(r.parse(&r.render(&f)).unwrap(), f);
    }

    #[test]
    fn parse_errors() {
        let r = ring(2);
        assert!(matches!(r.parse("t + a"), Err(Error::Parse { .. })));
        assert!(matches!(r.parse("t +"), Err(Error::Parse { .. })));
        assert!(matches!(r.parse("t)"), Err(Error::Parse { .. })));
    }
}
