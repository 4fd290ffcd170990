//! Table-driven arithmetic in a finite field of order `p^m`.
//!
//! Elements are encoded as integers whose base-`p` digits are the
//! coordinates of the element in some fixed `F_p`-basis. Addition is
//! coordinatewise; multiplication goes through discrete log tables built
//! once from a generator of the unit group. The same type backs both the
//! constant field `F_q` and the residue fields `A/p`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest field order for which log tables are built.
pub const MAX_TABLE_ORDER: u64 = 1 << 22;

const NONE: u32 = u32::MAX;

/// An element of a [`Gf`], stored as its coordinate code.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    /// Wraps a raw coordinate code. The caller guarantees `code < order`.
    pub const fn from_code(code: u32) -> Self {
        FieldElem(code)
    }

    pub const fn code(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone)]
pub struct Gf {
    p: u32,
    degree: u32,
    order: u32,
    /// `exp[i] = g^i`, doubled in length so sums of two logs need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    /// Zech logarithms `log(1 + g^i)` for odd characteristic.
    zech: Vec<u32>,
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Gf")
            .field("p", &self.p)
            .field("degree", &self.degree)
            .field("order", &self.order)
            .finish()
    }
}

impl Gf {
    /// Builds the tables from a multiplication oracle on codes.
    ///
    /// `mul` must implement the multiplication of a field of order
    /// `p^degree` in the coordinate encoding described in the module docs.
    pub fn from_multiplication(p: u32, degree: u32, mul: impl Fn(u32, u32) -> u32) -> Result<Gf> {
        let order = (p as u64)
            .checked_pow(degree)
            .filter(|&o| o <= MAX_TABLE_ORDER)
            .ok_or_else(|| {
                Error::Unsupported(format!("field of order {p}^{degree} exceeds the table limit {MAX_TABLE_ORDER}"))
            })? as u32;
        let units = order - 1;
        let mut exp = Vec::with_capacity(2 * units as usize);
        let mut found = false;
        for candidate in 1..order {
            exp.clear();
            let mut x = 1u32;
            loop {
                exp.push(x);
                x = mul(x, candidate);
                if x == 1 || x == 0 || exp.len() > units as usize {
                    break;
                }
            }
            if x == 0 {
                return Err(Error::Unsupported(format!(
                    "multiplication on {order} codes has zero divisors"
                )));
            }
            if exp.len() == units as usize {
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::Unsupported(format!("no generator found for a field of order {order}")));
        }
        let mut log = vec![NONE; order as usize];
        for (i, &x) in exp.iter().enumerate() {
            if log[x as usize] != NONE {
                return Err(Error::Unsupported("multiplication table is not a field".into()));
            }
            log[x as usize] = i as u32;
        }
        exp.extend_from_within(..);
        let mut gf = Gf { p, degree, order, exp, log, zech: Vec::new() };
        if p != 2 {
            let zech = (0..units)
                .map(|i| {
                    let s = gf.add_digits(1, gf.exp[i as usize]);
                    gf.log[s as usize]
                })
                .collect();
            gf.zech = zech;
        }
        Ok(gf)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Dimension over the prime field.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.order).map(FieldElem)
    }

    pub fn units(&self) -> impl Iterator<Item = FieldElem> {
        (1..self.order).map(FieldElem)
    }

    /// The generator of the unit group the log tables are built on.
    pub fn generator(&self) -> FieldElem {
        FieldElem(self.exp[1 % self.exp.len().max(1)])
    }

    pub fn log(&self, a: FieldElem) -> Option<u32> {
        match self.log[a.0 as usize] {
            NONE => None,
            l => Some(l),
        }
    }

    /// `g^i` for the table generator `g`.
    pub fn exp(&self, i: u64) -> FieldElem {
        FieldElem(self.exp[(i % (self.order as u64 - 1)) as usize])
    }

    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn in_prime_field(&self, a: FieldElem) -> bool {
        a.0 < self.p
    }

    pub fn digits(&self, a: FieldElem) -> Vec<u32> {
        let mut c = a.0;
        (0..self.degree)
            .map(|_| {
                let d = c % self.p;
                c /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> FieldElem {
        FieldElem(digits.iter().rev().fold(0, |acc, &d| acc * self.p + d % self.p))
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let (mut out, mut place) = (0u32, 1u32);
        while a != 0 || b != 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let (la, lb) = (self.log[a.0 as usize], self.log[b.0 as usize]);
        let units = self.order - 1;
        let diff = if lb >= la { lb - la } else { lb + units - la };
        match self.zech[diff as usize] {
            NONE => FieldElem::ZERO,
            z => FieldElem(self.exp[(la + z) as usize]),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.p == 2 || a.0 == 0 {
            return a;
        }
        let half = (self.order - 1) / 2;
        FieldElem(self.exp[(self.log[a.0 as usize] + half) as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        FieldElem(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    /// Multiplies by an element given through its logarithm.
    #[inline]
    pub fn mul_by_log(&self, a: FieldElem, log_b: u32) -> FieldElem {
        if a.0 == 0 {
            return FieldElem::ZERO;
        }
        FieldElem(self.exp[(self.log[a.0 as usize] + log_b) as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        let l = self.log(a)?;
        let units = self.order - 1;
        Some(FieldElem(self.exp[((units - l) % units) as usize]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Option<FieldElem> {
        Some(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return FieldElem::ONE;
        }
        match self.log(a) {
            None => FieldElem::ZERO,
            Some(l) => self.exp(l as u64 * (e % (self.order as u64 - 1))),
        }
    }

    /// `a^e` for a possibly negative exponent; `None` for `0^e` with `e < 0`.
    pub fn pow_signed(&self, a: FieldElem, e: i64) -> Option<FieldElem> {
        let units = self.order as i64 - 1;
        if e >= 0 {
            return Some(self.pow(a, e as u64));
        }
        let l = self.log(a)? as i64;
        Some(self.exp((l * e).rem_euclid(units) as u64))
    }

    pub fn frobenius(&self, a: FieldElem) -> FieldElem {
        self.pow(a, self.p as u64)
    }

    /// Multiplicative order of a unit.
    pub fn unit_order(&self, a: FieldElem) -> Option<u32> {
        let l = self.log(a)?;
        let units = self.order - 1;
        Some(units / gcd(units, l))
    }

    pub fn sum<I: IntoIterator<Item = FieldElem>>(&self, it: I) -> FieldElem {
        it.into_iter().fold(FieldElem::ZERO, |acc, x| self.add(acc, x))
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> Gf {
        Gf::from_multiplication(7, 1, |a, b| a * b % 7).unwrap()
    }

    // F_4 = F_2[x]/(x^2 + x + 1), codes b0 + 2 b1.
    fn f4() -> Gf {
        Gf::from_multiplication(2, 2, |a, b| {
            let (a0, a1, b0, b1) = (a & 1, a >> 1, b & 1, b >> 1);
            let c0 = (a0 & b0) ^ (a1 & b1);
            let c1 = (a0 & b1) ^ (a1 & b0) ^ (a1 & b1);
            c0 | (c1 << 1)
        })
        .unwrap()
    }

    #[test]
    fn prime_field_matches_integers() {
        let f = f7();
        for a in 0..7 {
            for b in 0..7 {
                let (x, y) = (FieldElem(a), FieldElem(b));
                assert_eq!(f.add(x, y).code(), (a + b) % 7);
                assert_eq!(f.sub(x, y).code(), (a + 7 - b) % 7);
                assert_eq!(f.mul(x, y).code(), a * b % 7);
            }
        }
        assert_eq!(f.inv(FieldElem(3)), Some(FieldElem(5)));
        assert_eq!(f.inv(FieldElem::ZERO), None);
    }

    #[test]
    fn f4_generator_squares() {
        let f = f4();
        let a = FieldElem(2);
        assert_eq!(f.mul(a, a), FieldElem(3));
        assert_eq!(f.unit_order(a), Some(3));
        assert_eq!(f.frobenius(a), FieldElem(3));
    }

    #[test]
    fn zero_divisors_are_rejected() {
        // Z/9 is not a field.
        assert!(Gf::from_multiplication(3, 2, |a, b| a * b % 9).is_err());
    }

    #[test]
    fn negative_powers() {
        let f = f7();
        assert_eq!(f.pow_signed(FieldElem(3), -1), Some(FieldElem(5)));
        assert_eq!(f.pow_signed(FieldElem(0), -2), None);
        assert_eq!(f.pow(FieldElem(0), 0), FieldElem::ONE);
    }
}
