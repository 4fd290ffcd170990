//! Constant fields `F_q`, `q = p^r`, presented as `F_p[x]/(m(x))`.

use std::ops::Deref;
use std::sync::Arc;

use crate::algebra::gf::{FieldElem, Gf};
use crate::algebra::poly::PolyRing;
use crate::error::{Error, Result};

/// Largest `q` accepted for the constant field.
pub const MAX_Q: u64 = 1 << 16;

/// Built-in moduli, coefficients over `F_p` in ascending degree.
const BUILTIN_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (3, 2, &[1, 0, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (5, 2, &[2, 0, 1]),
    (7, 2, &[1, 0, 1]),
    (11, 2, &[1, 0, 1]),
    (13, 2, &[2, 0, 1]),
];

/// `F_q` together with its presentation. The generator of `F_q / F_p` is
/// the class of `x`, written `a` in polynomial text.
#[derive(Debug)]
pub struct FieldDescriptor {
    p: u32,
    r: u32,
    modulus: Vec<u32>,
    gf: Gf,
    /// Discrete logs to base `a`, present when `a` generates the unit group.
    a_log: Option<Vec<u32>>,
}

pub type Fq = Arc<FieldDescriptor>;

impl Deref for FieldDescriptor {
    type Target = Gf;

    fn deref(&self) -> &Gf {
        &self.gf
    }
}

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FieldDescriptor {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^r`.
pub fn prime_power(q: u64) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let p = (2..=q).find(|d| q % d == 0).unwrap();
    let (mut rest, mut r) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        r += 1;
    }
    if rest != 1 {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p as u32, r))
}

impl FieldDescriptor {
    /// `F_p` with modulus `x`.
    pub fn prime_field(p: u32) -> Result<Fq> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if p as u64 > MAX_Q {
            return Err(Error::Unsupported(format!("p = {p} exceeds the supported bound {MAX_Q}")));
        }
        let gf = Gf::from_multiplication(p, 1, |a, b| ((a as u64 * b as u64) % p as u64) as u32)?;
        Ok(Arc::new(FieldDescriptor { p, r: 1, modulus: vec![0, 1], gf, a_log: None }))
    }

    /// Builds `F_{p^r}`. Without an explicit modulus the built-in table is
    /// consulted, falling back to the first minimal-weight irreducible.
    pub fn new(p: u32, r: u32, modulus: Option<&[u32]>) -> Result<Fq> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if r == 0 {
            return Err(Error::Unsupported("extension degree must be positive".into()));
        }
        let q = (p as u64).checked_pow(r).filter(|&q| q <= MAX_Q).ok_or_else(|| {
            Error::Unsupported(format!("q = {p}^{r} exceeds the supported bound {MAX_Q}"))
        })?;
        let fp = Self::prime_field(p)?;
        let ring = PolyRing::new(fp.clone()).with_var('x');
        let modulus: Vec<u32> = match modulus {
            Some(m) => {
                let poly = ring.from_ints(&m.iter().map(|&c| c as i64).collect::<Vec<_>>());
                let shown = ring.render(&poly);
                if poly.degree().finite() != Some(r as usize) || !poly.is_monic() {
                    return Err(Error::BadModulus { modulus: shown, reason: format!("expected monic of degree {r}") });
                }
                if !ring.is_irreducible(&poly)? {
                    return Err(Error::BadModulus { modulus: shown, reason: "reducible over F_p".into() });
                }
                poly.coeffs().iter().map(|c| c.code()).collect()
            }
            None if r == 1 => vec![0, 1],
            None => match BUILTIN_MODULI.iter().find(|(bp, br, _)| *bp == p && *br == r) {
                Some((_, _, m)) => m.to_vec(),
                None => minimal_weight_irreducible(&ring, r).ok_or(Error::NoBuiltinModulus(q))?,
            },
        };
        if r == 1 {
            return Ok(fp);
        }
        let m = modulus.clone();
        let gf = Gf::from_multiplication(p, r, |a, b| mul_mod_codes(p, &m, a, b))?;
        let a = FieldElem::from_code(p);
        let a_log = (gf.unit_order(a) == Some(gf.order() - 1)).then(|| {
            let mut table = vec![u32::MAX; gf.order() as usize];
            let mut x = FieldElem::ONE;
            for k in 0..gf.order() - 1 {
                table[x.code() as usize] = k;
                x = gf.mul(x, a);
            }
            table
        });
        Ok(Arc::new(FieldDescriptor { p, r, modulus, gf, a_log }))
    }

    /// Convenience constructor from `q` alone.
    pub fn with_order(q: u64) -> Result<Fq> {
        let (p, r) = prime_power(q)?;
        Self::new(p, r, None)
    }

    /// `F_q` with the modulus given as text in `x` over `F_p`.
    pub fn with_modulus_text(q: u64, text: &str) -> Result<Fq> {
        let (p, r) = prime_power(q)?;
        let ring = PolyRing::new(Self::prime_field(p)?).with_var('x');
        let poly = ring.parse(text)?;
        let coeffs: Vec<u32> = poly.coeffs().iter().map(|c| c.code()).collect();
        Self::new(p, r, Some(&coeffs))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u32 {
        self.gf.order()
    }

    /// Modulus coefficients over `F_p`, ascending.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The class of `x`; zero when `r = 1` (the modulus is `x`).
    pub fn gen_a(&self) -> FieldElem {
        if self.r == 1 {
            FieldElem::ZERO
        } else {
            FieldElem::from_code(self.p)
        }
    }

    /// `k` with `c = a^k`, when `a` is primitive and `c` is a unit.
    pub fn log_a(&self, c: FieldElem) -> Option<u32> {
        self.a_log.as_ref().and_then(|t| match t[c.code() as usize] {
            u32::MAX => None,
            k => Some(k),
        })
    }

    /// The modulus rendered as a polynomial in `x` over `F_p`.
    pub fn modulus_text(&self) -> String {
        let fp = FieldDescriptor::prime_field(self.p).expect("p was validated");
        let ring = PolyRing::new(fp).with_var('x');
        let m = ring.from_ints(&self.modulus.iter().map(|&c| c as i64).collect::<Vec<_>>());
        ring.render(&m)
    }
}

fn mul_mod_codes(p: u32, modulus: &[u32], a: u32, b: u32) -> u32 {
    let r = modulus.len() - 1;
    let digits = |mut c: u32| {
        (0..r)
            .map(|_| {
                let d = c % p;
                c /= p;
                d as u64
            })
            .collect::<Vec<_>>()
    };
    let (da, db) = (digits(a), digits(b));
    let mut prod = vec![0u64; 2 * r];
    for (i, x) in da.iter().enumerate() {
        for (j, y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p as u64;
        }
    }
    for k in (r..2 * r).rev() {
        let c = prod[k];
        if c != 0 {
            for (i, &m) in modulus.iter().enumerate().take(r) {
                let idx = k - r + i;
                prod[idx] = (prod[idx] + (p as u64 - c) * m as u64) % p as u64;
            }
            prod[k] = 0;
        }
    }
    prod[..r].iter().rev().fold(0u32, |acc, &d| acc * p + d as u32)
}

/// First irreducible `x^r + ...` of minimal term count, ties broken by the
/// code of the lower coefficients.
fn minimal_weight_irreducible(ring: &PolyRing, r: u32) -> Option<Vec<u32>> {
    let p = ring.field().p() as u64;
    let count = p.checked_pow(r)?;
    let mut best: Option<(u32, Vec<u32>)> = None;
    for code in 1..count {
        let mut lower = Vec::with_capacity(r as usize + 1);
        let mut c = code;
        for _ in 0..r {
            lower.push((c % p) as u32);
            c /= p;
        }
        let weight = lower.iter().filter(|&&d| d != 0).count() as u32 + 1;
        if best.as_ref().is_some_and(|(w, _)| *w <= weight) || lower[0] == 0 {
            continue;
        }
        lower.push(1);
        let poly = ring.from_ints(&lower.iter().map(|&d| d as i64).collect::<Vec<_>>());
        if ring.is_irreducible(&poly).unwrap_or(false) {
            best = Some((weight, lower));
        }
    }
    best.map(|(_, m)| m)
}
