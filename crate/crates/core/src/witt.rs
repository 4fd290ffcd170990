//! Truncated unramified Witt rings `W_k = W(A/p) / p^k`.
//!
//! `W_k` is presented as `(Z/p^k)[T] / (g(T))` where `g` is the naive lift of
//! the minimal polynomial over `F_p` of a primitive element `theta` of
//! `A/p`. Reduction mod `p` followed by `T -> theta` identifies `W_k / p`
//! with `A/p`.

use std::sync::Arc;

use crate::algebra::gf::FieldElem;
use crate::algebra::residue::{ResidueElem, ResidueField};
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 12;
pub const PRECISION_CAP: u32 = 96;

/// Largest `k` with `p^k < 2^63`; coordinates are held in `u64`.
pub fn max_precision(p: u32) -> u32 {
    let mut k = 0;
    let mut pk: u128 = 1;
    while pk * p as u128 <= (1u128 << 63) - 1 {
        pk *= p as u128;
        k += 1;
    }
    k
}

/// Effective hard cap on the precision for characteristic `p`.
pub fn precision_cap(p: u32) -> u32 {
    PRECISION_CAP.min(max_precision(p))
}

/// Which lift of the minimal polynomial is used as structural modulus.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StructuralLift {
    /// Coefficients in `[0, p)`.
    #[default]
    Naive,
    /// Adds `p * s * (i + 1)` to the coefficient of `T^i`.
    Shifted(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WittElem {
    coords: Vec<u64>,
}

impl WittElem {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

#[derive(Debug)]
pub struct WittRing {
    residue: Arc<ResidueField>,
    p: u64,
    precision: u32,
    pk: u64,
    dim: usize,
    /// Monic structural modulus, `dim + 1` coefficients.
    modulus: Vec<u64>,
    theta: ResidueElem,
    theta_powers: Vec<ResidueElem>,
    /// Residue code -> code of its coordinates in the basis `theta^j`.
    theta_coords: Vec<u32>,
}

impl WittRing {
    pub fn new(residue: Arc<ResidueField>, precision: u32) -> Result<WittRing> {
        Self::with_lift(residue, precision, StructuralLift::Naive)
    }

    pub fn with_lift(residue: Arc<ResidueField>, precision: u32, lift: StructuralLift) -> Result<WittRing> {
        let p = residue.characteristic();
        if precision == 0 {
            return Err(Error::OutOfRange { n: 0, range: "precision >= 1".into() });
        }
        if precision > max_precision(p) {
            return Err(Error::PrecisionCap(max_precision(p)));
        }
        let pk = (p as u64).pow(precision);
        let dim = residue.degree() as usize;
        let theta = find_primitive_element(&residue)?;
        let minpoly = minimal_polynomial(&residue, theta)?;
        let modulus = minpoly
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let base = c as u128;
                let shifted = match lift {
                    StructuralLift::Shifted(s) if i < dim => {
                        base + p as u128 * (s as u128 % pk as u128) * (i as u128 + 1)
                    }
                    _ => base,
                };
                (shifted % pk as u128) as u64
            })
            .collect();
        let mut theta_powers = Vec::with_capacity(dim);
        let mut x = FieldElem::ONE;
        for _ in 0..dim {
            theta_powers.push(x);
            x = residue.mul(x, theta);
        }
        let order = residue.order();
        let mut theta_coords = vec![u32::MAX; order as usize];
        for code in 0..order {
            let digits = digits_of(code, p, dim);
            let value = residue.sum(
                digits.iter().zip(&theta_powers).map(|(&c, &tp)| residue.mul(residue.from_int(c as i64), tp)),
            );
            theta_coords[value.code() as usize] = code;
        }
        debug_assert!(theta_coords.iter().all(|&c| c != u32::MAX));
        Ok(WittRing { residue, p: p as u64, precision, pk, dim, modulus, theta, theta_powers, theta_coords })
    }

    pub fn residue(&self) -> &Arc<ResidueField> {
        &self.residue
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Rank over `Z/p^k`, equal to `[A/p : F_p]`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn theta(&self) -> ResidueElem {
        self.theta
    }

    pub fn structural_modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> WittElem {
        WittElem { coords: vec![0; self.dim] }
    }

    pub fn one(&self) -> WittElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> WittElem {
        let mut e = self.zero();
        e.coords[0] = (n as i128).rem_euclid(self.pk as i128) as u64;
        e
    }

    /// The class of `T`.
    pub fn gen(&self) -> WittElem {
        if self.dim == 1 {
            // T = -g_0 in (Z/p^k)[T]/(T + g_0).
            return self.neg(&self.from_int(self.modulus[0] as i64));
        }
        let mut e = self.zero();
        e.coords[1] = 1;
        e
    }

    pub fn from_coords(&self, coords: &[u64]) -> WittElem {
        let mut e = self.zero();
        for (x, &c) in e.coords.iter_mut().zip(coords) {
            *x = c % self.pk;
        }
        e
    }

    pub fn is_zero(&self, x: &WittElem) -> bool {
        x.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &WittElem, b: &WittElem) -> WittElem {
        WittElem { coords: a.coords.iter().zip(&b.coords).map(|(&x, &y)| add_mod(x, y, self.pk)).collect() }
    }

    pub fn sub(&self, a: &WittElem, b: &WittElem) -> WittElem {
        WittElem {
            coords: a.coords.iter().zip(&b.coords).map(|(&x, &y)| add_mod(x, self.pk - y, self.pk)).collect(),
        }
    }

    pub fn neg(&self, a: &WittElem) -> WittElem {
        self.sub(&self.zero(), a)
    }

    pub fn scale_int(&self, n: i64, a: &WittElem) -> WittElem {
        let s = (n as i128).rem_euclid(self.pk as i128) as u64;
        WittElem { coords: a.coords.iter().map(|&x| mul_mod(x, s, self.pk)).collect() }
    }

    /// `acc += n * a`, in place.
    pub fn add_scaled_int(&self, acc: &mut WittElem, n: u64, a: &WittElem) {
        let s = n % self.pk;
        for (x, &y) in acc.coords.iter_mut().zip(&a.coords) {
            *x = add_mod(*x, mul_mod(y, s, self.pk), self.pk);
        }
    }

    pub fn mul(&self, a: &WittElem, b: &WittElem) -> WittElem {
        let m = self.dim;
        let pk = self.pk as u128;
        let mut prod = vec![0u128; 2 * m - 1];
        for (i, &x) in a.coords.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coords.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u128 * y as u128 % pk) % pk;
            }
        }
        for top in (m..2 * m - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for (i, &g) in self.modulus[..m].iter().enumerate() {
                let idx = top - m + i;
                prod[idx] = (prod[idx] + (pk - c) * g as u128 % pk) % pk;
            }
            prod[top] = 0;
        }
        WittElem { coords: prod[..m].iter().map(|&c| c as u64).collect() }
    }

    pub fn pow(&self, a: &WittElem, mut e: u64) -> WittElem {
        let mut base = a.clone();
        let mut acc = self.one();
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

    /// Inverse of an integer prime to `p`.
    pub fn int_inverse(&self, n: i64) -> Option<u64> {
        let m = self.pk as i128;
        let (mut r0, mut r1) = (m, (n as i128).rem_euclid(m));
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let quot = r0 / r1;
            (r0, r1) = (r1, r0 - quot * r1);
            (s0, s1) = (s1, s0 - quot * s1);
        }
        (r0 == 1).then(|| s0.rem_euclid(m) as u64)
    }

    /// The lift with coordinates in `[0, p)` in the `T`-basis.
    pub fn naive_lift(&self, x: ResidueElem) -> WittElem {
        let code = self.theta_coords[x.code() as usize];
        let digits = digits_of(code, self.p as u32, self.dim);
        WittElem { coords: digits.into_iter().map(|d| d as u64).collect() }
    }

    /// Reduction mod `p`, read through `T -> theta`.
    pub fn reduce(&self, x: &WittElem) -> ResidueElem {
        let k = &self.residue;
        k.sum(x.coords.iter().zip(&self.theta_powers).map(|(&c, &tp)| k.mul(k.from_int((c % self.p) as i64), tp)))
    }

    /// Teichmüller lift: iterate `y -> y^(q^d)` from any lift until it
    /// stabilizes; each step fixes one more `p`-adic digit.
    pub fn teichmuller(&self, x: ResidueElem) -> WittElem {
        if x.is_zero() {
            return self.zero();
        }
        let order = self.residue.order() as u64;
        let mut y = self.naive_lift(x);
        for _ in 0..=self.precision {
            let next = self.pow(&y, order);
            if next == y {
                return y;
            }
            y = next;
        }
        panic!("Teichmüller iteration did not stabilize within k + 1 steps");
    }

    /// Largest `v <= k` with `p^v` dividing every coordinate; `k` means
    /// zero at this precision.
    pub fn valuation(&self, x: &WittElem) -> u32 {
        x.coords
            .iter()
            .filter(|&&c| c != 0)
            .map(|&c| {
                let (mut c, mut v) = (c, 0);
                while c % self.p == 0 {
                    c /= self.p;
                    v += 1;
                }
                v
            })
            .min()
            .unwrap_or(self.precision)
    }
}

fn add_mod(x: u64, y: u64, m: u64) -> u64 {
    ((x as u128 + y as u128) % m as u128) as u64
}

fn mul_mod(x: u64, y: u64, m: u64) -> u64 {
    ((x as u128 * y as u128) % m as u128) as u64
}

fn digits_of(mut code: u32, p: u32, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = code % p;
            code /= p;
            d
        })
        .collect()
}

fn frobenius_orbit_len(k: &ResidueField, x: ResidueElem) -> usize {
    let p = k.characteristic() as u64;
    let mut y = k.pow(x, p);
    let mut len = 1;
    while y != x {
        y = k.pow(y, p);
        len += 1;
    }
    len
}

/// `theta = t`, then `t + c a` for `c` in `F_q`, then every element in code
/// order; the first whose `p`-power orbit has full length is taken.
fn find_primitive_element(k: &ResidueField) -> Result<ResidueElem> {
    let dim = k.degree() as usize;
    let t = k.t_class();
    let a = k.fq().gen_a();
    let candidates = std::iter::once(t)
        .chain(k.fq().elements().map(|c| k.add(t, k.mul(c, a))))
        .chain(k.elements());
    candidates
        .into_iter()
        .find(|&x| frobenius_orbit_len(k, x) == dim)
        .ok_or_else(|| Error::Consistency("residue field has no primitive element".into()))
}

/// `prod (X - theta^(p^i))`, checked to have `F_p` coefficients.
fn minimal_polynomial(k: &ResidueField, theta: ResidueElem) -> Result<Vec<u32>> {
    let dim = k.degree() as usize;
    let p = k.characteristic() as u64;
    let mut poly = vec![FieldElem::ONE];
    let mut root = theta;
    for _ in 0..dim {
        let mut next = vec![FieldElem::ZERO; poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            next[i + 1] = k.add(next[i + 1], c);
            next[i] = k.sub(next[i], k.mul(c, root));
        }
        poly = next;
        root = k.pow(root, p);
    }
    if poly.iter().any(|&c| !k.in_prime_field(c)) {
        return Err(Error::Consistency("minimal polynomial is not defined over F_p".into()));
    }
    Ok(poly.iter().map(|c| c.code()).collect())
}
