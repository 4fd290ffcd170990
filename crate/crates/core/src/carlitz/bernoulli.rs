//! Carlitz exponential coefficients and Bernoulli-Carlitz numbers mod `p`.

use std::collections::BTreeSet;

use crate::algebra::gf::FieldElem;
use crate::algebra::poly::{Poly, PolyRing};
use crate::algebra::residue::{ResidueElem, ResidueField};
use crate::algebra::series::SeriesRing;
use crate::carlitz::twisted::TwistedRing;
use crate::error::{Error, Result};

/// Reductions mod `p` of the exponential coefficients `e_0 .. e_{count-1}`,
/// where `e(z) = sum e_i z^(q^i)`.
///
/// Comparing `z^(q^i)` coefficients in `e(tz) = e(z)^q + t e(z)` gives
/// `e_i t^(q^i) = e_{i-1}^q + t e_i`, i.e. `e_i = e_{i-1}^q / (t^(q^i) - t)`.
/// The denominator vanishes mod `p` exactly from `i = d` on.
pub fn exp_coeffs(k: &ResidueField, count: usize) -> Result<Vec<ResidueElem>> {
    let d = k.prime_degree();
    if count > d {
        return Err(Error::OutOfRange { n: count as u64, range: format!("count <= d = {d}") });
    }
    let t = k.t_class();
    let mut out = Vec::with_capacity(count);
    let mut t_frob = t;
    for i in 0..count {
        if i == 0 {
            out.push(FieldElem::ONE);
            continue;
        }
        t_frob = k.frobenius_q(t_frob);
        let denom = k.sub(t_frob, t);
        let e = k.div(k.frobenius_q(out[i - 1]), denom).expect("t^(q^i) != t for 0 < i < d");
        out.push(e);
    }
    Ok(out)
}

/// `BC_n mod p` for `0 <= n <= q^d - 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BcVector {
    pub prime: Poly,
    pub q: u32,
    pub values: Vec<ResidueElem>,
}

impl BcVector {
    pub fn get(&self, n: usize) -> Option<ResidueElem> {
        self.values.get(n).copied()
    }

    /// `q^d - 1`, the order of the unit group of `A/p`.
    pub fn unit_count(&self) -> usize {
        self.values.len() + 1
    }
}

/// Inverts `e(z)/z = sum_{i<d} e_i z^(q^i - 1)` at order `q^d - 1`. Terms
/// with `i >= d` start at `z^(q^d - 1)` and cannot contribute.
pub fn bc_numbers(k: &std::sync::Arc<ResidueField>) -> Result<BcVector> {
    let d = k.prime_degree();
    let q = k.q() as usize;
    let order = k.order() as usize - 1;
    let ring = SeriesRing::new(k.clone(), order);
    let mut coeffs = vec![FieldElem::ZERO; order];
    let mut qi = 1usize;
    for e in exp_coeffs(k, d)? {
        if qi - 1 < order {
            coeffs[qi - 1] = e;
        }
        qi *= q;
    }
    let inv = ring.inverse(&ring.from_coeffs(coeffs))?;
    Ok(BcVector { prime: k.prime().clone(), q: k.q(), values: inv.coeffs().to_vec() })
}

/// `{ n : 0 < n < q^d - 1, (q - 1) | n, BC_n = 0 mod p }`.
pub fn irregular_indices(bc: &BcVector) -> BTreeSet<u32> {
    let step = bc.q as usize - 1;
    bc.values
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(n, v)| n % step == 0 && v.is_zero())
        .map(|(n, _)| n as u32)
        .collect()
}

/// A polynomial in `X` with coefficients in `A`, dense in `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyOverA {
    pub coeffs: Vec<Poly>,
}

impl PolyOverA {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Poly {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }
}

/// The `p`-torsion polynomial `phi(f)(X) / X`, with `f` the monic generator:
/// `X^(q^d - 1) + b_{d-1} X^(q^(d-1) - 1) + ... + b_0`, `b_0 = f`.
pub fn cyclotomic_poly(ring: &PolyRing, f: &Poly) -> PolyOverA {
    let phi = TwistedRing::new(ring.clone()).carlitz_action(f);
    let q = ring.q() as usize;
    let d = phi.degree().unwrap_or(0);
    let mut coeffs = vec![Poly::zero(); q.pow(d as u32)];
    let mut qi = 1usize;
    for b in phi.coeffs() {
        coeffs[qi - 1] = b.clone();
        qi *= q;
    }
    PolyOverA { coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FieldDescriptor;
    use std::sync::Arc;

    fn residue(q: u64, prime: &str) -> (PolyRing, Arc<ResidueField>) {
        let fq = FieldDescriptor::with_order(q).unwrap();
        let ring = PolyRing::new(fq.clone());
        let k = ResidueField::new(fq, &ring.parse(prime).unwrap()).unwrap();
        (ring, k)
    }

    #[test]
    fn first_exponential_coefficient() {
        let (ring, k) = residue(3, "t^3 - t + 1");
        let e = exp_coeffs(&k, 3).unwrap();
        assert_eq!(e[0], FieldElem::ONE);
        let denom = k.reduce(&ring.parse("t^3 - t").unwrap());
        assert_eq!(k.mul(e[1], denom), FieldElem::ONE);
        assert!(matches!(exp_coeffs(&k, 4), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn e1_is_one_for_t2_t_1() {
        let (_, k) = residue(2, "t^2 + t + 1");
        assert_eq!(exp_coeffs(&k, 2).unwrap(), vec![FieldElem::ONE, FieldElem::ONE]);
        let bc = bc_numbers(&k).unwrap();
        assert_eq!(bc.values, vec![FieldElem::ONE; 3]);
        assert!(irregular_indices(&bc).is_empty());
    }

    #[test]
    fn t4_t_1_is_irregular_at_9_only() {
        let (_, k) = residue(2, "t^4 + t + 1");
        let bc = bc_numbers(&k).unwrap();
        assert_eq!(bc.values.len(), 15);
        for n in 0..15 {
            assert_eq!(bc.values[n].is_zero(), n == 9, "n = {n}");
        }
        assert_eq!(irregular_indices(&bc), BTreeSet::from([9]));
    }

    #[test]
    fn table_two_cubic() {
        let (_, k) = residue(3, "t^3 - t + 1");
        let bc = bc_numbers(&k).unwrap();
        assert_eq!(bc.values[0], FieldElem::ONE);
        assert!(bc.values[1].is_zero());
        assert_eq!(irregular_indices(&bc), BTreeSet::from([10]));
    }

    #[test]
    fn cyclotomic_polynomials() {
        let ring = PolyRing::new(FieldDescriptor::with_order(2).unwrap());
        let t = ring.gen();
        let phi = cyclotomic_poly(&ring, &t);
        assert_eq!(phi.coeffs, vec![t.clone(), Poly::one()]);
        let f = ring.parse("t^2 + t + 1").unwrap();
        let phi = cyclotomic_poly(&ring, &f);
        assert_eq!(phi.coeffs, vec![f.clone(), f.clone(), Poly::zero(), Poly::one()]);
    }
}
