//! Residue fields `A/p` for a monic irreducible `p` of degree `d`.
//!
//! An element is encoded by its unique representative of degree `< d`:
//! the code is `sum c_j q^j` over the coefficient codes `c_j`. Constants
//! of `F_q` therefore keep their code, and the codes `1..q^d` enumerate
//! the unit group through its canonical representatives.

use std::ops::Deref;
use std::sync::Arc;

use crate::algebra::field::Fq;
use crate::algebra::gf::{FieldElem, Gf};
use crate::algebra::poly::{Poly, PolyRing};
use crate::error::{Error, Result};

pub type ResidueElem = FieldElem;

#[derive(Debug)]
pub struct ResidueField {
    ring: PolyRing,
    prime: Poly,
    degree: usize,
    gf: Gf,
}

impl Deref for ResidueField {
    type Target = Gf;

    fn deref(&self) -> &Gf {
        &self.gf
    }
}

impl ResidueField {
    pub fn new(fq: Fq, prime: &Poly) -> Result<Arc<ResidueField>> {
        let ring = PolyRing::new(fq);
        if !prime.is_monic() {
            return Err(Error::NotMonic(ring.render(prime)));
        }
        if !ring.is_irreducible(prime)? {
            return Err(Error::Reducible(ring.render(prime)));
        }
        let degree = prime.degree().finite().expect("irreducible polynomials are nonconstant");
        let q = ring.q();
        let dims = ring.field().r() * degree as u32;
        let encode = |f: &Poly| encode_poly(q, f);
        let decode = |c: u32| decode_poly(q, degree, c);
        let gf = Gf::from_multiplication(ring.field().p(), dims, |a, b| {
            let prod = ring.mul(&decode(a), &decode(b));
            encode(&ring.rem(&prod, prime).expect("prime is nonzero"))
        })?;
        Ok(Arc::new(ResidueField { ring, prime: prime.clone(), degree, gf }))
    }

    pub fn prime(&self) -> &Poly {
        &self.prime
    }

    pub fn poly_ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn fq(&self) -> &Fq {
        self.ring.field()
    }

    pub fn q(&self) -> u32 {
        self.ring.q()
    }

    /// The degree `d` of the prime.
    pub fn prime_degree(&self) -> usize {
        self.degree
    }

    pub fn reduce(&self, f: &Poly) -> ResidueElem {
        let r = self.ring.rem(f, &self.prime).expect("prime is nonzero");
        FieldElem::from_code(encode_poly(self.q(), &r))
    }

    /// The canonical representative of degree `< d`.
    pub fn lift(&self, x: ResidueElem) -> Poly {
        decode_poly(self.q(), self.degree, x.code())
    }

    /// The class of `t`.
    pub fn t_class(&self) -> ResidueElem {
        self.reduce(&self.ring.gen())
    }

    /// Degree of the canonical representative; `None` for zero.
    pub fn rep_degree(&self, x: ResidueElem) -> Option<usize> {
        self.lift(x).degree().finite()
    }

    /// `x^q`.
    pub fn frobenius_q(&self, x: ResidueElem) -> ResidueElem {
        self.pow(x, self.q() as u64)
    }

    pub fn render(&self, x: ResidueElem) -> String {
        self.ring.render(&self.lift(x))
    }
}

fn encode_poly(q: u32, f: &Poly) -> u32 {
    f.coeffs().iter().rev().fold(0, |acc, c| acc * q + c.code())
}

fn decode_poly(q: u32, degree: usize, mut code: u32) -> Poly {
    let mut coeffs = Vec::with_capacity(degree);
    for _ in 0..degree {
        coeffs.push(FieldElem::from_code(code % q));
        code /= q;
    }
    Poly::from_coeffs(coeffs)
}
