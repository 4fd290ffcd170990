//! Twisted (q-linearized) polynomials `sum c_i F^i` with `F c = c^q F`.

use std::fmt::Debug;

use crate::algebra::field::FieldDescriptor;
use crate::algebra::gf::{FieldElem, Gf};
use crate::algebra::poly::{Poly, PolyRing};
use crate::algebra::residue::ResidueField;
use crate::algebra::series::{SeriesRing, TruncSeries};

/// A commutative ring of characteristic `p` with a distinguished `q`-power
/// Frobenius, enough structure to host twisted polynomials.
pub trait FrobeniusRing {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `x^q`.
    fn frobenius(&self, x: &Self::Elem) -> Self::Elem;
}

impl FrobeniusRing for PolyRing {
    type Elem = Poly;

    fn zero(&self) -> Poly {
        Poly::zero()
    }

    fn one(&self) -> Poly {
        Poly::one()
    }

    fn is_zero(&self, x: &Poly) -> bool {
        x.is_zero()
    }

    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        PolyRing::add(self, a, b)
    }

    fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        PolyRing::sub(self, a, b)
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        PolyRing::mul(self, a, b)
    }

    /// Coefficients lie in `F_q`, so only the exponents move.
    fn frobenius(&self, x: &Poly) -> Poly {
        let q = self.q() as usize;
        let mut coeffs = vec![FieldElem::ZERO; x.coeffs().len().saturating_sub(1) * q + 1];
        for (i, &c) in x.coeffs().iter().enumerate() {
            coeffs[i * q] = c;
        }
        Poly::from_coeffs(coeffs)
    }
}

impl FrobeniusRing for ResidueField {
    type Elem = FieldElem;

    fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    fn is_zero(&self, x: &FieldElem) -> bool {
        x.is_zero()
    }

    fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        Gf::add(self, *a, *b)
    }

    fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        Gf::sub(self, *a, *b)
    }

    fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        Gf::mul(self, *a, *b)
    }

    fn frobenius(&self, x: &FieldElem) -> FieldElem {
        self.frobenius_q(*x)
    }
}

/// Truncated series over a field containing `F_q`, with the `q`-power map.
#[derive(Clone, Debug)]
pub struct QSeriesRing<F> {
    pub series: SeriesRing<F>,
    pub q: u64,
}

impl<F: std::ops::Deref<Target = Gf>> FrobeniusRing for QSeriesRing<F> {
    type Elem = TruncSeries;

    fn zero(&self) -> TruncSeries {
        self.series.zero()
    }

    fn one(&self) -> TruncSeries {
        self.series.one()
    }

    fn is_zero(&self, x: &TruncSeries) -> bool {
        x.is_zero()
    }

    fn add(&self, a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
        self.series.add(a, b)
    }

    fn sub(&self, a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
        self.series.sub(a, b)
    }

    fn mul(&self, a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
        self.series.mul(a, b)
    }

    fn frobenius(&self, x: &TruncSeries) -> TruncSeries {
        self.series.frobenius_pow(x, self.q)
    }
}

/// Constant field `F_q` itself, where the `q`-power map is the identity.
impl FrobeniusRing for FieldDescriptor {
    type Elem = FieldElem;

    fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    fn is_zero(&self, x: &FieldElem) -> bool {
        x.is_zero()
    }

    fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        Gf::add(self, *a, *b)
    }

    fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        Gf::sub(self, *a, *b)
    }

    fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        Gf::mul(self, *a, *b)
    }

    fn frobenius(&self, x: &FieldElem) -> FieldElem {
        *x
    }
}

/// `sum coeffs[i] F^i`, no trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedPoly<E> {
    coeffs: Vec<E>,
}

impl<E> TwistedPoly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    /// Degree in `F`; `None` for the zero operator.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Pushes the coefficients into another ring.
    pub fn map<T>(&self, f: impl FnMut(&E) -> T) -> TwistedPoly<T> {
        TwistedPoly { coeffs: self.coeffs.iter().map(f).collect() }
    }
}

/// Twisted polynomial arithmetic over a [`FrobeniusRing`].
#[derive(Clone, Debug)]
pub struct TwistedRing<R> {
    base: R,
}

impl<R: FrobeniusRing> TwistedRing<R> {
    pub fn new(base: R) -> Self {
        TwistedRing { base }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn from_coeffs(&self, mut coeffs: Vec<R::Elem>) -> TwistedPoly<R::Elem> {
        while coeffs.last().is_some_and(|c| self.base.is_zero(c)) {
            coeffs.pop();
        }
        TwistedPoly { coeffs }
    }

    pub fn constant(&self, c: R::Elem) -> TwistedPoly<R::Elem> {
        self.from_coeffs(vec![c])
    }

    /// The Frobenius operator `F` itself.
    pub fn frobenius_op(&self) -> TwistedPoly<R::Elem> {
        self.from_coeffs(vec![self.base.zero(), self.base.one()])
    }

    pub fn add(&self, a: &TwistedPoly<R::Elem>, b: &TwistedPoly<R::Elem>) -> TwistedPoly<R::Elem> {
        let n = a.coeffs.len().max(b.coeffs.len());
        let zero = self.base.zero();
        self.from_coeffs(
            (0..n)
                .map(|i| self.base.add(a.coeffs.get(i).unwrap_or(&zero), b.coeffs.get(i).unwrap_or(&zero)))
                .collect(),
        )
    }

    /// Composition: `(a_i F^i)(b_j F^j) = a_i b_j^(q^i) F^(i+j)`.
    pub fn mul(&self, a: &TwistedPoly<R::Elem>, b: &TwistedPoly<R::Elem>) -> TwistedPoly<R::Elem> {
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            return self.from_coeffs(Vec::new());
        }
        let mut out = vec![self.base.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        let mut twisted_b = b.coeffs.clone();
        for (i, ai) in a.coeffs.iter().enumerate() {
            if i > 0 {
                twisted_b = twisted_b.iter().map(|c| self.base.frobenius(c)).collect();
            }
            if self.base.is_zero(ai) {
                continue;
            }
            for (j, bj) in twisted_b.iter().enumerate() {
                out[i + j] = self.base.add(&out[i + j], &self.base.mul(ai, bj));
            }
        }
        self.from_coeffs(out)
    }

    /// Evaluates the operator at `x`: `sum c_i x^(q^i)`.
    pub fn apply(&self, op: &TwistedPoly<R::Elem>, x: &R::Elem) -> R::Elem {
        let mut acc = self.base.zero();
        let mut power = x.clone();
        for (i, c) in op.coeffs.iter().enumerate() {
            if i > 0 {
                power = self.base.frobenius(&power);
            }
            acc = self.base.add(&acc, &self.base.mul(c, &power));
        }
        acc
    }
}

impl TwistedRing<PolyRing> {
    /// `phi(a)`: the image of `a` under the `F_q`-algebra map `t -> t + F`.
    pub fn carlitz_action(&self, a: &Poly) -> TwistedPoly<Poly> {
        let ring = &self.base;
        let mut acc: Vec<Poly> = Vec::new();
        for &c in a.coeffs().iter().rev() {
            // acc * (t + F) = sum c_i t^(q^i) F^i + sum c_i F^(i+1)
            let mut next = vec![Poly::zero(); acc.len() + 1];
            let mut t_pow = ring.gen();
            for (i, ci) in acc.iter().enumerate() {
                if i > 0 {
                    t_pow = FrobeniusRing::frobenius(ring, &t_pow);
                }
                next[i] = ring.add(&next[i], &ring.mul(ci, &t_pow));
                next[i + 1] = ring.add(&next[i + 1], ci);
            }
            next[0] = ring.add(&next[0], &Poly::constant(c));
            acc = self.from_coeffs(next).coeffs;
        }
        self.from_coeffs(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FieldDescriptor;

    fn a_ring(q: u64) -> TwistedRing<PolyRing> {
        TwistedRing::new(PolyRing::new(FieldDescriptor::with_order(q).unwrap()))
    }

    #[test]
    fn phi_of_t_and_one() {
        let tw = a_ring(3);
        let ring = tw.base().clone();
        assert_eq!(tw.carlitz_action(&ring.gen()).coeffs(), &[ring.gen(), Poly::one()]);
        assert_eq!(tw.carlitz_action(&Poly::one()).coeffs(), &[Poly::one()]);
        assert_eq!(tw.carlitz_action(&Poly::zero()).degree(), None);
    }

    #[test]
    fn phi_of_t_squared_over_f2() {
        let tw = a_ring(2);
        let ring = tw.base().clone();
        let phi = tw.carlitz_action(&ring.parse("t^2").unwrap());
        let shown: Vec<String> = phi.coeffs().iter().map(|c| ring.render(c)).collect();
        assert_eq!(shown, ["t^2", "t^2 + t", "1"]);
        let phi_t = tw.carlitz_action(&ring.gen());
        assert_eq!(tw.mul(&phi_t, &phi_t), phi);
    }

    #[test]
    fn twist_rule() {
        let tw = a_ring(3);
        let ring = tw.base().clone();
        let c = ring.parse("t^2 + 2").unwrap();
        let lhs = tw.mul(&tw.frobenius_op(), &tw.constant(c.clone()));
        let rhs = tw.mul(&tw.constant(ring.pow(&c, 3)), &tw.frobenius_op());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn apply_is_additive_at_zero() {
        let tw = a_ring(2);
        let phi_t = tw.carlitz_action(&tw.base().gen());
        assert_eq!(tw.apply(&phi_t, &Poly::zero()), Poly::zero());
    }
}
