//! Truncated power series `k[[z]]/(z^N)` over a finite field `k`.

use std::sync::Arc;

use crate::algebra::gf::{FieldElem, Gf};
use crate::error::{Error, Result};

/// Coefficient `i` is the coefficient of `z^i`; always exactly `N` entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    coeffs: Vec<FieldElem>,
}

impl TruncSeries {
    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the first nonzero coefficient, `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

/// Ring operations at a fixed truncation order over a fixed field.
#[derive(Clone, Debug)]
pub struct SeriesRing<F> {
    field: Arc<F>,
    order: usize,
}

impl<F: std::ops::Deref<Target = Gf>> SeriesRing<F> {
    pub fn new(field: Arc<F>, order: usize) -> Self {
        assert!(order >= 1, "truncation order must be positive");
        SeriesRing { field, order }
    }

    pub fn field(&self) -> &Arc<F> {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Same field, different truncation.
    pub fn with_order(&self, order: usize) -> Self {
        SeriesRing::new(self.field.clone(), order)
    }

    fn gf(&self) -> &Gf {
        &self.field
    }

    pub fn zero(&self) -> TruncSeries {
        TruncSeries { coeffs: vec![FieldElem::ZERO; self.order] }
    }

    pub fn one(&self) -> TruncSeries {
        self.constant(FieldElem::ONE)
    }

    pub fn constant(&self, c: FieldElem) -> TruncSeries {
        let mut s = self.zero();
        s.coeffs[0] = c;
        s
    }

    /// `c z^n`, zero if `n >= N`.
    pub fn monomial(&self, c: FieldElem, n: usize) -> TruncSeries {
        let mut s = self.zero();
        if n < self.order {
            s.coeffs[n] = c;
        }
        s
    }

    /// The variable `z`.
    pub fn var(&self) -> TruncSeries {
        self.monomial(FieldElem::ONE, 1)
    }

    /// Pads with zeros or truncates to `N`.
    pub fn from_coeffs(&self, mut coeffs: Vec<FieldElem>) -> TruncSeries {
        coeffs.resize(self.order, FieldElem::ZERO);
        TruncSeries { coeffs }
    }

    /// Re-truncates a series from a ring of a different order.
    pub fn coerce(&self, s: &TruncSeries) -> TruncSeries {
        self.from_coeffs(s.coeffs.clone())
    }

    fn check(&self, s: &TruncSeries) -> Result<()> {
        if s.order() != self.order {
            return Err(Error::OrderMismatch(s.order(), self.order));
        }
        Ok(())
    }

    pub fn add(&self, a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
        let gf = self.gf();
        TruncSeries { coeffs: (0..self.order).map(|i| gf.add(a.coeff(i), b.coeff(i))).collect() }
    }

    pub fn sub(&self, a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
        let gf = self.gf();
        TruncSeries { coeffs: (0..self.order).map(|i| gf.sub(a.coeff(i), b.coeff(i))).collect() }
    }

    pub fn neg(&self, a: &TruncSeries) -> TruncSeries {
        let gf = self.gf();
        TruncSeries { coeffs: (0..self.order).map(|i| gf.neg(a.coeff(i))).collect() }
    }

    pub fn scale(&self, c: FieldElem, a: &TruncSeries) -> TruncSeries {
        let gf = self.gf();
        TruncSeries { coeffs: (0..self.order).map(|i| gf.mul(c, a.coeff(i))).collect() }
    }

    /// `acc += c * a`, in place.
    pub fn add_scaled(&self, acc: &mut TruncSeries, c: FieldElem, a: &TruncSeries) {
        let gf = self.gf();
        let Some(lc) = gf.log(c) else { return };
        for (x, &y) in acc.coeffs.iter_mut().zip(&a.coeffs) {
            *x = gf.add(*x, gf.mul_by_log(y, lc));
        }
    }

    pub fn mul(&self, a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
        let gf = self.gf();
        let n = self.order;
        let mut out = vec![FieldElem::ZERO; n];
        let b_logs: Vec<Option<u32>> = (0..n).map(|j| gf.log(b.coeff(j))).collect();
        let b_top = b_logs.iter().rposition(|l| l.is_some());
        let Some(b_top) = b_top else { return self.zero() };
        for i in 0..n {
            let Some(la) = gf.log(a.coeff(i)) else { continue };
            let end = (n - i).min(b_top + 1);
            for (j, lb) in b_logs[..end].iter().enumerate() {
                if let Some(lb) = lb {
                    out[i + j] = gf.add(out[i + j], gf.exp(la as u64 + *lb as u64));
                }
            }
        }
        TruncSeries { coeffs: out }
    }

    pub fn pow(&self, a: &TruncSeries, mut e: u64) -> TruncSeries {
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

    /// `a^(p^k)` in characteristic `p`: raise coefficients, spread indices.
    pub fn frobenius_pow(&self, a: &TruncSeries, power: u64) -> TruncSeries {
        let gf = self.gf();
        let mut out = self.zero();
        for (i, &c) in a.coeffs.iter().enumerate() {
            let idx = (i as u64).saturating_mul(power);
            if idx >= self.order as u64 {
                break;
            }
            out.coeffs[idx as usize] = gf.pow(c, power);
        }
        out
    }

    /// Multiplicative inverse; only the nonzero coefficients of `s` are
    /// visited, so sparse inputs invert in `O(N * nnz)`.
    pub fn inverse(&self, s: &TruncSeries) -> Result<TruncSeries> {
        self.check(s)?;
        let gf = self.gf();
        let inv0 = gf.inv(s.coeff(0)).ok_or(Error::NonUnitSeries)?;
        let neg_inv0 = gf.neg(inv0);
        let support: Vec<(usize, FieldElem)> =
            s.coeffs.iter().copied().enumerate().skip(1).filter(|(_, c)| !c.is_zero()).collect();
        let mut out = vec![FieldElem::ZERO; self.order];
        out[0] = inv0;
        for n in 1..self.order {
            let mut acc = FieldElem::ZERO;
            for &(j, c) in &support {
                if j > n {
                    break;
                }
                acc = gf.add(acc, gf.mul(c, out[n - j]));
            }
            out[n] = gf.mul(neg_inv0, acc);
        }
        Ok(TruncSeries { coeffs: out })
    }

    /// `a / b` for `b` with unit constant term, by forward substitution.
    pub fn div(&self, a: &TruncSeries, b: &TruncSeries) -> Result<TruncSeries> {
        self.check(a)?;
        self.check(b)?;
        let gf = self.gf();
        let inv0 = gf.inv(b.coeff(0)).ok_or(Error::NonUnitSeries)?;
        let support: Vec<(usize, FieldElem)> =
            b.coeffs.iter().copied().enumerate().skip(1).filter(|(_, c)| !c.is_zero()).collect();
        let mut out = vec![FieldElem::ZERO; self.order];
        for n in 0..self.order {
            let mut acc = a.coeff(n);
            for &(j, c) in &support {
                if j > n {
                    break;
                }
                acc = gf.sub(acc, gf.mul(c, out[n - j]));
            }
            out[n] = gf.mul(inv0, acc);
        }
        Ok(TruncSeries { coeffs: out })
    }

    /// `outer(inner(z))`; `inner` must have zero constant term.
    pub fn compose(&self, outer: &TruncSeries, inner: &TruncSeries) -> Result<TruncSeries> {
        self.check(outer)?;
        self.check(inner)?;
        if !inner.coeff(0).is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let top = outer.coeffs.iter().rposition(|c| !c.is_zero());
        let Some(top) = top else { return Ok(self.zero()) };
        let mut acc = self.zero();
        for k in (0..=top).rev() {
            acc = self.mul(&acc, inner);
            acc.coeffs[0] = self.gf().add(acc.coeffs[0], outer.coeff(k));
        }
        Ok(acc)
    }

    pub fn derivative(&self, a: &TruncSeries) -> TruncSeries {
        let gf = self.gf();
        let mut out = self.zero();
        for i in 1..self.order {
            out.coeffs[i - 1] = gf.mul(gf.from_int(i as i64), a.coeff(i));
        }
        out
    }

    /// Divides by `z^k`, dropping the low coefficients; the top `k`
    /// coefficients of the result are unknown and set to zero.
    pub fn shift_down(&self, a: &TruncSeries, k: usize) -> TruncSeries {
        self.from_coeffs(a.coeffs.iter().skip(k).copied().collect())
    }

    /// Multiplies by `z^k`.
    pub fn shift_up(&self, a: &TruncSeries, k: usize) -> TruncSeries {
        let mut coeffs = vec![FieldElem::ZERO; k];
        coeffs.extend_from_slice(&a.coeffs);
        self.from_coeffs(coeffs)
    }
}
