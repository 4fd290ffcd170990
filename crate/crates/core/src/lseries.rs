//! L-series of powers of the Teichmüller character over `W_k`.
//!
//! For `(q - 1) | n`, `(q^d - 1) ∤ n` the L-function of `chi^-n` is the
//! polynomial `S_n(T) / (1 - T)` with
//! `S_n(T) = sum_{a monic, deg a < d} omega(a)^-n T^deg(a)`, and its value at
//! `T = 1` has the closed form `(q - 1)^-1 sum_{g in G} deg(g) omega(g)^-n`.
//! Differentiating `S_n = (1 - T) Q_n` at `T = 1` shows the closed form
//! equals `-Q_n(1)`; only the valuation is consumed downstream.

use std::sync::Arc;

use crate::algebra::residue::{ResidueElem, ResidueField};
use crate::error::{Error, Result};
use crate::witt::{precision_cap, StructuralLift, WittElem, WittRing};

/// `G = (A/p)^x` with Teichmüller images and the degree map.
#[derive(Debug)]
pub struct CharacterContext {
    residue: Arc<ResidueField>,
    witt: WittRing,
    /// `omega(gamma)^j` for the table generator `gamma`, `0 <= j < q^d - 1`.
    omega_pows: Vec<WittElem>,
}

/// `S_n`, and when `(q - 1) | n` also `Q_n = S_n / (1 - T)` and `L(1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LReport {
    pub n: u32,
    /// Coefficients of `T^0 .. T^(d-1)`.
    pub numerator: Vec<WittElem>,
    pub quotient: Option<Vec<WittElem>>,
    /// `Q_n(1)`.
    pub value_at_one: Option<WittElem>,
    /// Valuation of `S_n(1)`; the only data reported when `(q - 1) ∤ n`.
    pub numerator_at_one_valuation: u32,
}

impl LReport {
    pub fn quotient(&self) -> Result<&[WittElem]> {
        self.quotient
            .as_deref()
            .ok_or_else(|| Error::Hypothesis(format!("(q - 1) does not divide n = {}", self.n)))
    }
}

impl CharacterContext {
    pub fn new(residue: Arc<ResidueField>, precision: u32) -> Result<Self> {
        Self::with_lift(residue, precision, StructuralLift::Naive)
    }

    pub fn with_lift(residue: Arc<ResidueField>, precision: u32, lift: StructuralLift) -> Result<Self> {
        let witt = WittRing::with_lift(residue.clone(), precision, lift)?;
        let units = residue.order() as usize - 1;
        let omega_gen = witt.teichmuller(residue.generator());
        let mut omega_pows = Vec::with_capacity(units);
        let mut x = witt.one();
        for _ in 0..units {
            omega_pows.push(x.clone());
            x = witt.mul(&x, &omega_gen);
        }
        if x != witt.one() {
            return Err(Error::Consistency("Teichmüller image of the generator has the wrong order".into()));
        }
        Ok(CharacterContext { residue, witt, omega_pows })
    }

    pub fn residue(&self) -> &Arc<ResidueField> {
        &self.residue
    }

    pub fn witt(&self) -> &WittRing {
        &self.witt
    }

    pub fn group_order(&self) -> u32 {
        self.residue.order() - 1
    }

    /// Elements of `G` by canonical representative.
    pub fn group(&self) -> impl Iterator<Item = ResidueElem> + '_ {
        self.residue.units()
    }

    /// Degree of the canonical representative of a unit.
    pub fn deg(&self, g: ResidueElem) -> u32 {
        self.residue.rep_degree(g).expect("units are nonzero") as u32
    }

    pub fn teichmuller(&self, g: ResidueElem) -> WittElem {
        self.omega_pow(g, 1)
    }

    /// `omega(g)^e`.
    pub fn omega_pow(&self, g: ResidueElem, e: i64) -> WittElem {
        let units = self.group_order() as i64;
        let l = self.residue.log(g).expect("g is a unit") as i64;
        self.omega_pows[(l * e.rem_euclid(units)).rem_euclid(units) as usize].clone()
    }

    fn check_range(&self, n: u32) -> Result<()> {
        let top = self.group_order() as u64 - 1;
        if n == 0 || n as u64 > top {
            return Err(Error::OutOfRange { n: n as u64, range: format!("1..={top}") });
        }
        Ok(())
    }

    fn divisible(&self, n: u32) -> bool {
        n % (self.residue.q() - 1) == 0
    }

    /// Monic representatives of degree `< d` are the codes `q^j .. 2 q^j`.
    pub fn l_char_sum(&self, n: u32) -> Result<LReport> {
        self.check_range(n)?;
        let w = &self.witt;
        let d = self.residue.prime_degree();
        let q = self.residue.q();
        let mut numerator = vec![w.zero(); d];
        let mut start = 1u32;
        for coeff in numerator.iter_mut() {
            for code in start..2 * start {
                let a = ResidueElem::from_code(code);
                *coeff = w.add(coeff, &self.omega_pow(a, -(n as i64)));
            }
            start *= q;
        }
        let at_one = numerator.iter().fold(w.zero(), |acc, c| w.add(&acc, c));
        let numerator_at_one_valuation = w.valuation(&at_one);
        let (quotient, value_at_one) = if self.divisible(n) {
            if !w.is_zero(&at_one) {
                return Err(Error::Consistency(format!("S_{n}(1) is nonzero although (q - 1) | n")));
            }
            let mut quot = Vec::with_capacity(d.saturating_sub(1));
            let mut carry = w.zero();
            for c in &numerator[..d - 1] {
                carry = w.add(&carry, c);
                quot.push(carry.clone());
            }
            let value = quot.iter().fold(w.zero(), |acc, c| w.add(&acc, c));
            (Some(quot), Some(value))
        } else {
            (None, None)
        };
        Ok(LReport { n, numerator, quotient, value_at_one, numerator_at_one_valuation })
    }

    fn check_hypotheses(&self, n: u32) -> Result<()> {
        self.check_range(n)?;
        if !self.divisible(n) {
            return Err(Error::Hypothesis(format!("(q - 1) must divide n = {n}")));
        }
        Ok(())
    }

    /// `L(1, chi^-n) = (q - 1)^-1 sum_g deg(g) omega(g)^-n`.
    ///
    /// Debug builds also assemble `Q_n(1)` and check the two agree up to
    /// the sign fixed in the module docs.
    pub fn l_value_at_one(&self, n: u32) -> Result<WittElem> {
        self.check_hypotheses(n)?;
        let w = &self.witt;
        let units = self.group_order() as u64;
        let mut acc = w.zero();
        for g in self.group() {
            let deg = self.deg(g) as u64;
            if deg == 0 {
                continue;
            }
            let l = self.residue.log(g).expect("g is a unit") as u64;
            let idx = (units - (l * n as u64) % units) % units;
            w.add_scaled_int(&mut acc, deg, &self.omega_pows[idx as usize]);
        }
        let inv = w.int_inverse(self.residue.q() as i64 - 1).expect("q - 1 is prime to p");
        let value = w.scale_int(inv as i64, &acc);
        if cfg!(debug_assertions) {
            let report = self.l_char_sum(n)?;
            let quotient_value = report.value_at_one.expect("n is divisible by q - 1");
            if w.neg(&quotient_value) != value {
                return Err(Error::Consistency(format!("closed-form L(1) disagrees with -Q_{n}(1)")));
            }
        }
        Ok(value)
    }

    /// Valuation of `L(1, chi^-n)` at this precision; equals the precision
    /// when saturated.
    pub fn l_valuation(&self, n: u32) -> Result<u32> {
        Ok(self.witt.valuation(&self.l_value_at_one(n)?))
    }
}

/// Lengths `v_p(L(1, chi^-n))` for each requested `n`, raising the precision
/// (doubling from `start`) until none saturates. Returns the lengths and
/// the precision that produced them.
pub fn pic_eigenspace_lengths(
    residue: &Arc<ResidueField>,
    ns: &[u32],
    start: u32,
    lift: StructuralLift,
) -> Result<(Vec<u32>, u32)> {
    let cap = precision_cap(residue.characteristic());
    let mut precision = start.clamp(1, cap);
    loop {
        let ctx = CharacterContext::with_lift(residue.clone(), precision, lift)?;
        let lengths = ns.iter().map(|&n| ctx.l_valuation(n)).collect::<Result<Vec<_>>>()?;
        if lengths.iter().all(|&v| v < precision) {
            return Ok((lengths, precision));
        }
        if precision == cap {
            return Err(Error::PrecisionCap(cap));
        }
        precision = (2 * precision).min(cap);
    }
}

/// Single-index form of [`pic_eigenspace_lengths`].
pub fn pic_eigenspace_length(residue: &Arc<ResidueField>, n: u32, start: u32) -> Result<u32> {
    Ok(pic_eigenspace_lengths(residue, &[n], start, StructuralLift::Naive)?.0[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FieldDescriptor;
    use crate::algebra::gf::FieldElem;
    use crate::algebra::poly::PolyRing;
    use crate::witt::DEFAULT_PRECISION;

    fn residue(q: u64, prime: &str) -> Arc<ResidueField> {
        let fq = FieldDescriptor::with_order(q).unwrap();
        let ring = PolyRing::new(fq.clone());
        ResidueField::new(fq, &ring.parse(prime).unwrap()).unwrap()
    }

    #[test]
    fn group_of_t2_t_1() {
        let ctx = CharacterContext::new(residue(2, "t^2 + t + 1"), 4).unwrap();
        let degs: Vec<u32> = ctx.group().map(|g| ctx.deg(g)).collect();
        assert_eq!(degs, [0, 1, 1]);
        assert_eq!(ctx.group().count(), 3);
    }

    #[test]
    fn degree_one_group() {
        let ctx = CharacterContext::new(residue(3, "t"), 4).unwrap();
        assert_eq!(ctx.group().count(), 2);
        assert!(ctx.group().all(|g| ctx.deg(g) == 0));
        assert!(matches!(ctx.l_value_at_one(1), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn hand_computation_for_t2_t_1() {
        let ctx = CharacterContext::new(residue(2, "t^2 + t + 1"), 4).unwrap();
        let w = ctx.witt();
        let report = ctx.l_char_sum(1).unwrap();
        // S_1 = 1 + (T^-1 + T^-2) T = 1 - T, since T^2 + T = -1.
        assert_eq!(report.numerator, vec![w.one(), w.from_int(-1)]);
        assert_eq!(report.quotient().unwrap(), &[w.one()]);
        assert_eq!(report.value_at_one, Some(w.one()));
        assert_eq!(ctx.l_value_at_one(1).unwrap(), w.from_int(-1));
        assert_eq!(ctx.l_valuation(1).unwrap(), 0);
    }

    #[test]
    fn trivial_character_is_rejected() {
        let ctx = CharacterContext::new(residue(2, "t^2 + t + 1"), 4).unwrap();
        assert!(matches!(ctx.l_char_sum(3), Err(Error::OutOfRange { .. })));
        assert!(matches!(ctx.l_char_sum(0), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn non_divisible_index_has_no_quotient() {
        let ctx = CharacterContext::new(residue(3, "t^3 - t + 1"), 6).unwrap();
        let report = ctx.l_char_sum(5).unwrap();
        assert!(report.quotient().is_err());
        assert!(matches!(ctx.l_value_at_one(5), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn table_primes_have_unit_l_values() {
        assert_eq!(pic_eigenspace_length(&residue(2, "t^4 + t + 1"), 9, DEFAULT_PRECISION).unwrap(), 0);
        assert_eq!(pic_eigenspace_length(&residue(3, "t^3 - t + 1"), 10, DEFAULT_PRECISION).unwrap(), 0);
        assert_eq!(pic_eigenspace_length(&residue(2, "t^2 + t + 1"), 1, 1).unwrap(), 0);
    }

    #[test]
    fn teichmuller_images_come_from_the_residue_generator() {
        let k = residue(3, "t^2 + 1");
        let ctx = CharacterContext::new(k.clone(), 5).unwrap();
        for g in k.units() {
            assert_eq!(ctx.teichmuller(g), ctx.witt().teichmuller(g));
        }
        assert_eq!(ctx.omega_pow(FieldElem::ONE, -7), ctx.witt().one());
    }
}
