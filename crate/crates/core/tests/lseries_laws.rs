use std::sync::{Arc, OnceLock};

use carlitz_core::algebra::{FieldDescriptor, FieldElem, PolyRing, ResidueField};
use carlitz_core::lseries::CharacterContext;
use carlitz_core::witt::{StructuralLift, WittRing};
use proptest::prelude::*;

const PRECISION: u32 = 6;

/// Contexts for every prime with `q^d <= 125`, `q` in {2, 3, 4, 5}.
fn contexts() -> &'static Vec<CharacterContext> {
    static CACHE: OnceLock<Vec<CharacterContext>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut out = Vec::new();
        for q in [2u64, 3, 4, 5] {
            let ring = PolyRing::new(FieldDescriptor::with_order(q).unwrap());
            for d in (1..).take_while(|&d| q.pow(d as u32) <= 125) {
                for p in ring.monic_irreducibles(d).unwrap() {
                    let k = ResidueField::new(ring.field().clone(), &p).unwrap();
                    out.push(CharacterContext::new(k, PRECISION).unwrap());
                }
            }
        }
        out
    })
}

/// Contexts with at least one index divisible by `q - 1`.
fn with_divisible_indices() -> Vec<&'static CharacterContext> {
    contexts().iter().filter(|c| c.residue().prime_degree() >= 2).collect()
}

fn divisible_index(ctx: &CharacterContext, seed: u32) -> u32 {
    let step = ctx.residue().q() - 1;
    let count = (ctx.group_order() - 1) / step;
    step * (1 + seed % count)
}

fn unit(k: &ResidueField, code: u32) -> FieldElem {
    FieldElem::from_code(1 + code % (k.order() - 1))
}

fn reduce_precision(from: &WittRing, to: &WittRing, x: &carlitz_core::witt::WittElem) -> carlitz_core::witt::WittElem {
    let pk = from.p().pow(to.precision());
    to.from_coords(&x.coords().iter().map(|c| c % pk).collect::<Vec<_>>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn witt_ring_axioms(pick in any::<usize>(), xs in prop::collection::vec(any::<u64>(), 9)) {
        let ctx = &contexts()[pick % contexts().len()];
        let w = ctx.witt();
        let dim = w.dim();
        let elems: Vec<_> = xs.chunks(3).map(|c| w.from_coords(&(0..dim).map(|i| c[i % 3] >> (i * 7)).collect::<Vec<_>>())).collect();
        let (a, b, c) = (&elems[0], &elems[1], &elems[2]);
        prop_assert_eq!(w.mul(a, b), w.mul(b, a));
        prop_assert_eq!(w.mul(&w.mul(a, b), c), w.mul(a, &w.mul(b, c)));
        prop_assert_eq!(w.mul(a, &w.add(b, c)), w.add(&w.mul(a, b), &w.mul(a, c)));
        prop_assert_eq!(w.sub(&w.add(a, b), b), a.clone());
        prop_assert_eq!(w.mul(a, &w.one()), a.clone());
    }

    #[test]
    fn teichmuller_laws(pick in any::<usize>(), x in any::<u32>(), y in any::<u32>()) {
        let ctx = &contexts()[pick % contexts().len()];
        let (w, k) = (ctx.witt(), ctx.residue());
        let (x, y) = (FieldElem::from_code(x % k.order()), FieldElem::from_code(y % k.order()));
        let (wx, wy) = (w.teichmuller(x), w.teichmuller(y));
        prop_assert_eq!(w.teichmuller(k.mul(x, y)), w.mul(&wx, &wy));
        prop_assert_eq!(w.reduce(&wx), x);
        prop_assert_eq!(w.pow(&wx, k.order() as u64), wx.clone());
        prop_assert_eq!(ctx.teichmuller(if x.is_zero() { FieldElem::ONE } else { x }),
                        w.teichmuller(if x.is_zero() { FieldElem::ONE } else { x }));
    }

    #[test]
    fn character_orthogonality(pick in any::<usize>(), j in any::<u32>()) {
        let ctx = &contexts()[pick % contexts().len()];
        let w = ctx.witt();
        let units = ctx.group_order();
        let j = j % (2 * units);
        let sum = ctx.group().fold(w.zero(), |acc, g| w.add(&acc, &ctx.omega_pow(g, j as i64)));
        let expected = if j % units == 0 { w.from_int(units as i64) } else { w.zero() };
        prop_assert_eq!(sum, expected);
    }

    #[test]
    fn numerator_vanishes_at_one(pick in any::<usize>(), n in any::<u32>()) {
        let pool = with_divisible_indices();
        let ctx = pool[pick % pool.len()];
        let n = divisible_index(ctx, n);
        let report = ctx.l_char_sum(n).unwrap();
        prop_assert_eq!(report.numerator_at_one_valuation, PRECISION);
        let w = ctx.witt();
        let quotient = report.quotient().unwrap();
        // Closed form equals -Q_n(1).
        let total = quotient.iter().fold(w.zero(), |acc, c| w.add(&acc, c));
        prop_assert_eq!(w.neg(&total), ctx.l_value_at_one(n).unwrap());
    }

    #[test]
    fn precision_and_lift_independence(pick in any::<usize>(), n in any::<u32>()) {
        let pool = with_divisible_indices();
        let ctx = pool[pick % pool.len()];
        let n = divisible_index(ctx, n);
        let k: Arc<ResidueField> = ctx.residue().clone();
        let fine = CharacterContext::new(k.clone(), 2 * PRECISION).unwrap();
        let coarse_value = ctx.l_value_at_one(n).unwrap();
        let fine_value = fine.l_value_at_one(n).unwrap();
        prop_assert_eq!(reduce_precision(fine.witt(), ctx.witt(), &fine_value), coarse_value);
        let v = ctx.l_valuation(n).unwrap();
        if v < PRECISION {
            prop_assert_eq!(fine.l_valuation(n).unwrap(), v);
        }
        let shifted = CharacterContext::with_lift(k, PRECISION, StructuralLift::Shifted(1 + n as u64)).unwrap();
        prop_assert_eq!(shifted.l_valuation(n).unwrap(), v);
    }

    #[test]
    fn teichmuller_of_unit_has_unit_order(pick in any::<usize>(), x in any::<u32>()) {
        let ctx = &contexts()[pick % contexts().len()];
        let k = ctx.residue();
        let g = unit(k, x);
        let w = ctx.witt();
        let order = k.unit_order(g).unwrap() as u64;
        prop_assert_eq!(w.pow(&ctx.teichmuller(g), order), w.one());
    }
}
