use std::sync::OnceLock;

use carlitz_core::algebra::{FieldDescriptor, FieldElem, PolyRing, ResidueField, TruncSeries};
use carlitz_core::localfield::LocalModel;
use proptest::prelude::*;

/// Local models for every prime in the table ranges.
fn models() -> &'static Vec<LocalModel> {
    static CACHE: OnceLock<Vec<LocalModel>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut out = Vec::new();
        for (q, max_degree) in [(2u64, 5usize), (3, 4), (4, 3), (5, 3)] {
            let ring = PolyRing::new(FieldDescriptor::with_order(q).unwrap());
            for d in 1..=max_degree {
                for p in ring.monic_irreducibles(d).unwrap() {
                    let k = ResidueField::new(ring.field().clone(), &p).unwrap();
                    out.push(LocalModel::new(k).unwrap());
                }
            }
        }
        out
    })
}

fn pick(i: usize) -> &'static LocalModel {
    &models()[i % models().len()]
}

fn unit(m: &LocalModel, code: u32) -> FieldElem {
    FieldElem::from_code(1 + code % (m.residue().order() - 1))
}

fn random_series(m: &LocalModel, codes: &[u32], valuation: usize) -> TruncSeries {
    let order = m.residue().order();
    let mut coeffs = vec![FieldElem::ZERO; valuation];
    coeffs.extend(codes.iter().map(|&c| FieldElem::from_code(c % order)));
    m.ring().from_coeffs(coeffs)
}

#[test]
fn newton_residuals_vanish_for_all_table_primes() {
    for m in models() {
        assert!(m.eisenstein_residual().is_zero());
        assert_eq!(m.t_series().coeff(0), m.residue().t_class());
        assert!(m.newton_steps() <= 3, "{} steps", m.newton_steps());
    }
}

#[test]
fn uniformizer_eigenproperty_by_direct_substitution() {
    for m in models().iter().filter(|m| m.truncation() <= 32) {
        let r = m.ring().with_order(m.truncation());
        let pi = r.coerce(&m.eigen_uniformizer().pi);
        for g in m.residue().units() {
            let image = r.coerce(&m.galois_image(g).unwrap());
            assert_eq!(r.compose(&pi, &image).unwrap(), r.scale(g, &pi));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn unit_ratios_have_character_residue(i in any::<usize>(), g in any::<u32>()) {
        let m = pick(i);
        let g = unit(m, g);
        let image = m.galois_image(g).unwrap();
        prop_assert_eq!(image.coeff(0), FieldElem::ZERO);
        prop_assert_eq!(m.ring().shift_down(&image, 1).coeff(0), g);
    }

    #[test]
    fn galois_action_composes(i in any::<usize>(), g in any::<u32>(), h in any::<u32>()) {
        let m = pick(i);
        let k = m.residue();
        let (g, h) = (unit(m, g), unit(m, h));
        let composed = m.apply_carlitz(&k.lift(g), &m.galois_image(h).unwrap());
        prop_assert_eq!(composed, m.galois_image(k.mul(g, h)).unwrap());
    }

    /// `π(gλ) = χ(g) π` is equivalent to `ē(χ(g) π) = gλ`, since `ē` is
    /// invertible under composition.
    #[test]
    fn uniformizer_eigenproperty(i in any::<usize>(), g in any::<u32>()) {
        let m = pick(i);
        let g = unit(m, g);
        let r = m.ring().with_order(m.truncation());
        let pi = m.eigen_uniformizer().pi.clone();
        let moved = r.coerce(&m.truncated_exp(&m.ring().scale(g, &pi)));
        prop_assert_eq!(moved, r.coerce(&m.galois_image(g).unwrap()));
        prop_assert_eq!(m.truncated_exp(&pi), m.ring().var());
    }

    #[test]
    fn truncated_functional_equation(i in any::<usize>(), codes in prop::collection::vec(any::<u32>(), 1..40)) {
        let m = pick(i);
        let r = m.ring().with_order(m.truncation());
        let x = random_series(m, &codes, 1);
        let e = m.truncated_exp(&x);
        let lhs = r.coerce(&m.truncated_exp(&m.ring().mul(m.t_series(), &x)));
        let q = m.residue().q() as u64;
        let rhs = r.coerce(&m.ring().add(&m.ring().mul(m.t_series(), &e), &m.ring().frobenius_pow(&e, q)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dlog_is_a_homomorphism(
        i in any::<usize>(),
        u0 in any::<u32>(),
        v0 in any::<u32>(),
        u in prop::collection::vec(any::<u32>(), 0..30),
        v in prop::collection::vec(any::<u32>(), 0..30),
    ) {
        let m = pick(i);
        let r = m.ring();
        let u = r.add(&r.constant(unit(m, u0)), &random_series(m, &u, 1));
        let v = r.add(&r.constant(unit(m, v0)), &random_series(m, &v, 1));
        let sum = r.with_order(m.truncation()).add(&m.dlog(&u).unwrap().coeffs, &m.dlog(&v).unwrap().coeffs);
        prop_assert_eq!(m.dlog(&r.mul(&u, &v)).unwrap().coeffs, sum);
        let p = m.residue().characteristic() as u64;
        prop_assert!(m.dlog(&r.pow(&u, p)).unwrap().is_zero());
    }
}
