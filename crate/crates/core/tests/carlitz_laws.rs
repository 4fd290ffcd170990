use std::sync::{Arc, OnceLock};

use carlitz_core::algebra::{FieldDescriptor, FieldElem, Poly, PolyRing, ResidueElem, ResidueField, SeriesRing};
use carlitz_core::carlitz::{bc_numbers, exp_coeffs, irregular_indices, TwistedRing};
use proptest::prelude::*;

const ORDERS: [u64; 4] = [2, 3, 4, 5];

fn rings() -> &'static Vec<PolyRing> {
    static CACHE: OnceLock<Vec<PolyRing>> = OnceLock::new();
    CACHE.get_or_init(|| ORDERS.iter().map(|&q| PolyRing::new(FieldDescriptor::with_order(q).unwrap())).collect())
}

/// All monic irreducibles with `q^d <= 256`, grouped by field.
fn small_primes() -> &'static Vec<Vec<Arc<ResidueField>>> {
    static CACHE: OnceLock<Vec<Vec<Arc<ResidueField>>>> = OnceLock::new();
    CACHE.get_or_init(|| {
        rings()
            .iter()
            .map(|ring| {
                let q = ring.q() as usize;
                (1..)
                    .take_while(|&d| q.pow(d as u32) <= 256)
                    .flat_map(|d| ring.monic_irreducibles(d).unwrap())
                    .map(|p| ResidueField::new(ring.field().clone(), &p).unwrap())
                    .collect()
            })
            .collect()
    })
}

fn poly(ring: &PolyRing, codes: &[u32]) -> Poly {
    Poly::from_coeffs(codes.iter().map(|&c| FieldElem::from_code(c % ring.q())).collect())
}

/// `z / e(z)` from Carlitz's product formula `e_i = 1 / prod_{j<i} (t^(q^i) - t^(q^j))`,
/// evaluated in `A` before reduction, then inverted by the dense recurrence.
fn bc_oracle(k: &ResidueField) -> Vec<ResidueElem> {
    let ring = k.poly_ring();
    let q = k.q() as u64;
    let d = k.prime_degree();
    let len = k.order() as usize - 1;
    let mut a = vec![FieldElem::ZERO; len];
    for i in 0..d {
        let mut denom = Poly::one();
        for j in 0..i {
            let diff = ring.sub(&ring.pow(&ring.gen(), q.pow(i as u32)), &ring.pow(&ring.gen(), q.pow(j as u32)));
            denom = ring.rem(&ring.mul(&denom, &diff), k.prime()).unwrap();
        }
        let e = k.inv(k.reduce(&denom)).unwrap();
        let idx = q.pow(i as u32) as usize - 1;
        if idx < len {
            a[idx] = e;
        }
    }
    let mut b = vec![FieldElem::ZERO; len];
    b[0] = FieldElem::ONE;
    for n in 1..len {
        let mut acc = FieldElem::ZERO;
        for m in 1..=n {
            acc = k.add(acc, k.mul(a[m], b[n - m]));
        }
        b[n] = k.neg(acc);
    }
    b
}

#[test]
fn bc_matches_product_formula_oracle_on_all_small_primes() {
    for (ring, primes) in rings().iter().zip(small_primes()) {
        for k in primes {
            let bc = bc_numbers(k).unwrap();
            assert_eq!(bc.values, bc_oracle(k), "q={} p={}", ring.q(), ring.render(k.prime()));
        }
    }
}

#[test]
fn table_index_sets() {
    let ring = &rings()[0];
    let k = ResidueField::new(ring.field().clone(), &ring.parse("t^4 + t + 1").unwrap()).unwrap();
    assert_eq!(irregular_indices(&bc_numbers(&k).unwrap()).into_iter().collect::<Vec<_>>(), [9]);
    let ring = &rings()[2];
    let k = ResidueField::new(ring.field().clone(), &ring.parse("t^3 + t^2 + t + α").unwrap()).unwrap();
    assert_eq!(irregular_indices(&bc_numbers(&k).unwrap()).into_iter().collect::<Vec<_>>(), [33]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn carlitz_action_is_a_ring_homomorphism(
        f in 0..ORDERS.len(),
        a in prop::collection::vec(any::<u32>(), 0..6),
        b in prop::collection::vec(any::<u32>(), 0..6),
    ) {
        let ring = &rings()[f];
        let tw = TwistedRing::new(ring.clone());
        let (a, b) = (poly(ring, &a), poly(ring, &b));
        let (pa, pb) = (tw.carlitz_action(&a), tw.carlitz_action(&b));
        prop_assert_eq!(tw.carlitz_action(&ring.mul(&a, &b)), tw.mul(&pa, &pb));
        prop_assert_eq!(tw.carlitz_action(&ring.add(&a, &b)), tw.add(&pa, &pb));
        prop_assert_eq!(tw.mul(&pa, &pb), tw.mul(&pb, &pa));
        prop_assert_eq!(pa.coeffs().first().cloned().unwrap_or_default(), a.clone());
    }

    #[test]
    fn twist_rule(f in 0..ORDERS.len(), c in prop::collection::vec(any::<u32>(), 0..5)) {
        let ring = &rings()[f];
        let tw = TwistedRing::new(ring.clone());
        let c = poly(ring, &c);
        let lhs = tw.mul(&tw.frobenius_op(), &tw.constant(c.clone()));
        let rhs = tw.from_coeffs(vec![Poly::zero(), ring.pow(&c, ring.q() as u64)]);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exponential_functional_equation(f in 0..ORDERS.len(), pick in any::<usize>()) {
        let primes = &small_primes()[f];
        let k = &primes[pick % primes.len()];
        let q = k.q() as u64;
        let n = k.order() as usize;
        let series = SeriesRing::new(k.clone(), n);
        let mut coeffs = vec![FieldElem::ZERO; n];
        let mut qi = 1usize;
        for e in exp_coeffs(k, k.prime_degree()).unwrap() {
            coeffs[qi] = e;
            qi *= q as usize;
        }
        let e = series.from_coeffs(coeffs);
        let tz = series.monomial(k.t_class(), 1);
        let lhs = series.compose(&e, &tz).unwrap();
        let rhs = series.add(&series.frobenius_pow(&e, q), &series.scale(k.t_class(), &e));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bc_vanishes_off_multiples_of_q_minus_1(f in 1..ORDERS.len(), pick in any::<usize>()) {
        let primes = &small_primes()[f];
        let k = &primes[pick % primes.len()];
        let bc = bc_numbers(k).unwrap();
        let step = k.q() as usize - 1;
        prop_assert_eq!(bc.values[0], FieldElem::ONE);
        for (n, v) in bc.values.iter().enumerate() {
            if n % step != 0 {
                prop_assert!(v.is_zero(), "BC_{} != 0", n);
            }
        }
    }
}
