mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;

use smallhouse_core::arith::{euler_phi, gcd, is_prime};
use smallhouse_core::combinatorics::{
    has_singleton_difference, modp2_pair, unique_difference_graph_ok, DifferenceProfile,
};
use smallhouse_core::measures::{
    cassels_height, castle_enclosure, equivalence_hash, height_family_formula, minimal_level,
    minimal_weight, n_prime, one_plus_zeta_minus_inverse, WeightResult,
};
use smallhouse_core::splitting::{multiplicative_order, splitting_profile};
use smallhouse_core::CyclotomicInt;

#[test]
fn prime_power_height_additivity() {
    let cases = common::prime_power_instances(150, 11);
    for (a, p) in &cases {
        assert!(common::prime_power_additivity(a, *p), "{a} at p = {p}");
    }
}

#[test]
fn prime_case_height_identity() {
    let cases = common::prime_case_instances(150, 12);
    for (a, p) in &cases {
        assert!(common::prime_case_identity(a, *p), "{a} at p = {p}");
    }
}

#[test]
fn family_height_formula() {
    for m in 1..=100 {
        let z = CyclotomicInt::zeta(m, 1);
        let a = one_plus_zeta_minus_inverse(&z);
        assert_eq!(height_family_formula(n_prime(m)), cassels_height(&a), "M = {m}");
    }
}

#[test]
fn weight_house_height_chain_on_fixtures() {
    for a in common::fixture_elements() {
        assert!(common::weight_house_height_chain(&a), "{a}");
    }
}

#[test]
fn height_is_at_most_castle() {
    let mut r = common::rng(3);
    let w = BigRational::new(BigInt::from(1), BigInt::from(1u64 << 20));
    for _ in 0..60 {
        let level = r.gen_range(1..=120);
        let a = common::random_element(&mut r, level);
        let enc = castle_enclosure(&a, &w);
        assert!(cassels_height(&a) <= enc.hi);
    }
}

#[test]
fn hash_is_a_class_invariant() {
    let mut r = common::rng(4);
    for _ in 0..40 {
        let level = r.gen_range(2..=60);
        let a = common::random_element(&mut r, level);
        let k = loop {
            let k = r.gen_range(1..level as i64);
            if gcd(k as u64, level as u64) == 1 {
                break k;
            }
        };
        let b = a.galois_apply(k).unwrap().mul_zeta(r.gen_range(0..2 * level as i64));
        assert_eq!(equivalence_hash(&a), equivalence_hash(&b), "{a}");
        let ml = minimal_level(&a);
        assert_eq!(minimal_level(&b).level, ml.level);
        assert_eq!(ml.element, &a * &ml.witness.to_cyclo());
    }
}

#[test]
fn weight_additivity_over_prime_powers() {
    // Small sums at levels with a square factor.
    let mut r = common::rng(5);
    for _ in 0..25 {
        let level = [8u32, 9, 12, 18, 20, 24][r.gen_range(0..6)];
        let k = r.gen_range(1..=3);
        let terms: Vec<(i64, i64)> = (0..k).map(|_| (r.gen_range(0..level as i64), 1)).collect();
        let a = CyclotomicInt::from_sparse(level, &terms).unwrap();
        let p = if level % 4 == 0 { 2 } else { 3 };
        let d = a.p_decompose(p).unwrap();
        let w = |x: &CyclotomicInt| match minimal_weight(x, Some(4)) {
            WeightResult::Found { weight, .. } => weight,
            WeightResult::Exceeded { .. } => panic!("weight above 4 for {x}"),
        };
        let parts: u32 = d.parts.iter().map(w).sum();
        assert_eq!(w(&a), parts, "{a}");
    }
}

#[test]
fn splitting_degrees_multiply_to_phi() {
    for n in 1..=500u64 {
        for p in (2..=50).filter(|&p| is_prime(p)) {
            let s = splitting_profile(n, p).unwrap();
            assert_eq!(
                s.ramification_index * s.residue_order * s.num_primes,
                euler_phi(n),
                "N = {n}, p = {p}"
            );
            if s.prime_to_p_level > 1 {
                assert_eq!(
                    multiplicative_order(p as i64, s.prime_to_p_level).unwrap(),
                    s.residue_order
                );
            }
        }
    }
}

fn affine(s: &[u64], a: u64, b: u64, m: u64) -> Vec<u64> {
    s.iter().map(|&x| (a * x + b) % m).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_laws(level in 1u32..60, xs in prop::collection::vec((0i64..60, -3i64..4), 1..6),
                 ys in prop::collection::vec((0i64..60, -3i64..4), 1..6),
                 zs in prop::collection::vec((0i64..60, -3i64..4), 1..4)) {
        let a = CyclotomicInt::from_sparse(level, &xs).unwrap();
        let b = CyclotomicInt::from_sparse(level, &ys).unwrap();
        let c = CyclotomicInt::from_sparse(level, &zs).unwrap();
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, CyclotomicInt::zero(level));
        let big = a.raise(level * 3).unwrap();
        prop_assert_eq!(big.lower(level).unwrap(), a.clone());
        prop_assert_eq!((&a * &b).trace(), (&b * &a).trace());
    }

    #[test]
    fn difference_predicates_are_affine_invariant(
        p in prop::sample::select(vec![5u64, 7, 11, 13]),
        raw in prop::collection::btree_set(0u64..13, 2..6),
        a in 1u64..13, b in 0u64..13) {
        let s: Vec<u64> = raw.into_iter().filter(|&x| x < p).collect();
        prop_assume!(s.len() >= 2 && a % p != 0);
        let t = affine(&s, a, b, p);
        prop_assert_eq!(has_singleton_difference(p, &s), has_singleton_difference(p, &t));
        prop_assert_eq!(unique_difference_graph_ok(p, &s), unique_difference_graph_ok(p, &t));
        let prof = DifferenceProfile::new(p, &s);
        for k in 0..p as usize {
            prop_assert_eq!(prof.counts[k], prof.counts[(p as usize - k) % p as usize]);
        }
        prop_assert_eq!(prof.counts[0] as usize, s.len());
        // Lift to Z/p^2 keeping residues distinct.
        let m = p * p;
        let lifted: Vec<u64> = s.iter().enumerate().map(|(i, &x)| x + p * (i as u64 % p)).collect();
        let moved = affine(&lifted, a + p, b, m);
        prop_assert_eq!(modp2_pair(p, &lifted).is_some(), modp2_pair(p, &moved).is_some());
    }
}
