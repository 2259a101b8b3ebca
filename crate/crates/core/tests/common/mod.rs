#![allow(dead_code)]

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use smallhouse_core::arith::factorize;
use smallhouse_core::measures::{cassels_height, castle_cmp, minimal_weight, WeightResult};
use smallhouse_core::tables::fixtures;
use smallhouse_core::CyclotomicInt;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A nonzero element with a handful of small coefficients.
pub fn random_element(rng: &mut ChaCha8Rng, level: u32) -> CyclotomicInt {
    loop {
        let k = rng.gen_range(1..=6);
        let terms: Vec<(i64, i64)> = (0..k)
            .map(|_| (rng.gen_range(0..level as i64), rng.gen_range(-2..=2)))
            .collect();
        let a = CyclotomicInt::from_sparse(level, &terms).unwrap();
        if !a.is_zero() {
            return a;
        }
    }
}

/// `(element, p)` with `p^2 | N <= 200`.
pub fn prime_power_instances(count: usize, seed: u64) -> Vec<(CyclotomicInt, u32)> {
    let mut r = rng(seed);
    let levels: Vec<(u32, u32)> = (4..=200u32)
        .flat_map(|n| {
            factorize(n as u64)
                .into_iter()
                .filter(|&(_, k)| k >= 2)
                .map(move |(p, _)| (n, p as u32))
        })
        .collect();
    (0..count)
        .map(|_| {
            let (n, p) = levels[r.gen_range(0..levels.len())];
            (random_element(&mut r, n), p)
        })
        .collect()
}

/// `(element, p)` with `p || N <= 200`.
pub fn prime_case_instances(count: usize, seed: u64) -> Vec<(CyclotomicInt, u32)> {
    let mut r = rng(seed);
    let levels: Vec<(u32, u32)> = (2..=200u32)
        .flat_map(|n| {
            factorize(n as u64)
                .into_iter()
                .filter(|&(_, k)| k == 1)
                .map(move |(p, _)| (n, p as u32))
        })
        .collect();
    (0..count)
        .map(|_| {
            let (n, p) = levels[r.gen_range(0..levels.len())];
            (random_element(&mut r, n), p)
        })
        .collect()
}

/// `M(a) = sum_i M(eta_i)` for a prime-power decomposition.
pub fn prime_power_additivity(a: &CyclotomicInt, p: u32) -> bool {
    let d = a.p_decompose(p).unwrap();
    let sum: BigRational = d.parts.iter().map(cassels_height).sum();
    d.reconstruct() == *a && sum == cassels_height(a)
}

/// `(p-1) M(a) = (p-X) sum_S M(eta_i) + sum_{i<j in S} M(eta_i - eta_j)`.
pub fn prime_case_identity(a: &CyclotomicInt, p: u32) -> bool {
    let d = a.p_decompose(p).unwrap();
    let s = d.support();
    let x = s.len() as i64;
    let single: BigRational = s.iter().map(|&i| cassels_height(&d.parts[i])).sum();
    let mut pairs = BigRational::from_integer(BigInt::from(0));
    for (ii, &i) in s.iter().enumerate() {
        for &j in &s[ii + 1..] {
            pairs += cassels_height(&(&d.parts[i] - &d.parts[j]));
        }
    }
    let lhs = cassels_height(a) * BigInt::from(p as i64 - 1);
    let rhs = single * BigInt::from(p as i64 - x) + pairs;
    d.reconstruct() == *a && lhs == rhs
}

/// Every element named in the reference tables.
pub fn fixture_elements() -> Vec<CyclotomicInt> {
    let f = fixtures();
    let mut out = Vec::new();
    for e in &f.table1 {
        out.push(e.element.build().unwrap());
    }
    for e in &f.table2 {
        for s in &e.elements {
            out.push(s.build().unwrap());
        }
    }
    for e in &f.table3 {
        out.push(e.element.build().unwrap());
        if let Some(p) = &e.partner {
            out.push(p.build().unwrap());
        }
    }
    out
}

/// `N(a) >= house(a) >= sqrt(M(a))`.
pub fn weight_house_height_chain(a: &CyclotomicInt) -> bool {
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));
    if castle_cmp(a, &cassels_height(a)) == Ordering::Less {
        return false;
    }
    // Least k with k^2 >= castle, so that house <= k and house > k - 1.
    let mut k = 1i64;
    while castle_cmp(a, &q(k * k)) == Ordering::Greater {
        k += 1;
    }
    matches!(minimal_weight(a, Some(k as u32 - 1)), WeightResult::Exceeded { .. })
}
