//! How a rational prime splits in `Q(zeta_N)`, read off from the order of
//! `p` modulo the prime-to-`p` part of `N`.

use serde::Serialize;

use crate::arith::{euler_phi, factorize, gcd, is_prime, lcm, mod_pow, valuation};
use crate::Error;

/// Least `t > 0` with `a^t = 1 (mod m)`.
pub fn multiplicative_order(a: i64, m: u64) -> Result<u64, Error> {
    if m == 0 {
        return Err(Error::Invalid("modulus must be positive".into()));
    }
    if m == 1 {
        return Ok(1);
    }
    let a = a.rem_euclid(m as i64) as u64;
    if gcd(a, m) != 1 {
        return Err(Error::Invalid(format!("{a} is not a unit modulo {m}")));
    }
    // The order divides the exponent of the unit group, which divides phi(m).
    let phi = euler_phi(m);
    let mut t = phi;
    for (q, _) in factorize(phi) {
        while t % q == 0 && mod_pow(a, t / q, m) == 1 {
            t /= q;
        }
    }
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingProfile {
    pub level: u64,
    pub prime: u64,
    /// `N / p^v`.
    pub prime_to_p_level: u64,
    pub ramification_index: u64,
    pub residue_order: u64,
    pub num_primes: u64,
    /// Whether complex conjugation moves every prime above `p`.
    pub conjugation_split: bool,
    pub t_size: u64,
}

pub fn splitting_profile(n: u64, p: u64) -> Result<SplittingProfile, Error> {
    if n == 0 {
        return Err(Error::ZeroLevel);
    }
    if !is_prime(p) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    let v = valuation(n, p);
    let n1 = n / p.pow(v);
    let e = euler_phi(p.pow(v));
    let f = factorize(n1).into_iter().fold(1u64, |acc, (l, k)| {
        let ord = multiplicative_order(p as i64, l.pow(k)).expect("coprime");
        lcm(acc, ord)
    });
    let g = euler_phi(n1) / f;
    // -1 lies in <p> iff some power of p is -1; never split when -1 = 1.
    let minus_one_in = n1 <= 2 || (0..f).any(|t| mod_pow(p, t, n1) == n1 - 1);
    let split = !minus_one_in;
    Ok(SplittingProfile {
        level: n,
        prime: p,
        prime_to_p_level: n1,
        ramification_index: e,
        residue_order: f,
        num_primes: g,
        conjugation_split: split,
        t_size: if split { g / 2 } else { 0 },
    })
}

/// The box `U_K` of valuation vectors over the primes in `T_K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UkBox {
    pub dims: u64,
    pub lo: i64,
    pub hi: i64,
}

impl UkBox {
    /// Number of lattice points; `1` for the empty product.
    pub fn size(&self) -> u128 {
        let len = (self.hi - self.lo + 1) as u128;
        len.pow(self.dims as u32)
    }

    pub fn axis(&self) -> Vec<i64> {
        (self.lo..=self.hi).collect()
    }
}

/// `m` is the exponent of `p` in the castle `c = p^m`.
pub fn uk_box(profile: &SplittingProfile, m: u64, self_conjugate: bool) -> Result<UkBox, Error> {
    if m == 0 {
        return Err(Error::Invalid("castle exponent must be positive".into()));
    }
    let em = (profile.ramification_index * m) as i64;
    let (lo, hi) = if self_conjugate {
        if em % 2 != 0 {
            return Err(Error::Invalid(format!(
                "e*m = {em} is odd, so no self-conjugate generator exists"
            )));
        }
        (-em / 2, em / 2)
    } else {
        (0, em)
    };
    Ok(UkBox {
        dims: profile.t_size,
        lo,
        hi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(multiplicative_order(2, 7).unwrap(), 3);
        assert_eq!(multiplicative_order(5, 11).unwrap(), 5);
        assert_eq!(multiplicative_order(5, 4).unwrap(), 1);
        assert!(multiplicative_order(2, 4).is_err());
    }

    #[test]
    fn profiles() {
        let s = splitting_profile(45, 2).unwrap();
        assert!(s.conjugation_split);
        assert_eq!(s.t_size, 1);
        assert_eq!(splitting_profile(65, 2).unwrap().t_size, 0);
        let s = splitting_profile(7, 2).unwrap();
        assert_eq!((s.residue_order, s.num_primes), (3, 2));
        let s = splitting_profile(40, 5).unwrap();
        assert_eq!(s.ramification_index, 4);
    }

    #[test]
    fn boxes() {
        let s = splitting_profile(45, 2).unwrap();
        assert_eq!(uk_box(&s, 2, true).unwrap().axis(), vec![-1, 0, 1]);
        let s = splitting_profile(40, 5).unwrap();
        let b = uk_box(&s, 1, true).unwrap();
        assert_eq!(b.axis(), vec![-2, -1, 0, 1, 2]);
        assert_eq!(b.size(), 5);
        let s = splitting_profile(51, 5).unwrap();
        assert_eq!(uk_box(&s, 1, false).unwrap().axis(), vec![0, 1]);
        assert!(uk_box(&s, 1, true).is_err());
        let s = splitting_profile(65, 2).unwrap();
        assert_eq!(uk_box(&s, 2, true).unwrap().size(), 1);
    }
}
