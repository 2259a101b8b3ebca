//! Certified fixed-point interval arithmetic.
//!
//! An [`Fx`] is the real interval `[lo / 2^prec, hi / 2^prec]`. Every
//! operation rounds outward, so the true value is never lost. Enough of
//! `pi`, `sin` and `cos` is provided to enclose `zeta_N^j` and hence every
//! complex embedding of a cyclotomic integer.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cyclo::CyclotomicInt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fx {
    pub lo: BigInt,
    pub hi: BigInt,
    pub prec: u32,
}

fn floor_shr(x: &BigInt, s: u32) -> BigInt {
    // `>>` on BigInt rounds toward negative infinity.
    x >> s
}

fn ceil_shr(x: &BigInt, s: u32) -> BigInt {
    -((-x) >> s)
}

impl Fx {
    pub fn exact_int(v: &BigInt, prec: u32) -> Self {
        let s = v << prec;
        Fx {
            lo: s.clone(),
            hi: s,
            prec,
        }
    }

    pub fn zero(prec: u32) -> Self {
        Fx {
            lo: BigInt::zero(),
            hi: BigInt::zero(),
            prec,
        }
    }

    /// Enclosure of the rational `q`.
    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let scaled = q.numer() << prec;
        let (fl, _) = scaled.div_mod_floor(q.denom());
        let ce = -((-&scaled).div_floor(q.denom()));
        Fx {
            lo: fl,
            hi: ce,
            prec,
        }
    }

    pub fn add(&self, o: &Fx) -> Fx {
        debug_assert_eq!(self.prec, o.prec);
        Fx {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
            prec: self.prec,
        }
    }

    pub fn sub(&self, o: &Fx) -> Fx {
        debug_assert_eq!(self.prec, o.prec);
        Fx {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
            prec: self.prec,
        }
    }

    pub fn neg(&self) -> Fx {
        Fx {
            lo: -&self.hi,
            hi: -&self.lo,
            prec: self.prec,
        }
    }

    pub fn scale_int(&self, c: &BigInt) -> Fx {
        if c.is_negative() {
            Fx {
                lo: &self.hi * c,
                hi: &self.lo * c,
                prec: self.prec,
            }
        } else {
            Fx {
                lo: &self.lo * c,
                hi: &self.hi * c,
                prec: self.prec,
            }
        }
    }

    pub fn mul(&self, o: &Fx) -> Fx {
        let p = self.prec;
        let cands = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let mn = cands.iter().min().unwrap();
        let mx = cands.iter().max().unwrap();
        Fx {
            lo: floor_shr(mn, p),
            hi: ceil_shr(mx, p),
            prec: p,
        }
    }

    pub fn sqr(&self) -> Fx {
        let p = self.prec;
        let a = &self.lo * &self.lo;
        let b = &self.hi * &self.hi;
        let (mn, mx) = if self.lo.is_negative() && self.hi.is_positive() {
            (BigInt::zero(), a.max(b))
        } else if a < b {
            (a, b)
        } else {
            (b, a)
        };
        Fx {
            lo: floor_shr(&mn, p),
            hi: ceil_shr(&mx, p),
            prec: p,
        }
    }

    /// Divide by a positive integer.
    pub fn div_int(&self, d: u64) -> Fx {
        let d = BigInt::from(d);
        Fx {
            lo: self.lo.div_floor(&d),
            hi: -((-&self.hi).div_floor(&d)),
            prec: self.prec,
        }
    }

    pub fn widen(&self, ulps: u64) -> Fx {
        Fx {
            lo: &self.lo - ulps,
            hi: &self.hi + ulps,
            prec: self.prec,
        }
    }

    pub fn hull(&self, o: &Fx) -> Fx {
        Fx {
            lo: (&self.lo).min(&o.lo).clone(),
            hi: (&self.hi).max(&o.hi).clone(),
            prec: self.prec,
        }
    }

    pub fn lo_rational(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::one() << self.prec)
    }

    pub fn hi_rational(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::one() << self.prec)
    }

    pub fn width_rational(&self) -> BigRational {
        BigRational::new(&self.hi - &self.lo, BigInt::one() << self.prec)
    }

    /// Sign if the interval excludes zero.
    pub fn sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn mid_f64(&self) -> f64 {
        let m: BigInt = (&self.lo + &self.hi) >> 1u32;
        let shift = self.prec.saturating_sub(60);
        let m = floor_shr(&m, shift);
        crate::cyclo::bigint_to_f64(&m) / 2f64.powi((self.prec - shift) as i32)
    }
}

/// `arctan(1/m)` at `w` bits with its error bound in ulps.
fn atan_inv(m: u64, w: u32) -> (BigInt, u64) {
    let one = BigInt::one() << w;
    let m2 = BigInt::from(m * m);
    // u_k = floor(2^w / m^(2k+1)); nested floors are exact floors.
    let mut u = &one / BigInt::from(m);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !u.is_zero() {
        let term = &u / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        u = &u / &m2;
        k += 1;
    }
    // Each term is off by < 2 ulps; the omitted tail is < 1 ulp.
    (sum, 2 * k + 2)
}

/// Enclosure of `pi` at `prec` bits.
pub fn pi(prec: u32) -> Fx {
    let w = prec + 16;
    let (a5, e5) = atan_inv(5, w);
    let (a239, e239) = atan_inv(239, w);
    let mid = a5 * 16u32 - a239 * 4u32;
    let err = 16 * e5 + 4 * e239;
    let lo = floor_shr(&(&mid - err), 16);
    let hi = ceil_shr(&(&mid + err), 16);
    Fx { lo, hi, prec }
}

/// `(sin x, cos x)` enclosures for an exact dyadic `x = xs / 2^w`, `0 <= x <= 2`.
fn sin_cos_point(xs: &BigInt, w: u32) -> (Fx, Fx) {
    let one = BigInt::one() << w;
    let mut sin = BigInt::zero();
    let mut cos = BigInt::zero();
    let mut t = one;
    let mut k: u64 = 0;
    // t_k approximates x^k / k! from below within 3 ulps when x <= 2.
    loop {
        match k % 4 {
            0 => cos += &t,
            1 => sin += &t,
            2 => cos -= &t,
            _ => sin -= &t,
        }
        k += 1;
        t = floor_shr(&(&t * xs), w) / BigInt::from(k);
        if t.is_zero() && k > 2 {
            break;
        }
    }
    let err = 4 * k + 8;
    let sin = Fx {
        lo: &sin - err,
        hi: &sin + err,
        prec: w,
    };
    let cos = Fx {
        lo: &cos - err,
        hi: &cos + err,
        prec: w,
    };
    (sin, cos)
}

fn reprec(x: &Fx, prec: u32) -> Fx {
    if x.prec >= prec {
        let s = x.prec - prec;
        Fx {
            lo: floor_shr(&x.lo, s),
            hi: ceil_shr(&x.hi, s),
            prec,
        }
    } else {
        let s = prec - x.prec;
        Fx {
            lo: &x.lo << s,
            hi: &x.hi << s,
            prec,
        }
    }
}

fn clamp_unit(x: Fx) -> Fx {
    let one = BigInt::one() << x.prec;
    let m1 = -&one;
    Fx {
        lo: x.lo.max(m1.clone()).min(one.clone()),
        hi: x.hi.min(one).max(m1),
        prec: x.prec,
    }
}

/// Enclosures of `(cos, sin)` of `2 pi j / n`.
pub fn cos_sin_2pi(j: u64, n: u64, prec: u32) -> (Fx, Fx) {
    let j = j % n;
    if j == 0 {
        return (Fx::exact_int(&BigInt::one(), prec), Fx::zero(prec));
    }
    let q = 4 * j / n;
    let r = 4 * j % n;
    let (c, s) = if r == 0 {
        (Fx::exact_int(&BigInt::one(), prec), Fx::zero(prec))
    } else {
        // phi = (pi / 2) * r / n lies in (0, pi/2).
        let w = prec + 20;
        let pw = pi(w);
        let phi = pw.scale_int(&BigInt::from(r)).div_int(2 * n);
        let (s_lo, c_lo) = sin_cos_point(&phi.lo, w);
        let (s_hi, c_hi) = sin_cos_point(&phi.hi, w);
        // sin increases and cos decreases on [0, pi/2]; the endpoint may
        // overshoot pi/2 by a few ulps, so clamp into [-1, 1] afterwards.
        let mut sin = Fx {
            lo: s_lo.lo,
            hi: s_hi.hi,
            prec: w,
        };
        let cos = Fx {
            lo: c_hi.lo,
            hi: c_lo.hi,
            prec: w,
        };
        if (&phi.hi << 1u32) >= pw.lo {
            sin.hi = BigInt::one() << w;
        }
        (
            clamp_unit(reprec(&cos, prec)),
            clamp_unit(reprec(&sin, prec)),
        )
    };
    match q {
        0 => (c, s),
        1 => (s.neg(), c),
        2 => (c.neg(), s.neg()),
        _ => (s, c.neg()),
    }
}

type TrigKey = (u32, u32);
static TRIG: OnceLock<RwLock<HashMap<TrigKey, Arc<Vec<(Fx, Fx)>>>>> = OnceLock::new();

/// All `(cos, sin)(2 pi j / n)` for `j < n`, cached per `(n, prec)`.
pub fn trig_table(n: u32, prec: u32) -> Arc<Vec<(Fx, Fx)>> {
    let cache = TRIG.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(t) = cache.read().expect("trig cache poisoned").get(&(n, prec)) {
        return Arc::clone(t);
    }
    let table: Vec<(Fx, Fx)> = (0..n as u64)
        .map(|j| cos_sin_2pi(j, n as u64, prec))
        .collect();
    let table = Arc::new(table);
    let mut w = cache.write().expect("trig cache poisoned");
    Arc::clone(w.entry((n, prec)).or_insert(table))
}

/// Enclosure of `sigma_k(a)` as `(re, im)`.
pub fn embed(a: &CyclotomicInt, k: u64, prec: u32) -> (Fx, Fx) {
    let n = a.level() as u64;
    let table = trig_table(a.level(), prec);
    let mut re = Fx::zero(prec);
    let mut im = Fx::zero(prec);
    for (e, c) in a.terms() {
        let (cs, sn) = &table[((*e as u64 * k) % n) as usize];
        re = re.add(&cs.scale_int(c));
        im = im.add(&sn.scale_int(c));
    }
    (re, im)
}

/// Enclosure of `|sigma_k(a)|^2`.
pub fn abs_sq(a: &CyclotomicInt, k: u64, prec: u32) -> Fx {
    let (re, im) = embed(a, k, prec);
    re.sqr().add(&im.sqr())
}

/// Certified enclosure of a real number with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealEnclosure {
    #[serde(serialize_with = "ser_rational")]
    pub lo: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub hi: BigRational,
    pub precision_bits: u32,
}

fn ser_rational<S: serde::Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

impl RealEnclosure {
    pub fn from_fx(x: &Fx) -> Self {
        RealEnclosure {
            lo: x.lo_rational(),
            hi: x.hi_rational(),
            precision_bits: x.prec,
        }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn mid_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        ((&self.lo + &self.hi) / BigInt::from(2)).to_f64().unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(x: &Fx) -> (f64, f64) {
        use num_traits::ToPrimitive;
        (
            x.lo_rational().to_f64().unwrap(),
            x.hi_rational().to_f64().unwrap(),
        )
    }

    #[test]
    fn pi_is_enclosed() {
        let p = pi(200);
        let (lo, hi) = f(&p);
        assert!(lo <= std::f64::consts::PI && std::f64::consts::PI <= hi);
        assert!(&p.hi - &p.lo < BigInt::from(1000));
        // 355/113 exceeds pi by about 2.7e-7.
        let q = BigRational::new(355.into(), 113.into());
        assert!(p.hi_rational() < q);
    }

    #[test]
    fn quadrant_values_are_exact() {
        let (c, s) = cos_sin_2pi(1, 4, 80);
        assert_eq!(c, Fx::zero(80));
        assert_eq!(s, Fx::exact_int(&BigInt::one(), 80));
        let (c, _) = cos_sin_2pi(3, 6, 80);
        assert_eq!(c, Fx::exact_int(&BigInt::from(-1), 80));
    }

    #[test]
    fn trig_matches_libm() {
        for n in [5u64, 7, 12, 62, 420] {
            for j in 0..n {
                let (c, s) = cos_sin_2pi(j, n, 100);
                let t = std::f64::consts::TAU * j as f64 / n as f64;
                let (clo, chi) = f(&c);
                let (slo, shi) = f(&s);
                // libm sees a rounded argument, so allow a few ulps of slack.
                assert!(clo - 1e-14 <= t.cos() && t.cos() <= chi + 1e-14);
                assert!(slo - 1e-14 <= t.sin() && t.sin() <= shi + 1e-14);
                assert!(&c.hi - &c.lo < BigInt::from(1u64 << 20));
            }
        }
    }

    #[test]
    fn cos_pi_over_3_is_half() {
        let (c, _) = cos_sin_2pi(1, 6, 120);
        let half = BigRational::new(1.into(), 2.into());
        assert!(c.lo_rational() <= half && half <= c.hi_rational());
    }

    #[test]
    fn abs_sq_of_1_plus_i() {
        let a = CyclotomicInt::from_sparse(4, &[(0, 1), (1, 1)]).unwrap();
        let v = abs_sq(&a, 1, 64);
        assert_eq!(v, Fx::exact_int(&BigInt::from(2), 64));
    }

    #[test]
    fn rational_enclosure() {
        let q = BigRational::new(1.into(), 3.into());
        let x = Fx::from_rational(&q, 30);
        assert!(x.lo_rational() <= q && q <= x.hi_rational());
        assert_eq!(&x.hi - &x.lo, BigInt::one());
    }
}
