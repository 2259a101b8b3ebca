//! Elements of `Z[zeta_N]` in the power basis modulo `Phi_N`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{gcd, lcm, mod_inverse, valuation};
use crate::level::level_data;
use crate::Error;

/// An element of `Z[zeta_N]`.
///
/// Besides the canonical coefficient vector the value carries a short sparse
/// expansion `sum c * zeta_N^e` (never longer than the canonical support).
/// Galois maps, traces and numeric embeddings are computed from it.
#[derive(Clone, Debug)]
pub struct CyclotomicInt {
    level: u32,
    coeffs: Vec<BigInt>,
    terms: Vec<(u32, BigInt)>,
}

impl CyclotomicInt {
    /// `sum c_e zeta_N^e`; exponents are taken modulo `level`.
    pub fn from_sparse(level: u32, terms: &[(i64, i64)]) -> Result<Self, Error> {
        if level == 0 {
            return Err(Error::ZeroLevel);
        }
        let n = level as i64;
        let raw = terms
            .iter()
            .map(|&(e, c)| (e.rem_euclid(n) as u32, BigInt::from(c)))
            .collect();
        Ok(Self::from_raw_terms(level, raw))
    }

    pub fn from_sparse_big(level: u32, terms: &[(i64, BigInt)]) -> Result<Self, Error> {
        if level == 0 {
            return Err(Error::ZeroLevel);
        }
        let n = level as i64;
        let raw = terms
            .iter()
            .map(|(e, c)| (e.rem_euclid(n) as u32, c.clone()))
            .collect();
        Ok(Self::from_raw_terms(level, raw))
    }

    pub fn zero(level: u32) -> Self {
        Self::from_raw_terms(level.max(1), Vec::new())
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_raw_terms(1, vec![(0, BigInt::from(c))])
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `zeta_order^exponent`.
    pub fn zeta(order: u32, exponent: i64) -> Self {
        assert!(order >= 1, "root of unity of order zero");
        let e = exponent.rem_euclid(order as i64) as u32;
        Self::from_raw_terms(order, vec![(e, BigInt::one())])
    }

    /// Exponents must already be reduced; duplicates are merged.
    pub(crate) fn from_raw_terms(level: u32, mut raw: Vec<(u32, BigInt)>) -> Self {
        raw.sort_by_key(|t| t.0);
        let mut merged: Vec<(u32, BigInt)> = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            match merged.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|t| !t.1.is_zero());

        let coeffs = level_data(level).reduce(&merged);
        Self::finish(level, coeffs, merged)
    }

    fn from_coeffs(level: u32, coeffs: Vec<BigInt>) -> Self {
        Self::finish(level, coeffs, Vec::new())
    }

    fn finish(level: u32, coeffs: Vec<BigInt>, terms: Vec<(u32, BigInt)>) -> Self {
        let nnz = coeffs.iter().filter(|c| !c.is_zero()).count();
        let terms = if terms.is_empty() && nnz > 0 || terms.len() > nnz {
            coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as u32, c.clone()))
                .collect()
        } else {
            terms
        };
        CyclotomicInt {
            level,
            coeffs,
            terms,
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Canonical power-basis coefficients, length `phi(level)`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// A sparse expansion `sum c * zeta^e` of this value (not canonical).
    pub fn terms(&self) -> &[(u32, BigInt)] {
        &self.terms
    }

    /// Canonical coefficients as `(exponent, coefficient)` pairs.
    pub fn to_sparse(&self) -> Vec<(u32, BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as u32, c.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The value as a rational integer, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// The same element presented at a multiple of its level.
    pub fn raise(&self, new_level: u32) -> Result<Self, Error> {
        if new_level == 0 || new_level % self.level != 0 {
            return Err(Error::BadLevel {
                from: self.level,
                to: new_level,
            });
        }
        if new_level == self.level {
            return Ok(self.clone());
        }
        let f = new_level / self.level;
        let raw = self.terms.iter().map(|(e, c)| (e * f, c.clone())).collect();
        Ok(Self::from_raw_terms(new_level, raw))
    }

    /// Present at a divisor of the level, if the element lies in that subfield.
    pub fn lower(&self, new_level: u32) -> Option<Self> {
        if new_level == 0 || self.level % new_level != 0 {
            return None;
        }
        if new_level == self.level {
            return Some(self.clone());
        }
        let f = self.level / new_level;
        // Try the sparse expansion first, then the canonical one.
        for src in [&self.terms, &self.to_sparse()] {
            if src.iter().all(|(e, _)| e % f == 0) {
                let raw = src.iter().map(|(e, c)| (e / f, c.clone())).collect();
                let low = Self::from_raw_terms(new_level, raw);
                return Some(low);
            }
        }
        // Canonical expansions need not be sparse in the subfield; solve for
        // coordinates against the embedded basis of Q(zeta_d).
        let f = self.level / new_level;
        let dd = level_data(new_level);
        let cols: Vec<Vec<BigInt>> = (0..dd.phi)
            .map(|j| CyclotomicInt::zeta(self.level, (j as u32 * f) as i64).coeffs)
            .collect();
        let sol = solve_integer_combination(&cols, &self.coeffs)?;
        Some(CyclotomicInt::from_coeffs(new_level, sol))
    }

    /// Both values presented at the lcm of their levels.
    pub fn unify(a: &Self, b: &Self) -> (Self, Self) {
        if a.level == b.level {
            return (a.clone(), b.clone());
        }
        let l = lcm(a.level as u64, b.level as u64) as u32;
        (a.raise(l).unwrap(), b.raise(l).unwrap())
    }

    /// `sigma_k: zeta_N -> zeta_N^k`.
    pub fn galois_apply(&self, k: i64) -> Result<Self, Error> {
        let n = self.level as i64;
        let k = k.rem_euclid(n);
        if gcd(k as u64, n as u64) != 1 {
            return Err(Error::NotCoprime {
                k,
                level: self.level,
            });
        }
        if k == 1 % n {
            return Ok(self.clone());
        }
        let raw = self
            .terms
            .iter()
            .map(|(e, c)| (((*e as i64 * k) % n) as u32, c.clone()))
            .collect();
        Ok(Self::from_raw_terms(self.level, raw))
    }

    pub fn conjugate(&self) -> Self {
        self.galois_apply(-1).expect("-1 is always a unit")
    }

    /// `Tr_{Q(zeta_N)/Q}`.
    pub fn trace(&self) -> BigInt {
        let data = level_data(self.level);
        self.coeffs
            .iter()
            .zip(&data.trace)
            .filter(|(c, t)| !c.is_zero() && **t != 0)
            .map(|(c, &t)| c * t)
            .sum()
    }

    /// Numeric value under `sigma_k` as `(re, im)`.
    pub fn embed_f64(&self, k: i64) -> (f64, f64) {
        let n = self.level as i64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (e, c) in &self.terms {
            let c = bigint_to_f64(c);
            let t = ((*e as i64 * k).rem_euclid(n)) as f64 / n as f64 * std::f64::consts::TAU;
            re += c * t.cos();
            im += c * t.sin();
        }
        (re, im)
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = CyclotomicInt::one().raise(self.level).unwrap();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiply by `zeta_N^t`.
    pub fn mul_zeta(&self, t: i64) -> Self {
        let n = self.level as i64;
        let t = t.rem_euclid(n);
        let raw = self
            .terms
            .iter()
            .map(|(e, c)| (((*e as i64 + t) % n) as u32, c.clone()))
            .collect();
        Self::from_raw_terms(self.level, raw)
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        if s.is_zero() {
            return CyclotomicInt::zero(self.level);
        }
        CyclotomicInt {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    /// Exact division by a rational integer; `None` if not divisible.
    pub fn div_exact(&self, s: &BigInt) -> Option<Self> {
        if s.is_zero() || self.coeffs.iter().any(|c| !(c % s).is_zero()) {
            return None;
        }
        let coeffs = self.coeffs.iter().map(|c| c / s).collect();
        let terms = if self.terms.iter().all(|(_, c)| (c % s).is_zero()) {
            self.terms.iter().map(|(e, c)| (*e, c / s)).collect()
        } else {
            Vec::new()
        };
        Some(Self::finish(self.level, coeffs, terms))
    }

    /// Decomposition `a = sum_i eta_i zeta_{p^n}^i` with `eta_i` one level down.
    pub fn p_decompose(&self, p: u32) -> Result<PDecomposition, Error> {
        let n_level = self.level;
        if p < 2 || n_level % p != 0 || !crate::arith::is_prime(p as u64) {
            return Err(Error::PrimeNotDividing { p, level: n_level });
        }
        let n = valuation(n_level as u64, p as u64);
        let pn = (p as u64).pow(n);
        let m = n_level as u64 / pn;
        let m_inv = mod_inverse(m as i64, p as i64).expect("coprime") as u64;
        let lower = n_level / p;
        let mut buckets: Vec<Vec<(u32, BigInt)>> = vec![Vec::new(); p as usize];
        let nn = n_level as u64;
        for (e, c) in &self.terms {
            let e = *e as u64;
            let i = (e % p as u64) * m_inv % p as u64;
            let r = ((e + nn - (i * m) % nn) % nn) / p as u64;
            buckets[i as usize].push((r as u32, c.clone()));
        }
        let mut parts: Vec<CyclotomicInt> = buckets
            .into_iter()
            .map(|b| CyclotomicInt::from_raw_terms(lower, b))
            .collect();
        let normalized = n == 1;
        if normalized {
            let shift = most_frequent(&parts);
            if !shift.is_zero() {
                for part in parts.iter_mut() {
                    *part = &*part - &shift;
                }
            }
        }
        Ok(PDecomposition {
            prime: p,
            exponent_n: n,
            parts,
            normalized,
        })
    }

    /// Compact `e:c,...` rendering of the canonical coefficients.
    pub fn sparse_string(&self) -> String {
        let s: Vec<String> = self
            .to_sparse()
            .iter()
            .map(|(e, c)| format!("{e}:{c}"))
            .collect();
        s.join(",")
    }
}

/// Solve `sum x_j cols[j] = target` for integers `x_j`, if possible.
fn solve_integer_combination(cols: &[Vec<BigInt>], target: &[BigInt]) -> Option<Vec<BigInt>> {
    use num_rational::BigRational;
    let rows = target.len();
    let k = cols.len();
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<BigRational> = cols
                .iter()
                .map(|c| BigRational::from_integer(c[r].clone()))
                .collect();
            row.push(BigRational::from_integer(target[r].clone()));
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..k {
        let Some(r) = (pivot_row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, r);
        let inv = m[pivot_row][col].recip();
        for x in m[pivot_row].iter_mut() {
            *x = &*x * &inv;
        }
        for r2 in 0..rows {
            if r2 != pivot_row && !m[r2][col].is_zero() {
                let f = m[r2][col].clone();
                for c2 in 0..=k {
                    let v = &m[pivot_row][c2] * &f;
                    m[r2][c2] -= v;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if (pivot_row..rows).any(|r| !m[r][k].is_zero()) {
        return None;
    }
    let mut x = vec![BigInt::zero(); k];
    for (r, &col) in pivots.iter().enumerate() {
        let v = &m[r][k];
        if !v.is_integer() {
            return None;
        }
        x[col] = v.to_integer();
    }
    Some(x)
}

fn most_frequent(parts: &[CyclotomicInt]) -> CyclotomicInt {
    let mut best: Option<(usize, &CyclotomicInt)> = None;
    for cand in parts {
        let count = parts.iter().filter(|q| q.coeffs == cand.coeffs).count();
        best = match best {
            None => Some((count, cand)),
            Some((bc, b)) => match count.cmp(&bc) {
                Ordering::Greater => Some((count, cand)),
                Ordering::Equal if cand.coeffs < b.coeffs => Some((count, cand)),
                _ => Some((bc, b)),
            },
        };
    }
    best.map(|b| b.1.clone())
        .unwrap_or_else(|| CyclotomicInt::zero(1))
}

pub(crate) fn bigint_to_f64(c: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    c.to_f64().unwrap_or(if c.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

fn multiply_terms(level: u32, a: &[(u32, BigInt)], b: &[(u32, BigInt)]) -> CyclotomicInt {
    let n = level as usize;
    let count = a.len() * b.len();
    if count == 0 {
        return CyclotomicInt::zero(level);
    }
    if count * 2 < n {
        let mut raw = Vec::with_capacity(count);
        for (ea, ca) in a {
            for (eb, cb) in b {
                raw.push((((ea + eb) as usize % n) as u32, ca * cb));
            }
        }
        return CyclotomicInt::from_raw_terms(level, raw);
    }
    let mut slots = vec![BigInt::zero(); n];
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = (ea + eb) as usize;
            let e = if e >= n { e - n } else { e };
            slots[e] += ca * cb;
        }
    }
    let raw: Vec<(u32, BigInt)> = slots
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (e as u32, c))
        .collect();
    let coeffs = level_data(level).reduce(&raw);
    CyclotomicInt::finish(level, coeffs, raw)
}

fn add_terms(level: u32, a: &CyclotomicInt, b: &CyclotomicInt, negate_b: bool) -> CyclotomicInt {
    let coeffs: Vec<BigInt> = a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(x, y)| if negate_b { x - y } else { x + y })
        .collect();
    let mut raw: Vec<(u32, BigInt)> = a.terms.clone();
    raw.extend(
        b.terms
            .iter()
            .map(|(e, c)| (*e, if negate_b { -c } else { c.clone() })),
    );
    raw.sort_by_key(|t| t.0);
    let mut merged: Vec<(u32, BigInt)> = Vec::with_capacity(raw.len());
    for (e, c) in raw {
        match merged.last_mut() {
            Some(last) if last.0 == e => last.1 += c,
            _ => merged.push((e, c)),
        }
    }
    merged.retain(|t| !t.1.is_zero());
    CyclotomicInt::finish(level, coeffs, merged)
}

impl PartialEq for CyclotomicInt {
    fn eq(&self, other: &Self) -> bool {
        if self.level == other.level {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = CyclotomicInt::unify(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CyclotomicInt {}

impl<'a> Add<&'a CyclotomicInt> for &'a CyclotomicInt {
    type Output = CyclotomicInt;
    fn add(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        if self.level == rhs.level {
            return add_terms(self.level, self, rhs, false);
        }
        let (a, b) = CyclotomicInt::unify(self, rhs);
        add_terms(a.level, &a, &b, false)
    }
}

impl<'a> Sub<&'a CyclotomicInt> for &'a CyclotomicInt {
    type Output = CyclotomicInt;
    fn sub(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        if self.level == rhs.level {
            return add_terms(self.level, self, rhs, true);
        }
        let (a, b) = CyclotomicInt::unify(self, rhs);
        add_terms(a.level, &a, &b, true)
    }
}

impl<'a> Mul<&'a CyclotomicInt> for &'a CyclotomicInt {
    type Output = CyclotomicInt;
    fn mul(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        if self.level == rhs.level {
            return multiply_terms(self.level, &self.terms, &rhs.terms);
        }
        let (a, b) = CyclotomicInt::unify(self, rhs);
        multiply_terms(a.level, &a.terms, &b.terms)
    }
}

impl Neg for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn neg(self) -> CyclotomicInt {
        CyclotomicInt {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CyclotomicInt> for CyclotomicInt {
            type Output = CyclotomicInt;
            fn $m(self, rhs: CyclotomicInt) -> CyclotomicInt {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CyclotomicInt {
    type Output = CyclotomicInt;
    fn neg(self) -> CyclotomicInt {
        -&self
    }
}

impl fmt::Display for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.to_sparse() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = mag.is_one();
            match (e, unit) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "z{}^{e}", self.level)?,
                (_, false) => write!(f, "{mag}*z{}^{e}", self.level)?,
            }
        }
        Ok(())
    }
}

/// `zeta_order^exponent`, kept with `gcd(order, exponent) = 1` (or `(1, 0)`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    pub order: u32,
    pub exponent: u32,
}

impl RootOfUnity {
    pub fn new(order: u32, exponent: i64) -> Self {
        assert!(order >= 1);
        let e = exponent.rem_euclid(order as i64) as u64;
        let g = gcd(e, order as u64);
        let g = if e == 0 { order as u64 } else { g };
        RootOfUnity {
            order: (order as u64 / g) as u32,
            exponent: (e / g) as u32,
        }
    }

    pub fn one() -> Self {
        RootOfUnity {
            order: 1,
            exponent: 0,
        }
    }

    pub fn to_cyclo(self) -> CyclotomicInt {
        CyclotomicInt::zeta(self.order, self.exponent as i64)
    }

    pub fn mul(self, other: Self) -> Self {
        let l = lcm(self.order as u64, other.order as u64);
        let e = self.exponent as u64 * (l / self.order as u64)
            + other.exponent as u64 * (l / other.order as u64);
        RootOfUnity::new(l as u32, e as i64)
    }

    pub fn inverse(self) -> Self {
        RootOfUnity::new(self.order, -(self.exponent as i64))
    }

    /// The elements of `W_{Q(zeta_N)}`, i.e. all `lcm(2, N)`-th roots of unity.
    pub fn group(level: u32) -> Vec<Self> {
        let l = lcm(2, level as u64) as u32;
        (0..l).map(|t| RootOfUnity::new(l, t as i64)).collect()
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z{}^{}", self.order, self.exponent)
    }
}

/// `a = sum_i eta_i zeta_{p^n}^i`, `eta_i` in `Q(zeta_{N/p})`.
#[derive(Clone, Debug)]
pub struct PDecomposition {
    pub prime: u32,
    pub exponent_n: u32,
    pub parts: Vec<CyclotomicInt>,
    pub normalized: bool,
}

impl PDecomposition {
    /// Number of nonzero parts.
    pub fn x(&self) -> usize {
        self.parts.iter().filter(|p| !p.is_zero()).count()
    }

    /// Indices of the nonzero parts.
    pub fn support(&self) -> Vec<usize> {
        (0..self.parts.len())
            .filter(|&i| !self.parts[i].is_zero())
            .collect()
    }

    pub fn reconstruct(&self) -> CyclotomicInt {
        let pn = self.prime.pow(self.exponent_n);
        let mut acc = CyclotomicInt::zero(1);
        for (i, part) in self.parts.iter().enumerate() {
            if !part.is_zero() {
                acc = &acc + &(part * &CyclotomicInt::zeta(pn, i as i64));
            }
        }
        acc
    }
}

/// Parse the `e1:c1,e2:c2,...` element format.
pub fn parse_sparse(s: &str) -> Result<Vec<(i64, BigInt)>, Error> {
    let mut out = Vec::new();
    for item in s.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let (e, c) = item
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected exponent:coefficient, got `{item}`")))?;
        let e: i64 = e
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent `{e}`")))?;
        let c: BigInt = c
            .trim()
            .trim_start_matches('+')
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient `{c}`")))?;
        out.push((e, c));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(level: u32, t: &[(i64, i64)]) -> CyclotomicInt {
        CyclotomicInt::from_sparse(level, t).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn basis_embedding_and_reduction() {
        assert_eq!(el(5, &[(0, 1), (1, 1)]).coeffs(), ints(&[1, 1, 0, 0]).as_slice());
        assert_eq!(el(4, &[(2, 1)]), CyclotomicInt::from_int(-1));
        assert_eq!(el(9, &[(6, 1)]).coeffs(), ints(&[-1, 0, 0, -1, 0, 0]).as_slice());
        assert!(CyclotomicInt::from_sparse(0, &[]).is_err());
    }

    #[test]
    fn products() {
        let a = el(4, &[(0, 1), (1, 1)]);
        let b = el(4, &[(0, 1), (1, -1)]);
        assert_eq!(&a * &b, CyclotomicInt::from_int(2));
        let c = el(7, &[(0, 1), (1, 1), (3, 1)]);
        assert_eq!(&c * &c.conjugate(), CyclotomicInt::from_int(2));
        assert!((&c * &CyclotomicInt::zero(7)).is_zero());
    }

    #[test]
    fn dense_product_matches_sparse_route() {
        let a = el(11, &[(0, 3), (1, -2), (4, 5), (7, 1), (9, 2)]);
        let b = el(11, &[(2, 1), (3, 4), (5, -1), (6, 2), (8, 7), (10, -3)]);
        let dense = CyclotomicInt::from_coeffs(11, a.coeffs().to_vec());
        assert_eq!(&a * &b, &dense * &b);
    }

    #[test]
    fn galois_and_conjugation() {
        let a = el(5, &[(0, 1), (1, 1)]);
        assert_eq!(a.galois_apply(2).unwrap(), el(5, &[(0, 1), (2, 1)]));
        assert!(a.galois_apply(5).is_err());
        let z7 = CyclotomicInt::zeta(7, 1);
        let twice = z7.galois_apply(5).unwrap().galois_apply(3).unwrap();
        assert_eq!(twice, z7);
        assert_eq!(CyclotomicInt::zeta(5, 1).conjugate(), CyclotomicInt::zeta(5, 4));
        let b = el(8, &[(0, 1), (1, 1), (7, -1)]);
        assert_eq!(b.conjugate(), el(8, &[(0, 1), (1, -1), (7, 1)]));
    }

    #[test]
    fn traces() {
        assert_eq!(CyclotomicInt::zeta(5, 1).trace(), BigInt::from(-1));
        assert_eq!(CyclotomicInt::one().raise(12).unwrap().trace(), BigInt::from(4));
        assert_eq!(CyclotomicInt::zeta(9, 3).trace(), BigInt::from(-3));
    }

    #[test]
    fn equality_across_levels() {
        let a = el(3, &[(0, 1), (1, 1)]);
        let b = el(15, &[(0, 1), (5, 1)]);
        assert_eq!(a, b);
        assert_eq!(b.lower(3).unwrap(), a);
    }

    #[test]
    fn lowering_needs_invariance() {
        // zeta_5 + zeta_5^4 written in the canonical basis of level 15.
        let a = el(15, &[(3, 1), (12, 1)]);
        let canon = CyclotomicInt::from_coeffs(15, a.coeffs().to_vec());
        assert_eq!(canon.lower(5).unwrap(), el(5, &[(1, 1), (4, 1)]));
        assert!(el(15, &[(1, 1)]).lower(5).is_none());
    }

    #[test]
    fn p_decompositions() {
        let d = el(9, &[(0, 1), (1, 1)]).p_decompose(3).unwrap();
        assert_eq!(d.exponent_n, 2);
        assert_eq!(d.x(), 2);
        assert_eq!(d.parts[0], CyclotomicInt::one());
        assert_eq!(d.parts[1], CyclotomicInt::one());
        assert!(d.parts[2].is_zero());

        let d = el(5, &[(0, 1), (1, 1)]).p_decompose(5).unwrap();
        assert_eq!(d.x(), 2);
        assert_eq!(d.support(), vec![0, 1]);

        let a = &CyclotomicInt::zeta(3, 1) * &el(5, &[(0, 1), (1, 1)]);
        let d = a.p_decompose(5).unwrap();
        assert_eq!(d.x(), 2);
        for i in d.support() {
            assert_eq!(d.parts[i], CyclotomicInt::zeta(3, 1));
        }
        assert_eq!(d.reconstruct(), a);
        assert!(a.p_decompose(7).is_err());
    }

    #[test]
    fn normalization_removes_common_value() {
        // 1 + z5 + z5^2 + z5^3 = -z5^4
        let a = el(5, &[(0, 1), (1, 1), (2, 1), (3, 1)]);
        let d = a.p_decompose(5).unwrap();
        assert_eq!(d.x(), 1);
        assert_eq!(d.parts[4], CyclotomicInt::from_int(-1));
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(RootOfUnity::new(12, 4), RootOfUnity::new(3, 1));
        assert_eq!(RootOfUnity::new(6, 0), RootOfUnity::one());
        assert_eq!(RootOfUnity::group(7).len(), 14);
        assert_eq!(RootOfUnity::group(12).len(), 12);
        let r = RootOfUnity::new(4, 1).mul(RootOfUnity::new(6, 1));
        assert_eq!(r, RootOfUnity::new(12, 5));
        assert_eq!(r.to_cyclo(), CyclotomicInt::zeta(12, 5));
    }

    #[test]
    fn parse_format() {
        let t = parse_sparse("0:1, 3:-2,7:+4").unwrap();
        assert_eq!(t, vec![(0, 1.into()), (3, (-2).into()), (7, 4.into())]);
        assert!(parse_sparse("3").is_err());
        assert!(parse_sparse("").unwrap().is_empty());
    }

    #[test]
    fn pow_small() {
        let a = el(7, &[(0, 1), (1, 1), (3, 1)]);
        assert_eq!(a.pow(2), &a * &a);
        assert_eq!(a.pow(0), CyclotomicInt::one());
    }
}
