//! Per-level tables for `Q(zeta_N)`: the cyclotomic polynomial, reductions of
//! `zeta_N^e` into the power basis, and traces of every power of `zeta_N`.
//!
//! Tables are built once per level and shared read-only afterwards.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{euler_phi, factorize, gcd, mobius};

/// Largest `(N - phi) * phi` for which reduction rows are stored.
const ROW_BUDGET: usize = 1 << 26;

#[derive(Debug)]
enum Reduction {
    /// For `e` in `phi..n`, the sparse reduction of `zeta^e`.
    Rows(Vec<Vec<(u32, i64)>>),
    /// Nonzero low coefficients of `Phi_N`, for long division.
    Divide(Vec<(u32, i64)>),
}

#[derive(Debug)]
pub(crate) struct LevelData {
    pub phi: usize,
    n: usize,
    reduction: Reduction,
    /// `Tr(zeta_N^e)` for every residue `e`.
    pub trace: Vec<i64>,
}

static CACHE: OnceLock<RwLock<HashMap<u32, Arc<LevelData>>>> = OnceLock::new();

pub(crate) fn level_data(n: u32) -> Arc<LevelData> {
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(d) = cache.read().expect("level cache poisoned").get(&n) {
        return Arc::clone(d);
    }
    let built = Arc::new(LevelData::build(n));
    let mut w = cache.write().expect("level cache poisoned");
    Arc::clone(w.entry(n).or_insert(built))
}

impl LevelData {
    fn build(n: u32) -> Self {
        let phi = euler_phi(n as u64) as usize;
        Self::build_with(n, (n as usize - phi) * phi > ROW_BUDGET)
    }

    fn build_with(n: u32, divide: bool) -> Self {
        assert!(n >= 1, "level must be positive");
        let phi = euler_phi(n as u64) as usize;
        let cyclotomic = cyclotomic_polynomial(n as u64);
        debug_assert_eq!(cyclotomic.len(), phi + 1);

        let reduction = if divide {
            Reduction::Divide(
                cyclotomic[..phi]
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0)
                    .map(|(i, &c)| (i as u32, c))
                    .collect(),
            )
        } else {
            Reduction::Rows(high_rows(n as usize, phi, &cyclotomic))
        };

        let nn = n as u64;
        let phi_n = phi as i64;
        let trace = (0..nn)
            .map(|e| {
                let g = gcd(e, nn);
                let m = nn / g;
                mobius(m) * phi_n / euler_phi(m) as i64
            })
            .collect();

        LevelData {
            phi,
            n: n as usize,
            reduction,
            trace,
        }
    }

    /// Canonical coefficients of `sum c zeta^e`, exponents already reduced mod `n`.
    pub fn reduce(&self, terms: &[(u32, BigInt)]) -> Vec<BigInt> {
        let mut acc = vec![BigInt::zero(); self.phi];
        match &self.reduction {
            Reduction::Rows(rows) => {
                for (e, c) in terms {
                    let e = *e as usize;
                    if e < self.phi {
                        acc[e] += c;
                    } else {
                        for &(i, r) in &rows[e - self.phi] {
                            acc[i as usize] += c * r;
                        }
                    }
                }
            }
            Reduction::Divide(low) => {
                let mut buf = vec![BigInt::zero(); self.n];
                for (e, c) in terms {
                    buf[*e as usize] += c;
                }
                // zeta^e = -sum_j c_j zeta^(e - phi + j).
                for e in (self.phi..self.n).rev() {
                    if buf[e].is_zero() {
                        continue;
                    }
                    let c = std::mem::take(&mut buf[e]);
                    for &(j, d) in low {
                        buf[e - self.phi + j as usize] -= &c * d;
                    }
                }
                buf.truncate(self.phi);
                acc = buf;
            }
        }
        acc
    }

    /// Canonical coefficients of `zeta^e`.
    pub fn power_i64(&self, e: usize) -> Vec<i64> {
        let mut v = vec![0i64; self.phi];
        match &self.reduction {
            _ if e < self.phi => v[e] = 1,
            Reduction::Rows(rows) => {
                for &(i, r) in &rows[e - self.phi] {
                    v[i as usize] = r;
                }
            }
            Reduction::Divide(_) => {
                let big = self.reduce(&[(e as u32, BigInt::one())]);
                for (x, b) in v.iter_mut().zip(&big) {
                    *x = b.to_i64().expect("coefficient fits in i64");
                }
            }
        }
        v
    }
}

fn high_rows(n: usize, phi: usize, cyclotomic: &[i64]) -> Vec<Vec<(u32, i64)>> {
    let mut rows = Vec::with_capacity(n - phi);
    // zeta^phi = -sum_{j<phi} c_j zeta^j, then multiply by zeta repeatedly.
    let mut cur: Vec<i64> = cyclotomic[..phi].iter().map(|c| -c).collect();
    for e in phi..n {
        if e > phi {
            let top = cur[phi - 1];
            for j in (1..phi).rev() {
                cur[j] = cur[j - 1]
                    .checked_sub(top.checked_mul(cyclotomic[j]).expect("overflow"))
                    .expect("overflow in power reduction");
            }
            cur[0] = -top * cyclotomic[0];
        }
        rows.push(
            cur.iter()
                .enumerate()
                .filter(|(_, c)| **c != 0)
                .map(|(i, &c)| (i as u32, c))
                .collect(),
        );
    }
    rows
}

/// `Phi_N` with integer coefficients, lowest degree first.
pub(crate) fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    // Phi_{rad}(x) built prime by prime: Phi_{mp}(x) = Phi_m(x^p) / Phi_m(x) for p not dividing m.
    let mut poly: Vec<i64> = vec![-1, 1];
    let mut rad = 1u64;
    for (p, _) in factorize(n) {
        let p = p as usize;
        let mut expanded = vec![0i64; (poly.len() - 1) * p + 1];
        for (i, &c) in poly.iter().enumerate() {
            expanded[i * p] = c;
        }
        poly = exact_div_monic(&expanded, &poly);
        rad *= p as u64;
    }
    let stretch = (n / rad) as usize;
    if stretch > 1 {
        let mut expanded = vec![0i64; (poly.len() - 1) * stretch + 1];
        for (i, &c) in poly.iter().enumerate() {
            expanded[i * stretch] = c;
        }
        poly = expanded;
    }
    poly
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    debug_assert_eq!(den[dn], 1);
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn];
        q[k] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[k + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "division not exact");
    q
}
