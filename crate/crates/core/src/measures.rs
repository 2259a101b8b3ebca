//! House, Cassels height, minimal level, minimal weight and the equivalence
//! hash, plus the membership test for the Cassels families.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{euler_phi, factorize, gcd, lcm, mobius, mod_inverse, units};
use crate::cyclo::{CyclotomicInt, RootOfUnity};
use crate::interval::{abs_sq, embed, Fx, RealEnclosure};
use crate::level::level_data;
use crate::Error;

/// `Tr(a * conj(a)) / phi(N)`.
pub fn cassels_height(a: &CyclotomicInt) -> BigRational {
    let g = a * &a.conjugate();
    let phi = euler_phi(a.level() as u64);
    BigRational::new(g.trace(), BigInt::from(phi))
}

/// Units `k <= N/2` mod `N`; one representative of each `{k, -k}` pair.
fn half_units(n: u32) -> Vec<u64> {
    let n = n as u64;
    if n <= 2 {
        return vec![1];
    }
    units(n).into_iter().filter(|&k| 2 * k < n).collect()
}

/// Enclosure of the castle `max_k |sigma_k(a)|^2` of width at most `width`.
pub fn castle_enclosure(a: &CyclotomicInt, width: &BigRational) -> RealEnclosure {
    assert!(width.is_positive(), "width must be positive");
    let ks = half_units(a.level());
    let mut prec = 64u32;
    loop {
        let mut best: Option<Fx> = None;
        for &k in &ks {
            let v = abs_sq(a, k, prec);
            best = Some(match best {
                None => v,
                Some(b) => Fx {
                    lo: b.lo.max(v.lo),
                    hi: b.hi.max(v.hi),
                    prec,
                },
            });
        }
        let best = best.expect("at least one unit");
        if &best.width_rational() <= width {
            return RealEnclosure::from_fx(&best);
        }
        prec *= 2;
    }
}

/// Sign of a nonzero real cyclotomic integer, by refinement.
fn real_sign(x: &CyclotomicInt) -> Ordering {
    let mut prec = 64u32;
    let mut checked_zero = false;
    loop {
        let (re, _) = embed(x, 1, prec);
        match re.sign() {
            Some(1) => return Ordering::Greater,
            Some(_) => return Ordering::Less,
            None => {
                if !checked_zero {
                    if x.is_zero() {
                        return Ordering::Equal;
                    }
                    checked_zero = true;
                }
                prec *= 2;
            }
        }
    }
}

/// Compare a real element (under the identity embedding) with a rational.
fn cmp_real_rational(x: &CyclotomicInt, q: &BigRational) -> Ordering {
    if q.is_integer() {
        let d = x - &CyclotomicInt::from_sparse_big(1, &[(0, q.to_integer())]).unwrap();
        return real_sign(&d);
    }
    // An algebraic integer never equals a non-integral rational.
    let mut prec = 64u32;
    loop {
        let (re, _) = embed(x, 1, prec);
        let qq = Fx::from_rational(q, prec);
        if re.lo > qq.hi {
            return Ordering::Greater;
        }
        if re.hi < qq.lo {
            return Ordering::Less;
        }
        prec *= 2;
    }
}

/// Exact comparison of the castle of `a` with a rational threshold.
pub fn castle_cmp(a: &CyclotomicInt, q: &BigRational) -> Ordering {
    let g = a * &a.conjugate();
    let mut result = Ordering::Less;
    for k in half_units(g.level()) {
        let s = g.galois_apply(k as i64).expect("unit");
        match cmp_real_rational(&s, q) {
            Ordering::Greater => return Ordering::Greater,
            Ordering::Equal => result = Ordering::Equal,
            Ordering::Less => {}
        }
    }
    result
}

/// Whether the castle of `a` equals the totally real number `target`
/// (taken under the identity embedding).
pub fn castle_equals(a: &CyclotomicInt, target: &CyclotomicInt) -> Result<bool, Error> {
    if *target != target.conjugate() {
        return Err(Error::NotTotallyReal);
    }
    let g = a * &a.conjugate();
    let (g, t) = CyclotomicInt::unify(&g, target);
    let mut attained = false;
    for k in half_units(g.level()) {
        let d = &g.galois_apply(k as i64).expect("unit") - &t;
        match real_sign(&d) {
            Ordering::Greater => return Ok(false),
            Ordering::Equal => attained = true,
            Ordering::Less => {}
        }
    }
    Ok(attained)
}

/// `(10 + 2/25)^(-phi(N))`.
pub fn separation_threshold(n: u32) -> BigRational {
    let phi = euler_phi(n.max(1) as u64) as usize;
    let base = BigRational::new(BigInt::from(25), BigInt::from(252));
    num_traits::pow(base, phi)
}

/// Result of the minimal level computation.
#[derive(Clone, Debug)]
pub struct MinimalLevel {
    pub level: u32,
    /// `a * witness` lies in `Q(zeta_level)`.
    pub witness: RootOfUnity,
    /// `a * witness` presented at `level`.
    pub element: CyclotomicInt,
}

/// Smallest level of an element equivalent to `a` by a root of unity.
pub fn minimal_level(a: &CyclotomicInt) -> MinimalLevel {
    let mut x = a.clone();
    let mut witness = RootOfUnity::one();
    if x.is_zero() {
        return MinimalLevel {
            level: 1,
            witness,
            element: CyclotomicInt::zero(1),
        };
    }
    'descend: loop {
        let n = x.level();
        for (p, _) in factorize(n as u64) {
            let p = p as u32;
            if let Some((j, lowered)) = descend_at(&x, p) {
                let pn = p.pow(crate::arith::valuation(n as u64, p as u64));
                witness = witness.mul(RootOfUnity::new(pn, -(j as i64)));
                x = lowered;
                continue 'descend;
            }
        }
        break;
    }
    MinimalLevel {
        level: x.level(),
        witness,
        element: x,
    }
}

/// Find `j` with `x * zeta_{p^n}^{-j}` in `Q(zeta_{N/p})`, returning it there.
fn descend_at(x: &CyclotomicInt, p: u32) -> Option<(u32, CyclotomicInt)> {
    let dec = x.p_decompose(p).ok()?;
    let parts = &dec.parts;
    if dec.exponent_n > 1 {
        let nz = dec.support();
        return match nz.as_slice() {
            [j] => Some((*j as u32, parts[*j].clone())),
            _ => None,
        };
    }
    // p exactly divides N: all parts other than eta_j must agree, and then
    // x * zeta_p^{-j} = eta_j - c.
    for j in 0..p as usize {
        let mut others = (0..p as usize).filter(|&i| i != j);
        let first = others.next()?;
        let c = &parts[first];
        if others.all(|i| parts[i].coeffs() == c.coeffs()) {
            return Some((j as u32, &parts[j] - c));
        }
    }
    None
}

/// Canonical monic polynomial identifying an equivalence class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EquivalenceKey {
    pub degree: usize,
    /// Highest degree first, leading 1 included.
    pub coefficients: Vec<BigInt>,
}

impl EquivalenceKey {
    pub fn from_coefficients(c: &[i64]) -> Self {
        EquivalenceKey {
            degree: c.len() - 1,
            coefficients: c.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.coefficients.iter().map(big_to_json).collect())
    }
}

pub(crate) fn big_to_json(c: &BigInt) -> serde_json::Value {
    match c.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(c.to_string()),
    }
}

impl Serialize for EquivalenceKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl fmt::Display for EquivalenceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree;
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let pow = d - i;
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            first = false;
            let show_mag = !mag.is_one() || pow == 0;
            if show_mag {
                write!(f, "{mag}")?;
            }
            match pow {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{pow}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Exponent `rho` with `sigma_k(b) = zeta_L^rho * b`, if any.
fn galois_root_ratio(b: &CyclotomicInt, k: u64, vals: &[(u64, (f64, f64))], anchor: usize) -> Option<u32> {
    let l = b.level() as u64;
    let (m, (br, bi)) = vals[anchor];
    // sigma_m(sigma_k b) = sigma_{mk}(b)
    let mk = (m * k) % l;
    let (sr, si) = b.embed_f64(mk as i64);
    let den = br * br + bi * bi;
    let rr = (sr * br + si * bi) / den;
    let ri = (si * br - sr * bi) / den;
    if ((rr * rr + ri * ri).sqrt() - 1.0).abs() > 1e-6 {
        return None;
    }
    let ang = ri.atan2(rr);
    let steps = (ang / std::f64::consts::TAU * l as f64).round() as i64;
    let m_inv = mod_inverse(m as i64, l as i64)?;
    let target = b.galois_apply(k as i64).ok()?;
    for delta in [0i64, 1, -1] {
        let rho = ((steps + delta) * m_inv).rem_euclid(l as i64);
        if b.mul_zeta(rho) == target {
            return Some(rho as u32);
        }
    }
    None
}

/// Perfect hash for equivalence: the least minimal polynomial of `a * zeta`
/// over roots of unity `zeta`, ordered by degree then coefficients.
pub fn equivalence_hash(a: &CyclotomicInt) -> EquivalenceKey {
    if a.is_zero() {
        return EquivalenceKey::from_coefficients(&[1, 0]);
    }
    let ml = minimal_level(a);
    let l = lcm(2, ml.level as u64) as u32;
    let beta = ml.element.raise(l).expect("multiple");
    let lu = l as u64;
    let unit_list = units(lu);
    let phi = unit_list.len();

    let vals: Vec<(u64, (f64, f64))> = unit_list
        .iter()
        .map(|&m| (m, beta.embed_f64(m as i64)))
        .collect();
    let anchor = (0..vals.len())
        .max_by(|&i, &j| {
            let a = vals[i].1 .0.hypot(vals[i].1 .1);
            let b = vals[j].1 .0.hypot(vals[j].1 .1);
            a.partial_cmp(&b).unwrap_or(Ordering::Equal)
        })
        .expect("nonempty");
    let rhos: Vec<(u64, u32)> = unit_list
        .iter()
        .filter_map(|&k| galois_root_ratio(&beta, k, &vals, anchor).map(|r| (k, r)))
        .collect();

    // Stabiliser of beta*zeta^t: k with rho_k = t(1 - k) mod L.
    let mut best_deg = usize::MAX;
    let mut cands: Vec<u32> = Vec::new();
    for t in 0..lu {
        let h = rhos
            .iter()
            .filter(|&&(k, r)| (t * ((lu + 1 - k % lu) % lu)) % lu == r as u64)
            .count();
        let deg = phi / h;
        match deg.cmp(&best_deg) {
            Ordering::Less => {
                best_deg = deg;
                cands = vec![t as u32];
            }
            Ordering::Equal => cands.push(t as u32),
            Ordering::Greater => {}
        }
    }
    let d = best_deg;
    let rel = BigInt::from(phi / d);
    let data = level_data(l);

    struct Cand {
        t: u32,
        p: Vec<BigInt>,
        e: Vec<BigInt>,
    }
    let mut live: Vec<Cand> = cands
        .into_iter()
        .map(|t| Cand {
            t,
            p: vec![BigInt::zero()],
            e: vec![BigInt::one()],
        })
        .collect();
    let mut coefficients = vec![BigInt::one()];
    let mut power = CyclotomicInt::one().raise(l).expect("multiple");
    for i in 1..=d {
        power = &power * &beta;
        let mut best: Option<BigInt> = None;
        let mut ci_all = Vec::with_capacity(live.len());
        for c in live.iter_mut() {
            let shift = (c.t as u64 * i as u64) % lu;
            let mut tr = BigInt::zero();
            for (j, coef) in power.coeffs().iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                let tv = data.trace[((j as u64 + shift) % lu) as usize];
                if tv != 0 {
                    tr += coef * tv;
                }
            }
            let (pi, rem) = tr.div_rem(&rel);
            debug_assert!(rem.is_zero());
            c.p.push(pi);
            // Newton: i e_i = sum_{m=1}^{i} (-1)^{m-1} e_{i-m} p_m
            let mut acc = BigInt::zero();
            for m in 1..=i {
                let term = &c.e[i - m] * &c.p[m];
                if m % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            let (ei, rem) = acc.div_rem(&BigInt::from(i));
            debug_assert!(rem.is_zero(), "Newton identity not integral");
            c.e.push(ei.clone());
            let ci = if i % 2 == 1 { -ei } else { ei };
            if best.as_ref().is_none_or(|b| &ci < b) {
                best = Some(ci.clone());
            }
            ci_all.push(ci);
        }
        let best = best.expect("nonempty");
        let mut idx = 0;
        live.retain(|_| {
            let keep = ci_all[idx] == best;
            idx += 1;
            keep
        });
        coefficients.push(best);
    }
    EquivalenceKey {
        degree: d,
        coefficients,
    }
}

/// Outcome of the minimal weight search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightResult {
    /// `a` is the sum of `witness` and of no shorter list of roots of unity.
    Found {
        weight: u32,
        witness: Vec<RootOfUnity>,
    },
    /// No representation with at most `bound` roots of unity.
    Exceeded { bound: u32 },
}

/// Least `n` such that `a` is a sum of `n` roots of unity.
pub fn minimal_weight(a: &CyclotomicInt, max_weight: Option<u32>) -> WeightResult {
    let bound = max_weight.unwrap_or(u32::MAX);
    match weight_search(a, bound) {
        Some(mut w) => {
            w.sort();
            WeightResult::Found {
                weight: w.len() as u32,
                witness: w,
            }
        }
        None => WeightResult::Exceeded { bound },
    }
}

fn weight_search(a: &CyclotomicInt, bound: u32) -> Option<Vec<RootOfUnity>> {
    if a.is_zero() {
        return Some(Vec::new());
    }
    if bound == 0 {
        return None;
    }
    let ml = minimal_level(a);
    let n0 = ml.level;
    let square = factorize(n0 as u64).into_iter().find(|&(_, e)| e > 1);
    let roots = if let Some((p, e)) = square {
        // Roots of unity split by coset of zeta_{p^e}, so weights add up.
        let dec = ml.element.p_decompose(p as u32).expect("p divides level");
        let pn = (p as u32).pow(e);
        let mut out = Vec::new();
        let nonzero = dec.x() as u32;
        let mut remaining_parts = nonzero;
        for (i, part) in dec.parts.iter().enumerate() {
            if part.is_zero() {
                continue;
            }
            remaining_parts -= 1;
            let used = out.len() as u32;
            let budget = bound.checked_sub(used + remaining_parts)?;
            let sub = weight_search(part, budget)?;
            let shift = RootOfUnity::new(pn, i as i64);
            out.extend(sub.into_iter().map(|r| r.mul(shift)));
        }
        out
    } else {
        brute_weight(&ml.element, bound)?
    };
    let back = ml.witness.inverse();
    Some(roots.into_iter().map(|r| r.mul(back)).collect())
}

/// Largest level for which sums of two roots are tabulated.
const PAIR_TABLE_LIMIT: u32 = 660;
/// Number of complex embeddings tracked for pruning.
const PRUNE_EMBEDDINGS: usize = 6;

struct WeightSearch<'a> {
    roots: &'a [Vec<i64>],
    singles: HashMap<&'a [i64], usize>,
    pairs: Option<HashMap<Vec<i64>, (usize, usize)>>,
    r_max: i64,
    /// `(cos, sin)` of `zeta^(k t)` per tracked embedding `k`, indexed by `t`.
    trig: Vec<Vec<(f64, f64)>>,
}

impl WeightSearch<'_> {
    /// Whether the residual is a sum of `left` more roots from index `start`
    /// followed by the leaf lookup of `leaf` roots.
    fn dfs(
        &self,
        residual: &mut Vec<i64>,
        emb: &mut [(f64, f64)],
        chosen: &mut Vec<usize>,
        start: usize,
        left: usize,
        leaf: usize,
    ) -> bool {
        if left == 0 {
            return match leaf {
                1 => self
                    .singles
                    .get(residual.as_slice())
                    .is_some_and(|&t| {
                        chosen.push(t);
                        true
                    }),
                _ => self
                    .pairs
                    .as_ref()
                    .expect("pair table")
                    .get(residual.as_slice())
                    .is_some_and(|&(t1, t2)| {
                        chosen.push(t1);
                        chosen.push(t2);
                        true
                    }),
            };
        }
        let total = (left + leaf) as i64;
        if residual.iter().any(|c| c.abs() > total * self.r_max) {
            return false;
        }
        // |sigma(residual)| <= number of roots still to place.
        let cap = (total as f64 + 1e-7).powi(2);
        if emb.iter().any(|&(x, y)| x * x + y * y > cap) {
            return false;
        }
        for t in start..self.roots.len() {
            for (r, v) in residual.iter_mut().zip(&self.roots[t]) {
                *r -= v;
            }
            for (e, tab) in emb.iter_mut().zip(&self.trig) {
                e.0 -= tab[t].0;
                e.1 -= tab[t].1;
            }
            chosen.push(t);
            if self.dfs(residual, emb, chosen, t, left - 1, leaf) {
                return true;
            }
            chosen.pop();
            for (r, v) in residual.iter_mut().zip(&self.roots[t]) {
                *r += v;
            }
            for (e, tab) in emb.iter_mut().zip(&self.trig) {
                e.0 += tab[t].0;
                e.1 += tab[t].1;
            }
        }
        false
    }
}

fn brute_weight(beta: &CyclotomicInt, bound: u32) -> Option<Vec<RootOfUnity>> {
    let l = lcm(2, beta.level() as u64) as u32;
    let b = beta.raise(l).expect("multiple");
    let target: Option<Vec<i64>> = b.coeffs().iter().map(|c| c.to_i64()).collect();
    let target = target?;
    let data = level_data(l);
    let roots: Vec<Vec<i64>> = (0..l as usize).map(|t| data.power_i64(t)).collect();
    let r_max = roots
        .iter()
        .flat_map(|v| v.iter().map(|c| c.abs()))
        .max()
        .unwrap_or(1)
        .max(1);
    let singles: HashMap<&[i64], usize> = roots
        .iter()
        .enumerate()
        .map(|(t, v)| (v.as_slice(), t))
        .collect();

    // N(a) >= house >= sqrt(M(a)), and each coefficient is at most n * r_max.
    let m = cassels_height(&b);
    let mut n_min = 1u32;
    while BigRational::from_integer(BigInt::from(n_min * n_min)) < m {
        n_min += 1;
    }
    let cmax = target.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0);
    n_min = n_min.max(cmax.div_ceil(r_max as u64) as u32);
    if n_min > bound {
        return None;
    }

    // Track the embeddings where the target is largest.
    let mut ks: Vec<(f64, u64)> = units(l as u64)
        .into_iter()
        .filter(|&k| 2 * k <= l as u64)
        .map(|k| {
            let (x, y) = b.embed_f64(k as i64);
            (x * x + y * y, k)
        })
        .collect();
    ks.sort_by(|a, b| b.0.total_cmp(&a.0));
    ks.truncate(PRUNE_EMBEDDINGS);
    let tau = std::f64::consts::TAU;
    let trig: Vec<Vec<(f64, f64)>> = ks
        .iter()
        .map(|&(_, k)| {
            (0..l as u64)
                .map(|t| {
                    let (s, c) = (tau * ((k * t) % l as u64) as f64 / l as f64).sin_cos();
                    (c, s)
                })
                .collect()
        })
        .collect();
    let emb0: Vec<(f64, f64)> = ks.iter().map(|&(_, k)| b.embed_f64(k as i64)).collect();

    let mut search = WeightSearch {
        roots: &roots,
        singles,
        pairs: None,
        r_max,
        trig,
    };
    for n in n_min..=bound {
        let leaf = if n >= 3 && l <= PAIR_TABLE_LIMIT { 2 } else { 1 };
        if leaf == 2 && search.pairs.is_none() {
            let mut pairs = HashMap::new();
            for t1 in 0..roots.len() {
                for t2 in t1..roots.len() {
                    let v: Vec<i64> = roots[t1].iter().zip(&roots[t2]).map(|(x, y)| x + y).collect();
                    pairs.entry(v).or_insert((t1, t2));
                }
            }
            search.pairs = Some(pairs);
        }
        let mut residual = target.clone();
        let mut emb = emb0.clone();
        let mut chosen = Vec::new();
        if search.dfs(&mut residual, &mut emb, &mut chosen, 0, n as usize - leaf, leaf) {
            return Some(
                chosen
                    .iter()
                    .map(|&t| RootOfUnity::new(l, t as i64))
                    .collect(),
            );
        }
    }
    None
}

/// Which Cassels family an element belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyMatch {
    /// Sum of at most two roots of unity.
    SumOfTwo,
    /// Equivalent to `1 + z - 1/z` for the given root `z`.
    OnePlusZetaMinusInverse(RootOfUnity),
    /// Equivalent to `(z5 + z5^4) + (z5^2 + z5^3) z` for the given `z`.
    GoldenPair(RootOfUnity),
}

pub fn golden_pair_element(z: &CyclotomicInt) -> CyclotomicInt {
    let a = CyclotomicInt::from_sparse(5, &[(1, 1), (4, 1)]).unwrap();
    let b = CyclotomicInt::from_sparse(5, &[(2, 1), (3, 1)]).unwrap();
    &a + &(&b * z)
}

pub fn one_plus_zeta_minus_inverse(z: &CyclotomicInt) -> CyclotomicInt {
    let one = CyclotomicInt::one();
    let zi = z.conjugate();
    &(&one + z) - &zi
}

/// Identify membership in the Cassels families.
pub fn cassels_form(a: &CyclotomicInt) -> Option<FamilyMatch> {
    if matches!(minimal_weight(a, Some(2)), WeightResult::Found { .. }) {
        return Some(FamilyMatch::SumOfTwo);
    }
    let ml = minimal_level(a);
    let l = lcm(2, ml.level as u64) as u32;
    let beta = ml.element.raise(l).expect("multiple");
    let g = &beta * &beta.conjugate();
    let delta = &CyclotomicInt::from_int(3) - &g;
    let (dr, _) = delta.embed_f64(1);
    // eta + 1/eta = 3 - a * conj(a), for eta in W.
    let t = (0..l).find(|&t| {
        let c = 2.0 * (std::f64::consts::TAU * t as f64 / l as f64).cos();
        (c - dr).abs() < 1e-6 && {
            let s = CyclotomicInt::from_sparse(l, &[(t as i64, 1), (-(t as i64), 1)]).unwrap();
            s == delta
        }
    })?;
    let key = equivalence_hash(a);
    if t % 2 == 0 {
        let root = CyclotomicInt::zeta(l, (t / 2) as i64);
        if equivalence_hash(&one_plus_zeta_minus_inverse(&root)) == key {
            return Some(FamilyMatch::OnePlusZetaMinusInverse(RootOfUnity::new(
                l,
                (t / 2) as i64,
            )));
        }
    }
    if ml.level % 5 == 0 {
        let eta = CyclotomicInt::zeta(l, t as i64);
        if equivalence_hash(&golden_pair_element(&eta)) == key {
            return Some(FamilyMatch::GoldenPair(RootOfUnity::new(l, t as i64)));
        }
    }
    None
}

/// True iff `a` is of one of the three Cassels forms.
pub fn cassels_form_test(a: &CyclotomicInt) -> bool {
    cassels_form(a).is_some()
}

/// Denominator of `(N - 4) / (2N)` in lowest terms.
pub fn n_prime(n: u32) -> u32 {
    assert!(n >= 1);
    let num = (n as i64 - 4).unsigned_abs();
    let den = 2 * n as u64;
    (den / gcd(num, den)) as u32
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FamilyTag {
    /// `1 + zeta_N`
    SumOfTwo,
    /// `1 + zeta_N - zeta_N^{-1}`
    OnePlusZetaMinusInverse,
    /// `(zeta_5 + zeta_5^4) + (zeta_5^2 + zeta_5^3) zeta_N`
    GoldenPair,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyForm {
    pub tag: FamilyTag,
    pub n: u32,
}

impl FamilyForm {
    pub fn element(&self) -> CyclotomicInt {
        let z = CyclotomicInt::zeta(self.n, 1);
        match self.tag {
            FamilyTag::SumOfTwo => &CyclotomicInt::one() + &z,
            FamilyTag::OnePlusZetaMinusInverse => one_plus_zeta_minus_inverse(&z),
            FamilyTag::GoldenPair => golden_pair_element(&z),
        }
    }
}

/// `c + zeta_m + zeta_m^{-1}`.
fn shifted_cosine(c: i64, m: u32) -> CyclotomicInt {
    CyclotomicInt::from_sparse(m, &[(0, c), (1, 1), (-1, 1)]).unwrap()
}

/// Exact `(|a|^2, castle)` for the instantiated family element.
pub fn family_values(form: FamilyForm) -> (CyclotomicInt, CyclotomicInt) {
    let n = form.n;
    match form.tag {
        FamilyTag::SumOfTwo => {
            let v = shifted_cosine(2, n);
            (v.clone(), v)
        }
        FamilyTag::OnePlusZetaMinusInverse => {
            let m = CyclotomicInt::from_sparse(n, &[(0, 3), (2, -1), (-2, -1)]).unwrap();
            (m, shifted_cosine(3, n_prime(n)))
        }
        FamilyTag::GoldenPair => {
            let m = CyclotomicInt::from_sparse(n, &[(0, 3), (1, -1), (-1, -1)]).unwrap();
            (m, shifted_cosine(3, n_prime(2 * n)))
        }
    }
}

/// `3 + 2 mu(N) / phi(N)`.
pub fn height_family_formula(n: u32) -> BigRational {
    let n = n.max(1) as u64;
    BigRational::from_integer(BigInt::from(3))
        + BigRational::new(BigInt::from(2 * mobius(n)), BigInt::from(euler_phi(n)))
}
