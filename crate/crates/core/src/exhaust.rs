//! Exhaustive search over short sums of roots of unity with small castle.
//!
//! Tuples are filtered by a binary64 evaluation of the castle against a
//! certified table of cosines and sines, and survivors are verified exactly.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{divisors, gcd, lcm};
use crate::interval::trig_table;
use crate::measures::{
    cassels_form, castle_cmp, equivalence_hash, EquivalenceKey, FamilyMatch,
};
use crate::tables::{fixtures, table1_index};
use crate::{CyclotomicInt, Error};

/// Bound on the error of every table entry.
pub const TABLE_ERROR: f64 = 1e-14;
/// Bound on the error of a float castle for at most eight summands.
pub const ERROR_BUDGET: f64 = 1e-10;
const ORACLE_PRECISION: u32 = 160;

#[derive(Clone, Debug)]
pub struct ExhaustJob {
    pub level: u64,
    pub weight: usize,
    pub n_prime: u64,
    pub float_threshold: f64,
    pub exact_threshold: BigRational,
}

impl ExhaustJob {
    pub fn new(level: u64, weight: usize) -> Self {
        assert!(level >= 1);
        ExhaustJob {
            level,
            weight,
            n_prime: lcm(2, level),
            float_threshold: 5.1,
            exact_threshold: BigRational::new(BigInt::from(501), BigInt::from(100)),
        }
    }

    pub fn preset(name: &str) -> Option<(Self, bool)> {
        fixtures()
            .exhaust_presets
            .iter()
            .find(|p| p.name == name)
            .map(|p| (ExhaustJob::new(p.level, p.weight), p.extended))
    }
}

pub struct CertifiedTrigTable {
    pub n_prime: u64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
    /// Largest observed deviation from the interval oracle, rounded up.
    pub observed_error: f64,
    pub certified_error: f64,
    /// `k` with `0 < k <= N'/2` and `gcd(k, N') = 1`.
    half_units: Vec<u64>,
}

fn deviation(x: f64, lo: &BigRational, hi: &BigRational) -> BigRational {
    let r = BigRational::from_float(x).expect("finite");
    let a = (&r - lo).abs();
    let b = (&r - hi).abs();
    if a > b {
        a
    } else {
        b
    }
}

pub fn build_trig_table(n_prime: u64) -> Result<CertifiedTrigTable, Error> {
    if n_prime < 2 {
        return Err(Error::Invalid("N' must be at least 2".into()));
    }
    let n = n_prime as f64;
    let (cos, sin): (Vec<f64>, Vec<f64>) = (0..n_prime)
        .map(|j| (std::f64::consts::TAU * j as f64 / n).sin_cos())
        .map(|(s, c)| (c, s))
        .unzip();
    let oracle = trig_table(n_prime as u32, ORACLE_PRECISION);
    let bound = BigRational::from_float(TABLE_ERROR).unwrap();
    let errs: Vec<Result<BigRational, usize>> = (0..n_prime as usize)
        .into_par_iter()
        .map(|j| {
            let (c, s) = &oracle[j];
            let e1 = deviation(cos[j], &c.lo_rational(), &c.hi_rational());
            let e2 = deviation(sin[j], &s.lo_rational(), &s.hi_rational());
            let e = if e1 > e2 { e1 } else { e2 };
            if e <= bound {
                Ok(e)
            } else {
                Err(j)
            }
        })
        .collect();
    let mut worst = BigRational::from_integer(BigInt::from(0));
    for e in errs {
        match e {
            Ok(e) => {
                if e > worst {
                    worst = e;
                }
            }
            Err(index) => return Err(Error::TrigCertification { index }),
        }
    }
    let observed = num_traits::ToPrimitive::to_f64(&worst).unwrap_or(TABLE_ERROR);
    let half_units = (1..=n_prime / 2).filter(|&k| gcd(k, n_prime) == 1).collect();
    Ok(CertifiedTrigTable {
        n_prime,
        cos,
        sin,
        observed_error: (observed * (1.0 + 1e-12)).min(TABLE_ERROR),
        certified_error: TABLE_ERROR,
        half_units,
    })
}

impl CertifiedTrigTable {
    /// The castle, or `None` as soon as some embedding exceeds `cutoff`.
    pub fn castle_below(&self, tuple: &[u64], cutoff: f64) -> Option<f64> {
        let n = self.n_prime;
        let mut best = f64::NEG_INFINITY;
        for &k in &self.half_units {
            let mut c = 0.0;
            let mut s = 0.0;
            for &j in tuple {
                let idx = ((k * j) % n) as usize;
                c += self.cos[idx];
                s += self.sin[idx];
            }
            let v = c * c + s * s;
            if v > cutoff {
                return None;
            }
            if v > best {
                best = v;
            }
        }
        Some(best)
    }
}

/// Max over embeddings of `|sum zeta^{k j}|^2`, in binary64.
pub fn float_castle(tuple: &[u64], table: &CertifiedTrigTable) -> f64 {
    table.castle_below(tuple, f64::INFINITY).expect("no cutoff")
}

/// One unit of parallel work: the prefix `(n', d, j_3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Shard {
    pub np: usize,
    pub d: u64,
    pub j3: u64,
}

struct Constraints {
    n_prime: u64,
    /// `(modulus of the coset, number of distinct values that is forbidden)`.
    cosets: Vec<(u64, usize)>,
    five_divides: bool,
}

impl Constraints {
    fn new(job: &ExhaustJob) -> Self {
        let np = job.n_prime;
        let cosets = [(2, 2), (3, 2), (5, 3), (7, 4)]
            .into_iter()
            .filter(|&(q, _)| np % q == 0)
            .map(|(q, c)| (np / q, c))
            .collect();
        Constraints {
            n_prime: np,
            cosets,
            five_divides: job.level % 5 == 0,
        }
    }

    /// Whether appending `v` to `prefix` keeps every coset under its limit.
    fn coset_ok(&self, prefix: &[u64], v: u64) -> bool {
        self.cosets.iter().all(|&(m, limit)| {
            let mut distinct: Vec<u64> = prefix
                .iter()
                .copied()
                .filter(|&x| x % m == v % m && x != v)
                .collect();
            distinct.sort_unstable();
            distinct.dedup();
            distinct.len() + 1 < limit
        })
    }

    fn form2(&self, t: &[u64]) -> bool {
        let n = self.n_prime;
        let half = n / 2;
        [(0, 1, 2), (0, 2, 1), (1, 2, 0)]
            .iter()
            .any(|&(a, b, c)| (t[a] + t[b]) % n == (2 * t[c] + half) % n)
    }

    fn form3(&self, t: &[u64]) -> bool {
        let n = self.n_prime as i64;
        let fifth = n / 5;
        let perms = [
            [0, 1, 2, 3],
            [0, 2, 1, 3],
            [0, 3, 1, 2],
        ];
        // Orientation of each pair does not matter: swapping within a pair
        // negates one difference, which permutes the two sums up to sign.
        perms.iter().any(|p| {
            let a = t[p[0]] as i64 - t[p[1]] as i64;
            let b = t[p[2]] as i64 - t[p[3]] as i64;
            a % fifth == 0
                && b % fifth == 0
                && (a + b).rem_euclid(n) != 0
                && (a - b).rem_euclid(n) != 0
        })
    }
}

fn shards(job: &ExhaustJob) -> Vec<Shard> {
    let np = job.n_prime;
    let mut out = Vec::new();
    for n_terms in 3..=job.weight {
        for d in divisors(np).into_iter().filter(|&d| d < np) {
            for j3 in 0..np {
                if gcd(j3, np) >= d {
                    out.push(Shard { np: n_terms, d, j3 });
                }
            }
        }
    }
    out
}

fn for_each_in_shard(job: &ExhaustJob, cons: &Constraints, shard: Shard, f: &mut dyn FnMut(&[u64])) {
    let np = job.n_prime;
    let d = shard.d;
    let mut t = vec![0u64, d];
    if !cons.coset_ok(&t[..1], d) || !cons.coset_ok(&t, shard.j3) {
        return;
    }
    // Largest allowed value: N' - j_last > j_3 - d.
    let limit = np as i64 - (shard.j3 as i64 - d as i64);
    if shard.j3 as i64 >= limit {
        return;
    }
    let allowed: Vec<u64> = (0..np).filter(|&v| gcd(v, np) >= d).collect();
    t.push(shard.j3);
    fn rec(
        t: &mut Vec<u64>,
        target: usize,
        allowed: &[u64],
        limit: i64,
        cons: &Constraints,
        f: &mut dyn FnMut(&[u64]),
    ) {
        if t.len() == target {
            if target == 3 && cons.form2(t) {
                return;
            }
            if target == 4 && cons.five_divides && cons.form3(t) {
                return;
            }
            f(t);
            return;
        }
        let last = *t.last().unwrap();
        let start = allowed.partition_point(|&v| v < last);
        for &v in &allowed[start..] {
            if v as i64 >= limit {
                break;
            }
            if !cons.coset_ok(t, v) {
                continue;
            }
            t.push(v);
            rec(t, target, allowed, limit, cons, f);
            t.pop();
        }
    }
    rec(&mut t, shard.np, &allowed, limit, cons, f);
}

/// All symmetry-reduced tuples of the job, in enumeration order.
pub fn admissible_tuples(job: &ExhaustJob) -> impl Iterator<Item = Vec<u64>> + '_ {
    let cons = Constraints::new(job);
    shards(job).into_iter().flat_map(move |s| {
        let mut v = Vec::new();
        for_each_in_shard(job, &cons, s, &mut |t| v.push(t.to_vec()));
        v
    })
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Form1,
    Form2,
    Form3,
    TableOne(usize),
    RejectedExact,
    New,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::TableOne(i) => write!(f, "TableOne({i})"),
            v => write!(f, "{v:?}"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateRecord {
    pub np: usize,
    pub tuple: Vec<u64>,
    pub float_castle: f64,
    pub verdict: Verdict,
    #[serde(serialize_with = "key_coefficients")]
    pub hash: EquivalenceKey,
}

fn key_coefficients<S: serde::Serializer>(k: &EquivalenceKey, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&k.to_json(), s)
}

/// The sum of `zeta_{N'}^j`, built at the least level containing every term.
fn element_of(tuple: &[u64], n_prime: u64) -> CyclotomicInt {
    let g = tuple.iter().fold(n_prime, |g, &j| gcd(g, j));
    let terms: Vec<(i64, i64)> = tuple.iter().map(|&j| ((j / g) as i64, 1)).collect();
    CyclotomicInt::from_sparse((n_prime / g) as u32, &terms).expect("valid level")
}

/// Exact classification of one equivalence class.
fn classify(a: &CyclotomicInt, key: &EquivalenceKey, job: &ExhaustJob) -> Verdict {
    if castle_cmp(a, &job.exact_threshold) != std::cmp::Ordering::Less {
        return Verdict::RejectedExact;
    }
    match cassels_form(a) {
        Some(FamilyMatch::SumOfTwo) => Verdict::Form1,
        Some(FamilyMatch::OnePlusZetaMinusInverse(_)) => Verdict::Form2,
        Some(FamilyMatch::GoldenPair(_)) => Verdict::Form3,
        None => match table1_index(key) {
            Some(i) => Verdict::TableOne(i),
            None => Verdict::New,
        },
    }
}

pub fn verify_candidate(tuple: &[u64], job: &ExhaustJob) -> CandidateRecord {
    let table = build_trig_table(job.n_prime).expect("trig table");
    let a = element_of(tuple, job.n_prime);
    let key = equivalence_hash(&a);
    CandidateRecord {
        np: tuple.len(),
        tuple: tuple.to_vec(),
        float_castle: float_castle(tuple, &table),
        verdict: classify(&a, &key, job),
        hash: key,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExhaustReport {
    pub level: u64,
    pub weight: usize,
    pub n_prime: u64,
    pub float_threshold: f64,
    pub exact_threshold: String,
    pub tuples_enumerated: u64,
    pub survivors: usize,
    pub classes: usize,
    pub counts: BTreeMap<String, usize>,
    pub table_error: f64,
    pub error_budget: f64,
    #[serde(skip)]
    pub records: Vec<CandidateRecord>,
    #[serde(skip)]
    pub wall_time_secs: f64,
}

impl ExhaustReport {
    pub fn new_count(&self) -> usize {
        self.records.iter().filter(|r| r.verdict == Verdict::New).count()
    }

    /// One JSON object per record followed by a summary line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("serialize"));
            out.push('\n');
        }
        let summary = serde_json::json!({ "summary": self });
        out.push_str(&summary.to_string());
        out.push('\n');
        out
    }
}

pub fn run_job(job: &ExhaustJob) -> Result<ExhaustReport, Error> {
    let start = std::time::Instant::now();
    let table = build_trig_table(job.n_prime)?;
    let cons = Constraints::new(job);
    let cutoff = job.float_threshold;
    let per_shard: Vec<(u64, Vec<(Vec<u64>, f64)>)> = shards(job)
        .into_par_iter()
        .map(|s| {
            let mut count = 0u64;
            let mut hits = Vec::new();
            for_each_in_shard(job, &cons, s, &mut |t| {
                count += 1;
                if let Some(v) = table.castle_below(t, cutoff) {
                    hits.push((t.to_vec(), v));
                }
            });
            (count, hits)
        })
        .collect();
    let tuples_enumerated = per_shard.iter().map(|s| s.0).sum();
    let mut survivors: Vec<(Vec<u64>, f64)> = per_shard.into_iter().flat_map(|s| s.1).collect();
    survivors.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));

    let keyed: Vec<(EquivalenceKey, CyclotomicInt)> = survivors
        .par_iter()
        .map(|(t, _)| {
            let a = element_of(t, job.n_prime);
            (equivalence_hash(&a), a)
        })
        .collect();
    // Castle and form membership are class invariants, so classify once per class.
    let mut reps: BTreeMap<&EquivalenceKey, &CyclotomicInt> = BTreeMap::new();
    for (k, a) in &keyed {
        reps.entry(k).or_insert(a);
    }
    let verdicts: HashMap<&EquivalenceKey, Verdict> = reps
        .par_iter()
        .map(|(k, a)| (*k, classify(a, k, job)))
        .collect();
    let records: Vec<CandidateRecord> = survivors
        .iter()
        .zip(&keyed)
        .map(|((t, v), (k, _))| CandidateRecord {
            np: t.len(),
            tuple: t.clone(),
            float_castle: *v,
            verdict: verdicts[k].clone(),
            hash: k.clone(),
        })
        .collect();
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for r in &records {
        let name = match r.verdict {
            Verdict::TableOne(_) => "TableOne".to_string(),
            ref v => v.to_string(),
        };
        *counts.entry(name).or_default() += 1;
    }
    Ok(ExhaustReport {
        level: job.level,
        weight: job.weight,
        n_prime: job.n_prime,
        float_threshold: job.float_threshold,
        exact_threshold: job.exact_threshold.to_string(),
        tuples_enumerated,
        survivors: records.len(),
        classes: verdicts.len(),
        counts,
        table_error: table.observed_error,
        error_budget: ERROR_BUDGET,
        records,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

/// Classes with exact castle below the threshold and outside the Cassels
/// families, over every multiset of `weight` exponents modulo `N'`.
pub fn brute_force_classes(job: &ExhaustJob) -> BTreeSet<EquivalenceKey> {
    let np = job.n_prime;
    let mut tuples = Vec::new();
    let mut cur = Vec::new();
    fn rec(np: u64, k: usize, start: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..np {
            cur.push(v);
            rec(np, k, v, cur, out);
            cur.pop();
        }
    }
    rec(np, job.weight, 0, &mut cur, &mut tuples);
    let keys: BTreeSet<EquivalenceKey> = tuples
        .par_iter()
        .map(|t| element_of(t, np))
        .filter(|a| !a.is_zero() && castle_cmp(a, &job.exact_threshold) == std::cmp::Ordering::Less)
        .map(|a| equivalence_hash(&a))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    keys.into_iter()
        .filter(|k| {
            let a = tuples
                .iter()
                .map(|t| element_of(t, np))
                .find(|a| !a.is_zero() && equivalence_hash(a) == *k)
                .expect("representative");
            cassels_form(&a).is_none()
        })
        .collect()
}

/// Classes of exact survivors of a reduced run that lie outside the Cassels families.
pub fn exceptional_classes(report: &ExhaustReport) -> BTreeSet<EquivalenceKey> {
    report
        .records
        .iter()
        .filter(|r| matches!(r.verdict, Verdict::TableOne(_) | Verdict::New))
        .map(|r| r.hash.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trig_table_small() {
        let t = build_trig_table(4).unwrap();
        assert_eq!((t.cos[0], t.sin[0]), (1.0, 0.0));
        assert!(t.cos[1].abs() <= 1e-14);
        assert_eq!(t.sin[1], 1.0);
    }

    #[test]
    fn float_castle_examples() {
        let t = build_trig_table(4).unwrap();
        assert!((float_castle(&[0, 1], &t) - 2.0).abs() < 1e-12);
        let t = build_trig_table(70).unwrap();
        let v = float_castle(&[0, 1, 10, 29], &t);
        assert!((v - 5.01766).abs() < 1e-5, "{v}");
    }

    #[test]
    fn tuple_constraints() {
        let job = ExhaustJob::new(31, 3);
        let all: Vec<Vec<u64>> = admissible_tuples(&job).collect();
        assert!(all.contains(&vec![0, 1, 3]));
        for t in &all {
            assert!(t.iter().any(|&j| j != t[0]));
            for a in t {
                for b in t {
                    assert_ne!((a + 62 - b) % 62, 31);
                }
            }
        }
    }

    #[test]
    fn verify_examples() {
        let job = ExhaustJob::new(24, 3);
        assert_eq!(verify_candidate(&[0, 1, 7], &job).verdict, Verdict::TableOne(19));
        let job = ExhaustJob::new(35, 4);
        assert_eq!(
            verify_candidate(&[0, 1, 10, 29], &job).verdict,
            Verdict::RejectedExact
        );
    }
}
