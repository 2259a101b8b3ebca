//! Embedded reference data and the pipelines that re-verify it.
//!
//! The data file `data/fixtures.json` is versioned by `schema_version`.
//! Elements are written as nested expressions:
//!
//! * `{"level": L, "terms": [[e, c], ...]}` is `sum c * zeta_L^e`;
//! * `{"product": [x, y, ...]}`, `{"sum": [x, y, ...]}` and `{"neg": x}`.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{euler_phi, kronecker, mobius, units};
use crate::combinatorics::{
    graph_property_holds, hadamard_bound, mod_p2_property_holds, singleton_difference_holds,
};
use crate::measures::{
    cassels_form_test, cassels_height, castle_equals, equivalence_hash, minimal_level,
    minimal_weight, EquivalenceKey, FamilyForm, FamilyTag, WeightResult,
};
use crate::splitting::{multiplicative_order, splitting_profile, uk_box};
use crate::{arith, CyclotomicInt, Error};

pub const SCHEMA_VERSION: u32 = 1;

const FIXTURES_JSON: &str = include_str!("../data/fixtures.json");

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum ElementSpec {
    Sparse { level: u32, terms: Vec<(i64, i64)> },
    Product { product: Vec<ElementSpec> },
    Sum { sum: Vec<ElementSpec> },
    Neg { neg: Box<ElementSpec> },
}

impl ElementSpec {
    pub fn build(&self) -> Result<CyclotomicInt, Error> {
        Ok(match self {
            ElementSpec::Sparse { level, terms } => CyclotomicInt::from_sparse(*level, terms)?,
            ElementSpec::Product { product } => {
                let mut acc = CyclotomicInt::one();
                for f in product {
                    acc = &acc * &f.build()?;
                }
                acc
            }
            ElementSpec::Sum { sum } => {
                let mut acc = CyclotomicInt::zero(1);
                for f in sum {
                    acc = &acc + &f.build()?;
                }
                acc
            }
            ElementSpec::Neg { neg } => -&neg.build()?,
        })
    }
}

/// Castle values written structurally rather than as decimals.
#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CastleSpec {
    /// `1 + 4 cos^2(pi/m) = 3 + zeta_m + zeta_m^{-1}`
    OnePlusFourCosSq { m: u32 },
    /// `4 cos^2(pi/m) = 2 + zeta_m + zeta_m^{-1}`
    FourCosSq { m: u32 },
    /// `(5 + sqrt(d)) / 2` for a positive fundamental discriminant `d`
    Surd { d: u32 },
}

impl CastleSpec {
    pub fn value(&self) -> CyclotomicInt {
        match *self {
            CastleSpec::OnePlusFourCosSq { m } => {
                CyclotomicInt::from_sparse(m, &[(0, 3), (1, 1), (-1, 1)]).unwrap()
            }
            CastleSpec::FourCosSq { m } => {
                CyclotomicInt::from_sparse(m, &[(0, 2), (1, 1), (-1, 1)]).unwrap()
            }
            CastleSpec::Surd { d } => {
                // The half Gauss sum over residues is (mu(d) + sqrt(d)) / 2.
                let mut terms: Vec<(i64, i64)> = units(d as u64)
                    .into_iter()
                    .filter(|&a| kronecker(d as i64, a) == 1)
                    .map(|a| (a as i64, 1))
                    .collect();
                terms.push((0, (5 - mobius(d as u64)) / 2));
                CyclotomicInt::from_sparse(d, &terms).unwrap()
            }
        }
    }
}

impl std::fmt::Display for CastleSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CastleSpec::OnePlusFourCosSq { m } => write!(f, "1+4cos^2(pi/{m})"),
            CastleSpec::FourCosSq { m } => write!(f, "4cos^2(pi/{m})"),
            CastleSpec::Surd { d } => write!(f, "(5+sqrt({d}))/2"),
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct ExceptionalEntry {
    pub level: u32,
    pub castle: CastleSpec,
    pub height: String,
    pub element: ElementSpec,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct WeightBoundEntry {
    pub n: u32,
    pub height: String,
    pub elements: Vec<ElementSpec>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct MatchingEntry {
    pub element: ElementSpec,
    /// Monic, leading coefficient first.
    pub hash: Vec<i64>,
    pub robinson_item: String,
    pub partner: Option<ElementSpec>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct OrderRow {
    pub p: u64,
    /// `None` where `p` divides the modulus.
    pub orders: Vec<Option<u64>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct OrderTable {
    pub moduli: Vec<u64>,
    pub rows: Vec<OrderRow>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct SplittingRow {
    pub c: u32,
    pub p: u64,
    pub m: u64,
    pub level: u64,
    pub alpha: String,
    pub self_conjugate: bool,
    pub t_size: u64,
    /// One axis of the box; `None` when the box is a single point.
    pub uk_axis: Option<Vec<i64>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct PresetSpec {
    pub name: String,
    pub level: u64,
    pub weight: usize,
    pub extended: bool,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct DifferenceLemmas {
    /// `(X, p0)`
    pub singleton: Vec<(usize, u64)>,
    /// `(X, p)`
    pub singleton_counterexamples: Vec<(usize, u64)>,
    /// `(p, X)`
    pub mod_p2: Vec<(u64, usize)>,
    /// `(p, X)`
    pub graph: Vec<(u64, usize)>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct Fixtures {
    pub schema_version: u32,
    pub table1: Vec<ExceptionalEntry>,
    pub table2: Vec<WeightBoundEntry>,
    pub table3: Vec<MatchingEntry>,
    pub order_table: OrderTable,
    pub table4: Vec<SplittingRow>,
    pub exhaust_presets: Vec<PresetSpec>,
    pub difference_lemmas: DifferenceLemmas,
}

pub fn fixtures() -> &'static Fixtures {
    static F: OnceLock<Fixtures> = OnceLock::new();
    F.get_or_init(|| {
        let f: Fixtures = serde_json::from_str(FIXTURES_JSON).expect("embedded fixtures parse");
        assert_eq!(f.schema_version, SCHEMA_VERSION);
        f
    })
}

/// Hashes of the Table 1 entries, by row.
pub fn table1_keys() -> &'static [EquivalenceKey] {
    static K: OnceLock<Vec<EquivalenceKey>> = OnceLock::new();
    K.get_or_init(|| {
        fixtures()
            .table1
            .par_iter()
            .map(|e| equivalence_hash(&e.element.build().expect("fixture element")))
            .collect()
    })
}

pub fn table1_index(key: &EquivalenceKey) -> Option<usize> {
    table1_keys().iter().position(|k| k == key)
}

pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    BigRational::from_str(s.trim()).map_err(|e| Error::Parse(format!("{s}: {e}")))
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn failed(name: &str, e: &Error) -> Self {
        Check::new(name, false, e.to_string())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RowReport {
    pub label: String,
    pub checks: Vec<Check>,
}

impl RowReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub table: String,
    pub rows: Vec<RowReport>,
    pub passed: bool,
}

impl TableReport {
    fn new(table: &str, rows: Vec<RowReport>) -> Self {
        let passed = rows.iter().all(RowReport::passed);
        TableReport {
            table: table.into(),
            rows,
            passed,
        }
    }

    pub fn rows_passed(&self) -> usize {
        self.rows.iter().filter(|r| r.passed()).count()
    }
}

impl std::fmt::Display for TableReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in &self.rows {
            let mark = if r.passed() { "ok  " } else { "FAIL" };
            write!(f, "{mark} {}", r.label)?;
            for c in r.checks.iter().filter(|c| !c.passed) {
                write!(f, "  [{}: {}]", c.name, c.detail)?;
            }
            writeln!(f)?;
        }
        write!(
            f,
            "{}: {}/{} rows pass",
            self.table,
            self.rows_passed(),
            self.rows.len()
        )
    }
}

fn check_height(a: &CyclotomicInt, expected: &str) -> Check {
    match parse_rational(expected) {
        Ok(q) => {
            let h = cassels_height(a);
            Check::new("height", h == q, format!("computed {h}, expected {q}"))
        }
        Err(e) => Check::failed("height", &e),
    }
}

fn table1_row(e: &ExceptionalEntry) -> RowReport {
    let label = format!("level {} castle {}", e.level, e.castle);
    let mut checks = Vec::new();
    let a = match e.element.build() {
        Ok(a) => a,
        Err(err) => {
            return RowReport {
                label,
                checks: vec![Check::failed("build", &err)],
            }
        }
    };
    let integrity = match parse_rational(&e.height) {
        Ok(h) => {
            let phi = BigInt::from(euler_phi(e.level as u64));
            let den_ok = (&phi % h.denom()) == BigInt::from(0);
            let exps_ok = match &e.element {
                ElementSpec::Sparse { level, terms } => {
                    *level == e.level && terms.iter().all(|&(x, _)| x >= 0 && x < *level as i64)
                }
                _ => true,
            };
            Check::new("fixture", den_ok && exps_ok, "stated level and height denominator")
        }
        Err(err) => Check::failed("fixture", &err),
    };
    checks.push(integrity);
    checks.push(match castle_equals(&a, &e.castle.value()) {
        Ok(b) => Check::new("castle", b, format!("castle = {}", e.castle)),
        Err(err) => Check::failed("castle", &err),
    });
    checks.push(check_height(&a, &e.height));
    let ml = minimal_level(&a).level;
    checks.push(Check::new(
        "minimal_level",
        ml == e.level,
        format!("computed {ml}, expected {}", e.level),
    ));
    let form = cassels_form_test(&a);
    checks.push(Check::new("not_cassels_form", !form, format!("form test {form}")));
    RowReport { label, checks }
}

pub fn verify_table1() -> TableReport {
    let fx = fixtures();
    let mut rows: Vec<RowReport> = fx.table1.par_iter().map(table1_row).collect();
    let keys = table1_keys();
    let mut seen: BTreeMap<&EquivalenceKey, usize> = BTreeMap::new();
    let mut clashes = Vec::new();
    for (i, k) in keys.iter().enumerate() {
        if let Some(j) = seen.insert(k, i) {
            clashes.push(format!("rows {j} and {i}"));
        }
    }
    rows.push(RowReport {
        label: format!("pairwise distinct hashes ({} entries)", keys.len()),
        checks: vec![Check::new(
            "distinct_hashes",
            clashes.is_empty(),
            clashes.join(", "),
        )],
    });
    TableReport::new("table1", rows)
}

fn table2_row(e: &WeightBoundEntry) -> RowReport {
    let mut checks = Vec::new();
    for (i, spec) in e.elements.iter().enumerate() {
        let a = match spec.build() {
            Ok(a) => a,
            Err(err) => {
                checks.push(Check::failed("build", &err));
                continue;
            }
        };
        let mut c = check_height(&a, &e.height);
        c.name = format!("height[{i}]");
        checks.push(c);
        if e.n <= 4 {
            let w = minimal_weight(&a, Some(e.n));
            let ok = matches!(w, WeightResult::Found { weight, .. } if weight == e.n);
            checks.push(Check::new(
                &format!("weight[{i}]"),
                ok,
                format!("{w:?}").chars().take(120).collect::<String>(),
            ));
        }
    }
    RowReport {
        label: format!("n = {} height {}", e.n, e.height),
        checks,
    }
}

pub fn verify_table2() -> TableReport {
    let rows = fixtures().table2.par_iter().map(table2_row).collect();
    TableReport::new("table2", rows)
}

fn table3_row(e: &MatchingEntry) -> RowReport {
    let expected = EquivalenceKey::from_coefficients(&e.hash);
    let mut checks = Vec::new();
    let mut hash_check = |name: &str, spec: &ElementSpec| match spec.build() {
        Ok(a) => {
            let k = equivalence_hash(&a);
            checks.push(Check::new(name, k == expected, format!("computed {k}")));
        }
        Err(err) => checks.push(Check::failed(name, &err)),
    };
    hash_check("hash", &e.element);
    if let Some(p) = &e.partner {
        hash_check("partner_hash", p);
    }
    RowReport {
        label: format!("{} -> {}", e.robinson_item, expected),
        checks,
    }
}

pub fn verify_table3() -> TableReport {
    let rows = fixtures().table3.par_iter().map(table3_row).collect();
    TableReport::new("table3", rows)
}

/// Minimal level of each family element according to the case analysis.
pub fn expected_family_level(tag: FamilyTag, n: u32) -> u32 {
    let np = if n % 4 == 2 { n / 2 } else { n };
    match tag {
        FamilyTag::SumOfTwo => {
            if n == 3 {
                1
            } else {
                np
            }
        }
        FamilyTag::OnePlusZetaMinusInverse => match n {
            3 | 6 => 1,
            12 => 4,
            _ => np,
        },
        FamilyTag::GoldenPair => {
            if n == 1 {
                1
            } else {
                arith::lcm(5, np as u64) as u32
            }
        }
    }
}

pub fn verify_family_levels(bound: u32) -> TableReport {
    let tags = [
        FamilyTag::SumOfTwo,
        FamilyTag::OnePlusZetaMinusInverse,
        FamilyTag::GoldenPair,
    ];
    let rows = tags
        .iter()
        .map(|&tag| {
            let checks: Vec<Check> = (1..=bound)
                .into_par_iter()
                .map(|n| {
                    let got = minimal_level(&FamilyForm { tag, n }.element()).level;
                    let want = expected_family_level(tag, n);
                    Check::new(
                        &format!("N={n}"),
                        got == want,
                        format!("computed {got}, expected {want}"),
                    )
                })
                .collect();
            RowReport {
                label: format!("{tag:?} for N <= {bound}"),
                checks,
            }
        })
        .collect();
    TableReport::new("families", rows)
}

pub fn verify_splitting() -> TableReport {
    let fx = fixtures();
    let mut rows = Vec::new();
    for row in &fx.order_table.rows {
        let checks = fx
            .order_table
            .moduli
            .iter()
            .zip(&row.orders)
            .map(|(&m, want)| {
                let got = multiplicative_order(row.p as i64, m).ok();
                Check::new(
                    &format!("mod {m}"),
                    got == *want,
                    format!("computed {got:?}, expected {want:?}"),
                )
            })
            .collect();
        rows.push(RowReport {
            label: format!("orders of p = {}", row.p),
            checks,
        });
    }
    for r in &fx.table4 {
        let mut checks = Vec::new();
        match splitting_profile(r.level, r.p) {
            Ok(prof) => {
                checks.push(Check::new(
                    "t_size",
                    prof.t_size == r.t_size,
                    format!("computed {}, expected {}", prof.t_size, r.t_size),
                ));
                match uk_box(&prof, r.m, r.self_conjugate) {
                    Ok(b) => {
                        let ok = match &r.uk_axis {
                            Some(axis) => b.axis() == *axis && b.dims == 1,
                            None => b.size() == 1,
                        };
                        checks.push(Check::new(
                            "uk",
                            ok,
                            format!("computed [{}, {}]^{}", b.lo, b.hi, b.dims),
                        ));
                    }
                    Err(e) => checks.push(Check::failed("uk", &e)),
                }
            }
            Err(e) => checks.push(Check::failed("profile", &e)),
        }
        rows.push(RowReport {
            label: format!("c = {} N = {} ({})", r.c, r.level, r.alpha),
            checks,
        });
    }
    TableReport::new("splitting", rows)
}

/// Exhaustive checks of the three difference-set lemmas on their listed parameters.
pub fn verify_difference_lemmas() -> TableReport {
    let dl = &fixtures().difference_lemmas;
    let mut jobs: Vec<(String, Box<dyn Fn() -> (bool, String) + Send + Sync>)> = Vec::new();
    for &(x, p0) in &dl.singleton {
        let top = hadamard_bound(x as u32).floor() as u64;
        jobs.push((
            format!("singleton X={x}, {p0} <= p <= {top}"),
            Box::new(move || {
                let mut bad = Vec::new();
                let mut checked = 0;
                for p in (p0..=top).filter(|&p| arith::is_prime(p) && p >= x as u64) {
                    let o = singleton_difference_holds(p, x);
                    checked += 1;
                    if !o.holds {
                        bad.push(format!("p={p} {:?}", o.witness));
                    }
                }
                (bad.is_empty(), format!("{checked} primes; {}", bad.join("; ")))
            }),
        ));
    }
    for &(x, p) in &dl.singleton_counterexamples {
        jobs.push((
            format!("singleton counterexample X={x}, p={p}"),
            Box::new(move || {
                let o = singleton_difference_holds(p, x);
                (!o.holds, format!("witness {:?}", o.witness))
            }),
        ));
    }
    for &(p, x) in &dl.mod_p2 {
        jobs.push((
            format!("mod p^2 p={p}, X={x}"),
            Box::new(move || {
                let o = mod_p2_property_holds(p, x);
                (o.holds, format!("{} subsets {:?}", o.subsets_checked, o.witness))
            }),
        ));
    }
    for &(p, x) in &dl.graph {
        jobs.push((
            format!("graph p={p}, X={x}"),
            Box::new(move || {
                let o = graph_property_holds(p, x);
                (o.holds, format!("{} subsets {:?}", o.subsets_checked, o.witness))
            }),
        ));
    }
    let rows = jobs
        .into_iter()
        .map(|(label, f)| {
            let (ok, detail) = f();
            RowReport {
                label,
                checks: vec![Check::new("lemma", ok, detail)],
            }
        })
        .collect();
    TableReport::new("difference_lemmas", rows)
}
