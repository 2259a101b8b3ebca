use std::collections::BTreeSet;

use smallhouse_core::exhaust::{
    brute_force_classes, build_trig_table, exceptional_classes, run_job, ExhaustJob, Verdict,
};
use smallhouse_core::measures::equivalence_hash;
use smallhouse_core::tables::fixtures;

fn run_preset(name: &str) -> smallhouse_core::exhaust::ExhaustReport {
    let (job, extended) = ExhaustJob::preset(name).expect("preset");
    assert!(!extended);
    let r = run_job(&job).unwrap();
    println!(
        "{name}: {} tuples, {} survivors, {:?}, {:.1}s",
        r.tuples_enumerated, r.survivors, r.counts, r.wall_time_secs
    );
    r
}

#[test]
fn preset_31_6_has_no_new_classes() {
    let r = run_preset("l31w6");
    assert_eq!(r.new_count(), 0);
    let entry = fixtures().table1.iter().find(|e| e.level == 31).unwrap();
    let key = equivalence_hash(&entry.element.build().unwrap());
    assert!(r.records.iter().any(|x| x.hash == key));
}

#[test]
fn preset_85_4_has_no_new_classes() {
    assert_eq!(run_preset("l85w4").new_count(), 0);
}

#[test]
fn preset_95_4_has_no_new_classes() {
    assert_eq!(run_preset("l95w4").new_count(), 0);
}

#[test]
fn worker_count_does_not_change_output() {
    let job = ExhaustJob::new(31, 5);
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let eight = rayon::ThreadPoolBuilder::new().num_threads(8).build().unwrap();
    let a = one.install(|| run_job(&job).unwrap()).to_jsonl();
    let b = eight.install(|| run_job(&job).unwrap()).to_jsonl();
    assert_eq!(a, b);
}

#[test]
fn reduced_search_matches_brute_force() {
    for n in [5, 7, 12] {
        let job = ExhaustJob::new(n, 3);
        let reduced = exceptional_classes(&run_job(&job).unwrap());
        let brute = brute_force_classes(&job);
        assert_eq!(reduced, brute, "N = {n}");
    }
}

#[test]
fn float_filter_keeps_every_exact_survivor() {
    for n in [5, 7, 12, 15] {
        let job = ExhaustJob::new(n, 4);
        let mut open = job.clone();
        open.float_threshold = f64::INFINITY;
        let filtered = run_job(&job).unwrap();
        let all = run_job(&open).unwrap();
        let exact = |r: &smallhouse_core::exhaust::ExhaustReport| -> BTreeSet<Vec<u64>> {
            r.records
                .iter()
                .filter(|x| x.verdict != Verdict::RejectedExact)
                .map(|x| x.tuple.clone())
                .collect()
        };
        assert_eq!(exact(&filtered), exact(&all), "N = {n}");
        assert!(filtered.records.iter().all(|x| x.float_castle <= 5.1));
    }
}

#[test]
fn trig_tables_certify() {
    for np in [420, 62, 170, 190] {
        let t = build_trig_table(np).unwrap();
        assert!(t.observed_error <= 1e-14);
    }
}

/// Every multiset with a leading zero exponent, float filtered, then checked exactly.
fn lightly_reduced_classes(job: &ExhaustJob) -> BTreeSet<smallhouse_core::measures::EquivalenceKey> {
    use rayon::prelude::*;
    use smallhouse_core::measures::{cassels_form, castle_cmp};
    use smallhouse_core::CyclotomicInt;
    let np = job.n_prime;
    let table = build_trig_table(np).unwrap();
    let mut found = BTreeSet::new();
    for w in 3..=job.weight {
        let hits: Vec<Vec<u64>> = (0..np)
            .into_par_iter()
            .flat_map_iter(|j2| {
                let mut out = Vec::new();
                let mut t = vec![0, j2];
                fn rec(np: u64, w: usize, t: &mut Vec<u64>, f: &mut dyn FnMut(&[u64])) {
                    if t.len() == w {
                        f(t);
                        return;
                    }
                    for v in *t.last().unwrap()..np {
                        t.push(v);
                        rec(np, w, t, f);
                        t.pop();
                    }
                }
                rec(np, w, &mut t, &mut |t| {
                    if table.castle_below(t, 5.1).is_some() {
                        out.push(t.to_vec());
                    }
                });
                out
            })
            .collect();
        for t in hits {
            let terms: Vec<(i64, i64)> = t.iter().map(|&j| (j as i64, 1)).collect();
            let a = CyclotomicInt::from_sparse(np as u32, &terms).unwrap();
            if a.is_zero() || castle_cmp(&a, &job.exact_threshold) != std::cmp::Ordering::Less {
                continue;
            }
            if cassels_form(&a).is_none() {
                found.insert(equivalence_hash(&a));
            }
        }
    }
    found
}

#[test]
fn reduced_search_matches_lightly_reduced_oracle() {
    for (n, w) in [(31, 5), (85, 4), (35, 4), (21, 4), (24, 4), (13, 5)] {
        let job = ExhaustJob::new(n, w);
        let reduced = exceptional_classes(&run_job(&job).unwrap());
        let oracle = lightly_reduced_classes(&job);
        println!("({n},{w}): {} classes", oracle.len());
        assert_eq!(reduced, oracle, "({n}, {w})");
    }
}
