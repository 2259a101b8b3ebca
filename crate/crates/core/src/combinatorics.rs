//! Exhaustive checks of difference-set properties of small residue sets.
//!
//! All three properties are invariant under `x -> a x + b` with `a` a unit,
//! so the searches only visit subsets containing `0` and `1`.

use rayon::prelude::*;
use serde::Serialize;

/// `counts[k] = #{(i, j) in S^2 : i - j = k}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DifferenceProfile {
    pub modulus: u64,
    pub subset: Vec<u64>,
    pub counts: Vec<u32>,
}

impl DifferenceProfile {
    pub fn new(modulus: u64, subset: &[u64]) -> Self {
        let mut s: Vec<u64> = subset.iter().map(|x| x % modulus).collect();
        s.sort_unstable();
        s.dedup();
        let mut counts = vec![0u32; modulus as usize];
        for &i in &s {
            for &j in &s {
                counts[((i + modulus - j) % modulus) as usize] += 1;
            }
        }
        DifferenceProfile {
            modulus,
            subset: s,
            counts,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaOutcome {
    pub holds: bool,
    /// First failing subset in enumeration order.
    pub witness: Option<Vec<u64>>,
    pub subsets_checked: u64,
}

/// `6^((X - 1) / 2)`.
pub fn hadamard_bound(x: u32) -> f64 {
    6f64.powf((x as f64 - 1.0) / 2.0)
}

pub fn has_singleton_difference(modulus: u64, s: &[u64]) -> bool {
    DifferenceProfile::new(modulus, s).counts.contains(&1)
}

/// A pair `k1 = k2 != 0 (mod p)` with no difference `k1` and exactly one `k2`.
pub fn modp2_pair(p: u64, s: &[u64]) -> Option<(u64, u64)> {
    let m = p * p;
    let prof = DifferenceProfile::new(m, s);
    for r in 1..p {
        let k1 = (r..m).step_by(p as usize).find(|&k| prof.counts[k as usize] == 0);
        let k2 = (r..m).step_by(p as usize).find(|&k| prof.counts[k as usize] == 1);
        if let (Some(k1), Some(k2)) = (k1, k2) {
            return Some((k1, k2));
        }
    }
    None
}

/// `None` if some nonzero difference is missing (the property is vacuous);
/// otherwise whether the unique-difference graph is connected and not bipartite.
pub fn unique_difference_graph_ok(p: u64, s: &[u64]) -> Option<bool> {
    let prof = DifferenceProfile::new(p, s);
    if prof.counts[1..].contains(&0) {
        return None;
    }
    let v = &prof.subset;
    let n = v.len();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|a| {
            (0..n)
                .filter(|&b| b != a && prof.counts[((v[a] + p - v[b]) % p) as usize] == 1)
                .collect()
        })
        .collect();
    // Breadth-first two-colouring.
    let mut colour = vec![u8::MAX; n];
    colour[0] = 0;
    let mut queue = std::collections::VecDeque::from([0usize]);
    let mut odd_cycle = false;
    while let Some(a) = queue.pop_front() {
        for &b in &adj[a] {
            if colour[b] == u8::MAX {
                colour[b] = 1 - colour[a];
                queue.push_back(b);
            } else if colour[b] == colour[a] {
                odd_cycle = true;
            }
        }
    }
    let connected = colour.iter().all(|&c| c != u8::MAX);
    Some(connected && odd_cycle)
}

/// Visit `k`-subsets of `pool` in lexicographic order; stop when `f` returns false.
fn for_each_subset(pool: &[u64], k: usize, f: &mut dyn FnMut(&[u64]) -> bool) {
    fn rec(pool: &[u64], k: usize, start: usize, cur: &mut Vec<u64>, f: &mut dyn FnMut(&[u64]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        let need = k - cur.len();
        for i in start..pool.len() {
            if pool.len() - i < need {
                break;
            }
            cur.push(pool[i]);
            let go = rec(pool, k, i + 1, cur, f);
            cur.pop();
            if !go {
                return false;
            }
        }
        true
    }
    let mut cur = Vec::with_capacity(k);
    rec(pool, k, 0, &mut cur, f);
}

/// Check `pred` on every `{0, 1} + rest` where `rest` is drawn from `pool`
/// with `extra` elements, sharded by the smallest extra element.
fn normalized_search<P>(pool: Vec<u64>, extra: usize, pred: P) -> LemmaOutcome
where
    P: Fn(&[u64]) -> bool + Sync,
{
    if extra == 0 {
        let ok = pred(&[0, 1]);
        return LemmaOutcome {
            holds: ok,
            witness: (!ok).then(|| vec![0, 1]),
            subsets_checked: 1,
        };
    }
    let results: Vec<(u64, Option<Vec<u64>>)> = (0..pool.len())
        .into_par_iter()
        .map(|first| {
            let mut checked = 0u64;
            let mut witness = None;
            let tail = &pool[first + 1..];
            let mut set = vec![0, 1, pool[first]];
            for_each_subset(tail, extra - 1, &mut |rest| {
                set.truncate(3);
                set.extend_from_slice(rest);
                checked += 1;
                if pred(&set) {
                    true
                } else {
                    let mut w = set.clone();
                    w.sort_unstable();
                    witness = Some(w);
                    false
                }
            });
            (checked, witness)
        })
        .collect();
    let subsets_checked = results.iter().map(|r| r.0).sum();
    let witness = results.into_iter().find_map(|r| r.1);
    LemmaOutcome {
        holds: witness.is_none(),
        witness,
        subsets_checked,
    }
}

/// Every `X`-subset of `Z/p` has some `k` realised by exactly one pair.
pub fn singleton_difference_holds(p: u64, x: usize) -> LemmaOutcome {
    assert!(x >= 1 && x as u64 <= p, "need 1 <= X <= p");
    if x == 1 {
        // k = 0 is realised once.
        return LemmaOutcome {
            holds: true,
            witness: None,
            subsets_checked: 1,
        };
    }
    normalized_search((2..p).collect(), x - 2, |s| has_singleton_difference(p, s))
}

/// Every `X`-subset of `Z/p^2` with distinct residues mod `p` admits a `modp2_pair`.
pub fn mod_p2_property_holds(p: u64, x: usize) -> LemmaOutcome {
    assert!(x >= 2 && x as u64 <= p, "need 2 <= X <= p");
    let m = p * p;
    let pool: Vec<u64> = (2..m).filter(|&v| v % p >= 2).collect();
    normalized_search(pool, x - 2, |s| {
        let mut res: Vec<u64> = s.iter().map(|v| v % p).collect();
        res.sort_unstable();
        res.dedup();
        // Subsets with a repeated residue are outside the lemma.
        res.len() < s.len() || modp2_pair(p, s).is_some()
    })
}

/// Every covering `X`-subset of `Z/p` has a connected, non-bipartite unique-difference graph.
pub fn graph_property_holds(p: u64, x: usize) -> LemmaOutcome {
    assert!(x >= 2 && x as u64 <= p, "need 2 <= X <= p");
    normalized_search((2..p).collect(), x - 2, |s| {
        unique_difference_graph_ok(p, s).unwrap_or(true)
    })
}

/// Brute force over all subsets, without normalisation.
pub fn check_all_subsets(modulus: u64, x: usize, pred: impl Fn(&[u64]) -> bool) -> LemmaOutcome {
    let pool: Vec<u64> = (0..modulus).collect();
    let mut checked = 0;
    let mut witness = None;
    for_each_subset(&pool, x, &mut |s| {
        checked += 1;
        if pred(s) {
            true
        } else {
            witness = Some(s.to_vec());
            false
        }
    });
    LemmaOutcome {
        holds: witness.is_none(),
        witness,
        subsets_checked: checked,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_counts() {
        let d = DifferenceProfile::new(7, &[0, 1, 3]);
        assert_eq!(d.counts, vec![3, 1, 1, 1, 1, 1, 1]);
        assert_eq!(d.counts.iter().sum::<u32>(), 9);
    }

    #[test]
    fn singleton_small_cases() {
        assert!(singleton_difference_holds(5, 3).holds);
        assert!(singleton_difference_holds(11, 4).holds);
        let o = singleton_difference_holds(3, 3);
        assert_eq!(o.witness, Some(vec![0, 1, 2]));
        let o = singleton_difference_holds(7, 4);
        let w = o.witness.expect("counterexample");
        let prof = DifferenceProfile::new(7, &w);
        assert!(prof.counts[1..].iter().all(|&c| c == 2));
        assert!(!has_singleton_difference(7, &[2, 4, 5, 6]));
    }

    #[test]
    fn modp2_example() {
        let (k1, k2) = modp2_pair(3, &[0, 1, 5]).unwrap();
        let prof = DifferenceProfile::new(9, &[0, 1, 5]);
        assert_eq!(prof.counts[k1 as usize], 0);
        assert_eq!(prof.counts[k2 as usize], 1);
        assert_eq!(k1 % 3, k2 % 3);
        assert_ne!(k1 % 3, 0);
        assert!(mod_p2_property_holds(3, 3).holds);
    }

    #[test]
    fn graph_example() {
        assert_eq!(unique_difference_graph_ok(7, &[0, 1, 3]), Some(true));
        assert_eq!(unique_difference_graph_ok(7, &[0, 1]), None);
        assert!(graph_property_holds(7, 3).holds);
    }

    #[test]
    fn bound() {
        assert!((hadamard_bound(4) - 14.6969).abs() < 1e-3);
        assert_eq!(hadamard_bound(1), 1.0);
    }
}
