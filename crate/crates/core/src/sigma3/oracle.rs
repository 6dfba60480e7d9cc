//! Reference implementation: explicit sets of admitted negative powers,
//! updated by the stage instructions read literally, for a bounded set of
//! triples and groups.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::chips::ChipScheduler;
use super::family::{triple_prime, Triple};
use super::relation::{OracleFamily, Sigma3Relation};

pub struct NaiveOracle {
    pub stages: u64,
    pub indices: usize,
    /// Per triple, per stage s <= stages, per l < indices: the largest e with
    /// p^-e in G_{l,s}.
    tables: BTreeMap<Triple, Vec<Vec<u32>>>,
}

impl NaiveOracle {
    pub fn exponent(&self, t: Triple, l: usize, stage: u64) -> Option<u32> {
        self.tables.get(&t)?.get(stage as usize)?.get(l).copied()
    }

    pub fn admits(&self, t: Triple, l: usize, e: u32, stage: u64) -> Option<bool> {
        Some(e <= self.exponent(t, l, stage)?)
    }

    pub fn triples(&self) -> impl Iterator<Item = &Triple> {
        self.tables.keys()
    }
}

fn precedes(m: usize, n: usize, a: usize, b: usize) -> bool {
    let key = |x: usize| {
        if x == m {
            (0, 0)
        } else if x == n {
            (1, 0)
        } else {
            (2, x)
        }
    };
    key(a) < key(b)
}

fn run_triple(
    sched: &ChipScheduler,
    (m, n, k): Triple,
    stages: u64,
    indices: usize,
) -> Vec<Vec<u32>> {
    let big_n = n + k;
    let width = indices.max(big_n + 1);
    let mut sets: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); width];
    sets[n].insert(1);
    // greatest t <= s with c_{j,l}(t) <= N for some j before l, and that j
    let mut last: Vec<Option<(u64, usize)>> = vec![None; big_n + 1];
    let mut order: Vec<usize> = vec![m, n];
    order.extend((0..=big_n).filter(|&l| l != m && l != n));
    let snapshot = |sets: &Vec<BTreeSet<u32>>| -> Vec<u32> {
        (0..indices)
            .map(|l| (1..).take_while(|e| sets[l].contains(e)).count() as u32)
            .collect()
    };
    let mut out = vec![snapshot(&sets)];
    for s in 0..stages {
        let c = sched.log()[s as usize];
        for l in 0..=big_n {
            if l == m || l == n {
                continue;
            }
            let j = if c.m == l {
                c.n
            } else if c.n == l {
                c.m
            } else {
                continue;
            };
            if j <= big_n && precedes(m, n, j, l) && c.value <= big_n as u64 {
                last[l] = Some((s, j));
            }
        }
        let r = (1..).find(|e| !sets[m].contains(e)).expect("finite sets");
        let chip_stage = c.m == m && c.n == n && c.value == k as u64;
        let act = chip_stage
            || (0..=big_n).any(|l| {
                l != n
                    && matches!(last[l], Some((_, j)) if precedes(m, n, j, l)
                        && sets[j].contains(&r) != sets[l].contains(&r))
            });
        if act {
            for set in sets.iter_mut() {
                set.insert(r);
            }
            sets[n].insert(r + 1);
            for set in sets.iter_mut().skip(big_n + 1) {
                set.insert(r + 1);
            }
            for &l in &order[2..] {
                if let Some((_, j)) = last[l] {
                    if sets[j].contains(&(r + 1)) {
                        sets[l].insert(r + 1);
                    }
                }
            }
        }
        out.push(snapshot(&sets));
    }
    out
}

/// Explicit sets for G_l (l < index bound) at primes p_{m,n,k} below the
/// prime bound with n < index bound, through the stage bound.
pub fn naive_oracle(
    family: Arc<OracleFamily>,
    relation: Arc<dyn Sigma3Relation>,
    stages: u64,
    indices: usize,
    prime_bound: u64,
) -> NaiveOracle {
    let mut sched = ChipScheduler::new(family, relation);
    sched.advance_to(stages);
    let mut tables = BTreeMap::new();
    for n in 1..indices {
        for m in 0..n {
            for k in 0.. {
                if triple_prime(m, n, k) >= prime_bound {
                    break;
                }
                tables.insert((m, n, k), run_triple(&sched, (m, n, k), stages, indices));
            }
        }
    }
    NaiveOracle {
        stages,
        indices,
        tables,
    }
}
