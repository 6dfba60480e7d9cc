//! Chip functions c_{m,n}. Global stage T belongs to the pair with index q
//! and local stage s, where (q, s) = unpair(T) and pairs m < n are listed
//! as q = n(n-1)/2 + m.

use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

use crate::diagrams::cantor_unpair;

use super::relation::{OracleFamily, Prefix, Sigma3Relation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Chip {
    pub stage: u64,
    pub m: usize,
    pub n: usize,
    pub value: u64,
    /// Awarded by an expansionary check rather than as padding.
    pub expansionary: bool,
}

pub fn pair_of_index(q: u64) -> (usize, usize) {
    let mut n = 1u64;
    while (n + 1) * n / 2 <= q {
        n += 1;
    }
    ((q - n * (n - 1) / 2) as usize, n as usize)
}

pub fn pair_index(m: usize, n: usize) -> u64 {
    assert!(m < n);
    (n * (n - 1) / 2 + m) as u64
}

/// (m, n, local stage) of a global stage.
pub fn decode_stage(t: u64) -> (usize, usize, u64) {
    let (q, s) = cantor_unpair(t as u128);
    let (m, n) = pair_of_index(q as u64);
    (m, n, s as u64)
}

/// Agreement length for one x: y values below `len` have a z witness.
#[derive(Debug, Clone, Default)]
struct Agreement {
    len: u64,
    /// z values tried for y = len.
    tried: u64,
}

#[derive(Debug, Default)]
struct PairState {
    agreement: Vec<Agreement>,
    snapshots: Vec<Option<Vec<u64>>>,
    awarded: HashSet<u64>,
    least_fresh: u64,
}

impl PairState {
    fn fresh(&mut self) -> u64 {
        while self.awarded.contains(&self.least_fresh) {
            self.least_fresh += 1;
        }
        self.least_fresh
    }
}

pub struct ChipScheduler {
    family: Arc<OracleFamily>,
    relation: Arc<dyn Sigma3Relation>,
    pairs: Vec<PairState>,
    log: Vec<Chip>,
}

impl ChipScheduler {
    pub fn new(family: Arc<OracleFamily>, relation: Arc<dyn Sigma3Relation>) -> Self {
        ChipScheduler {
            family,
            relation,
            pairs: Vec::new(),
            log: Vec::new(),
        }
    }

    pub fn family(&self) -> &OracleFamily {
        &self.family
    }

    pub fn relation(&self) -> &dyn Sigma3Relation {
        &*self.relation
    }

    /// Chips of stages below the current length.
    pub fn log(&self) -> &[Chip] {
        &self.log
    }

    /// Schedule every stage below `t`.
    pub fn advance_to(&mut self, t: u64) {
        while (self.log.len() as u64) < t {
            let c = self.schedule(self.log.len() as u64);
            self.log.push(c);
        }
    }

    pub fn chip(&mut self, t: u64) -> Chip {
        self.advance_to(t + 1);
        self.log[t as usize]
    }

    fn schedule(&mut self, t: u64) -> Chip {
        let (m, n, s) = decode_stage(t);
        let q = pair_index(m, n) as usize;
        if self.pairs.len() <= q {
            self.pairs.resize_with(q + 1, PairState::default);
        }
        let mut expansionary = false;
        let mut value = None;
        if s % 2 == 0 {
            let (k, _) = cantor_unpair((s / 2) as u128);
            let k = k as u64;
            if self.expansionary(m, n, k, t) {
                expansionary = true;
                value = Some(k);
            }
        }
        let st = &mut self.pairs[q];
        let value = value.unwrap_or_else(|| st.fresh());
        st.awarded.insert(value);
        Chip {
            stage: t,
            m,
            n,
            value,
            expansionary,
        }
    }

    /// Recompute agreement lengths for x <= k with searches bounded by t and
    /// compare with the snapshot taken at the last check of k.
    fn expansionary(&mut self, m: usize, n: usize, k: u64, t: u64) -> bool {
        let q = pair_index(m, n) as usize;
        let (Some(a), Some(b)) = (self.family.get(m), self.family.get(n)) else {
            return false;
        };
        let rel = &*self.relation;
        let st = &mut self.pairs[q];
        if st.agreement.len() <= k as usize {
            st.agreement.resize(k as usize + 1, Agreement::default());
        }
        for x in 0..=k {
            let ag = &mut st.agreement[x as usize];
            'grow: while ag.len < t {
                let y = ag.len;
                while ag.tried <= t {
                    let z = ag.tried;
                    let u = rel.use_bound(x, y, z);
                    ag.tried += 1;
                    if rel.holds(&Prefix::new(a, u), &Prefix::new(b, u), x, y, z) {
                        ag.len += 1;
                        ag.tried = 0;
                        continue 'grow;
                    }
                }
                break;
            }
        }
        if st.snapshots.len() <= k as usize {
            st.snapshots.resize(k as usize + 1, None);
        }
        let now: Vec<u64> = st.agreement[..=k as usize].iter().map(|a| a.len).collect();
        // the first check of k only records a baseline
        let snap = &mut st.snapshots[k as usize];
        let grew = snap
            .as_ref()
            .is_some_and(|old| now.iter().zip(old).any(|(a, b)| a > b));
        if grew || snap.is_none() {
            *snap = Some(now);
        }
        grew
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigma3::relation::{ConstRelation, E0Relation};
    use crate::streams::BitStream;

    fn counts(s: &ChipScheduler, m: usize, n: usize, from: u64) -> Vec<usize> {
        let mut c = vec![0; 12];
        for ch in &s.log()[from as usize..] {
            if (ch.m, ch.n) == (m, n) && (ch.value as usize) < c.len() {
                c[ch.value as usize] += 1;
            }
        }
        c
    }

    #[test]
    fn pair_listing() {
        let ps: Vec<_> = (0..6).map(pair_of_index).collect();
        assert_eq!(ps, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]);
        for q in 0..100 {
            let (m, n) = pair_of_index(q);
            assert_eq!(pair_index(m, n), q);
        }
    }

    #[test]
    fn one_chip_per_stage_and_image_omega() {
        let fam = Arc::new(OracleFamily::new(vec![BitStream::zeros(); 3]));
        let mut s = ChipScheduler::new(fam, Arc::new(ConstRelation(false)));
        s.advance_to(3000);
        // constant false: every value at most once per pair
        let mut seen = HashSet::new();
        for c in s.log() {
            assert!(!c.expansionary);
            assert!(seen.insert((c.m, c.n, c.value)));
        }
        let vals: HashSet<u64> = s
            .log()
            .iter()
            .filter(|c| (c.m, c.n) == (0, 1))
            .map(|c| c.value)
            .collect();
        assert!((0..20).all(|v| vals.contains(&v)));
    }

    #[test]
    fn constant_true_feeds_every_value() {
        let fam = Arc::new(OracleFamily::new(vec![BitStream::zeros(); 2]));
        let mut s = ChipScheduler::new(fam, Arc::new(ConstRelation(true)));
        s.advance_to(20000);
        let late = counts(&s, 0, 1, 10000);
        assert!(late[..6].iter().all(|&c| c > 0), "{late:?}");
    }

    #[test]
    fn e0_difference_at_five() {
        // A and B differ exactly at bit 5
        let a = BitStream::zeros();
        let b = BitStream::periodic("000001", "0");
        let fam = Arc::new(OracleFamily::new(vec![a, b]));
        let mut s = ChipScheduler::new(fam, Arc::new(E0Relation));
        // pair (0, 1) owns the stages unpair(T).0 == 0; 500 local stages
        let t_end = crate::diagrams::cantor_pair(0, 500).unwrap() as u64;
        s.advance_to(t_end);
        let all = counts(&s, 0, 1, 0);
        let late = counts(&s, 0, 1, t_end / 2);
        for k in 0..5 {
            assert!(all[k] <= 2 && late[k] == 0, "k = {k}: {all:?}");
        }
        for k in 5..8 {
            assert!(late[k] > 0, "k = {k}: {late:?}");
        }
    }
}
