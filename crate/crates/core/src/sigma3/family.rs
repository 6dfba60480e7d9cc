//! Prime ownership, membership dispatch and the output group family.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::diagrams::{cantor_pair, cantor_unpair, join, Emitter, JoinedStream};
use crate::exact_algebra::Rational;
use crate::primes::{nth_prime, prime_index};
use crate::tfab::{EmitterConfig, GroupEmitter, QrGroup};

use super::chips::{Chip, ChipScheduler};
use super::machine::TripleMachine;
use super::relation::{OracleFamily, Sigma3Relation};

pub type Triple = (usize, usize, usize);

/// p_{m,n,k} is the prime with index pair(pair(m, n - m - 1), k).
pub fn triple_prime(m: usize, n: usize, k: usize) -> u64 {
    assert!(m < n);
    let a = cantor_pair(m as u128, (n - m - 1) as u128).expect("small");
    nth_prime(cantor_pair(a, k as u128).expect("small") as usize)
}

pub fn prime_owner(p: u64) -> Option<Triple> {
    let i = prime_index(p)?;
    let (a, k) = cantor_unpair(i as u128);
    let (m, d) = cantor_unpair(a);
    Some((m as usize, (m + d + 1) as usize, k as usize))
}

/// Prime factorization by trial division.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Trial division over big integers; denominators met here are products of
/// small primes.
pub fn factor_big(n: &BigUint) -> Vec<(u64, u32)> {
    if let Some(v) = n.to_u64() {
        return factor(v);
    }
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut d = 2u64;
    while !n.is_one() {
        if n.to_u64().is_some() {
            out.extend(factor(n.to_u64().expect("checked")));
            break;
        }
        let mut e = 0;
        while (&n % d).is_zero() {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// Scheduler plus lazily created machines, one per prime touched.
pub struct FamilyCore {
    scheduler: ChipScheduler,
    machines: HashMap<Triple, TripleMachine>,
}

impl FamilyCore {
    pub fn new(family: Arc<OracleFamily>, relation: Arc<dyn Sigma3Relation>) -> Self {
        FamilyCore {
            scheduler: ChipScheduler::new(family, relation),
            machines: HashMap::new(),
        }
    }

    pub fn scheduler(&mut self) -> &mut ChipScheduler {
        &mut self.scheduler
    }

    pub fn chips(&self) -> &[Chip] {
        self.scheduler.log()
    }

    /// The machine for (m, n, k), run through `stage`.
    pub fn machine(&mut self, t: Triple, stage: u64) -> &TripleMachine {
        self.scheduler.advance_to(stage);
        let log = self.scheduler.log();
        let mach = self
            .machines
            .entry(t)
            .or_insert_with(|| TripleMachine::new(t.0, t.1, t.2));
        while mach.stage() < stage {
            let c = log[mach.stage() as usize];
            mach.step(&c).expect("consecutive stages");
        }
        mach
    }

    pub fn machine_mut(&mut self, t: Triple, stage: u64) -> &mut TripleMachine {
        self.machine(t, stage);
        self.machines.get_mut(&t).expect("created above")
    }

    /// Whether q lies in G_{l, stage}.
    pub fn membership(&mut self, l: usize, q: &Rational, stage: u64) -> bool {
        let den = q.denom().magnitude();
        if den.is_one() {
            return true;
        }
        factor_big(den)
            .into_iter()
            .all(|(p, e)| match prime_owner(p) {
                Some(t) => self.machine(t, stage).admits(l, e, stage),
                None => false,
            })
    }

    /// Largest e with 1/p^e in G_{l, stage}, p = p_{m,n,k}.
    pub fn exponent(&mut self, l: usize, t: Triple, stage: u64) -> u32 {
        self.machine(t, stage).exponent(l, stage)
    }
}

pub type SharedCore = Arc<Mutex<FamilyCore>>;

/// G_l as a rank-1 membership oracle.
pub struct GroupFamilyView {
    pub l: usize,
    core: SharedCore,
}

impl GroupFamilyView {
    pub fn new(l: usize, core: SharedCore) -> Self {
        GroupFamilyView { l, core }
    }
}

impl QrGroup for GroupFamilyView {
    fn rank(&self) -> usize {
        1
    }

    fn contains(&mut self, v: &[Rational], stage: u64) -> bool {
        self.core
            .lock()
            .expect("core lock")
            .membership(self.l, &v[0], stage)
    }

    fn describe(&self) -> String {
        format!("G_{} of the sigma3 family", self.l)
    }
}

pub struct ReduceOutput {
    pub core: SharedCore,
    pub groups: JoinedStream,
}

/// Emit G_0, ..., G_{indices-1} through `stages` stages.
pub fn reduce(
    family: Arc<OracleFamily>,
    relation: Arc<dyn Sigma3Relation>,
    stages: u64,
    indices: usize,
) -> ReduceOutput {
    let core: SharedCore = Arc::new(Mutex::new(FamilyCore::new(family, relation)));
    core.lock()
        .expect("core lock")
        .scheduler()
        .advance_to(stages);
    let diagrams = (0..indices)
        .map(|l| {
            let mut g = GroupEmitter::new(
                Box::new(GroupFamilyView::new(l, core.clone())),
                EmitterConfig::default(),
            );
            g.run_to(stages).expect("group emission");
            g.diagram().clone()
        })
        .collect();
    ReduceOutput {
        core,
        groups: join(diagrams),
    }
}

/// Divisibility profile of G_l at the primes of `triples`.
pub fn profile(core: &mut FamilyCore, l: usize, triples: &[Triple], stage: u64) -> Vec<u32> {
    triples
        .iter()
        .map(|&t| core.exponent(l, t, stage))
        .collect()
}
