//! Phi(G): the quotient field of Q[G], emitted as a diagram whose elements are
//! numbered by their first certified appearance.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::diagrams::{
    cantor_unpair, field_sym, group_sym, Code, Diagram, DiagramError, Emitter, Fact, Signature,
};
use crate::tfab::GroupView;

use super::formal::QuotientEnumeration;
use super::key::{Basis, ExponentMap, Fingerprint};
use super::ring::{quotient_eq, Equality, FieldQuotient, MonomialCombination};

#[derive(Debug, Clone, Copy)]
pub struct PhiConfig {
    /// Formal quotients drawn per stage (monomials and the height listing
    /// alternate).
    pub candidates_per_stage: usize,
    /// Element pairs whose +, -, * facts are computed per stage.
    pub pairs_per_stage: usize,
    pub inverses_per_stage: usize,
    /// Queued quotients and pairs re-tried per stage.
    pub retries_per_stage: usize,
}

impl Default for PhiConfig {
    fn default() -> Self {
        PhiConfig {
            candidates_per_stage: 2,
            pairs_per_stage: 2,
            inverses_per_stage: 1,
            retries_per_stage: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Located {
    Found(Code),
    /// Certified unequal to every representative so far.
    Absent,
    Unknown,
}

#[derive(Default)]
struct Reps {
    list: Vec<FieldQuotient>,
    stages: Vec<u64>,
    fps: Vec<Fingerprint>,
    buckets: HashMap<u64, Vec<Code>>,
    loose: Vec<Code>,
    monomials: HashMap<Code, Code>,
}

impl Reps {
    fn locate(&self, q: &FieldQuotient, fp: Fingerprint, e: Code, g: &GroupView) -> Located {
        if let Some((m, c)) = q.as_monomial(e) {
            if num_traits::One::is_one(c) {
                if let Some(&f) = self.monomials.get(&m) {
                    return Located::Found(f);
                }
            }
        }
        let all: Vec<Code>;
        let candidates: Box<dyn Iterator<Item = &Code>> = match fp {
            Fingerprint::Unknown => return Located::Unknown,
            Fingerprint::Value(v) => Box::new(
                self.buckets
                    .get(&v)
                    .map(|b| b.as_slice())
                    .unwrap_or(&[])
                    .iter()
                    .chain(self.loose.iter()),
            ),
            Fingerprint::Undefined => {
                all = (0..self.list.len() as Code).collect();
                Box::new(all.iter())
            }
        };
        let mut unknown = false;
        for &c in candidates {
            match quotient_eq(q, &self.list[c as usize], g) {
                Equality::Equal => return Located::Found(c),
                Equality::Unknown => unknown = true,
                Equality::Unequal => {}
            }
        }
        if unknown {
            Located::Unknown
        } else {
            Located::Absent
        }
    }

    fn insert(&mut self, q: FieldQuotient, fp: Fingerprint, e: Code, stage: u64) -> Code {
        let c = self.list.len() as Code;
        if let Some((m, k)) = q.as_monomial(e) {
            if num_traits::One::is_one(k) {
                self.monomials.insert(m, c);
            }
        }
        match fp {
            Fingerprint::Value(v) => self.buckets.entry(v).or_default().push(c),
            _ => self.loose.push(c),
        }
        self.list.push(q);
        self.stages.push(stage);
        self.fps.push(fp);
        c
    }
}

/// Locate `q`, adding it as a new representative when certified absent.
fn classify(
    reps: &mut Reps,
    exps: &mut ExponentMap,
    g: &GroupView,
    e: Code,
    q: FieldQuotient,
    stage: u64,
) -> Option<Code> {
    let fp = exps.fingerprint(&q, g);
    match reps.locate(&q, fp, e, g) {
        Located::Found(c) => Some(c),
        Located::Absent => Some(reps.insert(q, fp, e, stage)),
        Located::Unknown => None,
    }
}

const OPS: [u32; 3] = [field_sym::ADD, field_sym::SUB, field_sym::MUL];

pub struct PhiEmitter<E: Emitter> {
    inner: E,
    config: PhiConfig,
    diagram: Diagram,
    stage: u64,
    exps: ExponentMap,
    reps: Reps,
    identity: Option<Code>,
    group_codes: Vec<Code>,
    seen: HashSet<Code>,
    read: usize,
    mono_cursor: usize,
    formal: QuotientEnumeration,
    queue: VecDeque<FieldQuotient>,
    inv_cursor: Code,
    pair_cursor: u128,
    pair_retry: VecDeque<(Code, Code, u8)>,
    turn: bool,
}

/// Phi applied to an emitted group. `basis` fixes how fingerprints are
/// learned; `Basis::FirstNonzero` suits any rank-1 group.
pub fn phi_object<E: Emitter>(inner: E, basis: Basis) -> PhiEmitter<E> {
    PhiEmitter::new(inner, basis, PhiConfig::default())
}

impl<E: Emitter> PhiEmitter<E> {
    pub fn new(inner: E, basis: Basis, config: PhiConfig) -> Self {
        PhiEmitter {
            inner,
            config,
            diagram: Diagram::new(Signature::field()),
            stage: 0,
            exps: ExponentMap::new(basis),
            reps: Reps::default(),
            identity: None,
            group_codes: Vec::new(),
            seen: HashSet::new(),
            read: 0,
            mono_cursor: 0,
            formal: QuotientEnumeration::new(),
            queue: VecDeque::new(),
            inv_cursor: 2,
            pair_cursor: 0,
            pair_retry: VecDeque::new(),
            turn: false,
        }
    }

    pub fn inner(&self) -> &E {
        &self.inner
    }

    pub fn group_view(&self) -> GroupView<'_> {
        GroupView::latest(self.inner.diagram())
    }

    /// Code of the group identity, once committed.
    pub fn identity(&self) -> Option<Code> {
        self.identity
    }

    pub fn representative(&self, c: Code) -> Option<&FieldQuotient> {
        self.reps.list.get(c as usize)
    }

    pub fn representatives(&self) -> &[FieldQuotient] {
        &self.reps.list
    }

    /// Stage at which code `c` was first assigned.
    pub fn assigned_at(&self, c: Code) -> Option<u64> {
        self.reps.stages.get(c as usize).copied()
    }

    /// Field code of the monomial Y_g, if assigned.
    pub fn monomial_code(&self, g: Code) -> Option<Code> {
        self.reps.monomials.get(&g).copied()
    }

    /// Group codes in order of first appearance.
    pub fn group_codes(&self) -> &[Code] {
        &self.group_codes
    }

    pub fn pending(&self) -> usize {
        self.queue.len() + self.pair_retry.len()
    }

    /// Which representative, if any, equals `q` (a quotient over the same group).
    pub fn locate(&mut self, q: &FieldQuotient) -> Located {
        let Some(e) = self.identity else {
            return Located::Unknown;
        };
        let g = GroupView::latest(self.inner.diagram());
        let fp = self.exps.fingerprint(q, &g);
        self.reps.locate(q, fp, e, &g)
    }

    /// A representative y with y^n equal to Y_x, found by fingerprint and
    /// certified through committed sums.
    pub fn nth_root(&mut self, x: Code, n: u64) -> Option<Code> {
        let e = self.identity?;
        let g = GroupView::latest(self.inner.diagram());
        let target = FieldQuotient::ring(MonomialCombination::y(x), e);
        let Fingerprint::Value(t) = self.exps.fingerprint(&target, &g) else {
            return None;
        };
        for (c, fp) in self.reps.fps.iter().enumerate() {
            let Fingerprint::Value(v) = *fp else { continue };
            if super::key::pow_q(v, n) != t {
                continue;
            }
            let y = &self.reps.list[c];
            if let Some((m, k)) = y.as_monomial(e) {
                if num_traits::One::is_one(k) && g.mul(n as i64, m) == Some(x) {
                    return Some(c as Code);
                }
            }
            if let Some(p) = y.pow(n, &g) {
                if quotient_eq(&p, &target, &g) == Equality::Equal {
                    return Some(c as Code);
                }
            }
        }
        None
    }

    fn read_group(&mut self) -> Result<(), DiagramError> {
        let d = self.inner.diagram();
        let view = GroupView::latest(d);
        let zero = view.zero();
        let events = &d.events()[self.read..];
        for ev in events {
            let f = &ev.fact;
            if let (group_sym::ADD, Some(z)) = (f.sym, zero) {
                let other = if f.args[0] == z {
                    Some(f.args[1])
                } else if f.args[1] == z {
                    Some(f.args[0])
                } else {
                    None
                };
                if other.is_some_and(|o| o != f.res) {
                    return Err(DiagramError::CorruptStream(format!(
                        "identity law fails at {:?}",
                        f
                    )));
                }
            }
            for c in f.args.iter().copied().chain([f.res]) {
                if self.seen.insert(c) {
                    self.group_codes.push(c);
                }
            }
        }
        self.exps.observe(events, zero);
        self.read = d.events().len();
        self.exps.refresh(&view);
        Ok(())
    }
}

impl<E: Emitter> Emitter for PhiEmitter<E> {
    fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    fn stage(&self) -> u64 {
        self.stage
    }

    fn step(&mut self) -> Result<(), DiagramError> {
        let s = self.stage;
        self.inner.step()?;
        self.read_group()?;
        self.stage += 1;
        let d = self.inner.diagram();
        let g = GroupView::latest(d);
        let e = match self.identity {
            Some(e) => e,
            None => {
                let Some(e) = g.zero() else { return Ok(()) };
                self.identity = Some(e);
                let zero = FieldQuotient::zero(e);
                let one = FieldQuotient::one(e);
                for (q, sym) in [(zero, field_sym::ZERO), (one, field_sym::ONE)] {
                    let fp = self.exps.fingerprint(&q, &g);
                    let c = self.reps.insert(q, fp, e, s);
                    self.diagram.commit(s, Fact::new(sym, vec![], c))?;
                }
                e
            }
        };
        let reps = &mut self.reps;
        let exps = &mut self.exps;

        for _ in 0..self.config.retries_per_stage.min(self.queue.len()) {
            let q = self.queue.pop_front().expect("nonempty");
            if classify(reps, exps, &g, e, q.clone(), s).is_none() {
                self.queue.push_back(q);
            }
        }

        for _ in 0..self.config.candidates_per_stage {
            self.turn = !self.turn;
            let q = if self.turn && self.mono_cursor < self.group_codes.len() {
                let m = self.group_codes[self.mono_cursor];
                self.mono_cursor += 1;
                FieldQuotient::ring(MonomialCombination::y(m), e)
            } else {
                self.formal.next().expect("infinite listing")
            };
            if classify(reps, exps, &g, e, q.clone(), s).is_none() {
                self.queue.push_back(q);
            }
        }

        for _ in 0..self.config.inverses_per_stage {
            let c = self.inv_cursor;
            if c as usize >= reps.list.len() {
                break;
            }
            self.inv_cursor += 1;
            if let Some(q) = reps.list[c as usize].inv() {
                if classify(reps, exps, &g, e, q.clone(), s).is_none() {
                    self.queue.push_back(q);
                }
            }
        }

        let mut work: Vec<(Code, Code, u8)> = Vec::new();
        for _ in 0..self.config.retries_per_stage.min(self.pair_retry.len()) {
            work.push(self.pair_retry.pop_front().expect("nonempty"));
        }
        for _ in 0..self.config.pairs_per_stage {
            let (a, b) = cantor_unpair(self.pair_cursor);
            let n = reps.list.len() as u128;
            if a >= n || b >= n {
                break;
            }
            self.pair_cursor += 1;
            work.push((a as Code, b as Code, 0b111));
        }
        for (a, b, mask) in work {
            let mut left = 0u8;
            for (i, &sym) in OPS.iter().enumerate() {
                if mask & (1 << i) == 0 {
                    continue;
                }
                let (x, y) = (&reps.list[a as usize], &reps.list[b as usize]);
                let r = match sym {
                    field_sym::ADD => x.add(y, &g),
                    field_sym::SUB => x.sub(y, &g),
                    _ => x.mul(y, &g),
                };
                match r.and_then(|r| classify(reps, exps, &g, e, r, s)) {
                    Some(c) => {
                        self.diagram.commit(s, Fact::new(sym, vec![a, b], c))?;
                    }
                    None => left |= 1 << i,
                }
            }
            if left != 0 {
                self.pair_retry.push_back((a, b, left));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::audit;
    use crate::exact_algebra::{int, rat};
    use crate::fd_fields::FieldView;
    use crate::tfab::{DivisibilityType, GroupEmitter, Rank1Group};

    fn rank1(ty: &str) -> GroupEmitter {
        GroupEmitter::with_defaults(Box::new(Rank1Group {
            ty: DivisibilityType::parse(ty).unwrap(),
        }))
    }

    #[test]
    fn identity_is_one_and_facts_are_consistent() {
        let mut f = phi_object(rank1("*:0"), Basis::FirstNonzero);
        f.run_to(300).unwrap();
        let e = f.identity().unwrap();
        assert_eq!(f.diagram().op(field_sym::ONE, &[]), Some(1));
        assert_eq!(f.representative(1), Some(&FieldQuotient::one(e)));
        assert_eq!(f.monomial_code(e), Some(1));
        assert!(audit(f.diagram()).clean());
        let v = FieldView::latest(f.diagram());
        // every committed product agrees with the quotient arithmetic
        let g = f.group_view();
        for ev in f
            .diagram()
            .events()
            .iter()
            .filter(|ev| ev.fact.sym == field_sym::MUL)
            .take(200)
        {
            let (a, b, c) = (ev.fact.args[0], ev.fact.args[1], ev.fact.res);
            let p = f
                .representative(a)
                .unwrap()
                .mul(f.representative(b).unwrap(), &g)
                .unwrap();
            assert_eq!(
                quotient_eq(&p, f.representative(c).unwrap(), &g),
                Equality::Equal
            );
        }
        assert!(v.mul(1, 1) == Some(1));
    }

    #[test]
    fn integers_give_a_rational_function_field() {
        let mut ge = rank1("*:0");
        let one = ge.code_for(&[int(1)], 100).unwrap();
        let mut f = phi_object(ge, Basis::FirstNonzero);
        f.run_to(1500).unwrap();
        let x = f.monomial_code(one).unwrap();
        let v = FieldView::latest(f.diagram());
        // X satisfies none of the small integer polynomials it can be tested on
        let mut tested = 0;
        for p in [
            [-1i64, 1].as_slice(),
            &[1, 1],
            &[-2, 0, 1],
            &[-1, 0, 1],
            &[1, 1, 1],
            &[0, 0, 1],
        ] {
            if let Some(r) = v.eval_int_poly(p, x) {
                assert_ne!(Some(r), v.zero());
                tested += 1;
            }
        }
        assert!(tested >= 2, "{tested}");
        // distinct monomials for distinct group elements
        let monos: HashSet<Code> = f
            .group_codes()
            .iter()
            .filter_map(|&c| f.monomial_code(c))
            .collect();
        assert_eq!(
            monos.len(),
            f.group_codes()
                .iter()
                .filter(|&&c| f.monomial_code(c).is_some())
                .count()
        );
    }

    #[test]
    fn dyadic_square_root_of_x() {
        let mut ge = rank1("2:inf");
        let one = ge.code_for(&[int(1)], 100).unwrap();
        let half = ge.code_for(&[rat(1, 2)], 100).unwrap();
        let mut f = phi_object(ge, Basis::FirstNonzero);
        f.run_to(1200).unwrap();
        let (x, h) = (
            f.monomial_code(one).unwrap(),
            f.monomial_code(half).unwrap(),
        );
        assert_eq!(f.diagram().op(field_sym::MUL, &[h, h]), Some(x));
    }

    #[test]
    fn every_pair_is_eventually_settled() {
        let mut f = phi_object(rank1("3:1"), Basis::FirstNonzero);
        f.run_to(600).unwrap();
        let n = 12;
        for a in 0..n {
            for b in 0..n {
                for sym in OPS {
                    assert!(f.diagram().op(sym, &[a, b]).is_some(), "{sym} {a} {b}");
                }
            }
        }
    }
}
