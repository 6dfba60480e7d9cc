//! Subgroups of Q^r given by a membership oracle, and the emitter that turns
//! them into free-standing group diagrams.

use std::collections::{HashMap, VecDeque};

use crate::diagrams::{
    cantor_unpair, group_sym, Code, Diagram, DiagramError, Emitter, Fact, Signature,
};
use crate::exact_algebra::Rational;

use super::enumerate::VectorEnumeration;

pub type QrVector = Vec<Rational>;

/// A subgroup of Q^r growing with the stage.
pub trait QrGroup: Send {
    fn rank(&self) -> usize;
    /// Membership in the stage-s group; must be monotone in s.
    fn contains(&mut self, v: &[Rational], stage: u64) -> bool;
    fn describe(&self) -> String;
}

/// Finitely generated static subgroup: the Z-span of the given vectors.
/// Membership is decided by exact linear algebra.
pub struct SpanGroup {
    rank: usize,
    basis: Vec<QrVector>,
}

impl SpanGroup {
    /// `gens` must be linearly independent.
    pub fn new(gens: Vec<QrVector>) -> Self {
        let rank = gens[0].len();
        SpanGroup { rank, basis: gens }
    }

    pub fn standard(rank: usize) -> Self {
        let zero = Rational::from_integer(0.into());
        let one = Rational::from_integer(1.into());
        let gens = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| if i == j { one.clone() } else { zero.clone() })
                    .collect()
            })
            .collect();
        Self::new(gens)
    }
}

impl QrGroup for SpanGroup {
    fn rank(&self) -> usize {
        self.rank
    }

    fn contains(&mut self, v: &[Rational], _stage: u64) -> bool {
        match solve(&self.basis, v) {
            Some(c) => c.iter().all(|x| x.is_integer()),
            None => false,
        }
    }

    fn describe(&self) -> String {
        format!("span of {} vectors in Q^{}", self.basis.len(), self.rank)
    }
}

/// Coordinates of v in the basis (rows), if v lies in its Q-span.
fn solve(basis: &[QrVector], v: &[Rational]) -> Option<Vec<Rational>> {
    let k = basis.len();
    let n = v.len();
    // columns are basis vectors; augmented with v
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|r| {
            basis
                .iter()
                .map(|b| b[r].clone())
                .chain([v[r].clone()])
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..k {
        let Some(p) = (row..n).find(|&r| m[r][col] != Rational::from_integer(0.into())) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != row && m[r][col] != Rational::from_integer(0.into()) {
                let f = m[r][col].clone();
                for c in 0..=k {
                    let d = &m[row][c] * &f;
                    m[r][c] = &m[r][c] - d;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if (row..n).any(|r| m[r][k] != Rational::from_integer(0.into())) {
        return None;
    }
    let mut out = vec![Rational::from_integer(0.into()); k];
    for (r, &c) in pivots.iter().enumerate() {
        out[c] = m[r][k].clone();
    }
    Some(out)
}

#[derive(Debug, Clone, Copy)]
pub struct EmitterConfig {
    /// New positions of the height enumeration examined per stage.
    pub scan_per_stage: usize,
    /// Deferred non-members re-examined per stage.
    pub recheck_per_stage: usize,
    /// Operation facts (pairs, and separately negations) committed per stage.
    pub facts_per_stage: usize,
}

impl Default for EmitterConfig {
    fn default() -> Self {
        EmitterConfig {
            scan_per_stage: 2,
            recheck_per_stage: 1,
            facts_per_stage: 4,
        }
    }
}

/// Emits the diagram of a `QrGroup`. Codes are handed out in order of first
/// appearance: the height enumeration (with deferred re-checks of earlier
/// non-members) and results of operations. Addition facts are committed in
/// Cantor order of the code pair.
pub struct GroupEmitter {
    group: Box<dyn QrGroup>,
    config: EmitterConfig,
    diagram: Diagram,
    stage: u64,
    codes: HashMap<QrVector, Code>,
    elems: Vec<QrVector>,
    enumeration: VectorEnumeration,
    deferred: VecDeque<QrVector>,
    pair_cursor: u128,
    neg_cursor: Code,
}

impl GroupEmitter {
    pub fn new(group: Box<dyn QrGroup>, config: EmitterConfig) -> Self {
        let rank = group.rank();
        GroupEmitter {
            group,
            config,
            diagram: Diagram::new(Signature::group()),
            stage: 0,
            codes: HashMap::new(),
            elems: Vec::new(),
            enumeration: VectorEnumeration::new(rank),
            deferred: VecDeque::new(),
            pair_cursor: 0,
            neg_cursor: 0,
        }
    }

    pub fn with_defaults(group: Box<dyn QrGroup>) -> Self {
        Self::new(group, EmitterConfig::default())
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn describe(&self) -> String {
        self.group.describe()
    }

    pub fn code_of(&self, v: &[Rational]) -> Option<Code> {
        self.codes.get(v).copied()
    }

    pub fn element(&self, c: Code) -> Option<&QrVector> {
        self.elems.get(c as usize)
    }

    pub fn elements(&self) -> &[QrVector] {
        &self.elems
    }

    /// Internal-oracle membership at the current stage.
    pub fn contains(&mut self, v: &[Rational]) -> bool {
        let s = self.stage;
        self.group.contains(v, s)
    }

    fn intern(&mut self, v: QrVector) -> Code {
        if let Some(&c) = self.codes.get(&v) {
            return c;
        }
        let c = self.elems.len() as Code;
        self.codes.insert(v.clone(), c);
        self.elems.push(v);
        c
    }

    /// Run stages until `v` has a code (the vector must lie in the limit group).
    pub fn code_for(&mut self, v: &[Rational], max_stages: u64) -> Option<Code> {
        let limit = self.stage + max_stages;
        while self.stage < limit {
            if let Some(c) = self.code_of(v) {
                return Some(c);
            }
            if self.group.contains(v, self.stage) {
                return Some(self.intern(v.to_vec()));
            }
            self.step().ok()?;
        }
        self.code_of(v)
    }

    /// Run until every addition fact among codes `< n` is committed.
    pub fn close_below(&mut self, n: Code) -> Result<(), DiagramError> {
        while (self.elems.len() as u64) < n || {
            let (a, b) = cantor_unpair(self.pair_cursor);
            a + b < 2 * n as u128
        } {
            self.step()?;
        }
        Ok(())
    }
}

impl Emitter for GroupEmitter {
    fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    fn stage(&self) -> u64 {
        self.stage
    }

    fn step(&mut self) -> Result<(), DiagramError> {
        let s = self.stage;
        if s == 0 {
            let zero = vec![Rational::from_integer(0.into()); self.group.rank()];
            let c = self.intern(zero);
            self.diagram.commit(s, Fact::new(group_sym::E, vec![], c))?;
        }
        for _ in 0..self.config.scan_per_stage {
            let v = self.enumeration.next().expect("infinite enumeration");
            if self.codes.contains_key(&v) {
                continue;
            }
            if self.group.contains(&v, s) {
                self.intern(v);
            } else {
                self.deferred.push_back(v);
            }
        }
        for _ in 0..self.config.recheck_per_stage.min(self.deferred.len()) {
            let v = self.deferred.pop_front().expect("nonempty");
            if self.codes.contains_key(&v) {
                continue;
            }
            if self.group.contains(&v, s) {
                self.intern(v);
            } else {
                self.deferred.push_back(v);
            }
        }
        for _ in 0..self.config.facts_per_stage {
            let a = self.neg_cursor;
            if a as usize >= self.elems.len() {
                break;
            }
            let v: QrVector = self.elems[a as usize].iter().map(|x| -x).collect();
            let c = self.intern(v);
            self.diagram
                .commit(s, Fact::new(group_sym::NEG, vec![a], c))?;
            self.neg_cursor += 1;
        }
        for _ in 0..self.config.facts_per_stage {
            let (a, b) = cantor_unpair(self.pair_cursor);
            let n = self.elems.len() as u128;
            if a >= n || b >= n {
                break;
            }
            let v: QrVector = self.elems[a as usize]
                .iter()
                .zip(&self.elems[b as usize])
                .map(|(x, y)| x + y)
                .collect();
            let c = self.intern(v);
            self.diagram
                .commit(s, Fact::new(group_sym::ADD, vec![a as Code, b as Code], c))?;
            self.pair_cursor += 1;
        }
        self.stage += 1;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::audit;
    use crate::exact_algebra::rat;

    #[test]
    fn integers_emit_a_valid_diagram() {
        let mut g = GroupEmitter::with_defaults(Box::new(SpanGroup::standard(1)));
        g.run_to(300).unwrap();
        let d = g.diagram();
        assert!(audit(d).clean());
        let one = g.code_of(&[rat(1, 1)]).unwrap();
        let two = g.code_of(&[rat(2, 1)]).unwrap();
        let three = g.code_of(&[rat(3, 1)]).unwrap();
        assert_eq!((one, two), (1, 3));
        assert_eq!(d.op(group_sym::ADD, &[one, two]), Some(three));
        assert!(g.code_of(&[rat(1, 2)]).is_none());
    }

    #[test]
    fn span_membership() {
        let mut g = SpanGroup::new(vec![vec![rat(1, 2), rat(0, 1)], vec![rat(1, 1), rat(1, 1)]]);
        assert!(g.contains(&[rat(3, 2), rat(1, 1)], 0));
        assert!(!g.contains(&[rat(1, 4), rat(0, 1)], 0));
        assert!(!g.contains(&[rat(0, 1), rat(1, 2)], 0));
    }

    #[test]
    fn close_below_commits_all_small_sums() {
        let mut g = GroupEmitter::with_defaults(Box::new(SpanGroup::standard(2)));
        g.close_below(10).unwrap();
        for a in 0..10 {
            for b in 0..10 {
                assert!(g.diagram().op(group_sym::ADD, &[a, b]).is_some());
            }
        }
    }
}
