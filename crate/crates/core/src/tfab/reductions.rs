//! Group-side reductions: bit streams and enumerations to rank-1 groups, and
//! the direct sum with Z.

use std::sync::Arc;

use crate::diagrams::{
    cantor_pair, cantor_unpair, group_sym, BitPrefix, Code, Diagram, DiagramError, Emitter, Fact,
    Operator, Signature,
};
use crate::streams::{BitStream, Enumeration};

use super::presentation::{EmitterConfig, GroupEmitter};
use super::types::{DivisibilityType, Rank1Group, TypeValue};

pub fn rank1_from_type(t: DivisibilityType) -> GroupEmitter {
    GroupEmitter::with_defaults(Box::new(Rank1Group { ty: t }))
}

/// t(p_n) = f(n); bit n becomes visible at stage n + 1.
pub fn e0_type(f: &BitStream) -> DivisibilityType {
    let f = f.clone();
    let name = format!("e0[{f:?}]");
    DivisibilityType::from_limit(&name, move |i| TypeValue::Finite(f.get(i as u64) as u64))
}

pub fn e0_to_tfab1(f: &BitStream) -> GroupEmitter {
    rank1_from_type(e0_type(f))
}

/// The same reduction as an operator on finite prefixes: a prefix of length
/// L yields the diagram emitted through stage L.
pub fn e0_operator() -> Operator<BitPrefix, Diagram> {
    Operator::new("BITS", "TFAB1", |p: &BitPrefix| {
        let bits = Arc::new(p.0.clone());
        let b2 = bits.clone();
        let ty = DivisibilityType::from_approx("prefix", move |s, i| {
            (i < s as usize && b2.get(i).copied().unwrap_or(false)) as u64
        });
        let mut g = rank1_from_type(ty);
        g.run_to(bits.len() as u64)?;
        Ok(g.diagram().clone())
    })
}

/// Entry 1 at p_k once k has been enumerated into W, else 0.
pub fn cof_type(w: &Enumeration) -> DivisibilityType {
    let w = w.clone();
    DivisibilityType::from_approx("cof", move |s, i| w.at(s).contains(&(i as u64)) as u64)
}

pub fn cof_to_tfab1(w: &Enumeration) -> GroupEmitter {
    rank1_from_type(cof_type(w))
}

/// The group generated by all 1/p.
pub fn cof_target() -> DivisibilityType {
    DivisibilityType::constant(TypeValue::Finite(1))
}

pub fn zigzag(n: i64) -> u128 {
    if n >= 0 {
        2 * n as u128
    } else {
        2 * n.unsigned_abs() as u128 - 1
    }
}

pub fn unzigzag(z: u128) -> i64 {
    if z % 2 == 0 {
        (z / 2) as i64
    } else {
        -(z.div_ceil(2) as i64)
    }
}

/// Code of (g, n) in G ⊕ Z.
pub fn sum_code(g: Code, n: i64) -> Option<Code> {
    cantor_pair(g as u128, zigzag(n)).and_then(|c| Code::try_from(c).ok())
}

pub fn sum_decode(c: Code) -> (Code, i64) {
    let (g, z) = cantor_unpair(c as u128);
    (g as Code, unzigzag(z))
}

/// G ⊕ Z from a group emitter. Each input fact is combined with every
/// integer fact; the pairs (input event, integer fact) are visited in Cantor
/// order, a fixed number per stage.
pub struct AddZ<E: Emitter> {
    inner: E,
    diagram: Diagram,
    stage: u64,
    cursor: u128,
    facts_per_stage: usize,
}

impl<E: Emitter> AddZ<E> {
    pub fn new(inner: E) -> Self {
        let facts_per_stage = 3 * EmitterConfig::default().facts_per_stage;
        AddZ {
            inner,
            diagram: Diagram::new(Signature::group()),
            stage: 0,
            cursor: 0,
            facts_per_stage,
        }
    }

    pub fn inner(&self) -> &E {
        &self.inner
    }

    fn product_fact(f: &Fact, j: u128) -> Option<Fact> {
        match f.sym {
            group_sym::E => (j == 0).then(|| {
                Fact::new(
                    group_sym::E,
                    vec![],
                    sum_code(f.res, 0).expect("small code"),
                )
            }),
            group_sym::NEG => {
                let n = unzigzag(j);
                Some(Fact::new(
                    group_sym::NEG,
                    vec![sum_code(f.args[0], n)?],
                    sum_code(f.res, -n)?,
                ))
            }
            _ => {
                let (a, b) = cantor_unpair(j);
                let (n, m) = (unzigzag(a), unzigzag(b));
                Some(Fact::new(
                    group_sym::ADD,
                    vec![sum_code(f.args[0], n)?, sum_code(f.args[1], m)?],
                    sum_code(f.res, n + m)?,
                ))
            }
        }
    }
}

impl<E: Emitter> Emitter for AddZ<E> {
    fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    fn stage(&self) -> u64 {
        self.stage
    }

    fn step(&mut self) -> Result<(), DiagramError> {
        self.inner.step()?;
        let s = self.stage;
        let mut done = 0;
        while done < self.facts_per_stage {
            let (i, j) = cantor_unpair(self.cursor);
            let events = self.inner.diagram().events();
            let Some(ev) = events.get(i as usize) else {
                break;
            };
            let fact = ev.fact.clone();
            self.cursor += 1;
            if let Some(out) = Self::product_fact(&fact, j) {
                self.diagram.commit(s, out)?;
                done += 1;
            }
        }
        self.stage += 1;
        Ok(())
    }
}
