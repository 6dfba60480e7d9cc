//! Fields presented as a growing tower of exactly computable levels, and the
//! emitter producing their diagrams with codes stable across levels.

use std::collections::HashMap;
use std::hash::Hash;

use crate::diagrams::{
    cantor_unpair, field_sym, Code, Diagram, DiagramError, Emitter, Fact, Signature,
};
use crate::exact_algebra::Field;

/// A field given as the union of an increasing chain of exact levels.
pub trait Tower {
    type Elem: Field;
    type Key: Eq + Hash + Clone;

    /// Hash key of an element expressed at the current level.
    fn key(&self, x: &Self::Elem) -> Self::Key;
    /// Move to stage `s`; true if the level changed.
    fn advance(&mut self, stage: u64) -> Result<bool, DiagramError>;
    /// Image of an element of the previous level under the canonical embedding.
    fn embed(&self, x: &Self::Elem) -> Self::Elem;
    /// Generators to be present at the current level.
    fn generators(&self) -> Vec<Self::Elem>;
    fn render(&self, x: &Self::Elem) -> String;
    /// Short description of the current level.
    fn header(&self) -> String;
}

#[derive(Debug, Clone, Copy)]
pub struct FieldEmitterConfig {
    /// Argument pairs processed per stage; each yields `+`, `-` and `*` facts.
    pub pairs_per_stage: usize,
    /// Elements whose inverse is added per stage.
    pub inverses_per_stage: usize,
}

impl Default for FieldEmitterConfig {
    fn default() -> Self {
        FieldEmitterConfig {
            pairs_per_stage: 4,
            inverses_per_stage: 2,
        }
    }
}

/// Emits the diagram of a `Tower`: 0, 1 and the generators get codes first,
/// then the closure under inverses and the three operations, with operation
/// facts committed in Cantor order of the argument pair.
pub struct TowerEmitter<T: Tower> {
    tower: T,
    config: FieldEmitterConfig,
    diagram: Diagram,
    stage: u64,
    elems: Vec<T::Elem>,
    codes: HashMap<T::Key, Code>,
    pair_cursor: u128,
    inv_cursor: usize,
}

impl<T: Tower> TowerEmitter<T> {
    pub fn new(tower: T, config: FieldEmitterConfig) -> Self {
        TowerEmitter {
            tower,
            config,
            diagram: Diagram::new(Signature::field()),
            stage: 0,
            elems: Vec::new(),
            codes: HashMap::new(),
            pair_cursor: 0,
            inv_cursor: 0,
        }
    }

    pub fn with_defaults(tower: T) -> Self {
        Self::new(tower, FieldEmitterConfig::default())
    }

    pub fn tower(&self) -> &T {
        &self.tower
    }

    pub fn element(&self, c: Code) -> Option<&T::Elem> {
        self.elems.get(c as usize)
    }

    pub fn elements(&self) -> &[T::Elem] {
        &self.elems
    }

    pub fn code_of(&self, x: &T::Elem) -> Option<Code> {
        self.codes.get(&self.tower.key(x)).copied()
    }

    pub fn render(&self, c: Code) -> Option<String> {
        self.element(c).map(|x| self.tower.render(x))
    }

    fn intern(&mut self, x: T::Elem) -> Code {
        let k = self.tower.key(&x);
        if let Some(&c) = self.codes.get(&k) {
            return c;
        }
        let c = self.elems.len() as Code;
        self.codes.insert(k, c);
        self.elems.push(x);
        c
    }

    /// Run until every operation fact among codes `< n` is committed.
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

impl<T: Tower> Emitter for TowerEmitter<T> {
    fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    fn stage(&self) -> u64 {
        self.stage
    }

    fn step(&mut self) -> Result<(), DiagramError> {
        let s = self.stage;
        if self.tower.advance(s)? {
            let old = std::mem::take(&mut self.elems);
            self.codes.clear();
            for x in old {
                let y = self.tower.embed(&x);
                self.intern(y);
            }
        }
        if s == 0 {
            let z = self.intern(T::Elem::zero());
            let o = self.intern(T::Elem::one());
            self.diagram
                .commit(s, Fact::new(field_sym::ZERO, vec![], z))?;
            self.diagram
                .commit(s, Fact::new(field_sym::ONE, vec![], o))?;
        }
        for g in self.tower.generators() {
            self.intern(g);
        }
        for _ in 0..self.config.inverses_per_stage {
            let Some(x) = self.elems.get(self.inv_cursor) else {
                break;
            };
            if let Some(y) = x.inv() {
                self.intern(y);
            }
            self.inv_cursor += 1;
        }
        for _ in 0..self.config.pairs_per_stage {
            let (a, b) = cantor_unpair(self.pair_cursor);
            let n = self.elems.len() as u128;
            if a >= n || b >= n {
                break;
            }
            let (x, y) = (
                self.elems[a as usize].clone(),
                self.elems[b as usize].clone(),
            );
            let args = vec![a as Code, b as Code];
            for (sym, r) in [
                (field_sym::ADD, x.add(&y)),
                (field_sym::SUB, x.sub(&y)),
                (field_sym::MUL, x.mul(&y)),
            ] {
                let c = self.intern(r);
                self.diagram.commit(s, Fact::new(sym, args.clone(), c))?;
            }
            self.pair_cursor += 1;
        }
        self.stage += 1;
        Ok(())
    }
}
