//! Reading a field through its diagram alone.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::diagrams::{field_sym, Code, Diagram};

/// Stage-bounded field operations read from committed facts. Derived
/// operations return `None` while a fact they need is uncommitted.
pub struct FieldView<'a> {
    d: &'a Diagram,
    stage: u64,
    inverses: RefCell<HashMap<Code, Code>>,
}

impl<'a> FieldView<'a> {
    pub fn new(d: &'a Diagram, stage: u64) -> Self {
        FieldView {
            d,
            stage,
            inverses: RefCell::new(HashMap::new()),
        }
    }

    pub fn latest(d: &'a Diagram) -> Self {
        Self::new(d, u64::MAX)
    }

    /// Reuse inverses found by an earlier view of the same stream.
    pub fn with_inverses(d: &'a Diagram, stage: u64, known: HashMap<Code, Code>) -> Self {
        FieldView {
            d,
            stage,
            inverses: RefCell::new(known),
        }
    }

    pub fn into_inverses(self) -> HashMap<Code, Code> {
        self.inverses.into_inner()
    }

    pub fn diagram(&self) -> &Diagram {
        self.d
    }

    pub fn zero(&self) -> Option<Code> {
        self.d.read_op(self.stage, field_sym::ZERO, &[])
    }

    pub fn one(&self) -> Option<Code> {
        self.d.read_op(self.stage, field_sym::ONE, &[])
    }

    pub fn add(&self, a: Code, b: Code) -> Option<Code> {
        self.d.read_op(self.stage, field_sym::ADD, &[a, b])
    }

    pub fn sub(&self, a: Code, b: Code) -> Option<Code> {
        self.d.read_op(self.stage, field_sym::SUB, &[a, b])
    }

    pub fn mul(&self, a: Code, b: Code) -> Option<Code> {
        self.d.read_op(self.stage, field_sym::MUL, &[a, b])
    }

    pub fn neg(&self, a: Code) -> Option<Code> {
        self.sub(self.zero()?, a)
    }

    /// The integer n, by double-and-add from 1.
    pub fn int(&self, n: i64) -> Option<Code> {
        let mut k = n.unsigned_abs();
        let mut acc = self.zero()?;
        let mut pow = self.one()?;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, pow)?;
            }
            k >>= 1;
            if k > 0 {
                pow = self.add(pow, pow)?;
            }
        }
        if n < 0 {
            self.neg(acc)
        } else {
            Some(acc)
        }
    }

    /// Value at `x` of the integer polynomial with coefficients `c` (low first).
    pub fn eval_int_poly(&self, c: &[i64], x: Code) -> Option<Code> {
        let mut acc = self.int(*c.last()?)?;
        for &a in c.iter().rev().skip(1) {
            acc = self.mul(acc, x)?;
            if a != 0 {
                acc = self.add(acc, self.int(a)?)?;
            }
        }
        Some(acc)
    }

    /// Multiplicative inverse found among the committed products.
    pub fn inv(&self, a: Code) -> Option<Code> {
        if let Some(&b) = self.inverses.borrow().get(&a) {
            return Some(b);
        }
        let one = self.one()?;
        let b = (0..self.d.size()).find(|&b| self.mul(a, b) == Some(one))?;
        self.inverses.borrow_mut().insert(a, b);
        Some(b)
    }
}
