//! Canonical listing of formal quotients A/B.
//!
//! A combination has level max(1 + largest code, largest coefficient height)
//! and at most two terms. Level L lists the pairs (A, B), B nonzero, with
//! both levels at most L and at least one equal to L, by position of A then B
//! in the list of combinations of level at most L.

use crate::diagrams::Code;
use crate::exact_algebra::{height, Rational};
use crate::tfab::enumerate::rationals_of_height;

use super::ring::{FieldQuotient, MonomialCombination};

fn coeff_level(c: &Rational) -> u64 {
    height(c).try_into().unwrap_or(u64::MAX)
}

fn level(a: &MonomialCombination) -> u64 {
    a.terms()
        .map(|(g, c)| (g + 1).max(coeff_level(c)))
        .max()
        .unwrap_or(0)
}

fn combinations(l: u64) -> Vec<MonomialCombination> {
    let coeffs: Vec<Rational> = (1..=l).flat_map(rationals_of_height).collect();
    let mut out = vec![MonomialCombination::zero()];
    for g in 0..l as Code {
        for c in &coeffs {
            out.push(MonomialCombination::monomial(g, c.clone()));
        }
    }
    for g in 0..l as Code {
        for h in g + 1..l as Code {
            for c in &coeffs {
                for d in &coeffs {
                    out.push(MonomialCombination::from_terms([
                        (g, c.clone()),
                        (h, d.clone()),
                    ]));
                }
            }
        }
    }
    // stable, so the order inside a level is the construction order above
    out.sort_by_key(level);
    out
}

pub struct QuotientEnumeration {
    level: u64,
    combos: Vec<MonomialCombination>,
    levels: Vec<u64>,
    i: usize,
    j: usize,
}

impl Default for QuotientEnumeration {
    fn default() -> Self {
        Self::new()
    }
}

impl QuotientEnumeration {
    pub fn new() -> Self {
        let mut e = QuotientEnumeration {
            level: 0,
            combos: vec![],
            levels: vec![],
            i: 0,
            j: 0,
        };
        e.open(1);
        e
    }

    fn open(&mut self, l: u64) {
        self.level = l;
        self.combos = combinations(l);
        self.levels = self.combos.iter().map(level).collect();
        self.i = 0;
        self.j = 0;
    }
}

impl Iterator for QuotientEnumeration {
    type Item = FieldQuotient;

    fn next(&mut self) -> Option<FieldQuotient> {
        loop {
            let n = self.combos.len();
            if self.i >= n {
                let l = self.level + 1;
                self.open(l);
                continue;
            }
            let (i, j) = (self.i, self.j);
            self.j += 1;
            if self.j >= n {
                self.j = 0;
                self.i += 1;
            }
            if self.levels[i].max(self.levels[j]) != self.level || self.combos[j].is_zero() {
                continue;
            }
            return FieldQuotient::new(self.combos[i].clone(), self.combos[j].clone());
        }
    }
}
