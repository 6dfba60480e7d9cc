//! Reading a group through its diagram alone: derived operations, linear
//! combinations, bounded independence checks and divisibility extraction.

use serde::Serialize;

use crate::diagrams::{group_sym, Code, Diagram};
use crate::primes::nth_prime;

/// Stage-bounded read access to a group diagram. Every answer is `None`
/// until the facts it rests on are committed.
#[derive(Clone, Copy)]
pub struct GroupView<'a> {
    d: &'a Diagram,
    stage: u64,
}

impl<'a> GroupView<'a> {
    pub fn new(d: &'a Diagram, stage: u64) -> Self {
        GroupView { d, stage }
    }

    pub fn latest(d: &'a Diagram) -> Self {
        GroupView { d, stage: u64::MAX }
    }

    pub fn zero(&self) -> Option<Code> {
        self.d.read_op(self.stage, group_sym::E, &[])
    }

    pub fn add(&self, a: Code, b: Code) -> Option<Code> {
        self.d.read_op(self.stage, group_sym::ADD, &[a, b])
    }

    pub fn neg(&self, a: Code) -> Option<Code> {
        self.d.read_op(self.stage, group_sym::NEG, &[a])
    }

    /// n·a by double-and-add.
    pub fn mul(&self, n: i64, a: Code) -> Option<Code> {
        let base = if n < 0 { self.neg(a)? } else { a };
        let mut k = n.unsigned_abs();
        let mut acc = self.zero()?;
        let mut pow = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, pow)?;
            }
            k >>= 1;
            if k > 0 {
                pow = self.add(pow, pow)?;
            }
        }
        Some(acc)
    }

    pub fn lincomb(&self, coeffs: &[i64], xs: &[Code]) -> Option<Code> {
        let mut acc = self.zero()?;
        for (&c, &x) in coeffs.iter().zip(xs) {
            if c != 0 {
                let t = self.mul(c, x)?;
                acc = self.add(acc, t)?;
            }
        }
        Some(acc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Independence {
    IndependentSoFar,
    /// Nonzero integer coefficients whose combination is committed as 0.
    Dependent(Vec<i64>),
}

/// Coefficient vectors with max |c| = h and first nonzero entry positive,
/// in lexicographic order from -h upward.
fn vectors_of_height(k: usize, h: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![-h; k];
    loop {
        let first = cur.iter().find(|&&c| c != 0);
        if matches!(first, Some(&c) if c > 0) && cur.iter().any(|c| c.abs() == h) {
            out.push(cur.clone());
        }
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < h {
                cur[i] += 1;
                break;
            }
            cur[i] = -h;
        }
    }
}

/// Search for an integer relation among `xs` with coefficients bounded by
/// `coef_bound`, reading the diagram up to `stage`.
pub fn independence_check(d: &Diagram, xs: &[Code], stage: u64, coef_bound: i64) -> Independence {
    let v = GroupView::new(d, stage);
    let Some(zero) = v.zero() else {
        return Independence::IndependentSoFar;
    };
    for h in 1..=coef_bound {
        for c in vectors_of_height(xs.len(), h) {
            if v.lincomb(&c, xs) == Some(zero) {
                return Independence::Dependent(c);
            }
        }
    }
    Independence::IndependentSoFar
}

/// Divisibility of the element `one` seen in the diagram: for each of the
/// first `primes` primes, the largest e <= `max_exp` such that some committed
/// x satisfies p^e·x = one.
pub fn extract_type(d: &Diagram, one: Code, stage: u64, primes: usize, max_exp: u32) -> Vec<u64> {
    let v = GroupView::new(d, stage);
    let size = d.size_at(stage);
    (0..primes)
        .map(|i| {
            let p = nth_prime(i) as i64;
            let mut best = 0;
            for e in 1..=max_exp {
                let Some(n) = p.checked_pow(e) else { break };
                if (0..size).any(|x| v.mul(n, x) == Some(one)) {
                    best = e as u64;
                } else {
                    break;
                }
            }
            best
        })
        .collect()
}
