//! Fingerprints of field elements. An additive map lambda: G -> Z/m is learned
//! from committed facts, and Y_g -> y^lambda(g) extends it to a ring map
//! Q[G] -> F_q (y of prime order m in F_q^*). Ring maps send equal quotients
//! to equal values, so different fingerprints certify different elements.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};

use crate::diagrams::{group_sym, Code, Event};
use crate::exact_algebra::Rational;
use crate::tfab::GroupView;

use super::ring::{FieldQuotient, MonomialCombination};

/// q = 2m + 1 with m prime. Y = 4^k for a large k, so it has order m and
/// no small-height relation with the integers.
pub const Q: u64 = 4_611_686_018_427_377_339;
const M: u64 = 2_305_843_009_213_688_669;
const Y: u64 = 415_754_511_687_168_253;

fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    a %= n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, n);
        }
        a = mulmod(a, a, n);
        e >>= 1;
    }
    acc
}

/// a^e in F_q.
pub fn pow_q(a: u64, e: u64) -> u64 {
    powmod(a, e, Q)
}

/// Inverse modulo a prime.
fn invmod(a: u64, n: u64) -> Option<u64> {
    (a % n != 0).then(|| powmod(a, n - 2, n))
}

fn int_mod(x: &BigInt, n: u64) -> u64 {
    let r = x % BigInt::from(n);
    let r = if r < BigInt::zero() {
        r + BigInt::from(n)
    } else {
        r
    };
    r.to_u64().expect("reduced")
}

fn rat_mod(x: &Rational, n: u64) -> Option<u64> {
    Some(mulmod(
        int_mod(x.numer(), n),
        invmod(int_mod(x.denom(), n), n)?,
        n,
    ))
}

/// How the exponent map picks its reference elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Basis {
    /// Rank 1: the first nonzero code seen.
    FirstNonzero,
    /// Codes of a maximal independent family, supplied by the caller.
    Codes(Vec<Code>),
    /// lambda = 0; fingerprints reduce to the augmentation.
    Trivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fingerprint {
    Value(u64),
    /// The denominator's image vanished.
    Undefined,
    /// Some exponent is not yet learned.
    Unknown,
}

pub struct ExponentMap {
    spec: Basis,
    basis: Option<Vec<Code>>,
    weights: Vec<u64>,
    learned: HashMap<Code, u64>,
    powers: HashMap<Code, u64>,
    /// Codes of sum b_i u_i with |b_i| <= bound, mapped to their exponents.
    lattice: HashMap<Code, u64>,
    lattice_todo: Vec<Vec<i64>>,
    bound: i64,
    max_bound: i64,
    max_multiplier: u64,
}

impl ExponentMap {
    pub fn new(spec: Basis) -> Self {
        let rank = match &spec {
            Basis::FirstNonzero => 1,
            Basis::Codes(c) => c.len(),
            Basis::Trivial => 0,
        };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        let weights = (0..rank)
            .map(|i| if i == 0 { 1 } else { rng.gen_range(2..M) })
            .collect();
        let max_bound = match rank {
            0 | 1 => 4096,
            2 => 48,
            _ => 12,
        };
        ExponentMap {
            spec,
            basis: None,
            weights,
            learned: HashMap::new(),
            powers: HashMap::new(),
            lattice: HashMap::new(),
            lattice_todo: Vec::new(),
            bound: -1,
            max_bound,
            max_multiplier: 64,
        }
    }

    pub fn basis(&self) -> Option<&[Code]> {
        self.basis.as_deref()
    }

    pub fn exponent(&self, g: Code) -> Option<u64> {
        if self.spec == Basis::Trivial {
            return Some(0);
        }
        self.learned.get(&g).copied()
    }

    fn record(&mut self, g: Code, x: u64) {
        self.learned.entry(g).or_insert(x);
    }

    /// Take in newly committed group facts.
    pub fn observe(&mut self, events: &[Event], zero: Option<Code>) {
        if self.basis.is_none() {
            self.basis = match &self.spec {
                Basis::FirstNonzero => {
                    let z = zero;
                    events
                        .iter()
                        .flat_map(|e| e.fact.args.iter().copied().chain([e.fact.res]))
                        .find(|&c| Some(c) != z && z.is_some())
                        .map(|u| vec![u])
                }
                Basis::Codes(c) => Some(c.clone()),
                Basis::Trivial => Some(vec![]),
            };
        }
        if let Some(z) = zero {
            self.record(z, 0);
        }
        // one pass of propagation along the new facts
        for e in events {
            let f = &e.fact;
            match f.sym {
                group_sym::NEG => {
                    let (a, r) = (f.args[0], f.res);
                    if let Some(x) = self.exponent(a) {
                        self.record(r, (M - x) % M);
                    } else if let Some(x) = self.exponent(r) {
                        self.record(a, (M - x) % M);
                    }
                }
                group_sym::ADD => {
                    let (a, b, r) = (f.args[0], f.args[1], f.res);
                    match (self.exponent(a), self.exponent(b), self.exponent(r)) {
                        (Some(x), Some(y), None) => self.record(r, (x + y) % M),
                        (Some(x), None, Some(z)) => self.record(b, (z + M - x) % M),
                        (None, Some(y), Some(z)) => self.record(a, (z + M - y) % M),
                        _ => {}
                    }
                }
                _ => {}
            }
        }
    }

    /// Retry missing lattice points (a bounded number), and widen the
    /// lattice by one step once none are missing.
    pub fn refresh(&mut self, g: &GroupView) {
        const RETRIES: usize = 256;
        let Some(basis) = self.basis.clone() else {
            return;
        };
        if basis.is_empty() {
            return;
        }
        self.max_multiplier = (self.max_multiplier + 1).min(4096);
        if self.lattice_todo.is_empty() && self.bound < self.max_bound {
            self.bound += 1;
            let j = self.bound;
            let r = basis.len();
            let mut t = vec![-j; r];
            loop {
                if t.iter().any(|x| x.abs() == j) {
                    self.lattice_todo.push(t.clone());
                }
                let mut i = 0;
                while i < r && t[i] == j {
                    t[i] = -j;
                    i += 1;
                }
                if i == r {
                    break;
                }
                t[i] += 1;
            }
        }
        let n = self.lattice_todo.len().min(RETRIES);
        let batch: Vec<Vec<i64>> = self.lattice_todo.drain(..n).collect();
        for t in batch {
            match g.lincomb(&t, &basis) {
                Some(c) => {
                    let x = t.iter().zip(&self.weights).fold(0u64, |acc, (&b, &w)| {
                        let b = if b < 0 {
                            M - (b.unsigned_abs() % M)
                        } else {
                            b as u64 % M
                        };
                        (acc + mulmod(b, w, M)) % M
                    });
                    self.lattice.insert(c, x);
                    self.record(c, x);
                }
                None => self.lattice_todo.push(t),
            }
        }
    }

    /// Find k with k·g on the reference lattice.
    pub fn learn(&mut self, c: Code, g: &GroupView) -> Option<u64> {
        if let Some(x) = self.exponent(c) {
            return Some(x);
        }
        let mut acc = c;
        for k in 1..=self.max_multiplier {
            if let Some(&x) = self.lattice.get(&acc) {
                let v = mulmod(x, invmod(k, M)?, M);
                self.record(c, v);
                return Some(v);
            }
            acc = g.add(acc, c)?;
        }
        None
    }

    fn power(&mut self, c: Code, g: &GroupView) -> Option<u64> {
        if let Some(&p) = self.powers.get(&c) {
            return Some(p);
        }
        let p = powmod(Y, self.learn(c, g)?, Q);
        self.powers.insert(c, p);
        Some(p)
    }

    /// Image in F_q of a combination; `Err(())` if a coefficient's denominator
    /// is divisible by q.
    fn image(&mut self, a: &MonomialCombination, g: &GroupView) -> Option<Result<u64, ()>> {
        let mut acc = 0u64;
        for (c, x) in a.terms() {
            let p = self.power(c, g)?;
            let Some(x) = rat_mod(x, Q) else {
                return Some(Err(()));
            };
            acc = (acc + mulmod(x, p, Q)) % Q;
        }
        Some(Ok(acc))
    }

    pub fn fingerprint(&mut self, x: &FieldQuotient, g: &GroupView) -> Fingerprint {
        let (Some(n), Some(d)) = (self.image(x.num(), g), self.image(x.den(), g)) else {
            return Fingerprint::Unknown;
        };
        match (n, d) {
            (Ok(n), Ok(d)) => match invmod(d, Q) {
                Some(i) => Fingerprint::Value(mulmod(n, i, Q)),
                None => Fingerprint::Undefined,
            },
            _ => Fingerprint::Undefined,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::Emitter;
    use crate::exact_algebra::rat;
    use crate::tfab::{DivisibilityType, GroupEmitter, Rank1Group};

    #[test]
    fn modular_helpers() {
        assert_eq!(powmod(Y, M, Q), 1);
        assert_ne!(Y, 1);
        assert_eq!(mulmod(invmod(12345, Q).unwrap(), 12345, Q), 1);
        assert_eq!(
            rat_mod(&rat(-1, 2), Q),
            Some(mulmod(Q - 1, invmod(2, Q).unwrap(), Q))
        );
    }

    #[test]
    fn dyadic_exponents() {
        let t = DivisibilityType::parse("2:inf").unwrap();
        let mut ge = GroupEmitter::with_defaults(Box::new(Rank1Group { ty: t }));
        ge.run_to(400).unwrap();
        let mut ex = ExponentMap::new(Basis::FirstNonzero);
        let d = ge.diagram();
        let view = GroupView::latest(d);
        ex.observe(d.events(), view.zero());
        for _ in 0..400 {
            ex.refresh(&view);
        }
        let u = ex.basis().unwrap()[0];
        let uq = ge.element(u).unwrap()[0].clone();
        // lambda(g) = g / u as a rational, read mod m
        let mut hits = 0;
        for c in 0..ge.elements().len() as Code {
            if let Some(x) = ex.learn(c, &view) {
                let q = &ge.element(c).unwrap()[0] / &uq;
                assert_eq!(Some(x), rat_mod(&q, M), "code {c}");
                hits += 1;
            }
        }
        assert!(hits > 20, "{hits}");
    }
}
