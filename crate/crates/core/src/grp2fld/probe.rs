//! Empirical checks on Phi: sampled zero divisors, and which roots of a
//! monomial X the emitted field contains.

use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::diagrams::{Code, Diagram, Emitter};
use crate::exact_algebra::rat;
use crate::tfab::{
    iso_rank1, DivisibilityType, GroupView, IsoThreshold, TypeEquivalenceVerdict, TypeValue,
};

use super::phi::PhiEmitter;
use super::ring::{ring_mul, MonomialCombination};

#[derive(Debug, Clone, Default, Serialize)]
pub struct ProbeReport {
    pub trials: usize,
    /// Products fully decided by committed sums.
    pub checked: usize,
    /// Trials dropped because a sampled factor was zero.
    pub excluded: usize,
    pub unknown: usize,
    pub violations: Vec<(String, String)>,
}

fn sample(rng: &mut impl Rng, codes: &[Code], max_terms: usize) -> MonomialCombination {
    let k = rng.gen_range(1..=max_terms);
    MonomialCombination::from_terms((0..k).map(|_| {
        let g = codes[rng.gen_range(0..codes.len())];
        let mut n = rng.gen_range(-4i64..=4);
        if n == 0 {
            n = 1;
        }
        (g, rat(n, rng.gen_range(1..=3)))
    }))
}

/// Multiply random nonzero combinations over `codes` and report any zero
/// product.
pub fn zero_divisor_probe(
    d: &Diagram,
    codes: &[Code],
    trials: usize,
    max_terms: usize,
    seed: u64,
) -> ProbeReport {
    let g = GroupView::latest(d);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut r = ProbeReport {
        trials,
        ..Default::default()
    };
    if codes.is_empty() {
        return r;
    }
    for _ in 0..trials {
        let a = sample(&mut rng, codes, max_terms);
        let b = sample(&mut rng, codes, max_terms);
        if a.is_zero() || b.is_zero() {
            r.excluded += 1;
            continue;
        }
        match ring_mul(&a, &b, &g) {
            Some(p) if p.is_zero() => r.violations.push((a.to_string(), b.to_string())),
            Some(_) => r.checked += 1,
            None => r.unknown += 1,
        }
    }
    r
}

/// For each prime, the largest e <= max_exp such that Y_x has a p^e-th root
/// among the representatives.
pub fn root_profile<E: Emitter>(
    f: &mut PhiEmitter<E>,
    x: Code,
    primes: &[u64],
    max_exp: u32,
) -> Vec<u32> {
    primes
        .iter()
        .map(|&p| {
            let mut e = 0;
            while e < max_exp && f.nth_root(x, p.pow(e + 1)).is_some() {
                e += 1;
            }
            e
        })
        .collect()
}

/// Read a root profile as a divisibility type, a saturated entry standing for
/// infinity, and compare two profiles with the bounded type test.
pub fn compare_root_profiles(
    a: &[u32],
    b: &[u32],
    max_exp: u32,
    th: IsoThreshold,
) -> TypeEquivalenceVerdict {
    let to_type = |v: &[u32]| {
        let v = v.to_vec();
        DivisibilityType::from_limit("roots", move |i| match v.get(i) {
            Some(&e) if e >= max_exp => TypeValue::Inf,
            Some(&e) => TypeValue::Finite(e as u64),
            None => TypeValue::Finite(0),
        })
    };
    iso_rank1(&to_type(a), &to_type(b), a.len().min(b.len()) as u64, th)
}
