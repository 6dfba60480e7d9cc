use std::sync::Arc;

use super::*;
use crate::exact_algebra::Rational;
use crate::streams::BitStream;

fn core(fam: OracleFamily, rel: Arc<dyn Sigma3Relation>) -> FamilyCore {
    FamilyCore::new(Arc::new(fam), rel)
}

fn q(a: i64, b: u64) -> Rational {
    Rational::new(a.into(), b.into())
}

#[test]
fn prime_indexing_is_a_bijection() {
    let mut seen = std::collections::HashSet::new();
    for n in 1..8 {
        for m in 0..n {
            for k in 0..6 {
                let p = triple_prime(m, n, k);
                assert_eq!(prime_owner(p), Some((m, n, k)));
                assert!(seen.insert(p));
            }
        }
    }
    for i in 0..200 {
        let p = crate::primes::nth_prime(i);
        let (m, n, k) = prime_owner(p).unwrap();
        assert_eq!(triple_prime(m, n, k), p);
    }
    assert_eq!(factor(360), [(2, 3), (3, 2), (5, 1)]);
}

#[test]
fn membership_at_stage_zero() {
    let mut c = core(OracleFamily::e0_sample(), Arc::new(E0Relation));
    let p = triple_prime(1, 3, 2);
    assert!(c.membership(5, &q(1, 1), 0));
    assert!(c.membership(3, &q(1, p), 0));
    assert!(!c.membership(1, &q(1, p), 0));
    assert!(!c.membership(3, &q(1, p * p), 0));
    // two primes: conjunction
    let p2 = triple_prime(0, 3, 0);
    assert!(c.membership(3, &q(7, p * p2), 0));
    assert!(!c.membership(0, &q(1, p * p2), 0));
}

#[test]
fn machines_match_the_naive_oracle() {
    for rel in [
        Arc::new(E0Relation) as Arc<dyn Sigma3Relation>,
        Arc::new(ConstRelation(true)),
        Arc::new(ConstRelation(false)),
    ] {
        let fam = OracleFamily::e0_sample();
        let stages = 600;
        let bound = triple_prime(0, 4, 3) + 1;
        let naive = naive_oracle(Arc::new(fam.clone()), rel.clone(), stages, 5, bound);
        let mut c = core(fam, rel.clone());
        let mut compared = 0;
        for &t in naive.triples() {
            let mach = c.machine(t, stages).clone();
            for s in 0..=stages {
                for l in 0..5 {
                    assert_eq!(
                        Some(mach.exponent(l, s)),
                        naive.exponent(t, l, s),
                        "{} {t:?} l={l} s={s}",
                        rel.name()
                    );
                    compared += 1;
                }
            }
        }
        assert!(compared > 10_000);
    }
}

#[test]
fn constant_false_keeps_g_n_ahead() {
    let mut c = core(
        OracleFamily::new(vec![BitStream::zeros(); 4]),
        Arc::new(ConstRelation(false)),
    );
    let stage = 20_000;
    for n in 1..4 {
        for m in 0..n {
            for k in 0..4 {
                let t = (m, n, k);
                let e = [c.exponent(m, t, stage), c.exponent(n, t, stage)];
                assert_eq!(e[0] + 1, e[1], "{t:?}");
            }
        }
    }
}

#[test]
fn identical_streams_make_every_prime_grow() {
    let mut c = core(
        OracleFamily::new(vec![BitStream::zeros(); 4]),
        Arc::new(E0Relation),
    );
    for t in [(0, 1, 0), (0, 3, 2), (2, 3, 1)] {
        let early = c.exponent(t.0, t, 5_000);
        let late = c.exponent(t.0, t, 40_000);
        assert!(late > early + 2, "{t:?}: {early} -> {late}");
    }
}

#[test]
fn auditor_is_clean_and_sensitive() {
    let mut c = core(OracleFamily::e0_sample(), Arc::new(E0Relation));
    let triples: Vec<Triple> = (1..5)
        .flat_map(|n| (0..n).flat_map(move |m| (0..3).map(move |k| (m, n, k))))
        .collect();
    let fresh = audit_invariants(&mut c, &triples, 0, 6, 10, 1);
    assert!(fresh.clean(), "{:?}", fresh.violations);
    let report = audit_invariants(&mut c, &triples, 3000, 6, 40, 2);
    assert!(
        report.clean() && report.points == 40,
        "{:?}",
        report.violations
    );
    let t = (0, 2, 1);
    c.machine_mut(t, 3000).flip_tag(0);
    let mut out = Sigma3Audit::default();
    audit_point(&mut c, t, 3000, 6, &mut out);
    assert!(!out.clean());
}

#[test]
fn reduce_emits_group_diagrams() {
    let out = reduce(
        Arc::new(OracleFamily::e0_sample()),
        Arc::new(E0Relation),
        300,
        3,
    );
    assert_eq!(out.groups.len(), 3);
    for i in 0..3 {
        let d = out.groups.project(i).unwrap();
        assert!(d.size() > 50 && crate::diagrams::audit(d).clean());
    }
}
