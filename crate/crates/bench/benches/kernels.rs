use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use effred::diagrams::Emitter;
use effred::exact_algebra::int;
use effred::exact_algebra::{rat, Cyclo, Field, Poly};
use effred::fd_fields::{cyclo_emitter, CycloTower, RootSetOperator};
use effred::grp2fld::{phi_object, Basis};
use effred::hensel::{HenselElement, HenselEmitter};
use effred::sigma3::{relation_by_name, FamilyCore, OracleFamily};
use effred_bench::{rank1, sqrt_1_plus_t};

fn algebra(c: &mut Criterion) {
    let a = Cyclo::new(
        105,
        Poly::from_coeffs((0..48).map(|i| rat(i % 7 - 3, 1 + i % 4)).collect()),
    )
    .unwrap();
    let b = Cyclo::new(
        105,
        Poly::from_coeffs((0..48).map(|i| rat(i % 5 - 2, 1 + i % 3)).collect()),
    )
    .unwrap();
    c.bench_function("cyclo105 mul", |x| x.iter(|| a.mul(&b)));
    c.bench_function("cyclo105 inv", |x| x.iter(|| a.inv()));
}

fn emitters(c: &mut Criterion) {
    c.bench_function("group 2:inf to stage 2000", |x| {
        x.iter(|| rank1("2:inf").run_to(2000).unwrap().size())
    });
    c.bench_function("phi(Z) to stage 500", |x| {
        x.iter(|| {
            phi_object(rank1("*:0"), Basis::FirstNonzero)
                .run_to(500)
                .unwrap()
                .size()
        })
    });
    c.bench_function("rootset Q(zeta_3) to stage 1000", |x| {
        x.iter(|| {
            let mut op =
                RootSetOperator::with_defaults(cyclo_emitter(CycloTower::fixed(3).unwrap()))
                    .with_window((0..40).collect());
            op.run_to(1000).unwrap()
        })
    });
    c.bench_function("hensel over Q to stage 100", |x| {
        x.iter(|| {
            HenselEmitter::with_defaults(CycloTower::fixed(1).unwrap())
                .run_to(100)
                .unwrap()
                .size()
        })
    });
}

fn series(c: &mut Criterion) {
    let f = sqrt_1_plus_t();
    c.bench_function("sqrt(1+t) to t^64", |x| {
        x.iter(|| HenselElement::lift(&f, &int(1)).unwrap().series(64))
    });
}

fn sigma3(c: &mut Criterion) {
    let family = Arc::new(OracleFamily::e0_sample());
    c.bench_function("sigma3 machine (0,1,2) to stage 5000", |x| {
        x.iter(|| {
            let mut core = FamilyCore::new(family.clone(), relation_by_name("e0").unwrap());
            core.machine((0, 1, 2), 5000).current().r
        })
    });
}

criterion_group!(benches, algebra, emitters, series, sigma3);
criterion_main!(benches);
