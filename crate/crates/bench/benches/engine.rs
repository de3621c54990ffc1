use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use kappa_core::arith::{cohen_h, cohen_h_euler};
use kappa_core::jacobi::{build_vv_form, family_member};
use kappa_core::lfun::{dirichlet_l_deriv, hurwitz_zeta_deriv};
use kappa_core::qseries::{build_delta, build_j};
use kappa_core::{kappa_psi, Evaluator, PrecisionConfig};
use rug::{Float, Rational};

fn qseries(c: &mut Criterion) {
    let j = build_j(40).unwrap();
    let d = build_delta(40).unwrap();
    c.bench_function("qseries/mul j*delta prec 40", |b| {
        b.iter(|| black_box(&j).mul(black_box(&d)))
    });
    c.bench_function("qseries/j^3 scaling of f", |b| {
        b.iter(|| family_member(black_box(3), 4).unwrap())
    });
}

fn cohen(c: &mut Criterion) {
    c.bench_function("cohen/finite sum N <= 400", |b| {
        b.iter(|| {
            (0..=400u64)
                .map(|n| cohen_h(2, black_box(n)))
                .collect::<Vec<_>>()
        })
    });
    c.bench_function("cohen/euler product N <= 400", |b| {
        b.iter(|| {
            (0..=400u64)
                .map(|n| cohen_h_euler(2, black_box(n)))
                .collect::<Vec<_>>()
        })
    });
}

fn lfun(c: &mut Criterion) {
    let cfg = PrecisionConfig::default();
    let s = Float::with_val(cfg.bits(), -1);
    let x = Float::with_val(cfg.bits(), 0.2);
    c.bench_function("lfun/hurwitz (-1, 1/5) 50 digits", |b| {
        b.iter(|| hurwitz_zeta_deriv(black_box(&s), black_box(&x), &cfg).unwrap())
    });
    let s = Rational::from(-1);
    c.bench_function("lfun/L'(-1, chi_5) 50 digits", |b| {
        b.iter(|| dirichlet_l_deriv(black_box(&s), 5, &cfg).unwrap())
    });
}

fn kappa(c: &mut Criterion) {
    let f5 = build_vv_form(2).unwrap();
    let jf = family_member(1, 2).unwrap();
    let mut g = c.benchmark_group("kappa_psi");
    g.sample_size(10);
    // fresh evaluator each time so symbol values are not cached
    g.bench_function("f5", |b| {
        b.iter(|| kappa_psi(black_box(&f5), &Evaluator::new(PrecisionConfig::default())).unwrap())
    });
    g.bench_function("j f", |b| {
        b.iter(|| kappa_psi(black_box(&jf), &Evaluator::new(PrecisionConfig::default())).unwrap())
    });
    g.finish();
}

criterion_group!(benches, qseries, cohen, lfun, kappa);
criterion_main!(benches);
