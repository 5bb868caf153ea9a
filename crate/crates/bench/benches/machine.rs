use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use jpa_core::machine::{compile, evaluate, jsa_standalone_run, DEFAULT_BUDGET};
use jpa_core::pcf::denote_source;

const ADD: &str = "(fix add: nat -> nat -> nat. fun m: nat. fun n: nat. case n (succ (add (pred m) n)) (ifz m))";

fn numeral(n: usize) -> String {
    (0..n).fold("zero".to_string(), |acc, _| format!("succ ({acc})"))
}

fn numerals(c: &mut Criterion) {
    let mut g = c.benchmark_group("evaluate_numeral");
    for n in [1, 4, 16] {
        let (d, _) = denote_source(&numeral(n)).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &d, |b, d| {
            b.iter(|| evaluate(black_box(d), DEFAULT_BUDGET).unwrap())
        });
    }
    g.finish();
}

fn addition(c: &mut Criterion) {
    let mut g = c.benchmark_group("add");
    g.sample_size(10);
    for n in [1, 2, 3] {
        let (d, _) = denote_source(&format!("{ADD} ({}) ({})", numeral(n), numeral(n))).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &d, |b, d| {
            b.iter(|| evaluate(black_box(d), DEFAULT_BUDGET).unwrap())
        });
    }
    g.finish();
}

fn standalone(c: &mut Criterion) {
    let (d, _) = denote_source("fun x: nat. succ (succ x)").unwrap();
    c.bench_function("standalone succ succ 8", |b| {
        b.iter(|| jsa_standalone_run(black_box(&d), &[8], DEFAULT_BUDGET).unwrap())
    });
}

fn compilation(c: &mut Criterion) {
    let (d, _) = denote_source(ADD).unwrap();
    c.bench_function("compile add", |b| b.iter(|| compile(black_box(&d)).unwrap()));
}

criterion_group!(benches, numerals, addition, standalone, compilation);
criterion_main!(benches);
