use criterion::{criterion_group, criterion_main, Criterion};
use num_bigint::BigUint;
use std::hint::black_box;

use jpa_core::tags::{seq_decode, seq_encode};
use jpa_core::OuterTag;

fn codec(c: &mut Criterion) {
    let xs: Vec<BigUint> = (0u32..8).map(|i| BigUint::from(i * 37 + 5)).collect();
    let code = seq_encode(&xs);
    c.bench_function("seq_encode 8", |b| b.iter(|| seq_encode(black_box(&xs))));
    c.bench_function("seq_decode 8", |b| b.iter(|| seq_decode(black_box(&code))));
}

fn words(c: &mut Criterion) {
    let e = OuterTag::parse("[0 [1 [2 l l ]2 h [2 ]2 ]1 h [1 l ]1 ]0 h l l").unwrap();
    let text = e.to_string();
    c.bench_function("decode nested word", |b| b.iter(|| black_box(&e).decode().unwrap()));
    c.bench_function("parse nested word", |b| {
        b.iter(|| OuterTag::parse(black_box(&text)).unwrap())
    });
    c.bench_function("wellformed nested word", |b| b.iter(|| black_box(&e).is_wellformed()));
}

criterion_group!(benches, codec, words);
criterion_main!(benches);
