use criterion::{black_box, criterion_group, criterion_main, Criterion};

use epsilon_bench::{corpus, corpus_derivations};
use epsilon_core::kernel::{check_derivation, parse_script};

fn check_corpus(c: &mut Criterion) {
    let (sig, ds) = corpus_derivations();
    c.bench_function("check corpus", |b| {
        b.iter(|| {
            for (_, d) in &ds {
                check_derivation(black_box(d), &sig).unwrap();
            }
        })
    });
    let (_, largest) = ds.iter().max_by_key(|(_, d)| d.size()).unwrap();
    c.bench_function("check largest derivation", |b| {
        b.iter(|| check_derivation(black_box(largest), &sig).unwrap())
    });
}

fn parse_corpus(c: &mut Criterion) {
    let (sig, scripts) = corpus();
    c.bench_function("parse corpus scripts", |b| {
        b.iter(|| {
            for (_, src) in &scripts {
                black_box(parse_script(src, &sig).unwrap());
            }
        })
    });
}

criterion_group!(benches, check_corpus, parse_corpus);
criterion_main!(benches);
