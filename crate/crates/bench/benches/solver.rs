use criterion::{black_box, criterion_group, criterion_main, Criterion};
use lame_qes::published::PublishedCase;
use lame_qes::verify::SampledPotential;
use lame_qes::{jacobi, solve_all, ModulusParam};

fn elliptic(c: &mut Criterion) {
    let m = ModulusParam::new(0.7).unwrap();
    c.bench_function("jacobi m=0.7", |b| b.iter(|| jacobi(black_box(12.345), m)));
}

fn solve(c: &mut Criterion) {
    for case in [PublishedCase::TwoOne, PublishedCase::SevenHalvesOneHalf] {
        let p = case.params(0.5).unwrap();
        c.bench_function(&format!("solve_all table {}", case.table()), |b| {
            b.iter(|| solve_all(black_box(&p)).unwrap())
        });
    }
}

fn discriminant(c: &mut Criterion) {
    let p = PublishedCase::TwoOne.params(0.5).unwrap();
    let sp = SampledPotential::for_params(&p, 20_000).unwrap();
    c.bench_function("discriminant steps=20000", |b| {
        b.iter(|| sp.discriminant(black_box(3.3)).unwrap())
    });
}

criterion_group!(benches, elliptic, solve, discriminant);
criterion_main!(benches);
