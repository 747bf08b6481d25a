use std::hint::black_box;

use comeq::dims;
use comeq::equation::block_poly_operator;
use comeq::polyrec;
use comeq::rational;
use comeq::{FactoredPoly, RatMatrix};
use criterion::{criterion_group, criterion_main, Criterion};

fn bench_dims(c: &mut Criterion) {
    c.bench_function("nu(60,60)", |b| b.iter(|| dims::nu(black_box(60), black_box(60)).unwrap()));
    c.bench_function("scan 40x40", |b| {
        b.iter(|| dims::scan(40, 40, &rational::int(5), &[]).unwrap())
    });
}

fn bench_linear(c: &mut Criterion) {
    let f = FactoredPoly::cubic_model();
    let jordan = |n: usize, lam: i64| {
        let mut m = RatMatrix::scalar(n, &rational::int(lam));
        for i in 0..n - 1 {
            m[(i, i + 1)] = rational::int(1);
        }
        m
    };
    let (p, s) = (jordan(4, 0), jordan(4, 1));
    c.bench_function("block operator 4x4", |b| {
        b.iter(|| block_poly_operator(&f, black_box(&p), black_box(&s)).unwrap())
    });
    let m = block_poly_operator(&f, &p, &s).unwrap();
    let stacked = RatMatrix::hstack(&[m.clone(), m]);
    c.bench_function("nullspace 16x32", |b| b.iter(|| black_box(&stacked).nullspace()));
}

fn bench_polyrec(c: &mut Criterion) {
    c.bench_function("P_s up to 40", |b| b.iter(|| polyrec::compute_P(black_box(40))));
}

criterion_group!(benches, bench_dims, bench_linear, bench_polyrec);
criterion_main!(benches);
