use ciforge::calculus::{biot_savart, inverse_divergence};
use ciforge::euler::{shear, step, taylor_green, trace_flow, EulerState, SparseTrig};
use ciforge::fields::{mollify, Grid, VectorField};
use ciforge::random::{bandlimited, rng};
use ciforge::singular::{box_dimension, IntervalFamilySequence};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn operators(c: &mut Criterion) {
    for n in [32usize, 64] {
        let g = Grid::new(n).unwrap();
        let f: VectorField = bandlimited::<3>(g, (n / 8) as i64, 1.0, &mut rng(1)).remove_mean();
        c.bench_function(&format!("inverse_divergence n={n}"), |b| b.iter(|| inverse_divergence(black_box(&f)).unwrap()));
        c.bench_function(&format!("biot_savart n={n}"), |b| b.iter(|| biot_savart(black_box(&f)).unwrap()));
        c.bench_function(&format!("mollify n={n}"), |b| b.iter(|| mollify(black_box(&f), 0.1).unwrap()));
    }
}

fn euler(c: &mut Criterion) {
    let g = Grid::new(32).unwrap();
    let s = EulerState::new(taylor_green(g, 1.0), 0.0);
    c.bench_function("euler step n=32", |b| b.iter(|| step(black_box(&s), 1e-3).unwrap()));
    let v = SparseTrig::from_spectrum(&shear(g, 1.0).to_spectral(), 1e-14);
    c.bench_function("trace_flow n=32, 8 steps", |b| {
        b.iter(|| trace_flow(g, 0.0, 0.1, 8, |_| Ok(v.clone())).unwrap())
    });
}

fn singular(c: &mut Criterion) {
    let seq = IntervalFamilySequence::cantor(10);
    c.bench_function("box_dimension cantor 10 levels", |b| b.iter(|| box_dimension(black_box(&seq)).unwrap()));
}

criterion_group! {
    name = kernels;
    config = Criterion::default().sample_size(10);
    targets = operators, euler, singular
}
criterion_main!(kernels);
