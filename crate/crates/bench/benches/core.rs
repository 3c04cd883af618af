use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use tqps_core::gluing::psi;
use tqps_core::multipullback::verify_freeness;
use tqps_core::order_lattice::{fdl_enumerate, upper_sets, Poset};
use tqps_core::sampling::{random_tensor, random_toeplitz_element, rng_for};
use tqps_core::SlotKind;

fn lattices(c: &mut Criterion) {
    c.bench_function("fdl_enumerate_5", |b| b.iter(|| fdl_enumerate(black_box(5)).unwrap()));
    let boolean = Poset::subsets(4, false).unwrap();
    c.bench_function("upper_sets_boolean_16", |b| b.iter(|| upper_sets(black_box(&boolean))));
}

fn algebra(c: &mut Criterion) {
    let mut rng = rng_for(1, &[]);
    let x = random_toeplitz_element(&mut rng, 3, 4);
    let y = random_toeplitz_element(&mut rng, 3, 4);
    c.bench_function("toeplitz_mul", |b| b.iter(|| black_box(&x) * black_box(&y)));
    let kinds = [SlotKind::Toeplitz, SlotKind::Toeplitz, SlotKind::Toeplitz, SlotKind::Circle];
    let t = random_tensor(&mut rng, &kinds);
    c.bench_function("psi_n3", |b| b.iter(|| psi(black_box(&t)).unwrap()));
}

fn freeness(c: &mut Criterion) {
    c.bench_function("verify_freeness_n1", |b| b.iter(|| verify_freeness(1, black_box(0x5EED), 50).unwrap()));
}

criterion_group!(benches, lattices, algebra, freeness);
criterion_main!(benches);
