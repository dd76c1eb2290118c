//! Parallel-vs-sequential comparison for the batch enumeration paths.
//!
//! `exec` benches go through the crate's execution layer (rayon when the
//! default `parallel` feature is on); `seq` benches pin the sequential
//! reference path. Run `cargo bench` and
//! `cargo bench --no-default-features` to compare the two backends.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use defsys::exec;

fn growth_system() -> defsys::setsys::TupleSetSystem {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let universe: Vec<String> = (0..18).map(|i| format!("e{i}")).collect();
    let mut family = Vec::new();
    for _ in 0..40 {
        let members: Vec<Vec<u32>> = (0..18u32)
            .filter(|_| rng.random_bool(0.4))
            .map(|i| vec![i])
            .collect();
        family.push(members);
    }
    defsys::setsys::TupleSetSystem::new(universe, 1, family).unwrap()
}

fn bench_growth(c: &mut Criterion) {
    let sys = growth_system();
    let mut g = c.benchmark_group("growth_function_exact");
    g.sample_size(10);
    g.bench_function("exec", |b| {
        b.iter(|| {
            defsys::setsys::growth_function(
                black_box(&sys),
                9,
                defsys::setsys::GrowthMode::Exact,
                u64::MAX,
            )
            .unwrap()
        })
    });
    g.bench_function("seq", |b| {
        b.iter(|| {
            defsys::setsys::growth_function_seq(
                black_box(&sys),
                9,
                defsys::setsys::GrowthMode::Exact,
                u64::MAX,
            )
            .unwrap()
        })
    });
    g.finish();
}

fn bench_map(c: &mut Criterion) {
    let mut g = c.benchmark_group("map_indexed");
    let work = |i: usize| -> u64 {
        let mut x = i as u64 + 1;
        for _ in 0..2000 {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        }
        x
    };
    g.bench_function("exec", |b| b.iter(|| exec::map_indexed(4096, black_box(work))));
    g.bench_function("seq", |b| {
        b.iter(|| exec::map_indexed_seq(4096, black_box(work)))
    });
    g.finish();
}

criterion_group!(benches, bench_growth, bench_map);
criterion_main!(benches);
