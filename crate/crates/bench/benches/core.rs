use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use diplab_core::coverage::feasibility_curves;
use diplab_core::dbg::dbg_assemble;
use diplab_core::greedy::greedy_assemble;
use diplab_core::repeats::{repeat_statistics, summary_statistics};
use diplab_core::simulate::{random_sequence, rng, sample_reads_uniform, simulate_diploid};
use diplab_core::{DiploidGenome, RepeatProfile, SimulationParams, TableStats};

fn genome(len: usize, seed: u64) -> DiploidGenome {
    let base = random_sequence(len, &mut rng(seed)).unwrap();
    simulate_diploid(
        &base,
        &SimulationParams {
            het_prob: 0.02,
            seed,
            ..Default::default()
        },
    )
    .unwrap()
}

fn repeats(c: &mut Criterion) {
    let mut group = c.benchmark_group("repeat_statistics");
    for len in [500, 2000, 8000] {
        let g = genome(len, 1);
        group.bench_with_input(BenchmarkId::from_parameter(len), &g, |b, g| {
            b.iter(|| repeat_statistics(black_box(g)))
        });
    }
    group.finish();
    let mut group = c.benchmark_group("summary_statistics");
    group.sample_size(10);
    for len in [8000, 100_000] {
        let g = genome(len, 1);
        group.bench_with_input(BenchmarkId::from_parameter(len), &g, |b, g| {
            b.iter(|| summary_statistics(black_box(g)))
        });
    }
    group.finish();
}

fn assemblers(c: &mut Criterion) {
    let g = genome(2000, 2);
    // depth 20 at L = 60 covers every window with overwhelming probability
    let rs = sample_reads_uniform(&g, 2 * 2000 * 20 / 60, 60, 3).unwrap();
    c.bench_function("greedy_assemble/2000", |b| {
        b.iter(|| greedy_assemble(black_box(&rs)).unwrap())
    });
    c.bench_function("dbg_assemble/2000/k31", |b| {
        b.iter(|| dbg_assemble(black_box(&rs), 31))
    });
}

fn curves(c: &mut Criterion) {
    let stats = TableStats {
        haplotype_length: 61_317_360,
        max_gap: 12_748,
        max_double: 16_810,
        min_l_wellbridge: 16_812,
        max_interleaved_h0: 8_764,
        max_interleaved_h1: 3_013,
        max_i2: 3_432,
        max_triple_h0: 9_317,
        max_triple_h1: 2_784,
    };
    let p = RepeatProfile::from_stats(&stats);
    c.bench_function("feasibility_curves/100pts", |b| {
        b.iter(|| feasibility_curves(black_box(&p), 1000, 50_500, 500, 0.01).unwrap())
    });
}

criterion_group!(benches, repeats, assemblers, curves);
criterion_main!(benches);
