//! Per-iteration and per-epoch costs: the block method's advantage is the
//! `O(n * d_i)` iteration, so the interesting axes are the block count and
//! the method comparison at equal epochs.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rcs_bench::{phase_instance, regression_instance};
use rcs_core::{
    prox_estimate, rcs_run, subgrad_run, BlockPartition, CompositeOracle, MoreauConfig,
    SolverConfig, StepSchedule, Vector,
};

fn block_subgradient_cost(c: &mut Criterion) {
    let (n, d) = (256, 512);
    let problem = regression_instance(n, d);
    let mut group = c.benchmark_group("block_subgradient");
    for blocks in [1usize, 16, 512] {
        let partition = BlockPartition::new(d, blocks).unwrap();
        let state = problem.init_state(Vector::zeros(d));
        group.bench_with_input(BenchmarkId::from_parameter(blocks), &blocks, |b, _| {
            b.iter(|| black_box(problem.block_subgradient(&state, 0, &partition)));
        });
    }
    group.finish();
}

fn epoch_cost(c: &mut Criterion) {
    let (n, d) = (256, 512);
    let problem = regression_instance(n, d);
    let mut group = c.benchmark_group("one_epoch");
    group.bench_function("rcs_full_blocks", |b| {
        let partition = BlockPartition::new(d, d).unwrap();
        b.iter(|| {
            let cfg = SolverConfig::new(StepSchedule::SqrtLog { delta: 0.5 }, d, 1)
                .with_record_every(d)
                .with_epoch_size(d);
            black_box(rcs_run(&problem, &partition, &cfg, Vector::zeros(d)).unwrap())
        });
    });
    group.bench_function("subgrad", |b| {
        b.iter(|| {
            let cfg = SolverConfig::new(StepSchedule::SqrtLog { delta: 0.5 }, 1, 1)
                .with_record_every(1)
                .with_epoch_size(1);
            black_box(subgrad_run(&problem, &cfg, Vector::zeros(d)).unwrap())
        });
    });
    group.finish();
}

fn envelope_probe_cost(c: &mut Criterion) {
    let problem = phase_instance(32, 4);
    let rho = problem.weak_convexity_modulus().rho;
    let cfg = MoreauConfig::new(1.0 / (2.0 * rho), rho).with_budget(2_000).with_tolerance(1e-6);
    let x = Vector::new((0..32).map(|i| (i as f64 * 0.61).sin()).collect()).unwrap();
    c.bench_function("prox_estimate_budget_2k", |b| {
        b.iter(|| black_box(prox_estimate(&problem, x.as_slice(), &cfg).unwrap()));
    });
}

criterion_group!(benches, block_subgradient_cost, epoch_cost, envelope_probe_cost);
criterion_main!(benches);
