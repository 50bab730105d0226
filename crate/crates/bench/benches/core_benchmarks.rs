//! Criterion benchmarks for the hot paths: world generation, command
//! cycle enumeration, the TC accounting kernel, and a full oracle run.

use std::collections::BTreeMap;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use sagents_core::harness::{bench_world_config, run_cell, OrgSpec, TaskSpec};
use sagents_core::org_graph::{build_goa, AgentId};
use sagents_core::scheduler::{mode_tc, Mode, SchedulerConfig};
use sagents_core::{World, WorldConfig};

fn bench_worldgen(c: &mut Criterion) {
    let cfg = WorldConfig::default();
    c.bench_function("worldgen_default", |b| {
        b.iter(|| World::generate(black_box(42), cfg.clone()).expect("generate"))
    });
}

fn bench_cycle_enumeration(c: &mut Criterion) {
    let agents: Vec<AgentId> = (0..5)
        .map(|i| AgentId::from(format!("worker{i}").as_str()))
        .collect();
    let graph = build_goa(&agents).expect("goa");
    c.bench_function("goa5_cycle_enumeration", |b| {
        b.iter(|| black_box(&graph).validate().command_cycles.len())
    });
}

fn bench_mode_tc(c: &mut Criterion) {
    let durations: BTreeMap<String, Vec<u64>> = (0..8)
        .map(|i| {
            let row: Vec<u64> = (0..64).map(|r| ((i * 37 + r * 101) % 500) as u64).collect();
            (format!("agent{i}"), row)
        })
        .collect();
    c.bench_function("mode_tc_roundbased_8x64", |b| {
        b.iter(|| mode_tc(Mode::RoundBased, black_box(&durations)))
    });
}

fn bench_full_run(c: &mut Criterion) {
    let cfg = bench_world_config();
    let task = TaskSpec::parse("collection:stone:20").expect("task");
    let org: OrgSpec = "toa:3".parse().expect("org");
    let sched = SchedulerConfig::default();
    c.bench_function("full_run_toa3_stone20", |b| {
        b.iter_batched(
            || (),
            |_| run_cell(&task, &org, Mode::NonObstructive, 42, &cfg, &sched).expect("run"),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(
    benches,
    bench_worldgen,
    bench_cycle_enumeration,
    bench_mode_tc,
    bench_full_run
);
criterion_main!(benches);
