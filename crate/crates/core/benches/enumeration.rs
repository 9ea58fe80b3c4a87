use std::hint::black_box;

use algostat::enumeration::table::build_table_with;
use algostat::enumeration::TableOptions;
use algostat::{MachineConfig, Schedule};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn build(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_table");
    group.sample_size(10);
    for len in [14u32, 16] {
        let config = MachineConfig::new(len, 1024, 6).unwrap();
        for (name, schedule) in [
            ("sequential", Schedule::Sequential),
            ("parallel", Schedule::Auto),
        ] {
            let options = TableOptions {
                schedule,
                ..TableOptions::default()
            };
            group.bench_with_input(BenchmarkId::new(name, len), &config, |b, cfg| {
                b.iter(|| black_box(build_table_with(cfg, &[], options).unwrap()))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, build);
criterion_main!(benches);
