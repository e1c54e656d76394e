//! Sequential against parallel execution for the sweeps that dominate the
//! test suite, plus the two single-point evaluators.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use dickson_core::criteria::{is_perm_brute_with, BRUTE_FORCE_CAP};
use dickson_core::dickson::{eval_fast, eval_recurrence, DicksonParams};
use dickson_core::group::enumerate_kernel_with;
use dickson_core::oracle::{summarize_all, ORACLE_CAP};
use dickson_core::{factorize, Execution};

const STRATEGIES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn oracle_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle_summarize_all");
    g.sample_size(10);
    let ns: Vec<u64> = (2..=150).collect();
    for (name, exec) in STRATEGIES {
        g.bench_function(BenchmarkId::new(name, "n<=150"), |b| {
            b.iter(|| summarize_all(black_box(&ns), ORACLE_CAP, exec).unwrap())
        });
    }
    g.finish();
}

fn kernel_enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_kernel");
    // many prime factors gives a wide product walk
    let n = 3 * 5 * 7 * 11 * 13 * 17 * 19 * 23;
    let f = factorize(n).unwrap();
    for (name, exec) in STRATEGIES {
        g.bench_with_input(BenchmarkId::new(name, n), &f, |b, f| {
            b.iter(|| enumerate_kernel_with(black_box(f), exec).unwrap())
        });
    }
    g.finish();
}

fn brute_force(c: &mut Criterion) {
    let mut g = c.benchmark_group("is_perm_brute");
    let (k, n) = (7, 4999);
    for (name, exec) in STRATEGIES {
        g.bench_function(BenchmarkId::new(name, n), |b| {
            b.iter(|| is_perm_brute_with(black_box(k), 1, n, BRUTE_FORCE_CAP, exec).unwrap())
        });
    }
    g.finish();
}

fn evaluators(c: &mut Criterion) {
    let mut g = c.benchmark_group("eval");
    for k in [10u64, 1_000, 100_000] {
        let p = DicksonParams::new(k, 3, 1_000_003).unwrap();
        g.bench_with_input(BenchmarkId::new("fast", k), &p, |b, p| {
            b.iter(|| eval_fast(black_box(p), 12345))
        });
        g.bench_with_input(BenchmarkId::new("recurrence", k), &p, |b, p| {
            b.iter(|| eval_recurrence(black_box(p), 12345))
        });
    }
    g.finish();
}

criterion_group!(benches, oracle_sweep, kernel_enumeration, brute_force, evaluators);
criterion_main!(benches);
