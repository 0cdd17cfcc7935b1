use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use craig_gamma::engine::{countermodel_search, valid, Budget, LogicId};
use craig_gamma::suites::crosscheck_corpus;
use craig_gamma::{is_parallel, parse, Formula};

fn valid_formulas() -> Vec<Formula> {
    [
        "[]p -> [][]p",
        "<>[]p -> []<>p",
        "[](p -> q) -> ([]p -> []q)",
        "p -> <>p",
    ]
    .iter()
    .map(|s| parse(s).unwrap())
    .collect()
}

/// Exhausting the search space is where the data-parallel scan matters.
fn search_all(formulas: &[Formula], logic: LogicId, worlds: usize) -> usize {
    formulas
        .iter()
        .filter(|f| countermodel_search(f, logic, worlds).unwrap().is_some())
        .count()
}

fn bench_countermodels(c: &mut Criterion) {
    let mode = if is_parallel() {
        "parallel"
    } else {
        "sequential"
    };
    let formulas = valid_formulas();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let mut group = c.benchmark_group("countermodel_search");
    group.sample_size(10);
    for worlds in [4, 5] {
        group.bench_with_input(BenchmarkId::new(mode, worlds), &worlds, |b, &w| {
            b.iter(|| search_all(black_box(&formulas), LogicId::s4_2(), w))
        });
        group.bench_with_input(BenchmarkId::new("one-thread", worlds), &worlds, |b, &w| {
            b.iter(|| single.install(|| search_all(black_box(&formulas), LogicId::s4_2(), w)))
        });
    }
    group.finish();
}

fn bench_decide(c: &mut Criterion) {
    let corpus = crosscheck_corpus(5);
    let budget = Budget::default();
    let mut group = c.benchmark_group("decide");
    group.sample_size(10);
    for logic in [LogicId::s4(), LogicId::s4_2()] {
        group.bench_function(BenchmarkId::new("corpus", logic.to_string()), |b| {
            b.iter(|| {
                corpus
                    .iter()
                    .filter(|g| valid(g, logic, &budget).is_valid())
                    .count()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_countermodels, bench_decide);
criterion_main!(benches);
