use std::hint::black_box;

use cfml_core::cf::{cylinder, expand, Word};
use cfml_core::measure::{mc_measure, EventKind};
use cfml_core::pressure::{cylinder_sum, solve_sn, PhiSpec, SnQuery};
use cfml_core::primes::{prime_square_tail, sieve};
use cfml_core::Rational;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn words(c: &mut Criterion) {
    let digits: Vec<u64> = (0..60).map(|i| 1 + (i * 7919) % 1_000_000).collect();
    c.bench_function("cylinder/len60", |b| {
        b.iter(|| cylinder(&Word::new(black_box(&digits).iter().copied()).unwrap()))
    });
    let x = Word::new(digits.iter().copied()).unwrap().evaluate();
    c.bench_function("expand/len60", |b| b.iter(|| expand(black_box(&x), 100).unwrap()));
    let golden = Rational::from((832_040, 1_346_269));
    c.bench_function("expand/fibonacci", |b| b.iter(|| expand(black_box(&golden), 100).unwrap()));
}

fn pressure(c: &mut Criterion) {
    let mut g = c.benchmark_group("cylinder_sum");
    for (n, m) in [(3u32, 8u64), (6, 6)] {
        let q = SnQuery::new(n, m, 2.0);
        g.bench_with_input(BenchmarkId::from_parameter(format!("n{n}_M{m}")), &q, |b, q| {
            b.iter(|| cylinder_sum(q, 0.7, 80).unwrap())
        });
    }
    g.finish();
    c.bench_function("solve_sn/n3_M8", |b| b.iter(|| solve_sn(&SnQuery::new(3, 8, black_box(2.0))).unwrap()));
}

fn primes(c: &mut Criterion) {
    let mut g = c.benchmark_group("primes");
    g.sample_size(10);
    g.bench_function("sieve/1e7", |b| b.iter(|| sieve(black_box(10_000_000)).unwrap()));
    let t = sieve(10_000_000).unwrap();
    g.bench_function("tail/M1000", |b| b.iter(|| prime_square_tail(1000, &t, 80).unwrap()));
    g.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let t = sieve(1_000_000).unwrap();
    let phi = PhiSpec::power(1.0, 0.5);
    let mut g = c.benchmark_group("mc_measure");
    g.sample_size(10);
    for n in [64usize, 1024] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| mc_measure(EventKind::TwoPrime, &phi, n, 2000, 1, &t, 80).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, words, pressure, primes, monte_carlo);
criterion_main!(benches);
