use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;
use tambara_bench::{random_element, random_generators, SEED};
use tambara_core::ideals::IdealSequence;
use tambara_core::primality::falsify_prime;
use tambara_core::spectrum::Spectrum;
use tambara_core::{GroupParams, Lattice};

fn norms(c: &mut Criterion) {
    let mut group = c.benchmark_group("jnd");
    for (p, r) in [(2, 3), (3, 3), (2, 5)] {
        let params = GroupParams::new(p, r).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let x = random_element(&mut rng, params, r - 1, 5);
        group.bench_with_input(BenchmarkId::new(format!("p{p}"), r), &x, |b, x| {
            b.iter(|| black_box(x).jnd(r).unwrap())
        });
    }
    group.finish();
}

fn hermite(c: &mut Criterion) {
    let mut group = c.benchmark_group("hnf");
    for dim in [4, 8, 16] {
        let gens = random_generators(SEED, dim, 2 * dim, 50);
        group.bench_with_input(BenchmarkId::from_parameter(dim), &gens, |b, gens| {
            b.iter(|| Lattice::from_generators(dim, gens.iter().cloned()).unwrap())
        });
    }
    group.finish();
}

fn spectra(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectrum");
    for (p, r) in [(2, 2), (3, 3), (2, 4)] {
        let params = GroupParams::new(p, r).unwrap();
        let qs: Vec<u64> = if p == 2 { vec![3, 5] } else { vec![2, 5] };
        group.bench_function(BenchmarkId::new(format!("p{p}"), r), |b| {
            b.iter(|| Spectrum::compute(params, black_box(&qs)).unwrap())
        });
    }
    group.finish();
}

fn falsifier(c: &mut Criterion) {
    let mut group = c.benchmark_group("falsify_prime");
    let params = GroupParams::new(2, 2).unwrap();
    let prime = IdealSequence::base(params, 3.into()).unwrap().s_op().unwrap().0.l_op().unwrap();
    let composite = IdealSequence::base(params, 2.into()).unwrap().l_op().unwrap().s_op().unwrap().0;
    group.bench_function("prime_bound3", |b| b.iter(|| falsify_prime(black_box(&prime), 3).unwrap()));
    group.bench_function("witness_bound3", |b| b.iter(|| falsify_prime(black_box(&composite), 3).unwrap()));
    group.finish();
}

criterion_group!(benches, norms, hermite, spectra, falsifier);
criterion_main!(benches);
