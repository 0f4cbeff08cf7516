use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lpa_core::regularity::graded_inner_inverse;
use lpa_core::sample::Sampler;
use lpa_core::structure::{decompose, dim_series_check, phi, verify_phi};
use lpa_core::{corpus, Field, LeavittPathAlgebra};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GRAPHS: &[&str] = &["a3", "cycle3", "tree5", "fed_cycle"];

fn algebra(name: &str) -> LeavittPathAlgebra {
    LeavittPathAlgebra::new(corpus::get(name).unwrap(), Field::Rational)
}

fn multiplication(c: &mut Criterion) {
    let mut group = c.benchmark_group("mul");
    for name in GRAPHS {
        let alg = algebra(name);
        let s = Sampler::new(&alg, 6, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pairs: Vec<_> = (0..64).map(|_| (s.homogeneous(&mut rng, 4), s.homogeneous(&mut rng, 4))).collect();
        group.bench_with_input(BenchmarkId::from_parameter(name), &pairs, |b, pairs| {
            b.iter(|| {
                for (x, y) in pairs {
                    black_box(alg.mul(x, y));
                }
            })
        });
    }
    group.finish();
}

fn decomposition(c: &mut Criterion) {
    let mut group = c.benchmark_group("decompose_and_verify");
    for name in GRAPHS {
        let alg = algebra(name);
        group.bench_function(*name, |b| {
            b.iter(|| {
                let d = decompose(&alg).unwrap();
                let map = phi(&alg, &d).unwrap();
                black_box(verify_phi(alg.graph(), &d, &map).all_passed())
            })
        });
    }
    group.finish();
}

fn dimension_series(c: &mut Criterion) {
    let mut group = c.benchmark_group("dims_n10");
    for name in GRAPHS {
        let alg = algebra(name);
        group.bench_function(*name, |b| b.iter(|| black_box(dim_series_check(&alg, 10).unwrap().passed())));
    }
    group.finish();
}

fn inner_inverses(c: &mut Criterion) {
    let mut group = c.benchmark_group("graded_inner_inverse");
    for name in GRAPHS {
        let alg = algebra(name);
        let d = decompose(&alg).unwrap();
        let map = phi(&alg, &d).unwrap();
        let s = Sampler::new(&alg, 6, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let elements: Vec<_> = (0..32).map(|_| s.homogeneous(&mut rng, 4)).collect();
        group.bench_function(*name, |b| {
            b.iter(|| {
                for a in &elements {
                    black_box(graded_inner_inverse(&alg, &d, &map, a).unwrap());
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, multiplication, decomposition, dimension_series, inner_inverses);
criterion_main!(benches);
