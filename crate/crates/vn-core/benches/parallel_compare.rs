//! Compares the sequential fallback against the rayon-parallel execution
//! path on the data-parallel workloads: Monte Carlo error estimation and
//! brute-force matching sweeps. Both paths produce identical results; the
//! bench shows what the `parallel` feature buys.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use vn_core::eval::{mc_error, KRule};
use vn_core::exec::Executor;
use vn_core::models::{CorrelatedErPair, CorrelatedErParams, IndependentErPair};
use vn_core::rng::RngState;
use vn_core::schemes::{exact_match, GmScheme, RandomBaselineScheme, RelaxConfig, Scheme};
use vn_core::{Namespace, Obfuscation, VertexLabel};

fn executors() -> Vec<(&'static str, Executor)> {
    let mut execs = vec![("sequential", Executor::sequential())];
    if cfg!(feature = "parallel") {
        execs.push(("parallel", Executor::new(0)));
    }
    execs
}

fn bench_mc_error(c: &mut Criterion) {
    let mut group = c.benchmark_group("mc_error_er20");
    group.sample_size(10);
    let sampler = IndependentErPair { n: 20, p: 0.5 };
    let scheme = RandomBaselineScheme::new(7);
    let v_star = VertexLabel::new(Namespace::V1, 1);
    let k = KRule::Const(5).k_for(20, 20);
    for (name, exec) in executors() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, exec| {
            b.iter(|| {
                mc_error(&scheme, &sampler, v_star, k, 2000, RngState::new(11), exec).unwrap()
            })
        });
    }
    group.finish();
}

fn bench_exact_match_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_match_sweep_n8");
    group.sample_size(10);
    let params = CorrelatedErParams::constant(8, 0.5, 0.9).unwrap();
    let pairs: Vec<_> = (0..64)
        .map(|t| {
            let mut rng = RngState { seed: 5, stream: t }.rng();
            let (g1, g2) = CorrelatedErPair { params: params.clone() }.sample_pair(&mut rng);
            let og2 = Obfuscation::standard(8).apply(&g2).unwrap();
            (g1, og2)
        })
        .collect();
    for (name, exec) in executors() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, exec| {
            b.iter(|| {
                let hits: usize = exec
                    .run(pairs.len(), |i| {
                        let r = exact_match(&pairs[i].0, &pairs[i].1).unwrap();
                        usize::from(r.permutation.is_identity())
                    })
                    .into_iter()
                    .sum();
                hits
            })
        });
    }
    group.finish();
}

fn bench_relaxed_nomination(c: &mut Criterion) {
    let mut group = c.benchmark_group("gm_relaxed_nominate_n40");
    group.sample_size(10);
    let params = CorrelatedErParams::constant(40, 0.5, 0.9).unwrap();
    let scheme = GmScheme::relaxed(RelaxConfig::default());
    let v_star = VertexLabel::new(Namespace::V1, 1);
    let inputs: Vec<_> = (0..16)
        .map(|t| {
            let mut rng = RngState { seed: 9, stream: t }.rng();
            let (g1, g2) = CorrelatedErPair { params: params.clone() }.sample_pair(&mut rng);
            let og2 = Obfuscation::standard(40).apply(&g2).unwrap();
            (g1, og2)
        })
        .collect();
    for (name, exec) in executors() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, exec| {
            b.iter(|| {
                exec.run(inputs.len(), |i| {
                    scheme.nominate(&inputs[i].0, &inputs[i].1, v_star).unwrap().len()
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_mc_error, bench_exact_match_sweep, bench_relaxed_nomination);
criterion_main!(benches);
