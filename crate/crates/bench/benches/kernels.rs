use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use hgrisk_core::hgmae::{hgmae_step, infer_embeddings, pretrain, PretrainData};
use hgrisk_core::pairs::build_pairs;
use hgrisk_core::synth::{generate_graph, simulate_cascade};
use hgrisk_core::{GenConfig, ModelParams, TrainConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn kernels(c: &mut Criterion) {
    let gen = GenConfig::default();
    let g = generate_graph(&gen).unwrap();
    let cfg = TrainConfig::default();
    let params = ModelParams::init(g.feature_dim(), &cfg, &mut ChaCha8Rng::seed_from_u64(1));
    let data = PretrainData::new(&g).unwrap();

    c.bench_function("encoder_forward", |b| {
        b.iter(|| infer_embeddings(black_box(&g), &params).unwrap())
    });

    c.bench_function("hgmae_step", |b| {
        b.iter_batched(
            || ChaCha8Rng::seed_from_u64(2),
            |mut rng| hgmae_step(&data, &params, &cfg, &mut rng).unwrap(),
            BatchSize::SmallInput,
        )
    });

    let short = TrainConfig { epochs: 5, ..cfg.clone() };
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    group.bench_function("pretrain_5_epochs", |b| b.iter(|| pretrain(&g, &short).unwrap()));
    let events = simulate_cascade(&g, &gen).unwrap();
    group.bench_function("build_pairs", |b| {
        b.iter_batched(
            || ChaCha8Rng::seed_from_u64(3),
            |mut rng| build_pairs(&g, &events, 3, &mut rng).unwrap(),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

criterion_group!(benches, kernels);
criterion_main!(benches);
