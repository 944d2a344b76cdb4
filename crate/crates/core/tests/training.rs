use hgrisk_core::hgmae::{infer_embeddings, pretrain};
use hgrisk_core::nn::Checkpoint;
use hgrisk_core::synth::{generate_graph, latent};
use hgrisk_core::tensor::{dot, norm};
use hgrisk_core::{GenConfig, Matrix, ModelParams, TrainConfig};

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    dot(a, b) / (norm(a) * norm(b))
}

#[test]
fn embeddings_separate_noise_free_communities() {
    let gen = GenConfig {
        num_nodes: 60,
        num_communities: 2,
        num_edge_types: 2,
        intra_edge_prob: vec![0.15, 0.1],
        inter_edge_prob: vec![0.005, 0.01],
        transmission_prob: vec![0.5, 0.2],
        noise_std: 0.0,
        num_seed_defaults: 3,
        rng_seed: 5,
        ..GenConfig::default()
    };
    let g = generate_graph(&gen).unwrap();
    let cfg = TrainConfig {
        epochs: 100,
        rng_seed: 5,
        ..TrainConfig::default()
    };
    let out = pretrain(&g, &cfg).unwrap();
    let emb = infer_embeddings(&g, &out.params).unwrap();
    let community = latent(&gen).community;
    let (mut intra, mut inter) = (Vec::new(), Vec::new());
    for i in 0..g.num_nodes() {
        for j in (i + 1)..g.num_nodes() {
            let c = cosine(emb.row(i), emb.row(j));
            if community[i] == community[j] {
                intra.push(c)
            } else {
                inter.push(c)
            }
        }
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    assert!(mean(&intra) > mean(&inter), "intra {} inter {}", mean(&intra), mean(&inter));
}

#[test]
fn checkpoint_round_trip_reproduces_embeddings() {
    let g = generate_graph(&GenConfig {
        num_nodes: 50,
        ..GenConfig::default()
    })
    .unwrap();
    let cfg = TrainConfig {
        epochs: 5,
        ..TrainConfig::default()
    };
    let out = pretrain(&g, &cfg).unwrap();
    let text = out.params.to_checkpoint(&cfg).to_text();
    let restored = ModelParams::from_checkpoint(&Checkpoint::from_text(&text).unwrap(), &cfg).unwrap();
    assert_eq!(restored, out.params);
    assert_eq!(
        infer_embeddings(&g, &restored).unwrap(),
        infer_embeddings(&g, &out.params).unwrap()
    );

    // a different architecture is rejected by shape validation
    let other = TrainConfig { d_emb: 16, ..cfg.clone() };
    assert!(ModelParams::from_checkpoint(&Checkpoint::from_text(&text).unwrap(), &other).is_err());

    // a flipped digit is caught by the checksum
    let pos = text.find("tensor\t").unwrap() + 40;
    let mut bytes = text.into_bytes();
    bytes[pos] = if bytes[pos] == b'1' { b'2' } else { b'1' };
    assert!(Checkpoint::from_text(&String::from_utf8(bytes).unwrap()).is_err());
}

#[test]
fn embeddings_only_see_two_hops() {
    // path 0-1-2-3-4-5: with a two-layer encoder node 0 cannot see node 3
    let x = Matrix::from_fn(6, 3, |i, j| ((i * 3 + j) as f64 * 0.9).cos());
    let edges = vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)];
    let g = hgrisk_core::HeteroGraph::new(x.clone(), vec![true; 6], vec!["r".into()], vec![edges.clone()]).unwrap();
    let mut y = x;
    y.row_mut(3).iter_mut().for_each(|v| *v += 5.0);
    let h = hgrisk_core::HeteroGraph::new(y, vec![true; 6], vec!["r".into()], vec![edges]).unwrap();
    let cfg = TrainConfig {
        epochs: 3,
        ..TrainConfig::default()
    };
    let params = pretrain(&g, &cfg).unwrap().params;
    let a = infer_embeddings(&g, &params).unwrap();
    let b = infer_embeddings(&h, &params).unwrap();
    assert_eq!(a.row(0), b.row(0));
    assert_ne!(a.row(1), b.row(1));
}

#[test]
fn loss_history_is_finite_and_reproducible() {
    let g = generate_graph(&GenConfig {
        num_nodes: 80,
        ..GenConfig::default()
    })
    .unwrap();
    let cfg = TrainConfig {
        epochs: 20,
        ..TrainConfig::default()
    };
    let a = pretrain(&g, &cfg).unwrap();
    let b = pretrain(&g, &cfg).unwrap();
    assert_eq!(a.history, b.history);
    assert!(a.history.iter().all(|e| e.loss_total.is_finite()));
    let c = pretrain(&g, &TrainConfig { rng_seed: 1, ..cfg }).unwrap();
    assert_ne!(a.history, c.history);
}
