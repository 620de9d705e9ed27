use ndarray::Array2;
use proptest::prelude::*;

use tabgraph::dataset::generate_synthetic_pages;
use tabgraph::doc_model::TokenLabel;
use tabgraph::gnn::{aggregate, train, Checkpoint, GnnConfig, GnnModel, Sizing};
use tabgraph::graph_builder::{featurize, prune_islands, FeatureLayout, FeatureSet, PageGraph, BASE_DIM};

fn model(seed: u64) -> GnnModel {
    let mut cfg = GnnConfig::new(BASE_DIM, Sizing::Base { h_dim: 8 });
    cfg.l_no = 3;
    cfg.seed = seed;
    GnnModel::new(cfg).unwrap()
}

type Edges = Vec<(usize, usize, f64)>;

fn arb_graph() -> impl Strategy<Value = (Vec<Vec<f64>>, Edges)> {
    (1usize..12).prop_flat_map(|n| {
        let feats = prop::collection::vec(prop::collection::vec(-2.0..2.0f64, BASE_DIM), n);
        let edges = prop::collection::btree_map((0..n, 0..n), 0.0..=1.0f64, 0..3 * n).prop_map(|m| {
            let mut seen = std::collections::BTreeMap::new();
            for ((a, b), w) in m {
                if a != b {
                    seen.entry((a.min(b), a.max(b))).or_insert(w);
                }
            }
            seen.into_iter().map(|((a, b), w)| (a, b, w)).collect::<Vec<_>>()
        });
        (feats, edges)
    })
}

fn build(feats: &[Vec<f64>], edges: Edges) -> PageGraph {
    let n = feats.len();
    let f = Array2::from_shape_fn((n, BASE_DIM), |(i, j)| feats[i][j]);
    PageGraph::new(0, f, None, edges, (0..n as u32).collect(), FeatureLayout::default()).unwrap()
}

proptest! {
    #[test]
    fn relabeling_nodes_permutes_outputs((feats, edges) in arb_graph(), shift in 0usize..12) {
        let n = feats.len();
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let mut pf = vec![Vec::new(); n];
        for i in 0..n {
            pf[perm[i]] = feats[i].clone();
        }
        let pe: Vec<_> = edges
            .iter()
            .map(|&(a, b, w)| (perm[a].min(perm[b]), perm[a].max(perm[b]), w))
            .collect();
        let m = model(1);
        let out = m.forward(&build(&feats, edges)).unwrap();
        let pout = m.forward(&build(&pf, pe)).unwrap();
        for i in 0..n {
            for c in 0..TokenLabel::COUNT {
                prop_assert!((out[[i, c]] - pout[[perm[i], c]]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn aggregation_is_linear((feats, edges) in arb_graph(), a in -3.0..3.0f64) {
        let g = build(&feats, edges);
        let x = g.features().to_owned();
        let y = x.mapv(|v| v * v - 1.0);
        let lhs = aggregate(&g, (&x * a + &y).view());
        let rhs = aggregate(&g, x.view()) * a + aggregate(&g, y.view());
        for (l, r) in lhs.iter().zip(rhs.iter()) {
            prop_assert!((l - r).abs() < 1e-9);
        }
    }

    #[test]
    fn without_edges_nodes_are_independent((feats, _) in arb_graph()) {
        let m = model(2);
        let together = m.forward(&build(&feats, vec![])).unwrap();
        for (i, f) in feats.iter().enumerate() {
            let alone = m.forward(&build(std::slice::from_ref(f), vec![])).unwrap();
            for c in 0..TokenLabel::COUNT {
                prop_assert!((together[[i, c]] - alone[[0, c]]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn probabilities_are_distributions((feats, edges) in arb_graph()) {
        let p = model(3).predict_proba(&build(&feats, edges)).unwrap();
        for row in p.rows() {
            prop_assert!(row.iter().all(|&v| (0.0..=1.0).contains(&v)));
            prop_assert!((row.sum() - 1.0).abs() < 1e-9);
        }
    }
}

fn synthetic_graphs(n: usize) -> Vec<PageGraph> {
    generate_synthetic_pages(n, 7)
        .iter()
        .map(|p| featurize(p.page(), Some(&p.labeled.labels), FeatureSet::Bbox, None).unwrap())
        .map(|g| prune_islands(&g, 2).unwrap())
        .collect()
}

#[test]
fn early_training_loss_decreases() {
    let graphs = synthetic_graphs(5);
    let mut cfg = GnnConfig::new(BASE_DIM, Sizing::Scaled { p_no: 10_000 });
    cfg.epochs = 5;
    let mut m = GnnModel::new(cfg).unwrap();
    let report = train(&mut m, &graphs, &graphs[..1]).unwrap();
    assert_eq!(report.loss_curve.len(), 5);
    assert_eq!(report.val_accuracy.len(), 5);
    for w in report.loss_curve.windows(2) {
        assert!(w[1] < w[0], "{:?}", report.loss_curve);
    }
}

#[test]
fn training_is_deterministic_and_checkpoints_round_trip() {
    let graphs = synthetic_graphs(3);
    let run = || {
        let mut cfg = GnnConfig::new(BASE_DIM, Sizing::Scaled { p_no: 4_000 });
        cfg.epochs = 3;
        cfg.seed = 9;
        let mut m = GnnModel::new(cfg).unwrap();
        let r = train(&mut m, &graphs, &[]).unwrap();
        (m, r.loss_curve)
    };
    let (a, la) = run();
    let (b, lb) = run();
    assert_eq!(la, lb);
    assert_eq!(a, b);

    let ck = Checkpoint {
        model: a,
        feature_set: FeatureSet::Bbox,
        layout: FeatureLayout::default(),
    };
    let bytes = ck.to_bytes();
    let back = Checkpoint::from_bytes(&bytes).unwrap();
    assert_eq!(back.to_bytes(), bytes);
    let (x, y) = (ck.model.forward(&graphs[0]).unwrap(), back.model.forward(&graphs[0]).unwrap());
    for (p, q) in x.iter().zip(y.iter()) {
        assert!((p - q).abs() < 1e-4 * p.abs().max(1.0));
    }
}

#[test]
fn base_and_padding_sizing_shapes() {
    let base = GnnModel::new(GnnConfig::new(93, Sizing::base())).unwrap();
    assert_eq!(base.dims(), [93, 1000, 1000, 1000, 9]);
    let padded = GnnModel::new(GnnConfig::new(93, Sizing::padding())).unwrap();
    assert_eq!(padded.dims(), [861, 1000, 1000, 1000, 9]);
    assert!(GnnModel::new(GnnConfig::new(900, Sizing::padding())).is_err());
}
