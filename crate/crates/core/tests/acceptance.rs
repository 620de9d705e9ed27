use std::collections::{BTreeSet, VecDeque};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tabgraph::dataset::{generate_synthetic_pages, SyntheticPage};
use tabgraph::doc_model::{BBox, Page, Token, TokenLabel};
use tabgraph::gnn::{
    aggregate, infer, scaled_hidden_dim, scaled_param_count, train, GnnConfig, GnnModel, Layer,
    Sizing,
};
use tabgraph::graph_builder::{
    featurize, prune_islands, visibility_edges_for_boxes, weight_edges, weights_from_gaps,
    FeatureLayout, FeatureSet, PageGraph, BASE_DIM,
};
use tabgraph::repr_embed::{
    affinity_propagation, extract_patterns, levenshtein_matrix, sgns_loss, word2repr,
    AffinityConfig, CellTable, PatternMode, ReprVocabulary, VocabConfig,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn word2repr_examples() -> Outcome {
    for (word, want) in [
        ("Precision-Recall", "w-w"),
        ("12.5", "x.x"),
        ("+3.1(2.5± 1.0)", "+x.x(x.x± x.x)"),
    ] {
        let got = word2repr(word).map_err(|e| e.to_string())?;
        ensure(got.as_str() == want, || format!("{word:?} -> {:?}, want {want:?}", got.as_str()))?;
    }
    Ok("3/3 examples".into())
}

fn figure_table() -> CellTable {
    let mut rows = vec![vec![String::new(), "h_a".into(), "h_b".into(), "h_c".into(), "h_d".into()]];
    for (r, name) in ["r_a", "r_b", "r_c", "r_d"].iter().enumerate() {
        let mut row = vec![name.to_string()];
        row.extend((0..4).map(|c| format!("v{}", r * 4 + c)));
        rows.push(row);
    }
    CellTable::new(rows).unwrap()
}

fn worked_windows() -> Outcome {
    let t = figure_table();
    for (mode, want) in [
        (PatternMode::Headers, ["r_c", "v8", "v9", "v5", "h_b"]),
        (PatternMode::Rhombus, ["v8", "v5", "v9", "v13", "v10"]),
        (PatternMode::Linear, ["r_c", "v8", "v9", "v10", "v11"]),
    ] {
        let w = extract_patterns(&t, mode)
            .into_iter()
            .find(|w| w.target() == (3, 2))
            .ok_or("no window for v9")?;
        let got: Vec<&str> = w.cells().iter().map(|&(i, j)| t.get(i, j).unwrap()).collect();
        ensure(got == want, || format!("{mode:?}: {got:?}"))?;
    }
    Ok("3/3 windows".into())
}

fn dp_edit_distance(a: &[char], b: &[char]) -> usize {
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    d[0] = (0..=b.len()).collect();
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let sub = d[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    d[a.len()][b.len()]
}

fn random_repr(rng: &mut ChaCha8Rng) -> String {
    const ALPHABET: [char; 8] = ['x', 'w', '.', '-', '(', ')', '±', '%'];
    let n = rng.gen_range(0..=12);
    (0..n).map(|_| ALPHABET[rng.gen_range(0..ALPHABET.len())]).collect()
}

fn levenshtein_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..1000 {
        let pair = [random_repr(&mut rng), random_repr(&mut rng)];
        let m = levenshtein_matrix(&pair);
        let a: Vec<char> = pair[0].chars().collect();
        let b: Vec<char> = pair[1].chars().collect();
        let want = dp_edit_distance(&a, &b) as f64;
        ensure(m.get(0, 1) == want && m.get(1, 0) == want && m.get(0, 0) == 0.0, || {
            format!("pair {k} {pair:?}: {} vs {want}", m.get(0, 1))
        })?;
    }
    Ok("1000/1000 pairs".into())
}

fn two_clusters() -> Outcome {
    let a: Vec<String> = (0..20).map(|i| format!("wwwwwwww{}", char::from(b'a' + i))).collect();
    let b: Vec<String> = (0..20).map(|i| format!("x.x±x.x%{}", char::from(b'A' + i))).collect();
    let all: Vec<String> = a.iter().chain(&b).cloned().collect();
    let m = levenshtein_matrix(&all);
    for i in 0..40 {
        for j in 0..40 {
            let same = (i < 20) == (j < 20);
            let d = m.get(i, j);
            ensure(if same { d <= 1.0 } else { d >= 8.0 }, || format!("bad construction at {i},{j}: {d}"))?;
        }
    }
    let r = affinity_propagation(&m, &AffinityConfig::default());
    ensure(r.exemplars.len() == 2, || format!("{} exemplars", r.exemplars.len()))?;
    let cluster_of = |e: usize| usize::from(r.exemplars[e] >= 20);
    ensure(cluster_of(0) != cluster_of(1), || "both exemplars in one cluster".into())?;
    for (i, &l) in r.labels.iter().enumerate() {
        ensure(cluster_of(l) == usize::from(i >= 20), || format!("point {i} assigned across clusters"))?;
    }
    Ok(format!("exemplars {:?}, {} iterations", r.exemplars, r.iterations))
}

fn overlap(a1: f64, a2: f64, b1: f64, b2: f64) -> f64 {
    a2.min(b2) - a1.max(b1)
}

/// All-pairs occlusion check by probing every elementary strip of the shared
/// span, then the nearest visible box in each of the four directions.
fn visibility_oracle(b: &[BBox]) -> BTreeSet<(usize, usize)> {
    let n = b.len();
    let span = |x: &BBox, vertical: bool| if vertical { (x.y1, x.y2, x.x1, x.x2) } else { (x.x1, x.x2, x.y1, x.y2) };
    let visible = |near: usize, far: usize, vertical: bool| {
        let (_, n_hi, n_lo_x, n_hi_x) = span(&b[near], vertical);
        let (f_lo, _, f_lo_x, f_hi_x) = span(&b[far], vertical);
        if f_lo <= n_hi {
            return true;
        }
        let (lo, hi) = (n_lo_x.max(f_lo_x), n_hi_x.min(f_hi_x));
        let blockers: Vec<(f64, f64)> = (0..n)
            .filter(|&w| w != near && w != far)
            .map(|w| span(&b[w], vertical))
            .filter(|&(a1, a2, _, _)| overlap(a1, a2, n_hi, f_lo) > 0.0)
            .map(|(_, _, c1, c2)| (c1, c2))
            .collect();
        let mut cuts = vec![lo, hi];
        for &(c1, c2) in &blockers {
            cuts.extend([c1, c2].into_iter().filter(|&c| c > lo && c < hi));
        }
        cuts.sort_by(f64::total_cmp);
        cuts.windows(2)
            .filter(|w| w[1] > w[0])
            .any(|w| {
                let m = (w[0] + w[1]) / 2.0;
                !blockers.iter().any(|&(c1, c2)| c1 < m && m < c2)
            })
    };
    let mut edges = BTreeSet::new();
    for u in 0..n {
        for vertical in [true, false] {
            for forward in [true, false] {
                let mut best: Option<(f64, usize)> = None;
                for v in 0..n {
                    if v == u {
                        continue;
                    }
                    let xo = overlap(b[u].x1, b[u].x2, b[v].x1, b[v].x2);
                    let yo = overlap(b[u].y1, b[u].y2, b[v].y1, b[v].y2);
                    let related = if vertical { xo > 0.0 } else { xo <= 0.0 && yo > 0.0 };
                    if !related {
                        continue;
                    }
                    let (cu, cv) = if vertical {
                        ((b[u].y1 + b[u].y2) / 2.0, (b[v].y1 + b[v].y2) / 2.0)
                    } else {
                        ((b[u].x1 + b[u].x2) / 2.0, (b[v].x1 + b[v].x2) / 2.0)
                    };
                    let u_first = cu < cv || (cu == cv && u < v);
                    if u_first != forward {
                        continue;
                    }
                    let (near, far) = if u_first { (u, v) } else { (v, u) };
                    if !visible(near, far, vertical) {
                        continue;
                    }
                    let gap = span(&b[far], vertical).0 - span(&b[near], vertical).1;
                    if best.is_none_or(|(g, w)| gap < g || (gap == g && v < w)) {
                        best = Some((gap, v));
                    }
                }
                if let Some((_, v)) = best {
                    edges.insert((u.min(v), u.max(v)));
                }
            }
        }
    }
    edges
}

fn random_boxes(rng: &mut ChaCha8Rng, n: usize) -> Vec<BBox> {
    (0..n)
        .map(|_| {
            let x = rng.gen_range(0..180) as f64;
            let y = rng.gen_range(0..180) as f64;
            let w = rng.gen_range(1..40) as f64;
            let h = rng.gen_range(1..15) as f64;
            BBox::new(x, y, (x + w).min(200.0), (y + h).min(200.0))
        })
        .collect()
}

fn visibility_vs_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut total = 0;
    for page in 0..100 {
        let n = rng.gen_range(0..=30);
        let boxes = random_boxes(&mut rng, n);
        let got: BTreeSet<_> = visibility_edges_for_boxes(&boxes).into_iter().collect();
        let want = visibility_oracle(&boxes);
        ensure(got == want, || {
            format!(
                "page {page}: extra {:?}, missing {:?}",
                got.difference(&want).collect::<Vec<_>>(),
                want.difference(&got).collect::<Vec<_>>()
            )
        })?;
        total += want.len();
    }
    Ok(format!("100/100 pages, {total} edges"))
}

fn page_of(boxes: &[BBox]) -> Page {
    Page {
        page_no: 0,
        width: 200.0,
        height: 200.0,
        tokens: boxes
            .iter()
            .enumerate()
            .map(|(i, b)| Token::word(i as u32, "t", *b, i as i64))
            .collect(),
    }
}

fn edge_weights() -> Outcome {
    let w = weights_from_gaps(&[5.0, 10.0]);
    ensure(w == [0.5, 0.0], || format!("gaps 5, 10 -> {w:?}"))?;

    let touching = page_of(&[
        BBox::new(0., 0., 20., 10.),
        BBox::new(0., 10., 20., 20.),
        BBox::new(0., 30., 20., 40.),
    ]);
    let weighted = weight_edges(&touching, &[(0, 1), (1, 2)]);
    ensure(weighted[0].2 == 1.0 && weighted[1].2 == 0.0, || format!("touching: {weighted:?}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..100 {
        let n = rng.gen_range(2..=30);
        let page = page_of(&random_boxes(&mut rng, n));
        let edges = visibility_edges_for_boxes(&page.tokens.iter().map(|t| t.bbox).collect::<Vec<_>>());
        for (u, v, w) in weight_edges(&page, &edges) {
            ensure((0.0..=1.0).contains(&w), || format!("weight {w} on ({u}, {v})"))?;
            let (a, b) = (&page.tokens[u].bbox, &page.tokens[v].bbox);
            let touch = a.x_overlap(b) >= 0.0 && a.y_overlap(b) >= 0.0;
            ensure(!touch || w == 1.0, || format!("touching ({u}, {v}) weighted {w}"))?;
        }
    }
    Ok("hand example exact, 100 random pages in range".into())
}

fn random_graph(rng: &mut ChaCha8Rng) -> PageGraph {
    let n = rng.gen_range(1..=50);
    let p = rng.gen_range(0.02..0.2);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v, rng.gen_range(0.0..=1.0)));
            }
        }
    }
    let text_share = rng.gen_range(0.5..1.0);
    let labels = (0..n)
        .map(|_| {
            if rng.gen_bool(text_share) {
                TokenLabel::Text
            } else {
                TokenLabel::ALL[rng.gen_range(1..TokenLabel::COUNT)]
            }
        })
        .collect();
    let features = Array2::from_shape_fn((n, BASE_DIM), |_| rng.gen_range(0.0..1.0));
    PageGraph::new(0, features, Some(labels), edges, (0..n as u32).collect(), FeatureLayout::default()).unwrap()
}

fn hop_distance(g: &PageGraph, from: usize, to: impl Fn(usize) -> bool) -> Option<usize> {
    let mut dist = vec![None; g.num_nodes()];
    dist[from] = Some(0);
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if to(v) {
            return dist[v];
        }
        for &(u, _) in g.neighbors(v) {
            if dist[u].is_none() {
                dist[u] = Some(dist[v].unwrap() + 1);
                queue.push_back(u);
            }
        }
    }
    None
}

fn islands_vs_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut removed = 0;
    for i in 0..200 {
        let g = random_graph(&mut rng);
        let k = 1 + i % 3;
        let labels = g.labels().unwrap();
        let want: Vec<u32> = (0..g.num_nodes())
            .filter(|&v| {
                labels[v] != TokenLabel::Text
                    || hop_distance(&g, v, |u| labels[u] != TokenLabel::Text).is_some_and(|d| d <= k)
            })
            .map(|v| v as u32)
            .collect();
        let pruned = prune_islands(&g, k).map_err(|e| e.to_string())?;
        ensure(pruned.token_ids() == want, || format!("graph {i}, k = {k}"))?;
        removed += g.num_nodes() - want.len();
    }
    Ok(format!("200/200 graphs, {removed} nodes removed"))
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-8)
}

fn gradient_checks() -> Outcome {
    let eps = 1e-6;
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let mut vecs: Vec<Array1<f64>> = (0..7).map(|_| Array1::from_shape_fn(6, |_| rng.gen_range(-0.8..0.8))).collect();
    let loss_of = |v: &[Array1<f64>]| {
        let negs: Vec<_> = v[2..].iter().map(|x| x.view()).collect();
        sgns_loss(v[0].view(), v[1].view(), &negs).loss
    };
    let g = {
        let negs: Vec<_> = vecs[2..].iter().map(|x| x.view()).collect();
        sgns_loss(vecs[0].view(), vecs[1].view(), &negs)
    };
    let analytic: Vec<Array1<f64>> = [g.target, g.context].into_iter().chain(g.negatives).collect();
    let mut worst: f64 = 0.0;
    for k in 0..vecs.len() {
        for d in 0..6 {
            vecs[k][d] += eps;
            let up = loss_of(&vecs);
            vecs[k][d] -= 2.0 * eps;
            let down = loss_of(&vecs);
            vecs[k][d] += eps;
            worst = worst.max(rel_err((up - down) / (2.0 * eps), analytic[k][d]));
        }
    }
    ensure(worst < 1e-4, || format!("skip-gram rel err {worst:.2e}"))?;
    let sg_worst = worst;

    let mut cfg = GnnConfig::new(BASE_DIM, Sizing::Base { h_dim: 6 });
    cfg.l_no = 3;
    cfg.seed = 5;
    let mut model = GnnModel::new(cfg).map_err(|e| e.to_string())?;
    let n = 7;
    let labels: Vec<TokenLabel> = (0..n).map(|i| TokenLabel::ALL[(i * 4) % TokenLabel::COUNT]).collect();
    let graph = PageGraph::new(
        0,
        Array2::from_shape_fn((n, BASE_DIM), |_| rng.gen_range(-1.0..1.0)),
        Some(labels),
        vec![(0, 1, 1.0), (1, 2, 0.4), (2, 3, 0.9), (3, 4, 0.0), (1, 5, 0.6), (4, 5, 0.2)],
        (0..n as u32).collect(),
        FeatureLayout::default(),
    )
    .map_err(|e| e.to_string())?;
    let (_, grads) = model.loss_and_grad(&graph).map_err(|e| e.to_string())?;
    let analytic = tabgraph::gnn::grads_flat(&grads);
    let base = model.params_flat();
    let mut worst: f64 = 0.0;
    for i in 0..base.len() {
        let mut p = base.clone();
        p[i] += eps;
        model.set_params_flat(&p);
        let up = model.loss(&graph).map_err(|e| e.to_string())?;
        p[i] -= 2.0 * eps;
        model.set_params_flat(&p);
        let down = model.loss(&graph).map_err(|e| e.to_string())?;
        let numeric = (up - down) / (2.0 * eps);
        if numeric.abs().max(analytic[i].abs()) > 1e-7 {
            worst = worst.max(rel_err(numeric, analytic[i]));
        }
    }
    ensure(worst < 1e-4, || format!("GNN rel err {worst:.2e}"))?;
    Ok(format!("max rel err skip-gram {sg_worst:.1e}, GNN {worst:.1e} over {} params", base.len()))
}

fn three_node_forward() -> Outcome {
    let w = BASE_DIM;
    let mut features = Array2::zeros((3, w));
    for (i, row) in [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]].iter().enumerate() {
        features[[i, 0]] = row[0];
        features[[i, 1]] = row[1];
    }
    let graph = PageGraph::new(0, features, None, vec![(0, 1, 1.0), (1, 2, 0.5)], vec![0, 1, 2], FeatureLayout::default())
        .map_err(|e| e.to_string())?;

    let agg = aggregate(&graph, graph.features().view());
    // identity on the neighbour half, then identity on the own-state half
    let mut w1 = Array2::zeros((2 * w, 2));
    w1[[w, 0]] = 1.0;
    w1[[w + 1, 1]] = 1.0;
    let mut w2 = Array2::zeros((4, TokenLabel::COUNT));
    w2[[0, 0]] = 1.0;
    w2[[1, 1]] = 1.0;
    let mut cfg = GnnConfig::new(w, Sizing::Base { h_dim: 2 });
    cfg.l_no = 2;
    let model = GnnModel::from_layers(
        cfg,
        vec![
            Layer { w: w1, b: Array1::zeros(2) },
            Layer { w: w2, b: Array1::zeros(TokenLabel::COUNT) },
        ],
    )
    .map_err(|e| e.to_string())?;
    let out = model.forward(&graph).map_err(|e| e.to_string())?;
    let want = [[0.0, 1.0], [0.75, 0.25], [0.0, 0.5]];
    for (v, row) in want.iter().enumerate() {
        for d in 0..2 {
            ensure((agg[[v, d]] - row[d]).abs() < 1e-6 && (out[[v, d]] - row[d]).abs() < 1e-6, || {
                format!("node {v} dim {d}: aggregate {} forward {} want {}", agg[[v, d]], out[[v, d]], row[d])
            })?;
        }
    }
    Ok("center node [0.75, 0.25]".into())
}

fn sizing() -> Outcome {
    let (l, i, o, p) = (4usize, 13usize, 13usize, 100_000usize);
    let a = (l - 2) as f64;
    let b = (i + o) as f64;
    let root = ((-b + (b * b + 4.0 * a * p as f64).sqrt()) / (2.0 * a)).floor() as usize;
    let h = scaled_hidden_dim(l, i, o, p).map_err(|e| e.to_string())?;
    let count = |h: usize| (l - 2) * h * h + (i + o) * h;
    ensure(root == 217 && h == 217, || format!("h = {h}, floored root {root}"))?;
    ensure(count(217) <= p && p < count(218), || "budget bracket fails".into())?;
    ensure(scaled_param_count(l, i, o, 217) == count(217), || "param count formula".into())?;
    Ok(format!("h = {h}, p(217) = {}, p(218) = {}", count(217), count(218)))
}

struct Corpus {
    vocab: ReprVocabulary,
    train: Vec<SyntheticPage>,
    held_out: Vec<SyntheticPage>,
}

const ABLATION_SEEDS: [u64; 3] = [0, 1, 2];

/// Pages 0..50 train; 50..60 are the end-to-end held-out set and 50..100
/// the ablation held-out set.
fn corpus() -> Corpus {
    let mut pages = generate_synthetic_pages(100, 0);
    let held_out = pages.split_off(50);
    let tables: Vec<CellTable> = pages.iter().map(|p| p.table.clone()).collect();
    let (vocab, _) = ReprVocabulary::fit(&tables, &VocabConfig::default()).expect("vocabulary fits");
    Corpus { vocab, train: pages, held_out }
}

fn graphs(pages: &[SyntheticPage], set: FeatureSet, vocab: &ReprVocabulary) -> Vec<PageGraph> {
    pages
        .iter()
        .map(|p| featurize(p.page(), Some(&p.labeled.labels), set, Some(vocab)).unwrap())
        .collect()
}

fn train_model(c: &Corpus, set: FeatureSet, seed: u64) -> Result<(GnnModel, Vec<PageGraph>), String> {
    let full = graphs(&c.train, set, &c.vocab);
    let pruned: Vec<PageGraph> = full.iter().map(|g| prune_islands(g, 2).unwrap()).collect();
    let mut cfg = GnnConfig::new(full[0].feature_width(), Sizing::Scaled { p_no: 100_000 });
    cfg.epochs = 200;
    cfg.seed = seed;
    let mut model = GnnModel::new(cfg).map_err(|e| e.to_string())?;
    train(&mut model, &pruned, &[]).map_err(|e| e.to_string())?;
    Ok((model, full))
}

fn node_accuracy_oracle(model: &GnnModel, graphs: &[PageGraph]) -> f64 {
    let (mut hit, mut total) = (0, 0);
    for g in graphs {
        let scores = model.forward(g).unwrap();
        for (row, gold) in scores.rows().into_iter().zip(g.labels().unwrap()) {
            let best = (0..row.len()).fold(0, |b, j| if row[j] > row[b] { j } else { b });
            hit += usize::from(best == gold.index());
            total += 1;
        }
    }
    hit as f64 / total as f64
}

/// TableCell `(tp, fp, fn)` counts.
fn cell_counts(model: &GnnModel, graphs: &[PageGraph]) -> [usize; 3] {
    let (mut tp, mut fp, mut fn_) = (0usize, 0usize, 0usize);
    for g in graphs {
        for ((label, _), gold) in infer(model, g).unwrap().iter().zip(g.labels().unwrap()) {
            match (*label == TokenLabel::TableCell, *gold == TokenLabel::TableCell) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, true) => fn_ += 1,
                _ => {}
            }
        }
    }
    [tp, fp, fn_]
}

fn f1_of([tp, fp, fn_]: [usize; 3]) -> f64 {
    2.0 * tp as f64 / (2 * tp + fp + fn_).max(1) as f64
}

fn cell_f1(model: &GnnModel, graphs: &[PageGraph]) -> f64 {
    f1_of(cell_counts(model, graphs))
}

fn run(name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let outcome = outcome.and_then(|d| {
        if elapsed <= limit {
            Ok(d)
        } else {
            Err(format!("{d}; took {elapsed:.2?}, limit {limit:?}"))
        }
    });
    match &outcome {
        Ok(d) => println!("PASS  {name}: {d} ({elapsed:.2?})"),
        Err(e) => println!("FAIL  {name}: {e} ({elapsed:.2?})"),
    }
    outcome.is_ok()
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let mut ok = true;
    ok &= run("word2repr examples", secs(1), word2repr_examples);
    ok &= run("pattern windows for v9", secs(1), worked_windows);
    ok &= run("levenshtein vs DP oracle", secs(5), levenshtein_oracle);
    ok &= run("affinity propagation two clusters", secs(10), two_clusters);
    ok &= run("visibility vs occlusion oracle", secs(30), visibility_vs_oracle);
    ok &= run("edge weights", secs(1), edge_weights);
    ok &= run("island pruning vs BFS oracle", secs(10), islands_vs_oracle);
    ok &= run("gradient checks", secs(60), gradient_checks);
    ok &= run("three-node forward pass", secs(1), three_node_forward);
    ok &= run("scaled sizing", secs(1), sizing);

    let mut overfit: Option<(Corpus, GnnModel)> = None;
    ok &= run("end-to-end overfit", secs(300), || {
        let c = corpus();
        let (model, full) = train_model(&c, FeatureSet::BboxRepr, 0)?;
        let acc = node_accuracy_oracle(&model, &full);
        let f1 = cell_f1(&model, &graphs(&c.held_out[..10], FeatureSet::BboxRepr, &c.vocab));
        overfit = Some((c, model));
        ensure(acc >= 0.95 && f1 >= 0.80, || format!("train accuracy {acc:.4}, held-out cell F1 {f1:.4}"))?;
        Ok(format!("train accuracy {acc:.4}, held-out cell F1 {f1:.4}"))
    });
    ok &= run("ablation bbox+repr vs bbox", Duration::MAX, || {
        let (c, first) = overfit.take().ok_or("end-to-end model unavailable")?;
        let mut first = Some(first);
        let (mut with_repr, mut bbox_only) = ([0usize; 3], [0usize; 3]);
        let add = |acc: &mut [usize; 3], c: [usize; 3]| (0..3).for_each(|i| acc[i] += c[i]);
        let mut per_seed = Vec::new();
        for seed in ABLATION_SEEDS {
            let m = match first.take() {
                Some(m) => m,
                None => train_model(&c, FeatureSet::BboxRepr, seed)?.0,
            };
            let r = cell_counts(&m, &graphs(&c.held_out, FeatureSet::BboxRepr, &c.vocab));
            let (m, _) = train_model(&c, FeatureSet::Bbox, seed)?;
            let a = cell_counts(&m, &graphs(&c.held_out, FeatureSet::Bbox, &c.vocab));
            per_seed.push(format!("seed {seed}: {:.4} vs {:.4}", f1_of(r), f1_of(a)));
            add(&mut with_repr, r);
            add(&mut bbox_only, a);
        }
        let (a, b) = (f1_of(bbox_only), f1_of(with_repr));
        let detail = format!(
            "pooled cell F1 bbox+repr {b:.5} (tp/fp/fn {with_repr:?}) vs bbox {a:.5} ({bbox_only:?}); {}",
            per_seed.join(", ")
        );
        ensure(b >= a, || detail.clone())?;
        Ok(detail)
    });

    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
